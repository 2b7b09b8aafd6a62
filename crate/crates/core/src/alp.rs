//! Combinatorial basis of chain maps between string complexes.
//!
//! Maps are read off the unfolded position data of the two strings. Every
//! component is a single basis path (coefficient 1) from a position of the
//! source to a position of the target in the same degree:
//!
//! * a *single map* has one nontrivial component,
//! * a *double map* has two nontrivial components on an adjacent pair of
//!   positions whose square commutes with a nonzero composite,
//! * a *graph map* identifies a maximal common stretch of the two strings,
//!   possibly with one extra component at each end.

use crate::complexes::{string_unfolding, Unfolding};
use crate::field::Q;
use crate::presentation::{Elem, GentleAlgebra, PathId};
use crate::words::{HomotopyLetter, HomotopyString};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapKind {
    Single,
    Double,
    Graph,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Single => "single",
            MapKind::Double => "double",
            MapKind::Graph => "graph",
        }
    }
}

/// A chain map given by its components `(source position, target position, path)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombMap {
    pub kind: MapKind,
    pub components: Vec<(usize, usize, PathId)>,
}

type Components = BTreeMap<(usize, usize), PathId>;

fn elem_of(p: Option<PathId>) -> Elem {
    p.map(Elem::path).unwrap_or_default()
}

/// Checks `d_w f = f d_v` position by position, using path composition only.
fn is_chain(alg: &GentleAlgebra, v: &Unfolding, w: &Unfolding, comps: &Components) -> bool {
    let touched_v: BTreeSet<usize> = comps.keys().map(|&(j, _)| j).collect();
    let mut rows = BTreeSet::new();
    for &j in &touched_v {
        rows.insert(j);
        for (other, _, _) in v.neighbours(j) {
            rows.insert(other);
        }
    }
    for &j in &rows {
        for ip in 0..w.vertices.len() {
            if w.degrees[ip] != v.degrees[j] + 1 {
                continue;
            }
            let mut lhs = Elem::zero();
            for (x, q, x_higher) in w.neighbours(ip) {
                if x_higher {
                    continue;
                }
                if let Some(&f) = comps.get(&(j, x)) {
                    lhs = lhs.add(&elem_of(alg.then(q, f)));
                }
            }
            let mut rhs = Elem::zero();
            for (jp, q, jp_higher) in v.neighbours(j) {
                if !jp_higher {
                    continue;
                }
                if let Some(&g) = comps.get(&(jp, ip)) {
                    rhs = rhs.add(&elem_of(alg.then(g, q)));
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn nontrivial_paths(alg: &GentleAlgebra, from: usize, to: usize) -> impl Iterator<Item = PathId> + '_ {
    alg.paths_between(from, to).iter().copied().filter(|&p| !alg.is_trivial(p))
}

fn to_map(kind: MapKind, comps: &Components) -> CombMap {
    CombMap { kind, components: comps.iter().map(|(&(j, i), &p)| (j, i, p)).collect() }
}

/// Maps with a single nontrivial component.
pub fn single_maps_unfolded(alg: &GentleAlgebra, v: &Unfolding, w: &Unfolding) -> Vec<CombMap> {
    let mut out = Vec::new();
    for j in 0..v.vertices.len() {
        for i in 0..w.vertices.len() {
            if v.degrees[j] != w.degrees[i] {
                continue;
            }
            for f in nontrivial_paths(alg, w.vertices[i], v.vertices[j]) {
                let comps = Components::from([((j, i), f)]);
                if is_chain(alg, v, w, &comps) {
                    out.push(to_map(MapKind::Single, &comps));
                }
            }
        }
    }
    out
}

/// Maps with two nontrivial components forming a commuting square.
pub fn double_maps_unfolded(alg: &GentleAlgebra, v: &Unfolding, w: &Unfolding) -> Vec<CombMap> {
    let mut out = Vec::new();
    for j in 0..v.vertices.len() {
        for i in 0..w.vertices.len() {
            if v.degrees[j] != w.degrees[i] {
                continue;
            }
            for (jp, qv, up_v) in v.neighbours(j) {
                if !up_v {
                    continue;
                }
                for (ip, qw, up_w) in w.neighbours(i) {
                    if !up_w {
                        continue;
                    }
                    for f in nontrivial_paths(alg, w.vertices[i], v.vertices[j]) {
                        let Some(lower) = alg.then(qw, f) else { continue };
                        for g in nontrivial_paths(alg, w.vertices[ip], v.vertices[jp]) {
                            if alg.then(g, qv) != Some(lower) {
                                continue;
                            }
                            let comps = Components::from([((j, i), f), ((jp, ip), g)]);
                            if is_chain(alg, v, w, &comps) {
                                out.push(to_map(MapKind::Double, &comps));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Letter on the edge leaving position `pos` in direction `step`, oriented
/// in the direction of travel.
fn step_letter(u: &Unfolding, pos: usize, step: isize) -> Option<crate::words::HomotopyLetter> {
    if step > 0 {
        u.edges.get(pos).map(|e| e.letter)
    } else if pos > 0 {
        Some(u.edges[pos - 1].letter.inverted())
    } else {
        None
    }
}

fn moved(pos: usize, step: isize, len: usize) -> Option<usize> {
    let p = pos as isize + step;
    (p >= 0 && (p as usize) < len).then_some(p as usize)
}

/// Extra component required at one end of a graph window, `Ok(None)` if the
/// end needs none and `Err(())` if the end condition fails.
fn graph_end(
    alg: &GentleAlgebra,
    v: &Unfolding,
    w: &Unfolding,
    (j, i): (usize, usize),
    outside_v: Option<usize>,
    outside_w: Option<usize>,
) -> Result<Option<((usize, usize), PathId)>, ()> {
    let side = |u: &Unfolding, pos: usize, other: Option<usize>| {
        other.map(|o| {
            let (_, q, up) = u.neighbours(pos).into_iter().find(|n| n.0 == o).unwrap();
            (o, q, up)
        })
    };
    match (side(v, j, outside_v), side(w, i, outside_w)) {
        (None | Some((_, _, true)), None | Some((_, _, false))) => Ok(None),
        (Some((js, qv, true)), Some((is, qw, true))) => nontrivial_paths(alg, w.vertices[is], v.vertices[js])
            .find(|&g| alg.then(g, qv) == Some(qw))
            .map(|g| Some(((js, is), g)))
            .ok_or(()),
        (Some((js, qv, false)), Some((is, qw, false))) => nontrivial_paths(alg, w.vertices[is], v.vertices[js])
            .find(|&h| alg.then(qw, h) == Some(qv))
            .map(|h| Some(((js, is), h)))
            .ok_or(()),
        _ => Err(()),
    }
}

/// Maps that are the identity along a maximal common stretch.
pub fn graph_maps_unfolded(alg: &GentleAlgebra, v: &Unfolding, w: &Unfolding) -> Vec<CombMap> {
    let (nv, nw) = (v.vertices.len(), w.vertices.len());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for j0 in 0..nv {
        for i0 in 0..nw {
            if v.vertices[j0] != w.vertices[i0] || v.degrees[j0] != w.degrees[i0] {
                continue;
            }
            for dir in [1isize, -1] {
                // left end: the stretch cannot be continued backwards
                let back_v = step_letter(v, j0, -1);
                let back_w = step_letter(w, i0, -dir);
                if back_v.is_some() && back_v == back_w {
                    continue;
                }
                let mut window = vec![(j0, i0)];
                let (mut j, mut i) = (j0, i0);
                loop {
                    let (lv, lw) = (step_letter(v, j, 1), step_letter(w, i, dir));
                    match (lv, lw) {
                        (Some(a), Some(b)) if a == b => {
                            j += 1;
                            i = moved(i, dir, nw).unwrap();
                            window.push((j, i));
                        }
                        _ => break,
                    }
                }
                let mut comps: Components = window.iter().map(|&(j, i)| ((j, i), alg.trivial_path(v.vertices[j]))).collect();
                let left = graph_end(alg, v, w, (j0, i0), moved(j0, -1, nv), moved(i0, -dir, nw));
                let right = graph_end(alg, v, w, (j, i), moved(j, 1, nv), moved(i, dir, nw));
                let (Ok(left), Ok(right)) = (left, right) else { continue };
                for (key, p) in left.into_iter().chain(right) {
                    comps.insert(key, p);
                }
                if !seen.insert(comps.clone()) {
                    continue;
                }
                if is_chain(alg, v, w, &comps) {
                    out.push(to_map(MapKind::Graph, &comps));
                }
            }
        }
    }
    out
}

/// Single, double and graph maps, in that order.
pub fn alp_basis_unfolded(alg: &GentleAlgebra, v: &Unfolding, w: &Unfolding) -> Vec<CombMap> {
    let mut out = single_maps_unfolded(alg, v, w);
    out.extend(double_maps_unfolded(alg, v, w));
    out.extend(graph_maps_unfolded(alg, v, w));
    out
}

pub fn single_maps(alg: &GentleAlgebra, v: &HomotopyString, mv: i32, w: &HomotopyString, mw: i32) -> Vec<CombMap> {
    single_maps_unfolded(alg, &string_unfolding(alg, v, mv), &string_unfolding(alg, w, mw))
}

pub fn double_maps(alg: &GentleAlgebra, v: &HomotopyString, mv: i32, w: &HomotopyString, mw: i32) -> Vec<CombMap> {
    double_maps_unfolded(alg, &string_unfolding(alg, v, mv), &string_unfolding(alg, w, mw))
}

pub fn graph_maps(alg: &GentleAlgebra, v: &HomotopyString, mv: i32, w: &HomotopyString, mw: i32) -> Vec<CombMap> {
    graph_maps_unfolded(alg, &string_unfolding(alg, v, mv), &string_unfolding(alg, w, mw))
}

/// Basis of chain maps `P_{mv,v} -> P_{mw,w}`.
pub fn alp_basis(alg: &GentleAlgebra, v: &HomotopyString, mv: i32, w: &HomotopyString, mw: i32) -> Vec<CombMap> {
    alp_basis_unfolded(alg, &string_unfolding(alg, v, mv), &string_unfolding(alg, w, mw))
}

/// Writes a combinatorial map as a vector of generator images, in the layout
/// used by [`crate::hom::chain_map_space`] for `unfold_string(v, mv) ->
/// unfold_string(w, mw)`. Differentials of the two complexes carry the signs
/// `(-1)^mv` and `(-1)^mw`; when these differ the components in degree `k`
/// are multiplied by `(-1)^k`.
pub fn chain_vector(alg: &GentleAlgebra, v: &HomotopyString, mv: i32, w: &HomotopyString, mw: i32, map: &CombMap) -> Vec<Q> {
    let uv = string_unfolding(alg, v, mv);
    let uw = string_unfolding(alg, w, mw);
    let mut terms_v: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (p, &d) in uv.degrees.iter().enumerate() {
        terms_v.entry(d).or_default().push(p);
    }
    let mut terms_w: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (p, &d) in uw.degrees.iter().enumerate() {
        terms_w.entry(d).or_default().push(p);
    }
    // block start of each source position
    let mut block = BTreeMap::new();
    let mut n = 0;
    for (&k, ps) in &terms_v {
        for &p in ps {
            block.insert(p, n);
            let u = uv.vertices[p];
            n += terms_w.get(&k).map_or(0, |qs| qs.iter().map(|&q| alg.paths_between(uw.vertices[q], u).len()).sum());
        }
    }
    let twist = (mv - mw).rem_euclid(2) == 1;
    let mut out = vec![Q::zero(); n];
    for &(j, i, f) in &map.components {
        let k = uv.degrees[j];
        let u = uv.vertices[j];
        let mut off = block[&j];
        for &q in &terms_w[&k] {
            if q == i {
                break;
            }
            off += alg.paths_between(uw.vertices[q], u).len();
        }
        let local = alg.paths_between(uw.vertices[i], u).iter().position(|&x| x == f).unwrap();
        let sign = if twist && k.rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
        out[off + local] += sign;
    }
    out
}

/// Lower bounds for the total dimension of the graded self-Hom of `P_w` in
/// the homotopy category, read off the graph maps of `w` to its shifts.
///
/// Null-homotopic maps between complexes with radical differentials have no
/// identity components, so the rank of the identity patterns of the graph
/// maps in each degree bounds that degree's Hom from below. The second value
/// only counts graph maps avoiding the last position of `w`; those persist in
/// every string obtained from `w` by appending letters, so it bounds the
/// self-Hom of all such strings as well. Ranks are taken over `F_2`, which
/// can only lower them.
pub fn graph_self_hom_bound(alg: &GentleAlgebra, w: &HomotopyString) -> (usize, usize) {
    let u = string_unfolding(alg, w, 0);
    let n = u.vertices.len();
    let last = n - 1;
    let step = |p: usize, dir: isize| -> Option<HomotopyLetter> {
        if dir > 0 {
            u.edges.get(p).map(|e| e.letter)
        } else if p > 0 {
            Some(u.edges[p - 1].letter.inverted())
        } else {
            None
        }
    };
    // edge data towards `o`: path and whether `o` sits higher
    let side = |p: usize, o: Option<usize>| o.map(|o| (o, u.edges[p.min(o)].letter.path, u.degrees[o] > u.degrees[p]));
    let mut rows: BTreeMap<i32, (Vec<Vec<u64>>, Vec<Vec<u64>>)> = BTreeMap::new();
    let words = (n * n).div_ceil(64);
    for j0 in 0..n {
        for i0 in 0..n {
            if u.vertices[j0] != u.vertices[i0] {
                continue;
            }
            for dir in [1isize, -1] {
                let back = step(j0, -1);
                if back.is_some() && back == step(i0, -dir) {
                    continue;
                }
                let mut bits = vec![0u64; words];
                let mut robust = true;
                let (mut j, mut i) = (j0, i0);
                loop {
                    let b = j * n + i;
                    bits[b / 64] |= 1 << (b % 64);
                    robust &= j != last && i != last;
                    match (step(j, 1), step(i, dir)) {
                        (Some(a), Some(b)) if a == b => {
                            j += 1;
                            i = moved(i, dir, n).unwrap();
                        }
                        _ => break,
                    }
                }
                let ends = [((j0, i0), moved(j0, -1, n), moved(i0, -dir, n)), ((j, i), moved(j, 1, n), moved(i, dir, n))];
                let mut valid = true;
                for ((pj, pi), ov, ow) in ends {
                    match end_component(alg, &u.vertices, side(pj, ov), side(pi, ow)) {
                        Ok(Some((js, is))) => robust &= js != last && is != last,
                        Ok(None) => {}
                        Err(()) => valid = false,
                    }
                }
                if !valid {
                    continue;
                }
                let entry = rows.entry(u.degrees[i0] - u.degrees[j0]).or_default();
                if robust {
                    entry.1.push(bits.clone());
                }
                entry.0.push(bits);
            }
        }
    }
    rows.into_values().fold((0, 0), |(a, r), (all, robust)| (a + rank_f2(all), r + rank_f2(robust)))
}

/// Position pair of the extra component at one end of a self graph map, in
/// the shape of [`graph_end`] but on bare position data.
fn end_component(
    alg: &GentleAlgebra,
    vertices: &[usize],
    v: Option<(usize, PathId, bool)>,
    w: Option<(usize, PathId, bool)>,
) -> Result<Option<(usize, usize)>, ()> {
    match (v, w) {
        (None | Some((_, _, true)), None | Some((_, _, false))) => Ok(None),
        (Some((js, qv, true)), Some((is, qw, true))) => nontrivial_paths(alg, vertices[is], vertices[js])
            .any(|g| alg.then(g, qv) == Some(qw))
            .then_some(Some((js, is)))
            .ok_or(()),
        (Some((js, qv, false)), Some((is, qw, false))) => nontrivial_paths(alg, vertices[is], vertices[js])
            .any(|h| alg.then(qw, h) == Some(qv))
            .then_some(Some((js, is)))
            .ok_or(()),
        _ => Err(()),
    }
}

fn rank_f2(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let bits = rows.first().map_or(0, |r| r.len() * 64);
    for b in 0..bits {
        let (word, mask) = (b / 64, 1u64 << (b % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][word] & mask != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][word] & mask != 0 {
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Display form of a component path, `id` for trivial paths.
pub fn component_name(alg: &GentleAlgebra, p: PathId) -> String {
    if alg.is_trivial(p) { "id".into() } else { alg.path_name(p) }
}
