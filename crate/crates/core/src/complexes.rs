//! Quiver representations, bounded complexes of them, and the operations that
//! build string/band complexes, shift them, apply the Nakayama functor and
//! replace complexes by quasi-isomorphic complexes of projectives.
//!
//! A complex of projectives is kept at summand level as a [`ProjComplex`]: for
//! each degree a list of vertices `v` (one summand `P(v)` each) and, for each
//! pair of summands in adjacent degrees, an algebra element. The component
//! from `P(v)` in degree `k` to `P(u)` in degree `k + 1` is right
//! multiplication by an element made of paths from `u` to `v`.

use crate::error::{GentleError, Result};
use crate::field::Q;
use crate::linalg::{Mat, Span};
use crate::presentation::{Elem, GentleAlgebra, PathId, VertexId};
use crate::words::{HomotopyBand, HomotopyLetter, HomotopyString};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub dims: Vec<usize>,
    /// `action[a]` maps the space at the source of `a` to the space at its target.
    pub action: Vec<Mat<Q>>,
}

impl Representation {
    pub fn zero(alg: &GentleAlgebra) -> Self {
        let dims = vec![0; alg.num_vertices()];
        let action = (0..alg.num_arrows()).map(|_| Mat::zeros(0, 0)).collect();
        Representation { dims, action }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Matrix of a basis path acting from its source space to its target space.
    pub fn path_action(&self, alg: &GentleAlgebra, p: PathId) -> Mat<Q> {
        let path = alg.path(p);
        let mut m = Mat::identity(self.dims[path.source]);
        for &a in &path.arrows {
            m = self.action[a].mul(&m);
        }
        m
    }

    /// True when every relation acts as zero.
    pub fn satisfies_relations(&self, alg: &GentleAlgebra) -> bool {
        alg.presentation().relations.iter().all(|&(b, a)| self.action[b].mul(&self.action[a]).is_zero())
    }
}

/// Position of a basis path inside the list of paths sharing its endpoints.
fn local_index(alg: &GentleAlgebra, p: PathId) -> usize {
    let path = alg.path(p);
    alg.paths_between(path.source, path.target).iter().position(|&x| x == p).unwrap()
}

/// The indecomposable projective `P(v)`, spanned by paths starting at `v`.
pub fn projective(alg: &GentleAlgebra, v: VertexId) -> Representation {
    sum_of_projectives(alg, &[v]).0
}

/// The indecomposable injective `I(v)`, dual to the paths ending at `v`.
pub fn injective(alg: &GentleAlgebra, v: VertexId) -> Representation {
    sum_of_injectives(alg, &[v]).0
}

/// The simple module `S(v)`.
pub fn simple(alg: &GentleAlgebra, v: VertexId) -> Representation {
    let mut dims = vec![0; alg.num_vertices()];
    dims[v] = 1;
    let action = (0..alg.num_arrows())
        .map(|a| Mat::zeros(dims[alg.arrow(a).target], dims[alg.arrow(a).source]))
        .collect();
    Representation { dims, action }
}

/// Direct sum of projectives with per-summand offsets at each vertex.
fn sum_of_projectives(alg: &GentleAlgebra, summands: &[VertexId]) -> (Representation, Vec<Vec<usize>>) {
    let nv = alg.num_vertices();
    let mut offsets = vec![vec![0; nv]; summands.len()];
    let mut dims = vec![0; nv];
    for (i, &s) in summands.iter().enumerate() {
        for u in 0..nv {
            offsets[i][u] = dims[u];
            dims[u] += alg.paths_between(s, u).len();
        }
    }
    let mut action = Vec::with_capacity(alg.num_arrows());
    for a in 0..alg.num_arrows() {
        let (x, y) = (alg.arrow(a).source, alg.arrow(a).target);
        let mut m = Mat::zeros(dims[y], dims[x]);
        let arrow_path = alg.path_of_arrows(&[a]).unwrap();
        for (i, &s) in summands.iter().enumerate() {
            for (col, &p) in alg.paths_between(s, x).iter().enumerate() {
                if let Some(r) = alg.then(p, arrow_path) {
                    m.set(offsets[i][y] + local_index(alg, r), offsets[i][x] + col, Q::one());
                }
            }
        }
        action.push(m);
    }
    (Representation { dims, action }, offsets)
}

fn sum_of_injectives(alg: &GentleAlgebra, summands: &[VertexId]) -> (Representation, Vec<Vec<usize>>) {
    let nv = alg.num_vertices();
    let mut offsets = vec![vec![0; nv]; summands.len()];
    let mut dims = vec![0; nv];
    for (i, &s) in summands.iter().enumerate() {
        for u in 0..nv {
            offsets[i][u] = dims[u];
            dims[u] += alg.paths_between(u, s).len();
        }
    }
    let mut action = Vec::with_capacity(alg.num_arrows());
    for a in 0..alg.num_arrows() {
        let (x, y) = (alg.arrow(a).source, alg.arrow(a).target);
        let mut m = Mat::zeros(dims[y], dims[x]);
        let arrow_path = alg.path_of_arrows(&[a]).unwrap();
        for (i, &s) in summands.iter().enumerate() {
            for (col, &p) in alg.paths_between(x, s).iter().enumerate() {
                if let Some(rest) = alg.strip_prefix(p, arrow_path) {
                    m.set(offsets[i][y] + local_index(alg, rest), offsets[i][x] + col, Q::one());
                }
            }
        }
        action.push(m);
    }
    (Representation { dims, action }, offsets)
}

/// Summand-level complex of projectives.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ProjComplex {
    pub terms: BTreeMap<i32, Vec<VertexId>>,
    /// `(degree, from, to)` to the component from summand `from` in `degree`
    /// to summand `to` in `degree + 1`.
    pub diff: BTreeMap<(i32, usize, usize), Elem>,
}

impl ProjComplex {
    pub fn summands(&self, k: i32) -> &[VertexId] {
        self.terms.get(&k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn support(&self) -> Option<(i32, i32)> {
        let mut ks = self.terms.iter().filter(|(_, v)| !v.is_empty()).map(|(k, _)| *k);
        let lo = ks.next()?;
        let hi = ks.next_back().unwrap_or(lo);
        Some((lo, hi))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    pub fn num_summands(&self) -> usize {
        self.terms.values().map(|v| v.len()).sum()
    }

    /// Components leaving summand `from` of degree `k`.
    pub fn out_components(&self, k: i32, from: usize) -> impl Iterator<Item = (usize, &Elem)> {
        self.diff.range((k, from, 0)..(k, from + 1, 0)).map(|((_, _, to), e)| (*to, e))
    }

    /// Multiset of (degree, vertex), sorted.
    pub fn fingerprint(&self) -> Vec<(i32, VertexId)> {
        let mut out: Vec<_> = self.terms.iter().flat_map(|(k, vs)| vs.iter().map(move |v| (*k, *v))).collect();
        out.sort_unstable();
        out
    }

    fn cleaned(mut self) -> Self {
        self.terms.retain(|_, v| !v.is_empty());
        self.diff.retain(|_, e| !e.is_zero());
        self
    }
}

/// Where a complex came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    String { word: HomotopyString, shift: i32 },
    Band { band: HomotopyBand, shift: i32, mu: Q },
}

/// A bounded complex of representations.
#[derive(Clone, Debug, PartialEq)]
pub struct RepComplex {
    pub terms: BTreeMap<i32, Representation>,
    /// `diffs[k][u]` maps degree `k` to degree `k + 1` at vertex `u`.
    pub diffs: BTreeMap<i32, Vec<Mat<Q>>>,
    pub proj: Option<ProjComplex>,
    pub provenance: Option<Provenance>,
}

impl RepComplex {
    pub fn support(&self) -> Option<(i32, i32)> {
        let mut ks = self.terms.iter().filter(|(_, r)| !r.is_zero()).map(|(k, _)| *k);
        let lo = ks.next()?;
        let hi = ks.next_back().unwrap_or(lo);
        Some((lo, hi))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    pub fn dim_at(&self, k: i32, u: VertexId) -> usize {
        self.terms.get(&k).map_or(0, |r| r.dims[u])
    }

    /// Differential at `(k, u)`, materialized as a zero matrix when absent.
    pub fn diff_at(&self, k: i32, u: VertexId) -> Mat<Q> {
        match self.diffs.get(&k) {
            Some(ds) => ds[u].clone(),
            None => Mat::zeros(self.dim_at(k + 1, u), self.dim_at(k, u)),
        }
    }

    /// Dimension of cohomology at each degree in the support and each vertex.
    pub fn cohomology_dims(&self, alg: &GentleAlgebra) -> BTreeMap<i32, Vec<usize>> {
        let mut out = BTreeMap::new();
        let Some((lo, hi)) = self.support() else { return out };
        for k in lo..=hi {
            let dims: Vec<usize> = (0..alg.num_vertices())
                .map(|u| {
                    let n = self.dim_at(k, u);
                    let rank_out = self.diff_at(k, u).rank();
                    let rank_in = self.diff_at(k - 1, u).rank();
                    n - rank_out - rank_in
                })
                .collect();
            if dims.iter().any(|&d| d > 0) {
                out.insert(k, dims);
            }
        }
        out
    }

    /// d o d = 0 and each differential commutes with the arrow actions.
    pub fn is_complex(&self, alg: &GentleAlgebra) -> bool {
        let Some((lo, hi)) = self.support() else { return true };
        for k in lo - 1..=hi {
            for u in 0..alg.num_vertices() {
                if !self.diff_at(k + 1, u).mul(&self.diff_at(k, u)).is_zero() {
                    return false;
                }
            }
            for a in 0..alg.num_arrows() {
                let (x, y) = (alg.arrow(a).source, alg.arrow(a).target);
                let (Some(src), Some(dst)) = (self.terms.get(&k), self.terms.get(&(k + 1))) else { continue };
                let left = dst.action[a].mul(&self.diff_at(k, x));
                let right = self.diff_at(k, y).mul(&src.action[a]);
                if left != right {
                    return false;
                }
            }
        }
        self.terms.values().all(|r| r.satisfies_relations(alg))
    }

    /// JSON-friendly summary: per-degree dimension vectors and differentials.
    pub fn dims_table(&self) -> BTreeMap<i32, Vec<usize>> {
        self.terms.iter().filter(|(_, r)| !r.is_zero()).map(|(k, r)| (*k, r.dims.clone())).collect()
    }
}

/// Builds the explicit representation complex of a summand-level complex.
pub fn materialize(alg: &GentleAlgebra, pc: &ProjComplex) -> RepComplex {
    let nv = alg.num_vertices();
    let mut terms = BTreeMap::new();
    let mut offsets = BTreeMap::new();
    for (&k, vs) in &pc.terms {
        let (rep, off) = sum_of_projectives(alg, vs);
        terms.insert(k, rep);
        offsets.insert(k, off);
    }
    let mut diffs = BTreeMap::new();
    for (&k, vs) in &pc.terms {
        let Some(next) = terms.get(&(k + 1)) else { continue };
        let src = &terms[&k];
        let mut ds: Vec<Mat<Q>> = (0..nv).map(|u| Mat::zeros(next.dims[u], src.dims[u])).collect();
        for from in 0..vs.len() {
            for (to, elem) in pc.out_components(k, from) {
                for (q, c) in elem.terms() {
                    for u in 0..nv {
                        for (col, &p) in alg.paths_between(vs[from], u).iter().enumerate() {
                            if let Some(r) = alg.then(q, p) {
                                let row = offsets[&(k + 1)][to][u] + local_index(alg, r);
                                ds[u].add_at(row, offsets[&k][from][u] + col, c);
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(k, ds);
    }
    RepComplex { terms, diffs, proj: Some(pc.clone()), provenance: None }
}

/// Applies the Nakayama functor termwise to a complex of projectives.
pub fn nakayama_on_projectives(alg: &GentleAlgebra, c: &RepComplex) -> Result<RepComplex> {
    let pc = c
        .proj
        .as_ref()
        .ok_or_else(|| GentleError::Precondition("complex has a non-projective term".into()))?;
    let nv = alg.num_vertices();
    let mut terms = BTreeMap::new();
    let mut offsets = BTreeMap::new();
    for (&k, vs) in &pc.terms {
        let (rep, off) = sum_of_injectives(alg, vs);
        terms.insert(k, rep);
        offsets.insert(k, off);
    }
    let mut diffs = BTreeMap::new();
    for (&k, vs) in &pc.terms {
        let Some(next) = terms.get(&(k + 1)) else { continue };
        let next_vs = &pc.terms[&(k + 1)];
        let src = &terms[&k];
        let mut ds: Vec<Mat<Q>> = (0..nv).map(|u| Mat::zeros(next.dims[u], src.dims[u])).collect();
        for from in 0..vs.len() {
            for (to, elem) in pc.out_components(k, from) {
                for (q, c) in elem.terms() {
                    for u in 0..nv {
                        for (col, &p) in alg.paths_between(u, vs[from]).iter().enumerate() {
                            if let Some(y) = alg.strip_suffix(p, q) {
                                debug_assert_eq!(alg.path(y).target, next_vs[to]);
                                let row = offsets[&(k + 1)][to][u] + local_index(alg, y);
                                ds[u].add_at(row, offsets[&k][from][u] + col, c);
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(k, ds);
    }
    Ok(RepComplex { terms, diffs, proj: None, provenance: None })
}

fn sign(t: i32) -> Q {
    if t.rem_euclid(2) == 0 { Q::one() } else { -Q::one() }
}

/// Shifts a summand-level complex: `X[t]^i = X^{i+t}`, differential times `(-1)^t`.
pub fn shift_proj(pc: &ProjComplex, t: i32) -> ProjComplex {
    let s = sign(t);
    ProjComplex {
        terms: pc.terms.iter().map(|(k, v)| (k - t, v.clone())).collect(),
        diff: pc.diff.iter().map(|((k, a, b), e)| ((k - t, *a, *b), e.scale(s))).collect(),
    }
}

/// The suspension `c[t]`.
pub fn shift(c: &RepComplex, t: i32) -> RepComplex {
    let s = sign(t);
    let provenance = c.provenance.as_ref().map(|p| match p {
        Provenance::String { word, shift } => Provenance::String { word: word.clone(), shift: shift - t },
        Provenance::Band { band, shift, mu } => Provenance::Band { band: band.clone(), shift: shift - t, mu: *mu },
    });
    RepComplex {
        terms: c.terms.iter().map(|(k, r)| (k - t, r.clone())).collect(),
        diffs: c.diffs.iter().map(|(k, ds)| (k - t, ds.iter().map(|d| d.scale(s)).collect())).collect(),
        proj: c.proj.as_ref().map(|p| shift_proj(p, t)),
        provenance,
    }
}

/// One edge of an unfolded word: letter between two positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnfoldEdge {
    pub left: usize,
    pub right: usize,
    pub letter: HomotopyLetter,
}

/// Position data recorded while unfolding a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unfolding {
    pub vertices: Vec<VertexId>,
    pub degrees: Vec<i32>,
    /// Index of each position among the summands of its degree.
    pub slot: Vec<usize>,
    pub edges: Vec<UnfoldEdge>,
}

impl Unfolding {
    /// Edge data seen from `pos`: neighbour position, path, and whether the
    /// neighbour sits one degree higher.
    pub fn neighbours(&self, pos: usize) -> Vec<(usize, PathId, bool)> {
        let mut out = Vec::new();
        for e in &self.edges {
            let other = if e.left == pos {
                e.right
            } else if e.right == pos {
                e.left
            } else {
                continue;
            };
            out.push((other, e.letter.path, self.degrees[other] > self.degrees[pos]));
        }
        out
    }
}

fn unfold_positions(alg: &GentleAlgebra, letters: &[HomotopyLetter], closed: bool, m: i32) -> Unfolding {
    let mut raw = crate::words::running_degrees(letters);
    let mut vertices = vec![letters[0].start(alg)];
    for l in letters {
        vertices.push(l.end(alg));
    }
    if closed {
        raw.pop();
        vertices.pop();
    }
    let top = *raw.iter().max().unwrap();
    let degrees: Vec<i32> = raw.iter().map(|d| d - top + m).collect();
    let n = vertices.len();
    let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
    let slot = degrees
        .iter()
        .map(|d| {
            let c = counts.entry(*d).or_insert(0);
            *c += 1;
            *c - 1
        })
        .collect();
    let edges = letters
        .iter()
        .enumerate()
        .map(|(j, &letter)| UnfoldEdge { left: j, right: (j + 1) % n.max(1), letter })
        .map(|mut e| {
            if !closed {
                e.right = e.left + 1;
            }
            e
        })
        .collect();
    Unfolding { vertices, degrees, slot, edges }
}

fn assemble(u: &Unfolding, scales: &[Q], m: i32) -> ProjComplex {
    let mut pc = ProjComplex::default();
    for (i, &d) in u.degrees.iter().enumerate() {
        let entry = pc.terms.entry(d).or_default();
        debug_assert_eq!(entry.len(), u.slot[i]);
        entry.push(u.vertices[i]);
    }
    let s = sign(m);
    for (e, &scale) in u.edges.iter().zip(scales) {
        // the higher-degree end receives nothing; the lower end maps up
        let (from, to) = if e.letter.inverse { (e.left, e.right) } else { (e.right, e.left) };
        debug_assert_eq!(u.degrees[to], u.degrees[from] + 1);
        let key = (u.degrees[from], u.slot[from], u.slot[to]);
        let add = Elem::scaled(e.letter.path, scale * s);
        let cur = pc.diff.remove(&key).unwrap_or_default();
        pc.diff.insert(key, cur.add(&add));
    }
    pc.cleaned()
}

/// Position data of the string complex `P_{m,w}`.
pub fn string_unfolding(alg: &GentleAlgebra, w: &HomotopyString, m: i32) -> Unfolding {
    match w.trivial {
        Some((v, _)) => Unfolding { vertices: vec![v], degrees: vec![m], slot: vec![0], edges: Vec::new() },
        None => unfold_positions(alg, &w.letters, false, m),
    }
}

/// The string complex `P_{m,w}`, normalized so that `P_{0,w}` has top degree 0.
pub fn unfold_string(alg: &GentleAlgebra, w: &HomotopyString, m: i32) -> RepComplex {
    let u = string_unfolding(alg, w, m);
    let pc = assemble(&u, &vec![Q::one(); u.edges.len()], m);
    let mut c = materialize(alg, &pc);
    c.provenance = Some(Provenance::String { word: w.clone(), shift: m });
    c
}

/// Position data of the band complex `P_{m,w,mu}`.
pub fn band_unfolding(alg: &GentleAlgebra, w: &HomotopyBand, m: i32) -> Unfolding {
    unfold_positions(alg, &w.letters, true, m)
}

/// The band complex `P_{m,w,mu}` with the last letter scaled by `mu`.
pub fn unfold_band(alg: &GentleAlgebra, w: &HomotopyBand, m: i32, mu: Q) -> Result<RepComplex> {
    if mu.is_zero() {
        return Err(GentleError::Precondition("band scalar must be nonzero".into()));
    }
    let u = band_unfolding(alg, w, m);
    let mut scales = vec![Q::one(); u.edges.len()];
    *scales.last_mut().unwrap() = mu;
    let pc = assemble(&u, &scales, m);
    let mut c = materialize(alg, &pc);
    c.provenance = Some(Provenance::Band { band: w.clone(), shift: m, mu });
    Ok(c)
}

/// A stalk complex of a single projective in degree `k`.
pub fn stalk_projective(alg: &GentleAlgebra, v: VertexId, k: i32) -> RepComplex {
    let mut pc = ProjComplex::default();
    pc.terms.insert(k, vec![v]);
    materialize(alg, &pc)
}

/// A stalk complex of an arbitrary representation in degree `k`.
pub fn stalk(rep: Representation, k: i32) -> RepComplex {
    RepComplex { terms: BTreeMap::from([(k, rep)]), diffs: BTreeMap::new(), proj: None, provenance: None }
}

/// Cancels unit components until the complex is minimal. The result is
/// homotopy equivalent to the input.
pub fn minimize(alg: &GentleAlgebra, pc: &ProjComplex) -> ProjComplex {
    let mut pc = pc.clone().cleaned();
    loop {
        let hit = pc.diff.iter().find_map(|(&(k, from, to), e)| {
            let v = pc.terms[&k][from];
            (pc.terms[&(k + 1)][to] == v && !e.unit_coefficient(alg, v).is_zero()).then_some((k, from, to))
        });
        let Some((k, b, a)) = hit else { return pc };
        let v = pc.terms[&k][b];
        let phi_inv = Elem::local_inverse(alg, v, &pc.diff[&(k, b, a)]).expect("unit component");
        let n_src = pc.terms[&k].len();
        let n_dst = pc.terms[&(k + 1)].len();
        let mut new_diff: BTreeMap<(i32, usize, usize), Elem> = BTreeMap::new();
        let reindex = |i: usize, removed: usize| if i > removed { i - 1 } else { i };
        for (&(deg, from, to), e) in &pc.diff {
            if deg == k {
                if from == b || to == a {
                    continue;
                }
                new_diff.insert((deg, reindex(from, b), reindex(to, a)), e.clone());
            } else if deg == k - 1 {
                if to == b {
                    continue;
                }
                new_diff.insert((deg, from, reindex(to, b)), e.clone());
            } else if deg == k + 1 {
                if from == a {
                    continue;
                }
                new_diff.insert((deg, reindex(from, a), to), e.clone());
            } else {
                new_diff.insert((deg, from, to), e.clone());
            }
        }
        for x in (0..n_src).filter(|&x| x != b) {
            let Some(delta) = pc.diff.get(&(k, x, a)) else { continue };
            let left = Elem::mul(alg, delta, &phi_inv);
            for y in (0..n_dst).filter(|&y| y != a) {
                let Some(gamma) = pc.diff.get(&(k, b, y)) else { continue };
                let corr = Elem::mul(alg, &left, gamma).scale(-Q::one());
                let key = (k, reindex(x, b), reindex(y, a));
                let cur = new_diff.remove(&key).unwrap_or_default();
                let sum = cur.add(&corr);
                if !sum.is_zero() {
                    new_diff.insert(key, sum);
                }
            }
        }
        pc.terms.get_mut(&k).unwrap().remove(b);
        pc.terms.get_mut(&(k + 1)).unwrap().remove(a);
        pc.diff = new_diff;
        pc = pc.cleaned();
    }
}

/// Replaces a bounded complex by a quasi-isomorphic bounded complex of
/// projectives, built degree by degree from the top by killing the
/// cohomology of the mapping cone. The result is minimized and its
/// cohomology dimensions are checked against the input.
pub fn perfect_replacement(alg: &GentleAlgebra, c: &RepComplex) -> Result<RepComplex> {
    if let Some(pc) = &c.proj {
        let mut out = materialize(alg, &minimize(alg, pc));
        out.provenance = c.provenance.clone();
        return Ok(out);
    }
    let Some((lo, hi)) = c.support() else {
        return Ok(materialize(alg, &ProjComplex::default()));
    };
    let nv = alg.num_vertices();
    let bound = lo - 4 * (alg.dim() as i32 + nv as i32) - 4;
    let mut pc = ProjComplex::default();
    // generator images in C for the summands of the degree above
    let mut phi_above: Vec<Vec<Q>> = Vec::new();
    let mut i = hi;
    loop {
        if i < bound {
            return Err(GentleError::Internal(format!(
                "projective replacement did not terminate above degree {bound}"
            )));
        }
        let empty = Representation::zero(alg);
        let c_i = c.terms.get(&i).unwrap_or(&empty);
        let c_next = c.terms.get(&(i + 1)).unwrap_or(&empty);
        let above: Vec<VertexId> = pc.summands(i + 1).to_vec();
        let (p_rep, p_off) = sum_of_projectives(alg, &above);
        // matrices at each vertex
        let d_p: Vec<Mat<Q>> = {
            let tmp = ProjComplex {
                terms: BTreeMap::from([(i + 1, above.clone()), (i + 2, pc.summands(i + 2).to_vec())]),
                diff: pc.diff.range((i + 1, 0, 0)..(i + 2, 0, 0)).map(|(k, e)| (*k, e.clone())).collect(),
            };
            let m = materialize(alg, &tmp);
            (0..nv).map(|u| m.diff_at(i + 1, u)).collect()
        };
        let phi: Vec<Mat<Q>> = (0..nv)
            .map(|u| {
                let mut m = Mat::zeros(c_next.dims[u], p_rep.dims[u]);
                for (g, &v) in above.iter().enumerate() {
                    for (col, &p) in alg.paths_between(v, u).iter().enumerate() {
                        let img = c_next.path_action(alg, p).apply(&phi_above[g]);
                        for (r, x) in img.into_iter().enumerate() {
                            m.set(r, p_off[g][u] + col, x);
                        }
                    }
                }
                m
            })
            .collect();
        // cycles of the cone at each vertex
        let mut z_basis: Vec<Vec<Vec<Q>>> = Vec::with_capacity(nv);
        for u in 0..nv {
            let np = p_rep.dims[u];
            let nc = c_i.dims[u];
            let rows = d_p[u].rows() + c_next.dims[u];
            let mut sys = Mat::zeros(rows, np + nc);
            for r in 0..d_p[u].rows() {
                for col in 0..np {
                    sys.set(r, col, d_p[u].get(r, col));
                }
            }
            let d_c = c.diff_at(i, u);
            for r in 0..c_next.dims[u] {
                for col in 0..np {
                    sys.set(d_p[u].rows() + r, col, phi[u].get(r, col));
                }
                for col in 0..nc {
                    sys.set(d_p[u].rows() + r, np + col, d_c.get(r, col));
                }
            }
            z_basis.push(if np + nc == 0 { Vec::new() } else { sys.nullspace() });
        }
        let total_z: usize = z_basis.iter().map(|z| z.len()).sum();
        if i < lo && total_z == 0 {
            break;
        }
        let mut new_summands = Vec::new();
        let mut new_phi = Vec::new();
        let mut new_diff = Vec::new();
        for u in 0..nv {
            let np = p_rep.dims[u];
            let nc = c_i.dims[u];
            let mut span = Span::<Q>::new(np + nc);
            for a in alg.in_arrows(u) {
                let x = alg.arrow(*a).source;
                for z in &z_basis[x] {
                    let (zp, zc) = z.split_at(p_rep.dims[x]);
                    let mut img = p_rep.action[*a].apply(zp);
                    img.extend(c_i.action[*a].apply(zc));
                    span.insert(&img);
                }
            }
            let d_prev = c.diff_at(i - 1, u);
            for col in 0..d_prev.cols() {
                let mut v = vec![Q::zero(); np];
                v.extend((0..nc).map(|r| d_prev.get(r, col)));
                span.insert(&v);
            }
            for z in &z_basis[u] {
                if span.insert(z) {
                    let (zp, zc) = z.split_at(np);
                    new_summands.push(u);
                    new_phi.push(zc.to_vec());
                    new_diff.push(zp.iter().map(|x| -*x).collect::<Vec<Q>>());
                }
            }
        }
        if !new_summands.is_empty() {
            for (g, (&u, p)) in new_summands.iter().zip(&new_diff).enumerate() {
                for (b, &vb) in above.iter().enumerate() {
                    let mut e = Elem::zero();
                    for (idx, &q) in alg.paths_between(vb, u).iter().enumerate() {
                        let x = p[p_off[b][u] + idx];
                        if !x.is_zero() {
                            e.add_term(q, x);
                        }
                    }
                    if !e.is_zero() {
                        pc.diff.insert((i, g, b), e);
                    }
                }
            }
            pc.terms.insert(i, new_summands.clone());
        }
        phi_above = new_phi;
        i -= 1;
    }
    let pc = minimize(alg, &pc.cleaned());
    let out = materialize(alg, &pc);
    let (want, got) = (c.cohomology_dims(alg), out.cohomology_dims(alg));
    if want != got {
        return Err(GentleError::Internal(format!(
            "projective replacement changed cohomology: {want:?} became {got:?}"
        )));
    }
    Ok(out)
}

/// Summary of a complex for display and serialization: per-degree dimension
/// vectors and per-degree block matrices (rows: target vertex spaces stacked).
pub fn describe(c: &RepComplex) -> (BTreeMap<i32, Vec<usize>>, BTreeMap<i32, Vec<Mat<Q>>>) {
    (c.dims_table(), c.diffs.iter().filter(|(_, ds)| ds.iter().any(|d| d.rows() * d.cols() > 0)).map(|(k, ds)| (*k, ds.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, validate_gentle};
    use crate::words::{parse_band, parse_string};

    fn alg(src: &str) -> GentleAlgebra {
        validate_gentle(&parse_presentation(src).unwrap()).unwrap()
    }

    const A2: &str = "vertex 1 2\narrow a : 1 -> 2\n";
    const KRONECKER: &str = "vertex 1 2\narrow a : 1 -> 2\narrow b : 1 -> 2\n";

    #[test]
    fn a2_projective_and_injective() {
        let a = alg(A2);
        assert_eq!(projective(&a, 0).dims, vec![1, 1]);
        assert_eq!(injective(&a, 1).dims, vec![1, 1]);
        assert_eq!(injective(&a, 1), projective(&a, 0));
        assert_eq!(simple(&a, 1).dims, vec![0, 1]);
    }

    #[test]
    fn kronecker_string_shape() {
        let a = alg(KRONECKER);
        let c = unfold_string(&a, &parse_string(&a, "a").unwrap(), 0);
        assert_eq!(c.support(), Some((-1, 0)));
        let pc = c.proj.as_ref().unwrap();
        assert_eq!(pc.summands(-1), &[1]);
        assert_eq!(pc.summands(0), &[0]);
        assert!(c.is_complex(&a));
    }

    #[test]
    fn kronecker_band_is_a_plus_mu_b() {
        let a = alg(KRONECKER);
        let b = parse_band(&a, "b^-1, a").unwrap();
        let c = unfold_band(&a, &b, 0, Q::from_integer(3)).unwrap();
        let pc = c.proj.as_ref().unwrap();
        let e = &pc.diff[&(-1, 0, 0)];
        let pa = a.path_of_arrows(&[0]).unwrap();
        let pb = a.path_of_arrows(&[1]).unwrap();
        assert_eq!(e.0.get(&pa), Some(&Q::one()));
        assert_eq!(e.0.get(&pb), Some(&Q::from_integer(3)));
        assert!(unfold_band(&a, &b, 0, Q::zero()).is_err());
    }

    #[test]
    fn simple_resolution_on_a2() {
        let a = alg(A2);
        let c = stalk(injective(&a, 0), 0);
        let r = perfect_replacement(&a, &c).unwrap();
        let pc = r.proj.as_ref().unwrap();
        assert_eq!(pc.summands(0), &[0]);
        assert_eq!(pc.summands(-1), &[1]);
        let c2 = stalk(injective(&a, 1), 0);
        let r2 = perfect_replacement(&a, &c2).unwrap();
        assert_eq!(r2.proj.as_ref().unwrap().fingerprint(), vec![(0, 0)]);
    }

    #[test]
    fn shift_round_trip() {
        let a = alg(KRONECKER);
        let c = unfold_string(&a, &parse_string(&a, "a").unwrap(), 0);
        let s = shift(&c, 1);
        assert_eq!(s.support(), Some((-2, -1)));
        assert_eq!(shift(&s, -1), c);
        assert_eq!(shift(&c, 0), c);
    }

    #[test]
    fn minimize_cancels_identity_cone() {
        let a = alg(A2);
        let mut pc = ProjComplex::default();
        pc.terms.insert(-1, vec![0]);
        pc.terms.insert(0, vec![0]);
        pc.diff.insert((-1, 0, 0), Elem::path(a.trivial_path(0)));
        assert!(minimize(&a, &pc).is_zero());
    }
}
