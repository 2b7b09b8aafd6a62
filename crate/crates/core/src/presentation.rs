//! Bound quiver presentations, gentleness, path bases and sign assignments.
//!
//! Paths are stored in application order: `arrows[0]` is traversed first. The
//! algebra product follows the usual right-to-left convention, so `mul(a, b)`
//! is "b first, then a".

use crate::error::{GentleError, Result};
use crate::field::Q;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

pub type VertexId = usize;
pub type ArrowId = usize;
pub type PathId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Pairs `(second, first)`: the composite "first, then second" lies in I.
    pub relations: Vec<(ArrowId, ArrowId)>,
}

impl Presentation {
    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn is_relation(&self, second: ArrowId, first: ArrowId) -> bool {
        self.relations.contains(&(second, first))
    }

    /// Writes the presentation back in DSL form.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("algebra {}\nvertex {}\n", self.name, self.vertices.join(" "));
        for a in &self.arrows {
            out.push_str(&format!(
                "arrow {} : {} -> {}\n",
                a.name, self.vertices[a.source], self.vertices[a.target]
            ));
        }
        for &(b, a) in &self.relations {
            out.push_str(&format!("relation {} {}\n", self.arrows[b].name, self.arrows[a].name));
        }
        out
    }
}

/// Whether the underlying graph is a path on three vertices.
pub fn is_a3_graph(p: &Presentation) -> bool {
    if p.vertices.len() != 3 || p.arrows.len() != 2 {
        return false;
    }
    let mut degree = [0usize; 3];
    for a in &p.arrows {
        if a.source == a.target {
            return false;
        }
        degree[a.source] += 1;
        degree[a.target] += 1;
    }
    let (x, y) = (&p.arrows[0], &p.arrows[1]);
    let same_edge = (x.source == y.source && x.target == y.target) || (x.source == y.target && x.target == y.source);
    !same_edge && degree.iter().all(|&d| d >= 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Arrow,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c == ':' {
            toks.push((Tok::Colon, i + 1));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            toks.push((Tok::Arrow, i + 1));
            i += 2;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start + 1));
        } else {
            return Err(GentleError::Parse {
                line: lineno,
                column: i + 1,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(toks)
}

/// Parses the line-oriented `.gentle` format.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name = String::from("unnamed");
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut relations: Vec<(ArrowId, ArrowId)> = Vec::new();
    let err = |line: usize, column: usize, message: String| GentleError::Parse { line, column, message };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokenize(raw, lineno)?;
        let Some((head, hcol)) = toks.first() else { continue };
        let Tok::Ident(keyword) = head else {
            return Err(err(lineno, *hcol, "expected a keyword".into()));
        };
        let ident = |k: usize| -> Result<(String, usize)> {
            match toks.get(k) {
                Some((Tok::Ident(s), col)) => Ok((s.clone(), *col)),
                Some((_, col)) => Err(err(lineno, *col, "expected an identifier".into())),
                None => Err(err(lineno, raw.chars().count() + 1, "expected an identifier".into())),
            }
        };
        let end = |k: usize| -> Result<()> {
            match toks.get(k) {
                None => Ok(()),
                Some((_, col)) => Err(err(lineno, *col, "unexpected trailing token".into())),
            }
        };
        match keyword.as_str() {
            "algebra" => {
                name = ident(1)?.0;
                end(2)?;
            }
            "vertex" => {
                if toks.len() < 2 {
                    return Err(err(lineno, raw.chars().count() + 1, "expected at least one vertex".into()));
                }
                for k in 1..toks.len() {
                    let (v, col) = ident(k)?;
                    if vertices.contains(&v) {
                        return Err(err(lineno, col, format!("duplicate vertex '{v}'")));
                    }
                    vertices.push(v);
                }
            }
            "arrow" => {
                let (a, acol) = ident(1)?;
                match toks.get(2) {
                    Some((Tok::Colon, _)) => {}
                    Some((_, col)) => return Err(err(lineno, *col, "expected ':'".into())),
                    None => return Err(err(lineno, raw.chars().count() + 1, "expected ':'".into())),
                }
                let (s, scol) = ident(3)?;
                match toks.get(4) {
                    Some((Tok::Arrow, _)) => {}
                    Some((_, col)) => return Err(err(lineno, *col, "expected '->'".into())),
                    None => return Err(err(lineno, raw.chars().count() + 1, "expected '->'".into())),
                }
                let (t, tcol) = ident(5)?;
                end(6)?;
                if arrows.iter().any(|x| x.name == a) {
                    return Err(err(lineno, acol, format!("duplicate arrow '{a}'")));
                }
                let source = vertices
                    .iter()
                    .position(|v| *v == s)
                    .ok_or_else(|| err(lineno, scol, format!("unknown vertex '{s}'")))?;
                let target = vertices
                    .iter()
                    .position(|v| *v == t)
                    .ok_or_else(|| err(lineno, tcol, format!("unknown vertex '{t}'")))?;
                arrows.push(Arrow { name: a, source, target });
            }
            "relation" => {
                let (second, c2) = ident(1)?;
                let (first, c1) = ident(2)?;
                if let Some((_, col)) = toks.get(3) {
                    return Err(err(lineno, *col, "relations must have length 2".into()));
                }
                let b = arrows
                    .iter()
                    .position(|x| x.name == second)
                    .ok_or_else(|| err(lineno, c2, format!("unknown arrow '{second}'")))?;
                let a = arrows
                    .iter()
                    .position(|x| x.name == first)
                    .ok_or_else(|| err(lineno, c1, format!("unknown arrow '{first}'")))?;
                if arrows[a].target != arrows[b].source {
                    return Err(err(
                        lineno,
                        *hcol,
                        format!("non-composable relation: {second} {first} ({first} ends where {second} does not start)"),
                    ));
                }
                if relations.contains(&(b, a)) {
                    return Err(err(lineno, *hcol, format!("duplicate relation '{second} {first}'")));
                }
                relations.push((b, a));
            }
            other => return Err(err(lineno, *hcol, format!("unknown keyword '{other}'"))),
        }
    }
    relations.sort_unstable();
    Ok(Presentation { name, vertices, arrows, relations })
}

/// Which end of an arrow a sign variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignEnd {
    Start,
    End,
}

/// Sign variable index: `2 * arrow` for s', `2 * arrow + 1` for e'.
fn var(arrow: ArrowId, end: SignEnd) -> usize {
    2 * arrow + usize::from(end == SignEnd::End)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    pub s_prime: Vec<i8>,
    pub e_prime: Vec<i8>,
    /// Constraint-connected components, each a sorted list of `(arrow, end)`.
    pub components: Vec<Vec<(ArrowId, SignEnd)>>,
}

impl SignAssignment {
    pub fn get(&self, arrow: ArrowId, end: SignEnd) -> i8 {
        match end {
            SignEnd::Start => self.s_prime[arrow],
            SignEnd::End => self.e_prime[arrow],
        }
    }
}

/// Edges `(u, v, same)` of the sign constraint graph over variables.
fn sign_constraints(p: &Presentation) -> Vec<(usize, usize, bool)> {
    let mut edges = Vec::new();
    let n = p.arrows.len();
    for a in 0..n {
        for b in a + 1..n {
            if p.arrows[a].source == p.arrows[b].source {
                edges.push((var(a, SignEnd::Start), var(b, SignEnd::Start), false));
            }
            if p.arrows[a].target == p.arrows[b].target {
                edges.push((var(a, SignEnd::End), var(b, SignEnd::End), false));
            }
        }
    }
    for first in 0..n {
        for second in 0..n {
            if p.arrows[first].target == p.arrows[second].source {
                let rel = p.is_relation(second, first);
                edges.push((var(second, SignEnd::Start), var(first, SignEnd::End), rel));
            }
        }
    }
    edges
}

/// Solves the parity system; canonical form sets the least variable of each
/// component to +1. Returns the parities relative to the component root.
fn solve_signs(p: &Presentation) -> Result<(Vec<i8>, Vec<usize>, Vec<Vec<usize>>)> {
    let nv = 2 * p.arrows.len();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nv];
    for (u, v, same) in sign_constraints(p) {
        adj[u].push((v, same));
        adj[v].push((u, same));
    }
    let mut value = vec![0i8; nv];
    let mut comp_of = vec![usize::MAX; nv];
    let mut comps = Vec::new();
    for root in 0..nv {
        if comp_of[root] != usize::MAX {
            continue;
        }
        let cid = comps.len();
        let mut members = vec![root];
        comp_of[root] = cid;
        value[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, same) in &adj[u] {
                let want = if same { value[u] } else { -value[u] };
                if comp_of[w] == usize::MAX {
                    comp_of[w] = cid;
                    value[w] = want;
                    members.push(w);
                    queue.push_back(w);
                } else if value[w] != want {
                    let name = |x: usize| {
                        let a = &p.arrows[x / 2].name;
                        if x.is_multiple_of(2) { format!("s'({a})") } else { format!("e'({a})") }
                    };
                    return Err(GentleError::Internal(format!(
                        "sign system infeasible: constraint between {} and {} contradicts propagation from {}",
                        name(u),
                        name(w),
                        name(root)
                    )));
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    Ok((value, comp_of, comps))
}

fn assignment_from(p: &Presentation, values: &[i8], comps: &[Vec<usize>]) -> SignAssignment {
    let n = p.arrows.len();
    let end_of = |x: usize| if x.is_multiple_of(2) { SignEnd::Start } else { SignEnd::End };
    SignAssignment {
        s_prime: (0..n).map(|a| values[var(a, SignEnd::Start)]).collect(),
        e_prime: (0..n).map(|a| values[var(a, SignEnd::End)]).collect(),
        components: comps.iter().map(|c| c.iter().map(|&x| (x / 2, end_of(x))).collect()).collect(),
    }
}

/// Checks the four sign conditions directly.
pub fn check_signs(p: &Presentation, s: &SignAssignment) -> bool {
    sign_constraints(p).into_iter().all(|(u, v, same)| {
        let val = |x: usize| if x.is_multiple_of(2) { s.s_prime[x / 2] } else { s.e_prime[x / 2] };
        (val(u) == val(v)) == same
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: VertexId,
    pub target: VertexId,
    pub arrows: Vec<ArrowId>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// A validated gentle algebra together with its path basis and signs.
#[derive(Clone, Debug)]
pub struct GentleAlgebra {
    pres: Presentation,
    signs: SignAssignment,
    paths: Vec<Path>,
    index: HashMap<(VertexId, Vec<ArrowId>), PathId>,
    between: Vec<Vec<Vec<PathId>>>,
    out_arrows: Vec<Vec<ArrowId>>,
    in_arrows: Vec<Vec<ArrowId>>,
    rel: Vec<Vec<bool>>,
}

/// Validates (G1)-(G4), connectivity and finite dimension; solves the signs.
pub fn validate_gentle(p: &Presentation) -> Result<GentleAlgebra> {
    let nv = p.vertices.len();
    let na = p.arrows.len();
    if nv == 0 {
        return Err(GentleError::Precondition("presentation has no vertices".into()));
    }
    let mut out_arrows = vec![Vec::new(); nv];
    let mut in_arrows = vec![Vec::new(); nv];
    for (i, a) in p.arrows.iter().enumerate() {
        out_arrows[a.source].push(i);
        in_arrows[a.target].push(i);
    }
    for v in 0..nv {
        if out_arrows[v].len() > 2 || in_arrows[v].len() > 2 {
            return Err(GentleError::NotGentle {
                condition: "G1",
                detail: format!(
                    "vertex {} has {} outgoing and {} incoming arrows",
                    p.vertices[v],
                    out_arrows[v].len(),
                    in_arrows[v].len()
                ),
            });
        }
    }
    let mut rel = vec![vec![false; na]; na];
    for &(b, a) in &p.relations {
        rel[b][a] = true;
    }
    let name = |a: ArrowId| p.arrows[a].name.as_str();
    for a in 0..na {
        let after: Vec<ArrowId> = out_arrows[p.arrows[a].target].clone();
        let before: Vec<ArrowId> = in_arrows[p.arrows[a].source].clone();
        let free_after: Vec<_> = after.iter().filter(|&&b| !rel[b][a]).map(|&b| name(b)).collect();
        let rel_after: Vec<_> = after.iter().filter(|&&b| rel[b][a]).map(|&b| name(b)).collect();
        let free_before: Vec<_> = before.iter().filter(|&&c| !rel[a][c]).map(|&c| name(c)).collect();
        let rel_before: Vec<_> = before.iter().filter(|&&c| rel[a][c]).map(|&c| name(c)).collect();
        if free_after.len() > 1 {
            return Err(GentleError::NotGentle {
                condition: "G2",
                detail: format!("arrows {} all compose with {} outside I", free_after.join(", "), name(a)),
            });
        }
        if free_before.len() > 1 {
            return Err(GentleError::NotGentle {
                condition: "G2",
                detail: format!("{} composes outside I with each of {}", name(a), free_before.join(", ")),
            });
        }
        if rel_after.len() > 1 {
            return Err(GentleError::NotGentle {
                condition: "G3",
                detail: format!("arrows {} all compose with {} into I", rel_after.join(", "), name(a)),
            });
        }
        if rel_before.len() > 1 {
            return Err(GentleError::NotGentle {
                condition: "G3",
                detail: format!("{} composes into I with each of {}", name(a), rel_before.join(", ")),
            });
        }
    }
    // connectivity
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &a in out_arrows[v].iter().chain(&in_arrows[v]) {
            for w in [p.arrows[a].source, p.arrows[a].target] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(GentleError::Disconnected(format!(
            "vertex {} is not reachable from {}",
            p.vertices[v], p.vertices[0]
        )));
    }
    // finite dimension: the "continue outside I" successor graph is acyclic
    let next_free = |a: ArrowId| out_arrows[p.arrows[a].target].iter().copied().find(|&b| !rel[b][a]);
    for start in 0..na {
        let mut cur = start;
        let mut trail = vec![start];
        for _ in 0..na {
            match next_free(cur) {
                Some(b) if b == start => {
                    let cycle: Vec<&str> = trail.iter().rev().map(|&x| name(x)).collect();
                    return Err(GentleError::InfiniteDimensional { cycle: cycle.join("") });
                }
                Some(b) => {
                    cur = b;
                    trail.push(b);
                }
                None => break,
            }
        }
    }
    let (values, _, comps) = solve_signs(p)?;
    let signs = assignment_from(p, &values, &comps);

    let mut paths = Vec::new();
    for v in 0..nv {
        paths.push(Path { source: v, target: v, arrows: Vec::new() });
    }
    for a in 0..na {
        let mut arrows = vec![a];
        loop {
            let last = *arrows.last().unwrap();
            paths.push(Path { source: p.arrows[a].source, target: p.arrows[last].target, arrows: arrows.clone() });
            match next_free(last) {
                Some(b) => arrows.push(b),
                None => break,
            }
        }
    }
    let index = paths.iter().enumerate().map(|(i, q)| ((q.source, q.arrows.clone()), i)).collect();
    let mut between = vec![vec![Vec::new(); nv]; nv];
    for (i, q) in paths.iter().enumerate() {
        between[q.source][q.target].push(i);
    }
    Ok(GentleAlgebra { pres: p.clone(), signs, paths, index, between, out_arrows, in_arrows, rel })
}

/// All valid sign assignments, canonical one first.
pub fn enumerate_sign_assignments(a: &GentleAlgebra) -> Vec<SignAssignment> {
    let p = &a.pres;
    let (values, comp_of, comps) = solve_signs(p).expect("validated algebra has a feasible sign system");
    let c = comps.len();
    assert!(c < 24, "too many sign components to enumerate");
    (0u32..1 << c)
        .map(|mask| {
            let flipped: Vec<i8> = values
                .iter()
                .enumerate()
                .map(|(x, &v)| if mask >> comp_of[x] & 1 == 1 { -v } else { v })
                .collect();
            assignment_from(p, &flipped, &comps)
        })
        .collect()
}

impl GentleAlgebra {
    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn name(&self) -> &str {
        &self.pres.name
    }

    pub fn signs(&self) -> &SignAssignment {
        &self.signs
    }

    /// The same algebra under a different valid sign assignment.
    pub fn with_signs(&self, signs: SignAssignment) -> Result<GentleAlgebra> {
        if !check_signs(&self.pres, &signs) {
            return Err(GentleError::Precondition("sign assignment violates the sign conditions".into()));
        }
        let mut out = self.clone();
        out.signs = signs;
        Ok(out)
    }

    pub fn num_vertices(&self) -> usize {
        self.pres.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.pres.arrows.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.pres.vertices[v]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.pres.arrows[a]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.pres.arrows[a].name
    }

    pub fn s_prime(&self, a: ArrowId) -> i8 {
        self.signs.s_prime[a]
    }

    pub fn e_prime(&self, a: ArrowId) -> i8 {
        self.signs.e_prime[a]
    }

    pub fn out_arrows(&self, v: VertexId) -> &[ArrowId] {
        &self.out_arrows[v]
    }

    pub fn in_arrows(&self, v: VertexId) -> &[ArrowId] {
        &self.in_arrows[v]
    }

    /// True when "first, then second" lies in I.
    pub fn is_relation(&self, second: ArrowId, first: ArrowId) -> bool {
        self.rel[second][first]
    }

    /// The arrow continuing `a` outside I, if any.
    pub fn next_free(&self, a: ArrowId) -> Option<ArrowId> {
        self.out_arrows[self.arrow(a).target].iter().copied().find(|&b| !self.rel[b][a])
    }

    /// The arrow continuing `a` into I, if any.
    pub fn next_rel(&self, a: ArrowId) -> Option<ArrowId> {
        self.out_arrows[self.arrow(a).target].iter().copied().find(|&b| self.rel[b][a])
    }

    pub fn prev_free(&self, a: ArrowId) -> Option<ArrowId> {
        self.in_arrows[self.arrow(a).source].iter().copied().find(|&c| !self.rel[a][c])
    }

    pub fn prev_rel(&self, a: ArrowId) -> Option<ArrowId> {
        self.in_arrows[self.arrow(a).source].iter().copied().find(|&c| self.rel[a][c])
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn path_basis(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, p: PathId) -> &Path {
        &self.paths[p]
    }

    pub fn trivial_path(&self, v: VertexId) -> PathId {
        v
    }

    pub fn is_trivial(&self, p: PathId) -> bool {
        self.paths[p].arrows.is_empty()
    }

    pub fn path_id(&self, source: VertexId, arrows: &[ArrowId]) -> Option<PathId> {
        self.index.get(&(source, arrows.to_vec())).copied()
    }

    /// Path id of a nonempty arrow sequence in application order.
    pub fn path_of_arrows(&self, arrows: &[ArrowId]) -> Option<PathId> {
        let first = *arrows.first()?;
        self.path_id(self.arrow(first).source, arrows)
    }

    /// Basis paths from `u` to `v`.
    pub fn paths_between(&self, u: VertexId, v: VertexId) -> &[PathId] {
        &self.between[u][v]
    }

    /// Basis path "p first, then q", or None if the composite vanishes.
    pub fn then(&self, p: PathId, q: PathId) -> Option<PathId> {
        let (pp, qq) = (&self.paths[p], &self.paths[q]);
        if pp.target != qq.source {
            return None;
        }
        if pp.arrows.is_empty() {
            return Some(q);
        }
        if qq.arrows.is_empty() {
            return Some(p);
        }
        if self.rel[qq.arrows[0]][*pp.arrows.last().unwrap()] {
            return None;
        }
        let mut arrows = pp.arrows.clone();
        arrows.extend_from_slice(&qq.arrows);
        self.path_id(pp.source, &arrows)
    }

    /// If `p` = "x first, then q", returns x.
    pub fn strip_suffix(&self, p: PathId, q: PathId) -> Option<PathId> {
        let (pp, qq) = (&self.paths[p], &self.paths[q]);
        if pp.target != qq.target || !pp.arrows.ends_with(&qq.arrows) {
            return None;
        }
        let k = pp.arrows.len() - qq.arrows.len();
        if k == 0 {
            return (pp.source == qq.source).then_some(self.trivial_path(pp.source));
        }
        self.path_id(pp.source, &pp.arrows[..k])
    }

    /// If `p` = "q first, then x", returns x.
    pub fn strip_prefix(&self, p: PathId, q: PathId) -> Option<PathId> {
        let (pp, qq) = (&self.paths[p], &self.paths[q]);
        if pp.source != qq.source || !pp.arrows.starts_with(&qq.arrows) {
            return None;
        }
        let k = qq.arrows.len();
        if k == pp.arrows.len() {
            return (pp.target == qq.target).then_some(self.trivial_path(pp.target));
        }
        self.path_id(qq.target, &pp.arrows[k..])
    }

    pub fn path_name(&self, p: PathId) -> String {
        let path = &self.paths[p];
        if path.arrows.is_empty() {
            return format!("e{}", self.vertex_name(path.source));
        }
        path.arrows.iter().rev().map(|&a| self.arrow_name(a)).collect::<Vec<_>>().join("*")
    }

    pub fn path_s_prime(&self, p: PathId) -> i8 {
        self.s_prime(self.paths[p].arrows[0])
    }

    pub fn path_e_prime(&self, p: PathId) -> i8 {
        self.e_prime(*self.paths[p].arrows.last().unwrap())
    }
}

/// An element of the algebra as a sparse combination of basis paths.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Elem(pub BTreeMap<PathId, Q>);

impl Elem {
    pub fn zero() -> Self {
        Elem(BTreeMap::new())
    }

    pub fn path(p: PathId) -> Self {
        Self::scaled(p, Q::one())
    }

    pub fn scaled(p: PathId, c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(p, c);
        }
        Elem(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (PathId, Q)> + '_ {
        self.0.iter().map(|(p, c)| (*p, *c))
    }

    pub fn add_term(&mut self, p: PathId, c: Q) {
        let entry = self.0.entry(p).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&p);
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p, c);
        }
        out
    }

    pub fn scale(&self, s: Q) -> Elem {
        if s.is_zero() {
            return Elem::zero();
        }
        Elem(self.0.iter().map(|(p, c)| (*p, *c * s)).collect())
    }

    /// Algebra product `a * b`: paths of `b` first, then paths of `a`.
    pub fn mul(alg: &GentleAlgebra, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (p, c) in a.terms() {
            for (q, d) in b.terms() {
                if let Some(r) = alg.then(q, p) {
                    out.add_term(r, c * d);
                }
            }
        }
        out
    }

    /// Coefficient of the trivial path at `v`.
    pub fn unit_coefficient(&self, alg: &GentleAlgebra, v: VertexId) -> Q {
        self.0.get(&alg.trivial_path(v)).copied().unwrap_or_else(Q::zero)
    }

    pub fn display(&self, alg: &GentleAlgebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(p, c)| {
                if c == Q::one() {
                    alg.path_name(p)
                } else {
                    format!("{}*{}", c, alg.path_name(p))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Inverse of a unit in the local algebra `e_v A e_v`.
    pub fn local_inverse(alg: &GentleAlgebra, v: VertexId, u: &Elem) -> Option<Elem> {
        let lambda = u.unit_coefficient(alg, v);
        if lambda.is_zero() {
            return None;
        }
        let inv = Q::one() / lambda;
        let mut r = u.clone();
        r.0.remove(&alg.trivial_path(v));
        let neg_r = r.scale(-inv);
        let mut out = Elem::path(alg.trivial_path(v));
        let mut power = Elem::path(alg.trivial_path(v));
        for _ in 0..alg.dim() {
            power = Elem::mul(alg, &power, &neg_r);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Some(out.scale(inv))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dsl())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(src: &str) -> GentleAlgebra {
        validate_gentle(&parse_presentation(src).unwrap()).unwrap()
    }

    #[test]
    fn minimal_source() {
        let p = parse_presentation("vertex 1 2\narrow a : 1 -> 2\n").unwrap();
        assert_eq!(p.vertices.len(), 2);
        assert_eq!(p.arrows.len(), 1);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn non_composable_relation() {
        let e = parse_presentation("vertex 1 2 3\narrow a : 1 -> 2\narrow b : 3 -> 1\nrelation b a\n").unwrap_err();
        assert!(e.to_string().contains("non-composable relation"), "{e}");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_presentation("vertex 1\narrow x : 1 -> 9\n").unwrap_err() {
            GentleError::Parse { line, column, .. } => assert_eq!((line, column), (2, 16)),
            e => panic!("{e}"),
        }
        assert!(parse_presentation("vertex 1 1").is_err());
        assert!(parse_presentation("vertex 1\narrow x : 1 -> 1\nrelation x x x").is_err());
        assert!(parse_presentation("vertex 1\nfoo").is_err());
    }

    #[test]
    fn dual_numbers_signs_forced_equal() {
        let a = alg("vertex 1\narrow x : 1 -> 1\nrelation x x\n");
        assert_eq!(a.s_prime(0), a.e_prime(0));
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn free_loop_is_infinite() {
        let e = validate_gentle(&parse_presentation("vertex 1\narrow x : 1 -> 1\n").unwrap()).unwrap_err();
        assert!(matches!(e, GentleError::InfiniteDimensional { .. }));
    }

    #[test]
    fn kronecker_signs_opposite() {
        let a = alg("vertex 1 2\narrow a : 1 -> 2\narrow b : 1 -> 2\n");
        assert_eq!(a.s_prime(0), -a.s_prime(1));
        assert_eq!(a.e_prime(0), -a.e_prime(1));
        assert_eq!((a.s_prime(0), a.e_prime(0)), (1, 1));
    }

    #[test]
    fn single_arrow_has_four_assignments() {
        let a = alg("vertex 1 2\narrow a : 1 -> 2\n");
        assert_eq!(enumerate_sign_assignments(&a).len(), 4);
    }

    #[test]
    fn g1_violation_reported() {
        let e = validate_gentle(
            &parse_presentation("vertex 1 2 3 4\narrow a : 1 -> 2\narrow b : 1 -> 3\narrow c : 1 -> 4\n").unwrap(),
        )
        .unwrap_err();
        assert!(matches!(e, GentleError::NotGentle { condition: "G1", .. }));
    }

    #[test]
    fn local_inverse_of_unit() {
        let a = alg("vertex 1\narrow x : 1 -> 1\nrelation x x\n");
        let x = a.path_of_arrows(&[0]).unwrap();
        let mut u = Elem::scaled(a.trivial_path(0), Q::from_integer(2));
        u.add_term(x, Q::from_integer(3));
        let inv = Elem::local_inverse(&a, 0, &u).unwrap();
        assert_eq!(Elem::mul(&a, &u, &inv), Elem::path(a.trivial_path(0)));
    }
}
