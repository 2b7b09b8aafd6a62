//! Permitted and forbidden threads, the endpoint matchings between them, and
//! the cycles those matchings trace out.

use crate::error::{GentleError, Result};
use crate::presentation::{ArrowId, GentleAlgebra, VertexId};
use crate::words::{HomotopyLetter, HomotopyString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThreadKind {
    Permitted,
    Forbidden,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThreadBody {
    /// Arrows in application order.
    Arrows(Vec<ArrowId>),
    Trivial(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Thread {
    pub kind: ThreadKind,
    pub body: ThreadBody,
    pub start: VertexId,
    pub end: VertexId,
    pub s_sign: i8,
    pub e_sign: i8,
    pub length: usize,
}

impl Thread {
    pub fn is_trivial(&self) -> bool {
        matches!(self.body, ThreadBody::Trivial(_))
    }

    pub fn arrows(&self) -> &[ArrowId] {
        match &self.body {
            ThreadBody::Arrows(a) => a,
            ThreadBody::Trivial(_) => &[],
        }
    }

    /// Name in the right-to-left reading, e.g. `cba`, or `1_x` when trivial.
    pub fn label(&self, alg: &GentleAlgebra) -> String {
        match &self.body {
            ThreadBody::Trivial(v) => format!("1_{}", alg.vertex_name(*v)),
            ThreadBody::Arrows(arrows) => {
                let names: Vec<&str> = arrows.iter().rev().map(|&a| alg.arrow_name(a)).collect();
                if names.iter().all(|n| n.chars().count() == 1) {
                    names.concat()
                } else {
                    names.join(".")
                }
            }
        }
    }

    /// The homotopy string whose string complex sits over this thread: one
    /// letter per arrow for forbidden threads, a single letter for permitted
    /// ones.
    pub fn as_string(&self, alg: &GentleAlgebra) -> HomotopyString {
        match (&self.body, self.kind) {
            (ThreadBody::Trivial(v), _) => HomotopyString::trivial(*v, self.s_sign),
            (ThreadBody::Arrows(arrows), ThreadKind::Permitted) => HomotopyString {
                letters: vec![HomotopyLetter::direct(alg.path_of_arrows(arrows).expect("permitted thread is a path"))],
                trivial: None,
            },
            (ThreadBody::Arrows(arrows), ThreadKind::Forbidden) => HomotopyString {
                letters: arrows.iter().map(|&a| HomotopyLetter::direct(alg.path_of_arrows(&[a]).unwrap())).collect(),
                trivial: None,
            },
        }
    }

    /// The thread as a word expression in the homotopy-word syntax.
    pub fn word_expr(&self, alg: &GentleAlgebra) -> String {
        match (&self.body, self.kind) {
            (ThreadBody::Trivial(v), _) => format!("triv:{}:{:+}", alg.vertex_name(*v), self.s_sign),
            (ThreadBody::Arrows(arrows), ThreadKind::Permitted) => {
                arrows.iter().rev().map(|&a| alg.arrow_name(a)).collect::<Vec<_>>().join("*")
            }
            (ThreadBody::Arrows(arrows), ThreadKind::Forbidden) => {
                arrows.iter().rev().map(|&a| alg.arrow_name(a)).collect::<Vec<_>>().join(", ")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThreadTables {
    pub permitted: Vec<Thread>,
    pub forbidden: Vec<Thread>,
    /// Permitted index to forbidden index.
    pub phi1: Vec<Option<usize>>,
    /// Forbidden index to permitted index; `None` on critical threads.
    pub phi2: Vec<Option<usize>>,
    pub critical: Vec<bool>,
}

impl ThreadTables {
    pub fn non_critical_forbidden(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.forbidden.len()).filter(|&i| !self.critical[i])
    }

    pub fn phi1_inverse(&self, forbidden: usize) -> Option<usize> {
        self.phi1.iter().position(|&x| x == Some(forbidden))
    }

    pub fn phi2_inverse(&self, permitted: usize) -> Option<usize> {
        self.phi2.iter().position(|&x| x == Some(permitted))
    }
}

fn chain(alg: &GentleAlgebra, start: ArrowId, next: impl Fn(ArrowId) -> Option<ArrowId>) -> Vec<ArrowId> {
    let mut out = vec![start];
    while let Some(b) = next(*out.last().unwrap()) {
        if out.contains(&b) || out.len() > alg.num_arrows() {
            break;
        }
        out.push(b);
    }
    out
}

/// Cyclic arrow sequences (application order, least arrow first) whose every
/// cyclically consecutive pair lies in I.
pub fn detect_critical_cycles(alg: &GentleAlgebra) -> Vec<Vec<ArrowId>> {
    let mut cycles = Vec::new();
    let mut seen = vec![false; alg.num_arrows()];
    for a in 0..alg.num_arrows() {
        if seen[a] {
            continue;
        }
        let mut walk = vec![a];
        let mut cur = a;
        let closed = loop {
            match alg.next_rel(cur) {
                Some(b) if b == a => break true,
                Some(b) if walk.contains(&b) || walk.len() > alg.num_arrows() => break false,
                Some(b) => {
                    walk.push(b);
                    cur = b;
                }
                None => break false,
            }
        };
        if closed {
            for &x in &walk {
                seen[x] = true;
            }
            cycles.push(walk);
        }
    }
    cycles
}

fn arrow_thread(alg: &GentleAlgebra, kind: ThreadKind, arrows: Vec<ArrowId>) -> Thread {
    let first = arrows[0];
    let last = *arrows.last().unwrap();
    Thread {
        kind,
        start: alg.arrow(first).source,
        end: alg.arrow(last).target,
        s_sign: alg.s_prime(first),
        e_sign: alg.e_prime(last),
        length: arrows.len(),
        body: ThreadBody::Arrows(arrows),
    }
}

/// Enumerates threads and resolves the endpoint matchings.
pub fn enumerate_threads(alg: &GentleAlgebra) -> Result<ThreadTables> {
    let mut permitted = Vec::new();
    let mut forbidden = Vec::new();
    let mut critical = Vec::new();
    for a in 0..alg.num_arrows() {
        if alg.prev_free(a).is_none() {
            permitted.push(arrow_thread(alg, ThreadKind::Permitted, chain(alg, a, |x| alg.next_free(x))));
        }
    }
    let cycles = detect_critical_cycles(alg);
    for a in 0..alg.num_arrows() {
        let on_cycle = cycles.iter().any(|c| c.contains(&a));
        if on_cycle || alg.prev_rel(a).is_none() {
            forbidden.push(arrow_thread(alg, ThreadKind::Forbidden, chain(alg, a, |x| alg.next_rel(x))));
            critical.push(on_cycle);
        }
    }
    for v in 0..alg.num_vertices() {
        let ins = alg.in_arrows(v);
        let outs = alg.out_arrows(v);
        if ins.len() > 1 || outs.len() > 1 || (ins.is_empty() && outs.is_empty()) {
            continue;
        }
        let both = match (ins.first(), outs.first()) {
            (Some(&b), Some(&g)) => Some(alg.is_relation(g, b)),
            _ => None,
        };
        let trivial = |kind, s: i8, e: i8| Thread {
            kind,
            body: ThreadBody::Trivial(v),
            start: v,
            end: v,
            s_sign: s,
            e_sign: e,
            length: 0,
        };
        if both != Some(true) {
            let s = match outs.first() {
                Some(&g) => -alg.s_prime(g),
                None => alg.e_prime(ins[0]),
            };
            permitted.push(trivial(ThreadKind::Permitted, s, -s));
        }
        if both != Some(false) {
            let s = match outs.first() {
                Some(&g) => -alg.s_prime(g),
                None => -alg.e_prime(ins[0]),
            };
            forbidden.push(trivial(ThreadKind::Forbidden, s, s));
            critical.push(false);
        }
    }

    let mut phi1 = Vec::with_capacity(permitted.len());
    for v in &permitted {
        let hits: Vec<usize> = (0..forbidden.len())
            .filter(|&w| !critical[w] && forbidden[w].end == v.end && forbidden[w].e_sign == -v.e_sign)
            .collect();
        if hits.len() > 1 {
            return Err(GentleError::Internal(format!(
                "ambiguous first matching for permitted thread {}",
                v.label(alg)
            )));
        }
        phi1.push(hits.first().copied());
    }
    let mut phi2 = Vec::with_capacity(forbidden.len());
    for (wi, w) in forbidden.iter().enumerate() {
        if critical[wi] {
            phi2.push(None);
            continue;
        }
        let hits: Vec<usize> = (0..permitted.len())
            .filter(|&v| permitted[v].start == w.start && permitted[v].s_sign == -w.s_sign)
            .collect();
        if hits.len() > 1 {
            return Err(GentleError::Internal(format!(
                "ambiguous second matching for forbidden thread {}",
                w.label(alg)
            )));
        }
        phi2.push(hits.first().copied());
    }
    let tables = ThreadTables { permitted, forbidden, phi1, phi2, critical };
    check_bijections(alg, &tables)?;
    Ok(tables)
}

fn check_bijections(alg: &GentleAlgebra, t: &ThreadTables) -> Result<()> {
    let non_critical = t.non_critical_forbidden().count();
    if t.permitted.len() != non_critical {
        return Err(GentleError::Internal(format!(
            "{} permitted threads but {} non-critical forbidden threads",
            t.permitted.len(),
            non_critical
        )));
    }
    let mut hit = vec![false; t.forbidden.len()];
    for (i, w) in t.phi1.iter().enumerate() {
        let Some(w) = *w else {
            return Err(GentleError::Internal(format!(
                "first matching undefined at {}",
                t.permitted[i].label(alg)
            )));
        };
        if std::mem::replace(&mut hit[w], true) {
            return Err(GentleError::Internal("first matching is not injective".into()));
        }
    }
    let mut hit = vec![false; t.permitted.len()];
    for w in t.non_critical_forbidden() {
        let Some(v) = t.phi2[w] else {
            return Err(GentleError::Internal(format!(
                "second matching undefined at {}",
                t.forbidden[w].label(alg)
            )));
        };
        if std::mem::replace(&mut hit[v], true) {
            return Err(GentleError::Internal("second matching is not injective".into()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AagCycle {
    pub n: usize,
    pub m: usize,
    /// Permitted indices `H_0, H_1, ...` along the walk.
    pub permitted: Vec<usize>,
    /// Forbidden indices `phi1(H_0), phi1(H_1), ...`.
    pub forbidden: Vec<usize>,
}

/// Partitions the permitted threads along the walk `H -> phi2(phi1(H))`.
pub fn aag_cycles(t: &ThreadTables) -> Result<Vec<AagCycle>> {
    let mut visited = vec![false; t.permitted.len()];
    let mut out = Vec::new();
    for start in 0..t.permitted.len() {
        if visited[start] {
            continue;
        }
        let mut cyc = AagCycle { n: 0, m: 0, permitted: Vec::new(), forbidden: Vec::new() };
        let mut h = start;
        loop {
            visited[h] = true;
            let w = t.phi1[h].ok_or_else(|| GentleError::Internal("first matching undefined mid-walk".into()))?;
            cyc.permitted.push(h);
            cyc.forbidden.push(w);
            cyc.n += 1;
            cyc.m += t.forbidden[w].length;
            h = t.phi2[w].ok_or_else(|| GentleError::Internal("second matching undefined mid-walk".into()))?;
            if h == start {
                break;
            }
            if visited[h] {
                return Err(GentleError::Internal("walk entered a previously visited cycle".into()));
            }
        }
        out.push(cyc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, validate_gentle};

    fn alg(src: &str) -> GentleAlgebra {
        validate_gentle(&parse_presentation(src).unwrap()).unwrap()
    }

    fn labels(a: &GentleAlgebra, ts: &[Thread]) -> Vec<String> {
        let mut v: Vec<String> = ts.iter().map(|t| t.label(a)).collect();
        v.sort();
        v
    }

    #[test]
    fn a2_threads_and_matchings() {
        let a = alg("vertex 1 2\narrow a : 1 -> 2\n");
        let t = enumerate_threads(&a).unwrap();
        assert_eq!(labels(&a, &t.permitted), ["1_1", "1_2", "a"]);
        assert_eq!(labels(&a, &t.forbidden), ["1_1", "1_2", "a"]);
        let pa = t.permitted.iter().position(|x| x.label(&a) == "a").unwrap();
        let fa = t.forbidden.iter().position(|x| x.label(&a) == "a").unwrap();
        assert_eq!(t.forbidden[t.phi1[pa].unwrap()].label(&a), "1_2");
        assert_eq!(t.permitted[t.phi2[fa].unwrap()].label(&a), "1_1");
        let cycles = aag_cycles(&t).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!((cycles[0].n, cycles[0].m), (3, 1));
    }

    #[test]
    fn dual_numbers_threads() {
        let a = alg("vertex 1\narrow x : 1 -> 1\nrelation x x\n");
        let t = enumerate_threads(&a).unwrap();
        assert_eq!(labels(&a, &t.permitted), ["x"]);
        assert_eq!(labels(&a, &t.forbidden), ["1_1", "x"]);
        let crit: Vec<String> = t.non_critical_forbidden().map(|i| t.forbidden[i].label(&a)).collect();
        assert_eq!(crit, ["1_1"]);
        assert_eq!(detect_critical_cycles(&a), vec![vec![0]]);
        let c = aag_cycles(&t).unwrap();
        assert_eq!((c[0].n, c[0].m), (1, 0));
    }

    #[test]
    fn hereditary_a3_has_no_critical_cycles() {
        let a = alg("vertex 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n");
        assert!(detect_critical_cycles(&a).is_empty());
    }
}
