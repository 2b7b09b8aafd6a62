//! Mouth objects, their Serre orbits, and exceptional cycles.
//!
//! The mouth objects are the string complexes over non-critical forbidden
//! threads. The Serre functor permutes them up to shift; the orbits give the
//! invariants `(n, m)` with `S^n(X) = X[m]`, and each orbit yields one
//! exceptional cycle (a spherical object when `n = 1`). A brute-force search
//! over all short strings provides an independent check of the
//! classification.

use crate::alp::graph_self_hom_bound;
use crate::complexes::{nakayama_on_projectives, perfect_replacement, shift, unfold_band, unfold_string, RepComplex};
use crate::error::{GentleError, Result};
use crate::field::Q;
use crate::hom::{graded_profile, graded_profile_fast_capped, iso_indecomposable, iso_up_to_shift, GradedHomProfile};
use crate::par::{par_map, Parallelism};
use crate::presentation::{is_a3_graph, GentleAlgebra};
use crate::threads::{aag_cycles, enumerate_threads, ThreadTables};
use crate::words::{canonical_band, canonical_string, visit_strings, HomotopyBand, HomotopyString, WordKey};
use std::collections::{BTreeMap, HashMap};

/// A string complex over a non-critical forbidden thread, in base position.
#[derive(Clone, Debug)]
pub struct MouthObject {
    /// Index into [`ThreadTables::forbidden`].
    pub thread: usize,
    pub label: String,
    pub word: HomotopyString,
    pub complex: RepComplex,
    /// `profiles[j]` is the graded Hom from this object to mouth object `j`.
    pub profiles: Vec<GradedHomProfile>,
    /// Set when the Hom pattern to the other mouth objects is not the
    /// expected one (nonzero at one or two targets, each at most 2).
    pub flag: Option<String>,
}

impl MouthObject {
    /// Nonzero `(object, shift, dim)` triples of the Hom scan.
    pub fn nonzero_targets(&self) -> Vec<(usize, i32, usize)> {
        let mut out = Vec::new();
        for (j, p) in self.profiles.iter().enumerate() {
            for (t, d) in p.nonzero() {
                out.push((j, t, d));
            }
        }
        out
    }
}

fn is_field(alg: &GentleAlgebra) -> bool {
    alg.num_vertices() == 1 && alg.num_arrows() == 0
}

/// Mouth objects together with the thread tables they were built from.
pub fn mouth_objects_with(alg: &GentleAlgebra, par: Parallelism) -> Result<(ThreadTables, Vec<MouthObject>)> {
    let tables = enumerate_threads(alg)?;
    let base: Vec<(usize, HomotopyString, RepComplex)> = tables
        .non_critical_forbidden()
        .map(|i| {
            let w = tables.forbidden[i].as_string(alg);
            let c = unfold_string(alg, &w, 0);
            (i, w, c)
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..base.len()).flat_map(|i| (0..base.len()).map(move |j| (i, j))).collect();
    let profiles = par_map(par, &pairs, |&(i, j)| graded_profile(alg, &base[i].2, &base[j].2));
    let mut out = Vec::with_capacity(base.len());
    let mut it = profiles.into_iter();
    for (thread, word, complex) in base.iter().cloned() {
        let row: Vec<GradedHomProfile> = it.by_ref().take(base.len()).collect();
        let mut obj = MouthObject { thread, label: tables.forbidden[thread].label(alg), word, complex, profiles: row, flag: None };
        let targets = obj.nonzero_targets();
        if targets.is_empty() || targets.len() > 2 || targets.iter().any(|t| t.2 > 2) {
            obj.flag = Some(format!("Hom pattern violated: nonzero at {targets:?}"));
        }
        out.push(obj);
    }
    Ok((tables, out))
}

pub fn mouth_objects(alg: &GentleAlgebra) -> Result<Vec<MouthObject>> {
    Ok(mouth_objects_with(alg, Parallelism::Sequential)?.1)
}

/// Serre image of a complex of projectives, as a minimal complex of projectives.
pub fn serre_image(alg: &GentleAlgebra, c: &RepComplex) -> Result<RepComplex> {
    perfect_replacement(alg, &nakayama_on_projectives(alg, c)?)
}

/// `S(M) = M'[shift]` for mouth objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SerreTarget {
    /// Index into the mouth object list.
    pub object: usize,
    pub shift: i32,
}

/// Decides the Serre image of mouth object `i` from the Hom scan, then
/// cross-checks it against the thread matchings and an explicit isomorphism
/// with the Nakayama image.
pub fn serre_of_mouth(alg: &GentleAlgebra, tables: &ThreadTables, objects: &[MouthObject], i: usize) -> Result<SerreTarget> {
    let m = &objects[i];
    if let Some(flag) = &m.flag {
        return Err(GentleError::Internal(format!("mouth object {} is flagged: {flag}", m.label)));
    }
    let end = m.profiles[i].get(0);
    let target = if end == 2 {
        SerreTarget { object: i, shift: 0 }
    } else {
        let others: Vec<_> = m.nonzero_targets().into_iter().filter(|&(j, t, _)| (j, t) != (i, 0)).collect();
        match others.as_slice() {
            [(j, t, 1)] if end == 1 => SerreTarget { object: *j, shift: *t },
            _ => {
                return Err(GentleError::Internal(format!(
                    "Hom pattern at {} does not single out a Serre image: End = {end}, other targets {others:?}",
                    m.label
                )))
            }
        }
    };
    let combinatorial = tables.phi1_inverse(m.thread).and_then(|h| tables.phi2_inverse(h));
    if combinatorial != Some(objects[target.object].thread) {
        return Err(GentleError::Internal(format!(
            "Serre image of {} is {} by the Hom scan but thread {:?} by the matchings",
            m.label, objects[target.object].label, combinatorial
        )));
    }
    let s = serre_image(alg, &m.complex)?;
    let candidate = shift(&objects[target.object].complex, target.shift);
    if !iso_indecomposable(alg, &s, &candidate) {
        return Err(GentleError::Internal(format!(
            "Nakayama image of {} is not isomorphic to {}[{}]",
            m.label, objects[target.object].label, target.shift
        )));
    }
    Ok(target)
}

/// One Serre orbit of mouth objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreOrbit {
    /// `(object index, s)` with `S^i(first) = object[s]`, in orbit order.
    pub members: Vec<(usize, i32)>,
    pub n: usize,
    /// Total shift: `S^n(X) = X[m]`.
    pub m: i32,
}

/// Partitions the unflagged mouth objects into Serre orbits and checks each
/// orbit's `(n, m)` against the thread-walk cycles.
pub fn serre_orbits(alg: &GentleAlgebra, tables: &ThreadTables, objects: &[MouthObject]) -> Result<Vec<SerreOrbit>> {
    let targets: Vec<Option<SerreTarget>> = (0..objects.len())
        .map(|i| if objects[i].flag.is_some() { Ok(None) } else { serre_of_mouth(alg, tables, objects, i).map(Some) })
        .collect::<Result<_>>()?;
    let mut visited = vec![false; objects.len()];
    let mut orbits = Vec::new();
    for start in 0..objects.len() {
        if visited[start] || targets[start].is_none() {
            continue;
        }
        let mut members = vec![(start, 0)];
        visited[start] = true;
        let (mut cur, mut acc) = (start, 0);
        loop {
            let t = targets[cur].ok_or_else(|| {
                GentleError::Internal(format!("orbit of {} reaches flagged object {}", objects[start].label, objects[cur].label))
            })?;
            acc += t.shift;
            cur = t.object;
            if cur == start {
                break;
            }
            if visited[cur] || members.len() > objects.len() {
                return Err(GentleError::Internal(format!("Serre orbit of {} does not close", objects[start].label)));
            }
            visited[cur] = true;
            members.push((cur, acc));
        }
        orbits.push(SerreOrbit { n: members.len(), members, m: acc });
    }
    let walk = aag_cycles(tables)?;
    for orbit in &orbits {
        let mut threads: Vec<usize> = orbit.members.iter().map(|&(o, _)| objects[o].thread).collect();
        threads.sort_unstable();
        let matched = walk.iter().find(|c| {
            let mut f = c.forbidden.clone();
            f.sort_unstable();
            f == threads
        });
        match matched {
            Some(c) if c.n == orbit.n && c.m as i32 == orbit.m => {}
            Some(c) => {
                return Err(GentleError::Internal(format!(
                    "orbit of {} has (n, m) = ({}, {}) but the thread walk gives ({}, {})",
                    objects[orbit.members[0].0].label, orbit.n, orbit.m, c.n, c.m
                )))
            }
            None => {
                return Err(GentleError::Internal(format!(
                    "orbit of {} matches no thread-walk cycle",
                    objects[orbit.members[0].0].label
                )))
            }
        }
    }
    Ok(orbits)
}

/// Serre orbits with their invariants `(n, m)`.
pub fn ag_invariants(alg: &GentleAlgebra) -> Result<Vec<SerreOrbit>> {
    ag_invariants_with(alg, Parallelism::Sequential).map(|r| r.2)
}

pub fn ag_invariants_with(alg: &GentleAlgebra, par: Parallelism) -> Result<(ThreadTables, Vec<MouthObject>, Vec<SerreOrbit>)> {
    if is_field(alg) {
        return Err(GentleError::Precondition("the algebra is the ground field; it has no mouth objects".into()));
    }
    let (tables, objects) = mouth_objects_with(alg, par)?;
    let orbits = serre_orbits(alg, &tables, &objects)?;
    Ok((tables, objects, orbits))
}

/// An object appearing in a cycle.
#[derive(Clone, Debug, PartialEq)]
pub enum CycleObject {
    String(HomotopyString),
    Band { band: HomotopyBand, mu: Q },
}

/// Key identifying an object up to isomorphism and shift.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ObjectKey {
    String(WordKey),
    Band(WordKey, Q),
}

impl CycleObject {
    pub fn base_complex(&self, alg: &GentleAlgebra) -> Result<RepComplex> {
        match self {
            CycleObject::String(w) => Ok(unfold_string(alg, w, 0)),
            CycleObject::Band { band, mu } => unfold_band(alg, band, 0, *mu),
        }
    }

    pub fn key(&self) -> ObjectKey {
        match self {
            CycleObject::String(w) => ObjectKey::String(canonical_string(w)),
            CycleObject::Band { band, mu } => ObjectKey::Band(canonical_band(band), *mu),
        }
    }

    pub fn expr(&self, alg: &GentleAlgebra) -> String {
        match self {
            CycleObject::String(w) => w.expr(alg),
            CycleObject::Band { band, mu } => format!("{} @ {mu}", band.expr(alg)),
        }
    }
}

/// `object[shift]`, where the unshifted object has top degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleEntry {
    pub object: CycleObject,
    pub shift: i32,
}

impl CycleEntry {
    pub fn string(w: HomotopyString, shift: i32) -> Self {
        CycleEntry { object: CycleObject::String(w), shift }
    }

    pub fn complex(&self, alg: &GentleAlgebra) -> Result<RepComplex> {
        Ok(shift(&self.object.base_complex(alg)?, self.shift))
    }
}

/// Outcome of checking the defining conditions of an exceptional cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub e1: bool,
    pub e2: bool,
    pub e3: bool,
    /// `m_i` with `S(E_i) = E_{i+1}[m_i]`, where found.
    pub shifts: Vec<Option<i32>>,
    /// For a single object, the `d` with `Hom^*(E, E) = k + k[-d]`.
    pub calabi_yau: Option<i32>,
    /// Nonzero part of the graded self-Hom of the first entry.
    pub self_profile: BTreeMap<i32, usize>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.e1 && self.e2 && self.e3
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalCycle {
    pub entries: Vec<CycleEntry>,
    pub shifts: Vec<i32>,
    pub certificate: Certificate,
    pub calabi_yau: Option<i32>,
}

impl ExceptionalCycle {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Checks the conditions on `Hom^*(E_1, E_1)`, the Serre links between
/// consecutive entries, and the vanishing `Hom^*(E_1, E_j) = 0` for
/// `3 <= j <= n`. A single entry is checked as a spherical object.
pub fn verify_cycle(alg: &GentleAlgebra, entries: &[CycleEntry]) -> Result<Certificate> {
    if entries.is_empty() {
        return Err(GentleError::Precondition("a cycle needs at least one entry".into()));
    }
    let complexes: Vec<RepComplex> = entries.iter().map(|e| e.complex(alg)).collect::<Result<_>>()?;
    let n = complexes.len();
    let self_profile = graded_profile(alg, &complexes[0], &complexes[0]).nonzero();
    if n == 1 {
        let e = &complexes[0];
        let d = match self_profile.iter().collect::<Vec<_>>().as_slice() {
            [(&0, &2)] => Some(0),
            [(&0, &1), (&d, &1)] | [(&d, &1), (&0, &1)] => Some(d),
            _ => None,
        };
        let s = serre_image(alg, e)?;
        let link = iso_up_to_shift(alg, &s, e);
        let e2 = d.is_some() && link == d;
        return Ok(Certificate {
            e1: d.is_some(),
            e2,
            e3: true,
            shifts: vec![link],
            calabi_yau: if e2 { d } else { None },
            self_profile,
        });
    }
    let e1 = self_profile == BTreeMap::from([(0, 1)]);
    let mut shifts = Vec::with_capacity(n);
    for i in 0..n {
        let s = serre_image(alg, &complexes[i])?;
        shifts.push(iso_up_to_shift(alg, &s, &complexes[(i + 1) % n]));
    }
    let e2 = shifts.iter().all(|s| s.is_some());
    let e3 = (2..n).all(|j| graded_profile(alg, &complexes[0], &complexes[j]).is_zero());
    Ok(Certificate { e1, e2, e3, shifts, calabi_yau: None, self_profile })
}

fn certified(alg: &GentleAlgebra, entries: Vec<CycleEntry>) -> Result<ExceptionalCycle> {
    let certificate = verify_cycle(alg, &entries)?;
    let shifts = certificate.shifts.iter().map(|s| s.unwrap_or(0)).collect();
    let calabi_yau = certificate.calabi_yau;
    Ok(ExceptionalCycle { entries, shifts, certificate, calabi_yau })
}

/// Exceptional cycles read off the Serre orbits of mouth objects. The field
/// and algebras whose underlying graph is `A_3` are handled separately: the
/// former has the single cycle `(k, k)`, the latter goes through the search.
pub fn classify_exceptional_cycles(alg: &GentleAlgebra, par: Parallelism) -> Result<Vec<ExceptionalCycle>> {
    if is_field(alg) {
        let k = HomotopyString::trivial(0, 1);
        let cycle = certified(alg, vec![CycleEntry::string(k.clone(), 0), CycleEntry::string(k, 0)])?;
        return check_emitted(alg, vec![cycle]);
    }
    if is_a3_graph(alg.presentation()) {
        return brute_force_search(alg, SearchBounds::default_for(alg)?, par);
    }
    let (_, objects, orbits) = ag_invariants_with(alg, par)?;
    let build = |orbit: &SerreOrbit| -> Result<ExceptionalCycle> {
        let n = orbit.n;
        let entries: Vec<CycleEntry> = orbit
            .members
            .iter()
            .enumerate()
            .map(|(i, &(o, s))| CycleEntry::string(objects[o].word.clone(), s - i as i32))
            .collect();
        let cycle = certified(alg, entries)?;
        let expected: Vec<i32> = if n == 1 {
            vec![orbit.m]
        } else {
            (0..n).map(|i| if i + 1 < n { 1 } else { orbit.m - n as i32 + 1 }).collect()
        };
        if cycle.shifts != expected {
            return Err(GentleError::Internal(format!(
                "cycle through {} has Serre links {:?}, expected {expected:?}",
                objects[orbit.members[0].0].label, cycle.certificate.shifts
            )));
        }
        if n == 1 && cycle.calabi_yau != Some(orbit.m) {
            return Err(GentleError::Internal(format!(
                "{} should be {}-Calabi-Yau, certificate says {:?}",
                objects[orbit.members[0].0].label, orbit.m, cycle.calabi_yau
            )));
        }
        Ok(cycle)
    };
    let cycles: Vec<Result<ExceptionalCycle>> = par_map(par, &orbits, build);
    check_emitted(alg, cycles.into_iter().collect::<Result<_>>()?)
}

fn check_emitted(alg: &GentleAlgebra, cycles: Vec<ExceptionalCycle>) -> Result<Vec<ExceptionalCycle>> {
    for c in &cycles {
        if !c.certificate.passed() {
            let words: Vec<String> = c.entries.iter().map(|e| e.object.expr(alg)).collect();
            return Err(GentleError::Internal(format!("cycle {words:?} fails verification: {:?}", c.certificate)));
        }
    }
    Ok(cycles)
}

/// Result of a sphericity query for a band complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandVerdict {
    pub spherical: bool,
    pub profile: GradedHomProfile,
}

/// A band complex at the mouth of a homogeneous tube satisfies `S(E) = E[1]`,
/// so it is an exceptional 1-cycle exactly when `Hom^*(E, E) = k + k[-1]`.
pub fn check_band_spherical(alg: &GentleAlgebra, band: &HomotopyBand, mu: Q) -> Result<BandVerdict> {
    let e = unfold_band(alg, band, 0, mu)?;
    let profile = graded_profile(alg, &e, &e);
    let spherical = profile.nonzero() == BTreeMap::from([(0, 1), (1, 1)]);
    Ok(BandVerdict { spherical, profile })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_letters: usize,
    /// Largest `|m|` accepted in a Serre link `S(E) = E'[m]`.
    pub shift_window: i32,
}

impl SearchBounds {
    /// `2 |arrows|` letters and a window of `|arrows| + longest thread + 2`.
    pub fn default_for(alg: &GentleAlgebra) -> Result<Self> {
        let tables = enumerate_threads(alg)?;
        let longest = tables.permitted.iter().chain(&tables.forbidden).map(|t| t.length).max().unwrap_or(0);
        Ok(SearchBounds {
            max_letters: (2 * alg.num_arrows()).max(1),
            shift_window: (alg.num_arrows() + longest + 2) as i32,
        })
    }
}

struct Candidate {
    word: HomotopyString,
    complex: RepComplex,
    key: WordKey,
}

/// Searches all strings with at most `max_letters` letters for exceptional
/// cycles, independently of the thread machinery: candidates are screened by
/// a graph-map lower bound and then by their graded self-Hom, linked to the candidate isomorphic to their Serre
/// image up to shift, and every cycle of links is verified exactly. Returns
/// one representative per class, first entry minimal.
pub fn brute_force_search(alg: &GentleAlgebra, bounds: SearchBounds, par: Parallelism) -> Result<Vec<ExceptionalCycle>> {
    let mut words = Vec::new();
    visit_strings(alg, bounds.max_letters, |w, canonical| {
        if w.is_empty() {
            if canonical {
                words.push(w.clone());
            }
            return true;
        }
        let (all, robust) = graph_self_hom_bound(alg, w);
        if canonical && all <= 2 {
            words.push(w.clone());
        }
        robust <= 2
    });
    let screened = par_map(par, &words, |w| {
        let c = unfold_string(alg, w, 0);
        let p = graded_profile_fast_capped(alg, &c, &c, 2)?;
        let nz = p.nonzero();
        let shape_ok = match nz.get(&0) {
            Some(1) => nz.len() <= 2,
            Some(2) => nz.len() == 1,
            _ => false,
        };
        shape_ok.then(|| Candidate { word: w.clone(), key: canonical_string(w), complex: c })
    });
    let mut cands: Vec<Candidate> = screened.into_iter().flatten().collect();
    cands.sort_by(|a, b| a.key.cmp(&b.key));
    // summands and cohomology are invariant under isomorphism
    let shape_of = |c: &RepComplex| (c.proj.as_ref().unwrap().fingerprint(), c.cohomology_dims(alg));
    let shapes = par_map(par, &cands, |c| shape_of(&c.complex));
    let mut by_shape: HashMap<_, Vec<usize>> = HashMap::new();
    for (i, shape) in shapes.into_iter().enumerate() {
        by_shape.entry(shape).or_default().push(i);
    }
    let links: Vec<Result<Option<(usize, i32)>>> = par_map(par, &(0..cands.len()).collect::<Vec<_>>(), |&i| {
        let s = serre_image(alg, &cands[i].complex)?;
        let Some((_, top)) = s.support() else { return Ok(None) };
        let normalized = shift(&s, top);
        let shape = shape_of(&normalized);
        let m = -top;
        if m.abs() > bounds.shift_window {
            return Ok(None);
        }
        for &j in by_shape.get(&shape).map(|v| v.as_slice()).unwrap_or(&[]) {
            if iso_indecomposable(alg, &normalized, &cands[j].complex) {
                return Ok(Some((j, m)));
            }
        }
        Ok(None)
    });
    let links: Vec<Option<(usize, i32)>> = links.into_iter().collect::<Result<_>>()?;

    // cycles of the functional graph
    let mut state = vec![0u8; cands.len()];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..cands.len() {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(c) = cur {
            if state[c] != 0 {
                if state[c] == 1 {
                    let pos = path.iter().position(|&x| x == c).unwrap();
                    cycles.push(path[pos..].to_vec());
                }
                break;
            }
            state[c] = 1;
            path.push(c);
            cur = links[c].map(|l| l.0);
        }
        for &p in &path {
            state[p] = 2;
        }
    }
    let mut out = Vec::new();
    for cyc in cycles {
        let first = (0..cyc.len()).min_by_key(|&i| &cands[cyc[i]].key).unwrap();
        let ordered: Vec<usize> = (0..cyc.len()).map(|i| cyc[(first + i) % cyc.len()]).collect();
        let mut entries: Vec<CycleEntry> = ordered.iter().map(|&i| CycleEntry::string(cands[i].word.clone(), 0)).collect();
        if entries.len() == 1 && cands[ordered[0]].complex.proj.is_some() {
            let profile = graded_profile(alg, &cands[ordered[0]].complex, &cands[ordered[0]].complex).nonzero();
            if profile == BTreeMap::from([(0, 1)]) {
                // S(E) = E with End(E) = k: the pair (E, E)
                entries.push(entries[0].clone());
            }
        }
        let cycle = certified(alg, entries)?;
        if cycle.certificate.passed() {
            out.push(cycle);
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<ObjectKey> = a.entries.iter().map(|e| e.object.key()).collect();
        let kb: Vec<ObjectKey> = b.entries.iter().map(|e| e.object.key()).collect();
        ka.cmp(&kb)
    });
    Ok(out)
}

/// Equal up to rotation and independent shifts at each position.
pub fn cycle_equiv(c1: &ExceptionalCycle, c2: &ExceptionalCycle) -> bool {
    let n = c1.entries.len();
    if n != c2.entries.len() {
        return false;
    }
    let k1: Vec<ObjectKey> = c1.entries.iter().map(|e| e.object.key()).collect();
    let k2: Vec<ObjectKey> = c2.entries.iter().map(|e| e.object.key()).collect();
    (0..n.max(1)).any(|s| (0..n).all(|i| k1[i] == k2[(i + s) % n]))
}

/// Whether two lists of cycles have the same classes.
pub fn same_classes(a: &[ExceptionalCycle], b: &[ExceptionalCycle]) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| cycle_equiv(x, y)))
        && b.iter().all(|y| a.iter().any(|x| cycle_equiv(x, y)))
}
