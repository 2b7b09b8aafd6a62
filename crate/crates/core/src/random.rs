//! Seeded generator of small gentle algebras, used by the self-test and the
//! property suites.

use crate::presentation::{is_a3_graph, validate_gentle, Arrow, GentleAlgebra, Presentation};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct RandomParams {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Upper bound on arrows added beyond a spanning tree.
    pub max_extra_arrows: usize,
    /// Whether algebras whose underlying graph is `A_3` may be returned.
    pub allow_a3: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { min_vertices: 2, max_vertices: 6, max_extra_arrows: 2, allow_a3: true }
    }
}

fn add(arrows: &mut Vec<Arrow>, s: usize, t: usize, outs: &mut [usize], ins: &mut [usize]) {
    outs[s] += 1;
    ins[t] += 1;
    let name = ((b'a' + arrows.len() as u8) as char).to_string();
    arrows.push(Arrow { name, source: s, target: t });
}

fn try_generate<R: Rng>(rng: &mut R, params: &RandomParams, name: &str) -> Option<Presentation> {
    let n = rng.gen_range(params.min_vertices..=params.max_vertices);
    let mut outs = vec![0usize; n];
    let mut ins = vec![0usize; n];
    let mut arrows: Vec<Arrow> = Vec::new();
    for v in 1..n {
        // attach v to an earlier vertex with spare valency
        let mut candidates: Vec<(usize, bool)> = Vec::new();
        for u in 0..v {
            if outs[u] < 2 {
                candidates.push((u, true));
            }
            if ins[u] < 2 {
                candidates.push((u, false));
            }
        }
        let &(u, forward) = candidates.choose(rng)?;
        if forward {
            add(&mut arrows, u, v, &mut outs, &mut ins);
        } else {
            add(&mut arrows, v, u, &mut outs, &mut ins);
        }
    }
    let extra = rng.gen_range(0..=params.max_extra_arrows);
    for _ in 0..extra {
        let s: Vec<usize> = (0..n).filter(|&u| outs[u] < 2).collect();
        let t: Vec<usize> = (0..n).filter(|&u| ins[u] < 2).collect();
        let (Some(&s), Some(&t)) = (s.choose(rng), t.choose(rng)) else { break };
        add(&mut arrows, s, t, &mut outs, &mut ins);
    }
    let mut relations = Vec::new();
    for v in 0..n {
        let inc: Vec<usize> = (0..arrows.len()).filter(|&a| arrows[a].target == v).collect();
        let out: Vec<usize> = (0..arrows.len()).filter(|&a| arrows[a].source == v).collect();
        match (inc.len(), out.len()) {
            (2, 2) => {
                let flip = rng.gen_bool(0.5);
                relations.push((out[0], inc[flip as usize]));
                relations.push((out[1], inc[!flip as usize]));
            }
            (1, 2) => relations.push((out[rng.gen_range(0..2)], inc[0])),
            (2, 1) => relations.push((out[0], inc[rng.gen_range(0..2)])),
            (1, 1) if rng.gen_bool(0.5) => relations.push((out[0], inc[0])),
            _ => {}
        }
    }
    let vertices = (1..=n).map(|i| i.to_string()).collect();
    Some(Presentation { name: name.to_string(), vertices, arrows, relations })
}

/// Draws a finite-dimensional gentle algebra. Presentations that fail
/// validation (infinite dimension) are redrawn.
pub fn random_gentle<R: Rng>(rng: &mut R, params: &RandomParams, name: &str) -> GentleAlgebra {
    loop {
        let Some(p) = try_generate(rng, params, name) else { continue };
        if !params.allow_a3 && is_a3_graph(&p) {
            continue;
        }
        if let Ok(a) = validate_gentle(&p) {
            return a;
        }
    }
}

/// `count` algebras from a fixed seed, named `random_<seed>_<i>`.
pub fn random_corpus(seed: u64, count: usize, params: &RandomParams) -> Vec<GentleAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_gentle(&mut rng, params, &format!("random_{seed}_{i}"))).collect()
}

/// The same algebra with vertices and arrows renumbered and renamed.
pub fn relabel<R: Rng>(rng: &mut R, p: &Presentation) -> Presentation {
    let mut vperm: Vec<usize> = (0..p.vertices.len()).collect();
    vperm.shuffle(rng);
    let mut aperm: Vec<usize> = (0..p.arrows.len()).collect();
    aperm.shuffle(rng);
    // vperm[old] = new
    let mut vertices = vec![String::new(); p.vertices.len()];
    for (old, &new) in vperm.iter().enumerate() {
        vertices[new] = format!("v{}", p.vertices[old]);
    }
    let mut arrows = vec![Arrow { name: String::new(), source: 0, target: 0 }; p.arrows.len()];
    for (old, &new) in aperm.iter().enumerate() {
        let a = &p.arrows[old];
        arrows[new] = Arrow { name: format!("r{}", a.name), source: vperm[a.source], target: vperm[a.target] };
    }
    let relations = p.relations.iter().map(|&(b, a)| (aperm[b], aperm[a])).collect();
    Presentation { name: format!("{}_relabelled", p.name), vertices, arrows, relations }
}
