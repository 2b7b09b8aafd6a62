//! Morphisms in the homotopy category, computed by exact linear algebra.
//!
//! The source must be a complex of projectives. A chain map out of it is
//! determined by the images of the summand generators, so `Hom(X, Y[t])` is
//! cut out of `⊕_a Y^{k_a + t}_{u_a}` by the chain-map equations, and the
//! null-homotopic maps are the image of the analogous homotopy parameters.

use crate::complexes::{minimize, materialize, ProjComplex, RepComplex};
use crate::field::{Field, Fp, Q};
use crate::linalg::{Mat, Span};
use crate::par::{par_map, Parallelism};
use crate::presentation::{GentleAlgebra, PathId, VertexId};
use std::collections::{BTreeMap, HashMap};

/// Cached path actions and differentials of a target complex over `F`.
struct Target<'a, F> {
    alg: &'a GentleAlgebra,
    y: &'a RepComplex,
    act: HashMap<(i32, PathId), Mat<F>>,
    diff: HashMap<(i32, VertexId), Mat<F>>,
}

impl<'a, F: Field> Target<'a, F> {
    fn new(alg: &'a GentleAlgebra, y: &'a RepComplex) -> Self {
        Target { alg, y, act: HashMap::new(), diff: HashMap::new() }
    }

    fn dim(&self, k: i32, u: VertexId) -> usize {
        self.y.dim_at(k, u)
    }

    fn act(&mut self, k: i32, p: PathId) -> &Mat<F> {
        let (alg, y) = (self.alg, self.y);
        self.act.entry((k, p)).or_insert_with(|| match y.terms.get(&k) {
            Some(rep) => rep.path_action(alg, p).map(F::from_q),
            None => {
                let path = alg.path(p);
                Mat::zeros(y.dim_at(k, path.target), y.dim_at(k, path.source))
            }
        })
    }

    fn d(&mut self, k: i32, u: VertexId) -> &Mat<F> {
        let y = self.y;
        self.diff.entry((k, u)).or_insert_with(|| y.diff_at(k, u).map(F::from_q))
    }
}

/// Linear data of `Hom(X, Y[t])` before quotienting.
pub struct HomSystem<F> {
    /// Block offsets of the unknowns, one block per summand of `X`.
    pub offsets: BTreeMap<(i32, usize), (usize, usize)>,
    pub num_vars: usize,
    pub constraints: Mat<F>,
    pub homotopies: Mat<F>,
}

fn sign<F: Field>(t: i32) -> F {
    if t.rem_euclid(2) == 0 { F::one() } else { -F::one() }
}

fn build_system<F: Field>(x: &ProjComplex, tgt: &mut Target<'_, F>, t: i32) -> HomSystem<F> {
    let s: F = sign(t);
    let mut offsets = BTreeMap::new();
    let mut num_vars = 0;
    let mut h_offsets = BTreeMap::new();
    let mut num_h = 0;
    let mut row_offsets = BTreeMap::new();
    let mut num_rows = 0;
    for (&k, vs) in &x.terms {
        for (a, &u) in vs.iter().enumerate() {
            let n = tgt.dim(k + t, u);
            offsets.insert((k, a), (num_vars, n));
            num_vars += n;
            let nh = tgt.dim(k + t - 1, u);
            h_offsets.insert((k, a), (num_h, nh));
            num_h += nh;
            let nr = tgt.dim(k + t + 1, u);
            row_offsets.insert((k, a), (num_rows, nr));
            num_rows += nr;
        }
    }
    let mut constraints = Mat::zeros(num_rows, num_vars);
    let mut homotopies = Mat::zeros(num_vars, num_h);
    for (&k, vs) in &x.terms {
        for (a, &u) in vs.iter().enumerate() {
            let (col, n) = offsets[&(k, a)];
            let (row, nr) = row_offsets[&(k, a)];
            if nr > 0 && n > 0 {
                let d = tgt.d(k + t, u).clone();
                for r in 0..nr {
                    for c in 0..n {
                        let v = d.get(r, c);
                        if !v.is_zero() {
                            constraints.add_at(row + r, col + c, s * v);
                        }
                    }
                }
            }
            let (hcol, nh) = h_offsets[&(k, a)];
            if nh > 0 && n > 0 {
                let d = tgt.d(k + t - 1, u).clone();
                for r in 0..n {
                    for c in 0..nh {
                        let v = d.get(r, c);
                        if !v.is_zero() {
                            homotopies.add_at(col + r, hcol + c, s * v);
                        }
                    }
                }
            }
            for (b, elem) in x.out_components(k, a) {
                let (bcol, bn) = offsets[&(k + 1, b)];
                let (bh, bnh) = h_offsets[&(k + 1, b)];
                for (q, coeff) in elem.terms() {
                    let c = F::from_q(&coeff);
                    if nr > 0 && bn > 0 {
                        let m = tgt.act(k + t + 1, q).clone();
                        for r in 0..nr {
                            for cc in 0..bn {
                                let v = m.get(r, cc);
                                if !v.is_zero() {
                                    constraints.add_at(row + r, bcol + cc, -(c * v));
                                }
                            }
                        }
                    }
                    if n > 0 && bnh > 0 {
                        let m = tgt.act(k + t, q).clone();
                        for r in 0..n {
                            for cc in 0..bnh {
                                let v = m.get(r, cc);
                                if !v.is_zero() {
                                    homotopies.add_at(col + r, bh + cc, c * v);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    HomSystem { offsets, num_vars, constraints, homotopies }
}

fn source(x: &RepComplex) -> &ProjComplex {
    x.proj.as_ref().expect("the source of a Hom computation must be a complex of projectives")
}

/// Dimensions of chain maps and null-homotopic maps `X -> Y[t]` over `F`.
pub fn hom_dims_over<F: Field>(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, t: i32) -> (usize, usize) {
    let mut tgt = Target::<F>::new(alg, y);
    let sys = build_system(source(x), &mut tgt, t);
    let z = sys.num_vars - sys.constraints.rank();
    let h = sys.homotopies.rank();
    (z, h)
}

/// A basis of chain maps `X -> Y`, each given by the images of the summand
/// generators of `X` (concatenated in summand order).
#[derive(Clone, Debug)]
pub struct ChainMapSpace {
    pub offsets: BTreeMap<(i32, usize), (usize, usize)>,
    pub basis: Vec<Vec<Q>>,
}

impl ChainMapSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn chain_map_space(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex) -> ChainMapSpace {
    chain_map_space_shifted(alg, x, y, 0)
}

/// Chain maps `X -> Y[t]`.
pub fn chain_map_space_shifted(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, t: i32) -> ChainMapSpace {
    let mut tgt = Target::<Q>::new(alg, y);
    let sys = build_system(source(x), &mut tgt, t);
    let basis = if sys.num_vars == 0 { Vec::new() } else { sys.constraints.nullspace() };
    ChainMapSpace { offsets: sys.offsets, basis }
}

/// Dimension of the null-homotopic maps `X -> Y`.
pub fn homotopy_space(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex) -> usize {
    hom_dims_over::<Q>(alg, x, y, 0).1
}

/// `dim Hom_K(X, Y)`.
pub fn hom_k_dim(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex) -> usize {
    hom_k_dim_shifted(alg, x, y, 0)
}

/// `dim Hom_K(X, Y[t])`, exact.
pub fn hom_k_dim_shifted(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, t: i32) -> usize {
    let (z, h) = hom_dims_over::<Q>(alg, x, y, t);
    z - h
}

/// `dim Hom_K(X, Y[t])` over the prime field; used for screening only.
pub fn hom_k_dim_fast(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, t: i32) -> usize {
    let (z, h) = hom_dims_over::<Fp>(alg, x, y, t);
    z - h
}

/// Whether a given chain map `X -> Y[t]` is null-homotopic.
pub fn is_null_homotopic(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, t: i32, map: &[Q]) -> bool {
    let mut tgt = Target::<Q>::new(alg, y);
    let sys = build_system(source(x), &mut tgt, t);
    let mut span = Span::new(sys.num_vars);
    for col in sys.homotopies.columns() {
        span.insert(&col);
    }
    span.contains(map)
}

/// Whether a given vector satisfies the chain-map equations for `X -> Y[t]`.
pub fn is_chain_map(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, t: i32, map: &[Q]) -> bool {
    let mut tgt = Target::<Q>::new(alg, y);
    let sys = build_system(source(x), &mut tgt, t);
    sys.constraints.apply(map).iter().all(|v| *v == Q::from_integer(0))
}

/// `dim Hom_K(X, Y[i])` over the exact window where it can be nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHomProfile {
    pub dims: BTreeMap<i32, usize>,
    pub window: Option<(i32, i32)>,
}

impl GradedHomProfile {
    pub fn get(&self, i: i32) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    /// Nonzero entries only.
    pub fn nonzero(&self) -> BTreeMap<i32, usize> {
        self.dims.iter().filter(|(_, d)| **d > 0).map(|(k, d)| (*k, *d)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }
}

/// Shifts `i` for which `Hom(X, Y[i])` can be nonzero.
pub fn profile_window(x: &RepComplex, y: &RepComplex) -> Option<(i32, i32)> {
    let (xl, xh) = x.support()?;
    let (yl, yh) = y.support()?;
    Some((yl - xh, yh - xl))
}

pub fn graded_profile(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex) -> GradedHomProfile {
    graded_profile_with(alg, x, y, Parallelism::Sequential)
}

pub fn graded_profile_with(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, par: Parallelism) -> GradedHomProfile {
    let window = profile_window(x, y);
    let shifts: Vec<i32> = window.map(|(lo, hi)| (lo..=hi).collect()).unwrap_or_default();
    let dims = par_map(par, &shifts, |&i| (i, hom_k_dim_shifted(alg, x, y, i)));
    GradedHomProfile { dims: dims.into_iter().collect(), window }
}

/// Profile over the prime field, stopping once the total exceeds `cap`.
pub fn graded_profile_fast_capped(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex, cap: usize) -> Option<GradedHomProfile> {
    let window = profile_window(x, y);
    let mut dims = BTreeMap::new();
    let mut total = 0;
    if let Some((lo, hi)) = window {
        // degree 0 first: it is the most likely to be large
        let order = std::iter::once(0).filter(|i| (lo..=hi).contains(i)).chain((lo..=hi).filter(|&i| i != 0));
        for i in order {
            let d = hom_k_dim_fast(alg, x, y, i);
            total += d;
            if total > cap {
                return None;
            }
            dims.insert(i, d);
        }
    }
    Some(GradedHomProfile { dims, window })
}

/// Composes `g: Y -> Z` after `f: X -> Y`, both given by generator images.
/// `Y` must be a complex of projectives.
pub fn compose(
    alg: &GentleAlgebra,
    x: &ProjComplex,
    y: &RepComplex,
    z: &RepComplex,
    f: &[Q],
    g: &[Q],
) -> Vec<Q> {
    let ypc = y.proj.as_ref().expect("middle complex must be projective");
    let mut tz = Target::<Q>::new(alg, z);
    let mut y_offsets = BTreeMap::new();
    let mut n = 0;
    for (&k, vs) in &ypc.terms {
        for (b, &u) in vs.iter().enumerate() {
            let d = z.dim_at(k, u);
            y_offsets.insert((k, b), n);
            n += d;
        }
    }
    assert_eq!(g.len(), n, "g does not match the shape of Hom(Y, Z)");
    let mut out = Vec::new();
    for (&k, vs) in &x.terms {
        for &u in vs.iter() {
            out.extend(std::iter::repeat_n(Q::from_integer(0), z.dim_at(k, u)));
        }
    }
    let mut x_off = 0;
    let mut f_off = 0;
    for (&k, vs) in &x.terms {
        for &u in vs.iter() {
            let nz = z.dim_at(k, u);
            let ny = y.dim_at(k, u);
            let fa = &f[f_off..f_off + ny];
            // walk Y^k_u's basis: summands b of Y^k, paths from v_b to u
            let mut idx = 0;
            for (b, &vb) in ypc.summands(k).iter().enumerate() {
                let zb_off = y_offsets[&(k, b)];
                let zb = &g[zb_off..zb_off + z.dim_at(k, vb)];
                for &p in alg.paths_between(vb, u) {
                    let coeff = fa[idx];
                    idx += 1;
                    if coeff == Q::from_integer(0) {
                        continue;
                    }
                    let img = tz.act(k, p).apply(zb);
                    for (r, v) in img.into_iter().enumerate() {
                        out[x_off + r] += coeff * v;
                    }
                }
            }
            debug_assert_eq!(idx, ny);
            x_off += nz;
            f_off += ny;
        }
    }
    out
}

/// Decides `X ≅ Y` for indecomposable complexes of projectives: after
/// minimizing, some composite `Y -> X -> Y` must be a non-nilpotent element
/// of the local algebra `End_K(Y)`.
pub fn iso_indecomposable(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex) -> bool {
    let xm = materialize(alg, &minimize(alg, source(x)));
    let ym = materialize(alg, &minimize(alg, source(y)));
    let (xp, yp) = (xm.proj.as_ref().unwrap(), ym.proj.as_ref().unwrap());
    if xp.fingerprint() != yp.fingerprint() {
        return false;
    }
    if xp.is_zero() {
        return true;
    }
    let fs = chain_map_space(alg, &xm, &ym).basis;
    let gs = chain_map_space(alg, &ym, &xm).basis;
    if fs.is_empty() || gs.is_empty() {
        return false;
    }
    let mut tgt = Target::<Q>::new(alg, &ym);
    let sys = build_system(yp, &mut tgt, 0);
    let mut htp = Span::new(sys.num_vars);
    for col in sys.homotopies.columns() {
        htp.insert(&col);
    }
    let end_dim = sys.num_vars - sys.constraints.rank() - htp.rank();
    for g in &gs {
        for f in &fs {
            let phi = compose(alg, yp, &xm, &ym, g, f);
            let mut power = phi.clone();
            for _ in 0..end_dim {
                if htp.contains(&power) {
                    break;
                }
                power = compose(alg, yp, &ym, &ym, &power, &phi);
            }
            if !htp.contains(&power) {
                return true;
            }
        }
    }
    false
}

/// Finds `t` with `X ≅ Y[t]` using the fingerprints of the minimal forms.
pub fn iso_up_to_shift(alg: &GentleAlgebra, x: &RepComplex, y: &RepComplex) -> Option<i32> {
    let xp = minimize(alg, source(x));
    let yp = minimize(alg, source(y));
    let (Some((_, xh)), Some((_, yh))) = (xp.support(), yp.support()) else {
        return (xp.is_zero() && yp.is_zero()).then_some(0);
    };
    let t = yh - xh;
    let ys = crate::complexes::shift(&materialize(alg, &yp), t);
    iso_indecomposable(alg, &materialize(alg, &xp), &ys).then_some(t)
}
