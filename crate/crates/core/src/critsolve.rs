//! Complete critical-point enumeration for the family superpotentials.
//!
//! Every coordinate of a critical point of a family superpotential takes
//! one of two values A, B with AB = -1, indexed by how many coordinates
//! L equal A. For the del Pezzo family A ranges over roots of
//! A^(2L-n-1) = (-1)^(L-1); for the pseudo del Pezzo family A solves
//! A - 1/A = (-1)^(L-1) A^(2L-n), cleared to a univariate polynomial.
//! Products decompose into Cartesian products over the factors. All
//! enumerated points are deduplicated, Newton-refined against the full
//! gradient, and filtered by residual.

use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::config::Precision;
use crate::error::{Error, Result};
use crate::laurent::{check_torus_point, superpotential, ComplexPoint, LaurentPoly};
use crate::linalg::DenseMatrix;
use crate::polytope::{FamilyExpr, LatticePolytope};
use crate::roots;
use crate::scalar::{Cdd, Scalar};

#[derive(Debug, Clone)]
pub struct PointMeta {
    /// Number of coordinates equal to A.
    pub l: usize,
    pub a: Complex64,
    pub b: Complex64,
    /// Product of the coordinates.
    pub z: Complex64,
    /// Bit i set iff coordinate i equals A.
    pub assignment: u64,
}

#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub point: ComplexPoint,
    /// Max |gradient entry| after refinement.
    pub residual: f64,
    pub meta: Option<PointMeta>,
}

/// Deduplicated critical points, sorted lexicographically by coordinate
/// (re, im) pairs.
#[derive(Debug, Clone)]
pub struct CriticalSet {
    points: Vec<CriticalPoint>,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub residual_tol: f64,
    pub dedupe_tol: f64,
    /// Tolerance of the Z-consistency filter for cleared-polynomial roots.
    pub z_filter_tol: f64,
    pub max_newton_iter: usize,
    pub max_dim: usize,
    pub precision: Precision,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            dedupe_tol: 1e-8,
            z_filter_tol: 1e-8,
            max_newton_iter: 20,
            max_dim: 10,
            precision: Precision::Double,
        }
    }
}

impl SolveOptions {
    pub fn from_config(config: &crate::config::Config) -> Self {
        Self {
            residual_tol: config.tolerance_residual,
            dedupe_tol: config.tolerance_dedupe,
            z_filter_tol: 1e-8,
            max_newton_iter: 20,
            max_dim: config.max_dim,
            precision: config.precision,
        }
    }
}

impl CriticalSet {
    pub fn points(&self) -> &[CriticalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Deduplicates (max coordinate-wise distance below tol) and sorts.
    fn from_raw(raw: Vec<CriticalPoint>, dedupe_tol: f64) -> Self {
        let mut kept: Vec<CriticalPoint> = Vec::new();
        for cand in raw {
            let dup = kept
                .iter()
                .any(|p| point_distance(&p.point, &cand.point) <= dedupe_tol);
            if !dup {
                kept.push(cand);
            }
        }
        kept.sort_by(|a, b| lex_cmp(&a.point, &b.point));
        Self { points: kept }
    }
}

/// Max coordinate-wise complex distance.
pub fn point_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then_with(|| x.im.total_cmp(&y.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Cached first and second partials of a fixed polynomial, evaluated in
/// any scalar.
pub struct Jet {
    grads: Vec<LaurentPoly>,
    hess: Vec<Vec<LaurentPoly>>,
}

impl Jet {
    pub fn new(w: &LaurentPoly) -> Self {
        let n = w.dim();
        let grads: Vec<LaurentPoly> = (0..n).map(|k| w.partial(k)).collect();
        let hess: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|j| (0..n).map(|k| grads[j].partial(k)).collect())
            .collect();
        Self { grads, hess }
    }

    pub fn dim(&self) -> usize {
        self.grads.len()
    }

    pub fn gradient<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        self.grads.iter().map(|g| g.eval(p)).collect()
    }

    pub fn residual<S: Scalar>(&self, p: &[S]) -> f64 {
        self.gradient(p).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn hessian<S: Scalar>(&self, p: &[S]) -> DenseMatrix<S> {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n);
        for j in 0..n {
            for k in j..n {
                let v = self.hess[j][k].eval(p);
                m[(j, k)] = v;
                m[(k, j)] = v;
            }
        }
        m
    }
}

pub enum RefineOutcome<S> {
    /// Residual at or below the tolerance.
    Converged(Vec<S>, f64),
    /// Hessian became singular; point returned as-is with its residual.
    SingularHessian(Vec<S>, f64),
    /// Iteration budget exhausted above tolerance.
    NoConverge(Vec<S>, f64),
}

/// Newton iteration on the gradient system, polishing well below `tol`
/// when the scalar allows it.
pub fn refine<S: Scalar>(jet: &Jet, start: Vec<S>, max_iter: usize, tol: f64) -> RefineOutcome<S> {
    let polish_floor = S::epsilon() * 100.0;
    let mut point = start;
    let mut res = jet.residual(&point);
    for _ in 0..max_iter {
        if res <= polish_floor {
            break;
        }
        let h = jet.hessian(&point);
        let g = jet.gradient(&point);
        let neg_g: Vec<S> = g.into_iter().map(|x| -x).collect();
        let Some(step) = h.solve(&neg_g) else {
            return RefineOutcome::SingularHessian(point, res);
        };
        let candidate: Vec<S> = point.iter().zip(&step).map(|(&p, &d)| p + d).collect();
        let cand_res = jet.residual(&candidate);
        if !cand_res.is_finite() || cand_res >= res {
            break;
        }
        point = candidate;
        res = cand_res;
    }
    if res <= tol {
        RefineOutcome::Converged(point, res)
    } else {
        RefineOutcome::NoConverge(point, res)
    }
}

/// Refines a point against the gradient of `w`. Errors on non-convergence;
/// a singular Hessian is reported with the unrefined point kept in the
/// message.
pub fn newton_refine(
    w: &LaurentPoly,
    point: ComplexPoint,
    max_iter: usize,
    tol: f64,
) -> Result<CriticalPoint> {
    check_torus_point(&point)?;
    let jet = Jet::new(w);
    match refine(&jet, point, max_iter, tol) {
        RefineOutcome::Converged(point, residual) => Ok(CriticalPoint {
            point,
            residual,
            meta: None,
        }),
        RefineOutcome::SingularHessian(point, residual) => Err(Error::Newton(format!(
            "singular Hessian at residual {residual:.3e}, point kept unrefined: {point:?}"
        ))),
        RefineOutcome::NoConverge(_, residual) => Err(Error::Newton(format!(
            "residual {residual:.3e} above tolerance {tol:.3e} after {max_iter} iterations"
        ))),
    }
}

/// Exactly the two points +1 and -1; the gradient vanishes identically in
/// floating point there, so the residuals are zero.
pub fn crit_segment() -> CriticalSet {
    let w = superpotential(&LatticePolytope::segment());
    let jet = Jet::new(&w);
    let points = [1.0, -1.0]
        .into_iter()
        .map(|x| {
            let p = vec![Complex64::new(x, 0.0)];
            let residual = jet.residual(&p);
            CriticalPoint {
                point: p,
                residual,
                meta: None,
            }
        })
        .collect();
    CriticalSet::from_raw(points, 1e-8)
}

fn masks_with_popcount(n: usize, l: usize) -> impl Iterator<Item = u64> {
    (0u64..(1 << n)).filter(move |m| m.count_ones() as usize == l)
}

/// Structured (A, L, assignment) enumeration for one family, generic over
/// the evaluation scalar.
struct StructuredPoint<S> {
    coords: Vec<S>,
    meta: PointMeta,
}

fn assemble_points<S: Scalar>(
    n: usize,
    l: usize,
    a: S,
    out: &mut Vec<StructuredPoint<S>>,
) {
    let b = -a.inv();
    for mask in masks_with_popcount(n, l) {
        let coords: Vec<S> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { a } else { b })
            .collect();
        let z = coords.iter().fold(S::one(), |acc, &x| acc * x);
        out.push(StructuredPoint {
            coords,
            meta: PointMeta {
                l,
                a: a.to_c64(),
                b: b.to_c64(),
                z: z.to_c64(),
                assignment: mask,
            },
        });
    }
}

/// Newton polish of z against z^m - c (c = +-1).
pub(crate) fn polish_unity_root<S: Scalar>(mut z: S, m: i32, c: f64) -> S {
    let target = S::from_f64(c);
    for _ in 0..4 {
        let f = z.powi(m) - target;
        let df = z.powi(m - 1).scale(m as f64);
        z = z - f / df;
    }
    z
}

fn dp_structured<S: Scalar>(k: u32) -> Vec<StructuredPoint<S>> {
    let n = 2 * k as usize;
    let mut out = Vec::new();
    for l in 0..=n {
        let m = 2 * l as i64 - n as i64 - 1;
        // (-1)^(L-1): +1 for odd L
        let c = if l % 2 == 1 { 1.0 } else { -1.0 };
        let mm = m.unsigned_abs() as usize;
        for j in 0..mm {
            let theta = if c > 0.0 {
                2.0 * std::f64::consts::PI * j as f64 / mm as f64
            } else {
                std::f64::consts::PI * (2 * j + 1) as f64 / mm as f64
            };
            let seed = Complex64::from_polar(1.0, theta);
            let a = polish_unity_root(S::from_c64(seed), mm as i32, c);
            assemble_points(n, l, a, &mut out);
        }
    }
    out
}

/// Ascending coefficients of the cleared pseudo del Pezzo critical
/// polynomial for block size L: A - 1/A = s A^m with s = (-1)^(L-1),
/// m = 2L - n, multiplied through by the positive power of A that clears
/// all denominators.
pub fn pdp_critical_poly(l: usize, n: usize) -> Vec<i64> {
    let m = 2 * l as i64 - n as i64;
    let s = if l % 2 == 1 { 1i64 } else { -1 };
    if m >= 2 {
        // A^(m+1) - s A^2 + s
        let deg = (m + 1) as usize;
        let mut c = vec![0i64; deg + 1];
        c[0] = s;
        c[2] = -s;
        c[deg] = 1;
        c
    } else if m == 0 {
        // A^2 - s A - 1
        vec![-1, -s, 1]
    } else {
        // A^(t+2) - A^t - s with t = |m| - 1
        let t = (-m - 1) as usize;
        let mut c = vec![0i64; t + 3];
        c[0] = -s;
        c[t] = -1;
        c[t + 2] = 1;
        c
    }
}

fn horner_i64<S: Scalar>(coeffs: &[i64], z: S) -> S {
    coeffs
        .iter()
        .rev()
        .fold(S::zero(), |acc, &c| acc * z + S::from_f64(c as f64))
}

pub(crate) fn polish_poly_root<S: Scalar>(coeffs: &[i64], mut z: S) -> S {
    let deriv: Vec<i64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as i64)
        .collect();
    for _ in 0..6 {
        let f = horner_i64(coeffs, z);
        let df = horner_i64(&deriv, z);
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        z = z - step;
        if step.norm() <= S::epsilon() * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn pdp_structured<S: Scalar>(k: u32, opts: &SolveOptions) -> Result<Vec<StructuredPoint<S>>> {
    let n = 2 * k as usize;
    let mut out = Vec::new();
    for l in 0..=n {
        let coeffs = pdp_critical_poly(l, n);
        let coeffs_c: Vec<Complex64> = coeffs
            .iter()
            .map(|&c| Complex64::new(c as f64, 0.0))
            .collect();
        let candidates = roots::all_roots(&coeffs_c)?;
        for a64 in candidates {
            if a64.norm() < 1e-12 {
                continue; // spurious from clearing denominators
            }
            let a = polish_poly_root(&coeffs, S::from_c64(a64));
            let b = -a.inv();
            // Z must satisfy both its defining product form and the root
            // sum of the quadratic: A^L B^(n-L) = -(A + B).
            let z_product = a.powi(l as i32) * b.powi((n - l) as i32);
            let z_vieta = -(a + b);
            let scale = z_product.norm().max(z_vieta.norm()).max(1.0);
            if (z_product - z_vieta).norm() > opts.z_filter_tol * scale {
                continue;
            }
            assemble_points(n, l, a, &mut out);
        }
    }
    Ok(out)
}

fn dedupe_structured<S: Scalar>(
    raw: Vec<StructuredPoint<S>>,
    dedupe_tol: f64,
) -> Vec<StructuredPoint<S>> {
    let mut kept: Vec<StructuredPoint<S>> = Vec::new();
    let mut kept64: Vec<Vec<Complex64>> = Vec::new();
    for cand in raw {
        let c64: Vec<Complex64> = cand.coords.iter().map(|x| x.to_c64()).collect();
        let dup = kept64
            .iter()
            .any(|p| point_distance(p, &c64) <= dedupe_tol);
        if !dup {
            kept.push(cand);
            kept64.push(c64);
        }
    }
    kept
}

fn refine_structured<S: Scalar>(
    raw: Vec<StructuredPoint<S>>,
    w: &LaurentPoly,
    opts: &SolveOptions,
) -> Vec<CriticalPoint> {
    let jet = Jet::new(w);
    let mut out = Vec::new();
    for sp in raw {
        let (coords, residual) = match refine(&jet, sp.coords, opts.max_newton_iter, opts.residual_tol)
        {
            RefineOutcome::Converged(p, r) => (p, r),
            RefineOutcome::SingularHessian(p, r) | RefineOutcome::NoConverge(p, r) => (p, r),
        };
        if residual > opts.residual_tol {
            continue;
        }
        let z = coords.iter().fold(S::one(), |acc, &x| acc * x);
        let mut meta = sp.meta;
        meta.z = z.to_c64();
        out.push(CriticalPoint {
            point: coords.iter().map(|x| x.to_c64()).collect(),
            residual,
            meta: Some(meta),
        });
    }
    out
}

fn solve_family_atom<S: Scalar>(
    atom: &FamilyExpr,
    opts: &SolveOptions,
) -> Result<CriticalSet> {
    match atom {
        FamilyExpr::Seg => Ok(crit_segment()),
        FamilyExpr::Dp(k) => {
            let poly = LatticePolytope::del_pezzo(*k)?;
            let w = superpotential(&poly);
            let raw = dedupe_structured(dp_structured::<S>(*k), opts.dedupe_tol);
            Ok(CriticalSet::from_raw(
                refine_structured(raw, &w, opts),
                opts.dedupe_tol,
            ))
        }
        FamilyExpr::Pdp(k) => {
            let poly = LatticePolytope::pseudo_del_pezzo(*k)?;
            let w = superpotential(&poly);
            let raw = dedupe_structured(pdp_structured::<S>(*k, opts)?, opts.dedupe_tol);
            Ok(CriticalSet::from_raw(
                refine_structured(raw, &w, opts),
                opts.dedupe_tol,
            ))
        }
        FamilyExpr::Product(..) => unreachable!("atoms only"),
    }
}

/// Complete critical set of a del Pezzo superpotential of dimension 2k.
pub fn crit_del_pezzo(k: u32, opts: &SolveOptions) -> Result<CriticalSet> {
    dispatch_atom(&FamilyExpr::Dp(k), opts)
}

/// Complete critical set of a pseudo del Pezzo superpotential.
pub fn crit_pseudo_del_pezzo(k: u32, opts: &SolveOptions) -> Result<CriticalSet> {
    dispatch_atom(&FamilyExpr::Pdp(k), opts)
}

fn dispatch_atom(atom: &FamilyExpr, opts: &SolveOptions) -> Result<CriticalSet> {
    let dim = atom.dim();
    if dim > opts.max_dim {
        return Err(Error::DimensionCap {
            dim,
            max: opts.max_dim,
        });
    }
    match opts.precision {
        Precision::Double => solve_family_atom::<Complex64>(atom, opts),
        Precision::High => solve_family_atom::<Cdd>(atom, opts),
    }
}

/// Cartesian product of per-factor critical sets: every concatenation of
/// one point per factor. The factor superpotentials live in disjoint
/// variables, so the product residual is the max of the factor residuals.
pub fn crit_product(sets: &[CriticalSet]) -> Result<CriticalSet> {
    if sets.is_empty() || sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptyFactor);
    }
    let mut acc: Vec<CriticalPoint> = vec![CriticalPoint {
        point: Vec::new(),
        residual: 0.0,
        meta: None,
    }];
    for set in sets {
        let mut next = Vec::with_capacity(acc.len() * set.len());
        for partial in &acc {
            for p in set.points() {
                let mut point = partial.point.clone();
                point.extend_from_slice(&p.point);
                next.push(CriticalPoint {
                    point,
                    residual: partial.residual.max(p.residual),
                    meta: None,
                });
            }
        }
        acc = next;
    }
    acc.sort_by(|a, b| lex_cmp(&a.point, &b.point));
    Ok(CriticalSet { points: acc })
}

/// Dispatches atoms to the structured solvers and folds products.
pub fn crit_for_family(expr: &FamilyExpr, opts: &SolveOptions) -> Result<CriticalSet> {
    let dim = expr.dim();
    if dim > opts.max_dim {
        return Err(Error::DimensionCap {
            dim,
            max: opts.max_dim,
        });
    }
    let atoms = expr.atoms();
    if atoms.len() == 1 {
        return dispatch_atom(atoms[0], opts);
    }
    let sets: Vec<CriticalSet> = atoms
        .iter()
        .map(|a| dispatch_atom(a, opts))
        .collect::<Result<_>>()?;
    crit_product(&sets)
}

fn c64_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Serialize for PointMeta {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("l", &self.l)?;
        m.serialize_entry("a", &c64_pair(self.a))?;
        m.serialize_entry("b", &c64_pair(self.b))?;
        m.serialize_entry("z", &c64_pair(self.z))?;
        m.serialize_entry("assignment", &self.assignment)?;
        m.end()
    }
}

impl Serialize for CriticalPoint {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let coords: Vec<[f64; 2]> = self.point.iter().map(|&z| c64_pair(z)).collect();
        let len = if self.meta.is_some() { 3 } else { 2 };
        let mut m = s.serialize_map(Some(len))?;
        m.serialize_entry("coords", &coords)?;
        m.serialize_entry("residual", &self.residual)?;
        if let Some(meta) = &self.meta {
            m.serialize_entry("meta", meta)?;
        }
        m.end()
    }
}

impl Serialize for CriticalSet {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.points.serialize(s)
    }
}
