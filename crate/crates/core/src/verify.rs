//! Top-level analysis: assemble critical sets, certify non-degeneracy of
//! every Hessian against both the dense LU path and the closed-form block
//! determinant, run the per-family consistency checks, and produce the
//! semisimplicity verdict.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Config, Precision};
use crate::critsolve::{
    self, crit_product, CriticalPoint, CriticalSet, Jet, RefineOutcome, SolveOptions,
};
use crate::error::{Error, Result};
use crate::hessian::{
    self, assemble_structured, dense_det, dp_params, pdp_params, structured_det, StructuredParams,
};
use crate::laurent::{superpotential, LaurentPoly, TermJson};
use crate::polytope::{FamilyExpr, LatticePolytope};
use crate::roots;
use crate::scalar::{Cdd, Scalar};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Smallest distance from failure across the instances checked;
    /// negative when the check failed.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "SEMISIMPLE")]
    Semisimple,
    #[serde(rename = "DEGENERATE")]
    Degenerate,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub coords: Vec<[f64; 2]>,
    pub residual: f64,
    pub det_hessian: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structured_det: Option<[f64; 2]>,
    pub degenerate: bool,
    /// Superpotential value, reported as a diagnostic only.
    pub w_value: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDescription {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<i64>>>,
    pub superpotential: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemisimplicityReport {
    pub input: InputDescription,
    pub dim: usize,
    pub critical_count: u64,
    pub expected_count: u64,
    pub points: Vec<PointReport>,
    pub min_abs_det: f64,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
}

impl PointReport {
    pub fn det_hessian_c64(&self) -> Complex64 {
        Complex64::new(self.det_hessian[0], self.det_hessian[1])
    }

    pub fn structured_det_c64(&self) -> Option<Complex64> {
        self.structured_det.map(|p| Complex64::new(p[0], p[1]))
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn check(name: &str, passed: bool, detail: String, worst_margin: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
        worst_margin,
    }
}

/// A closeness check: passes when worst_err <= tol.
fn closeness_check(name: &str, worst_err: f64, tol: f64) -> CheckResult {
    check(
        name,
        worst_err <= tol,
        format!("worst error {worst_err:.3e}, tolerance {tol:.3e}"),
        tol - worst_err,
    )
}

/// A separation check: passes when min_value > threshold.
fn separation_check(name: &str, min_value: f64, threshold: f64) -> CheckResult {
    check(
        name,
        min_value > threshold,
        format!("minimum {min_value:.3e}, threshold {threshold:.3e}"),
        min_value - threshold,
    )
}

/// Memoized per-atom data shared across the analysis.
struct AtomCache {
    polytopes: BTreeMap<String, LatticePolytope>,
    sets: BTreeMap<String, CriticalSet>,
}

impl AtomCache {
    fn new() -> Self {
        Self {
            polytopes: BTreeMap::new(),
            sets: BTreeMap::new(),
        }
    }

    fn polytope(&mut self, atom: &FamilyExpr) -> Result<&LatticePolytope> {
        let key = atom.to_string();
        if !self.polytopes.contains_key(&key) {
            self.polytopes.insert(key.clone(), atom.realize()?);
        }
        Ok(&self.polytopes[&key])
    }

    fn critical_set(&mut self, atom: &FamilyExpr, opts: &SolveOptions) -> Result<&CriticalSet> {
        let key = atom.to_string();
        if !self.sets.contains_key(&key) {
            let set = critsolve::crit_for_family(atom, opts)?;
            self.sets.insert(key.clone(), set);
        }
        Ok(&self.sets[&key])
    }
}

/// Distinct atoms in order of first appearance.
fn distinct_atoms(expr: &FamilyExpr) -> Vec<FamilyExpr> {
    let mut seen = Vec::new();
    for atom in expr.atoms() {
        if !seen.contains(atom) {
            seen.push(atom.clone());
        }
    }
    seen
}

/// Full analysis of a family expression.
pub fn analyze(expr: &FamilyExpr, config: &Config) -> Result<SemisimplicityReport> {
    config.validate()?;
    let dim = expr.dim();
    if dim > config.max_dim {
        return Err(Error::DimensionCap {
            dim,
            max: config.max_dim,
        });
    }
    match config.precision {
        Precision::Double => analyze_in::<Complex64>(expr, config),
        Precision::High => analyze_in::<Cdd>(expr, config),
    }
}

fn analyze_in<S: Scalar>(expr: &FamilyExpr, config: &Config) -> Result<SemisimplicityReport> {
    let opts = SolveOptions::from_config(config);
    let dim = expr.dim();
    let realized = expr.realize()?;
    let w = superpotential(&realized);
    let input = InputDescription {
        kind: "family".to_string(),
        expr: Some(expr.to_string()),
        vertices: None,
        superpotential: w.to_json_terms(),
    };

    let mut checks = Vec::new();
    let mut cache = AtomCache::new();
    let atoms: Vec<FamilyExpr> = expr.atoms().into_iter().cloned().collect();
    let distinct = distinct_atoms(expr);

    checks.push(check(
        "reflexive",
        realized.is_reflexive(),
        "all facet offsets equal one".to_string(),
        if realized.is_reflexive() { 1.0 } else { -1.0 },
    ));
    for atom in &distinct {
        let smooth = cache.polytope(atom)?.is_smooth()?;
        checks.push(check(
            &format!("smooth:{atom}"),
            smooth,
            "incident facet normals form a lattice basis at every vertex of the dual".to_string(),
            if smooth { 1.0 } else { -1.0 },
        ));
    }

    // expected count: product of per-factor normalized volumes
    let mut expected: u64 = 1;
    for atom in &atoms {
        let vol = cache.polytope(atom)?.normalized_volume();
        let vol: u64 = u64::try_from(&vol)
            .map_err(|_| Error::ExactOverflow("expected count".to_string()))?;
        expected = expected
            .checked_mul(vol)
            .ok_or_else(|| Error::ExactOverflow("expected count".to_string()))?;
    }

    // solve; enumeration failures downgrade the verdict instead of erroring
    let solve_result: Result<CriticalSet> = (|| {
        let sets: Vec<CriticalSet> = atoms
            .iter()
            .map(|a| cache.critical_set(a, &opts).cloned())
            .collect::<Result<_>>()?;
        if sets.len() == 1 {
            Ok(sets.into_iter().next().expect("one factor"))
        } else {
            crit_product(&sets)
        }
    })();
    let set = match solve_result {
        Ok(set) => set,
        Err(err @ (Error::RootFinder(_) | Error::Newton(_) | Error::EmptyFactor)) => {
            checks.push(check("solver", false, err.to_string(), -1.0));
            return Ok(SemisimplicityReport {
                input,
                dim,
                critical_count: 0,
                expected_count: expected,
                points: Vec::new(),
                min_abs_det: 0.0,
                checks,
                verdict: Verdict::Inconclusive,
            });
        }
        Err(other) => return Err(other),
    };

    // per-factor completeness against the volume oracle
    for atom in &distinct {
        let count = cache.critical_set(atom, &opts)?.len() as u64;
        let vol = cache.polytope(atom)?.normalized_volume();
        let ok = num_bigint::BigInt::from(count) == vol;
        checks.push(check(
            &format!("count_vs_volume:{atom}"),
            ok,
            format!("{count} critical points, normalized volume {vol}"),
            if ok { 1.0 } else { -1.0 },
        ));
    }

    // per-point certification
    let jet = Jet::new(&w);
    let atom_kind = if atoms.len() == 1 {
        Some(atoms[0].clone())
    } else {
        None
    };
    let mut points = Vec::with_capacity(set.len());
    let mut max_residual = 0.0f64;
    let mut structured_err = 0.0f64;
    let mut entrywise_err = 0.0f64;
    for p in set.points() {
        let certified = certify_point::<S>(&jet, &w, p, atom_kind.as_ref(), &opts)?;
        max_residual = max_residual.max(certified.report.residual);
        structured_err = structured_err.max(certified.structured_rel_err);
        entrywise_err = entrywise_err.max(certified.entrywise_err);
        points.push(certified.report);
    }

    let max_abs_det = points
        .iter()
        .map(|p| p.det_hessian_c64().norm())
        .fold(0.0, f64::max);
    let min_abs_det = points
        .iter()
        .map(|p| p.det_hessian_c64().norm())
        .fold(f64::INFINITY, f64::min);
    let min_abs_det = if min_abs_det.is_finite() { min_abs_det } else { 0.0 };
    let deg_threshold = config.degeneracy_threshold * max_abs_det.max(1.0);
    for p in &mut points {
        p.degenerate = p.det_hessian_c64().norm() <= deg_threshold;
    }

    let count_ok = set.len() as u64 == expected;
    checks.push(check(
        "count_vs_expected",
        count_ok,
        format!("{} critical points, expected {expected}", set.len()),
        if count_ok { 1.0 } else { -1.0 },
    ));
    checks.push(closeness_check(
        "residuals",
        max_residual,
        config.tolerance_residual,
    ));
    if atom_kind.is_some() && points.iter().any(|p| p.structured_det.is_some()) {
        checks.push(closeness_check(
            "structured_vs_dense_det",
            structured_err,
            1e-8,
        ));
        checks.push(closeness_check(
            "hessian_entrywise_structured",
            entrywise_err,
            1e-9,
        ));
    }

    for atom in &distinct {
        match atom {
            FamilyExpr::Dp(k) => {
                let atom_set = cache.critical_set(atom, &opts)?;
                checks.extend(dp_identity_checks(atom_set.points(), 2 * *k as usize));
            }
            FamilyExpr::Pdp(k) => {
                let atom_set = cache.critical_set(atom, &opts)?.clone();
                checks.extend(pdp_case_checks(atom_set.points(), 2 * *k as usize)?);
            }
            _ => {}
        }
    }

    if atoms.len() >= 2 {
        checks.push(product_block_check(&jet, &atoms, &set)?);
    }

    let residuals_ok = max_residual <= config.tolerance_residual;
    let any_degenerate = points.iter().any(|p| p.degenerate);
    let all_checks_pass = checks.iter().all(|c| c.passed);
    let verdict = if count_ok && residuals_ok && !any_degenerate && all_checks_pass {
        Verdict::Semisimple
    } else if count_ok && residuals_ok && any_degenerate {
        Verdict::Degenerate
    } else {
        Verdict::Inconclusive
    };

    Ok(SemisimplicityReport {
        input,
        dim,
        critical_count: set.len() as u64,
        expected_count: expected,
        points,
        min_abs_det,
        checks,
        verdict,
    })
}

struct CertifiedPoint {
    report: PointReport,
    structured_rel_err: f64,
    entrywise_err: f64,
}

/// Re-lifts a stored point into the working scalar, re-polishes it, and
/// computes all per-point evidence: residual, dense Hessian determinant,
/// superpotential value, and (for single-family points carrying meta) the
/// closed-form determinant and the entrywise match of the sorted Hessian
/// against the structured matrix.
fn certify_point<S: Scalar>(
    jet: &Jet,
    w: &LaurentPoly,
    p: &CriticalPoint,
    atom: Option<&FamilyExpr>,
    opts: &SolveOptions,
) -> Result<CertifiedPoint> {
    let lifted: Vec<S> = p.point.iter().map(|&z| S::from_c64(z)).collect();
    let (refined, residual) = match critsolve::refine(jet, lifted, 8, opts.residual_tol) {
        RefineOutcome::Converged(q, r) => (q, r),
        RefineOutcome::SingularHessian(q, r) | RefineOutcome::NoConverge(q, r) => (q, r),
    };
    let hess = jet.hessian(&refined);
    let det = dense_det(&hess);
    let w_value = w.eval(&refined);

    let mut structured: Option<S> = None;
    let mut structured_rel_err = 0.0;
    let mut entrywise_err = 0.0;
    if let (Some(meta), Some(atom)) = (&p.meta, atom) {
        let n = p.point.len();
        let a = polish_meta_root::<S>(meta.a, meta.l, n, atom);
        let params = match atom {
            FamilyExpr::Dp(_) => dp_params(a, meta.l, n)?,
            FamilyExpr::Pdp(_) => pdp_params(a, meta.l, n)?,
            FamilyExpr::Seg | FamilyExpr::Product(..) => unreachable!("meta on atoms only"),
        };
        let sdet = structured_det(&params);
        structured = Some(sdet);
        let scale = sdet.norm().max(det.norm()).max(1e-12);
        structured_rel_err = (sdet - det).norm() / scale;
        entrywise_err = sorted_hessian_error(jet, &params, a);
    }

    Ok(CertifiedPoint {
        report: PointReport {
            coords: refined.iter().map(|x| pair(x.to_c64())).collect(),
            residual,
            det_hessian: pair(det.to_c64()),
            structured_det: structured.map(|s| pair(s.to_c64())),
            degenerate: false, // assigned once the det scale is known
            w_value: pair(w_value.to_c64()),
        },
        structured_rel_err,
        entrywise_err,
    })
}

/// Max relative entrywise deviation between the Hessian at the A-block
/// sorted point and the assembled structured matrix.
fn sorted_hessian_error<S: Scalar>(jet: &Jet, params: &StructuredParams<S>, a: S) -> f64 {
    let b = -a.inv();
    let sorted: Vec<S> = (0..params.n)
        .map(|i| if i < params.l { a } else { b })
        .collect();
    let dense = jet.hessian(&sorted);
    let structured = assemble_structured(params);
    let mut worst = 0.0f64;
    for i in 0..params.n {
        for j in 0..params.n {
            let x = dense[(i, j)];
            let y = structured[(i, j)];
            let scale = x.norm().max(y.norm()).max(1.0);
            worst = worst.max((x - y).norm() / scale);
        }
    }
    worst
}

/// Re-polishes the stored f64 root A in the working scalar using its
/// defining univariate relation.
fn polish_meta_root<S: Scalar>(a: Complex64, l: usize, n: usize, atom: &FamilyExpr) -> S {
    match atom {
        FamilyExpr::Dp(_) => {
            let m = 2 * l as i64 - n as i64 - 1;
            let c = if l % 2 == 1 { 1.0 } else { -1.0 };
            critsolve::polish_unity_root(S::from_c64(a), m as i32, c)
        }
        FamilyExpr::Pdp(_) => {
            let coeffs = critsolve::pdp_critical_poly(l, n);
            critsolve::polish_poly_root(&coeffs, S::from_c64(a))
        }
        _ => S::from_c64(a),
    }
}

/// Identity checks for a del Pezzo critical set of dimension n:
/// the a-parameter vanishes, the quadratic constant stays away from zero
/// and matches its closed form, A avoids +-i, the root-of-unity relation
/// holds, and the per-coordinate identity -(X - 1/X) = Z - 1/Z holds.
pub fn dp_identity_checks(points: &[CriticalPoint], n: usize) -> Vec<CheckResult> {
    let mut worst_a = 0.0f64;
    let mut min_chi = f64::INFINITY;
    let mut min_pm_i = f64::INFINITY;
    let mut worst_unity = 0.0f64;
    let mut worst_eq3 = 0.0f64;
    let mut worst_chi_match = 0.0f64;
    for p in points {
        let Some(meta) = &p.meta else { continue };
        let a = meta.a;
        let chi = hessian::chi_dp(a, meta.l, n);
        min_chi = min_chi.min(chi.norm());
        if let Ok(params) = dp_params(a, meta.l, n) {
            worst_a = worst_a.max(params.a.norm());
            let qc = hessian::quadratic_constant(&params);
            let scale = chi.norm().max(qc.norm()).max(1e-12);
            worst_chi_match = worst_chi_match.max((chi - qc).norm() / scale);
        } else {
            worst_a = f64::INFINITY;
        }
        min_pm_i = min_pm_i
            .min((a - Complex64::new(0.0, 1.0)).norm())
            .min((a + Complex64::new(0.0, 1.0)).norm());
        let m = 2 * meta.l as i64 - n as i64 - 1;
        let target = Complex64::new(if meta.l % 2 == 1 { 1.0 } else { -1.0 }, 0.0);
        worst_unity = worst_unity.max((a.powi(m as i32) - target).norm());
        let z = meta.z;
        let rhs = z - z.inv();
        for x in &p.point {
            let lhs = -(x - x.inv());
            worst_eq3 = worst_eq3.max((lhs - rhs).norm());
        }
    }
    let prefix = format!("dp(n={n})");
    vec![
        closeness_check(&format!("{prefix}:a_parameter_zero"), worst_a, 1e-10),
        separation_check(&format!("{prefix}:chi_nonzero"), min_chi, 1e-6),
        closeness_check(&format!("{prefix}:chi_closed_form"), worst_chi_match, 1e-9),
        separation_check(&format!("{prefix}:root_avoids_pm_i"), min_pm_i, 1e-6),
        closeness_check(&format!("{prefix}:root_of_unity"), worst_unity, 1e-12),
        closeness_check(&format!("{prefix}:coordinate_sum_identity"), worst_eq3, 1e-10),
    ]
}

/// Case checks for a pseudo del Pezzo critical set: the quartic keeps its
/// coefficient pattern, its roots are separated from the critical
/// polynomial roots whenever 2L - n lands in {-2, 0, 2}, and the quartic
/// stays away from zero at every emitted critical root (the actual
/// non-degeneracy margin), along with the |a-f| and |b-h| separations.
pub fn pdp_case_checks(points: &[CriticalPoint], n: usize) -> Result<Vec<CheckResult>> {
    // coefficient pattern over all L
    let mut pattern_ok = true;
    for l in 0..=n {
        let u = hessian::u_poly_pdp(l, n);
        pattern_ok &= u[1] == 0 && u[3] == 0;
        pattern_ok &=
            u[0].rem_euclid(2) == 1 && u[2].rem_euclid(2) == 0 && u[4].rem_euclid(2) == 1;
    }

    // root separation for the resonant cases
    let mut min_sep = f64::INFINITY;
    for l in 0..=n {
        let m = 2 * l as i64 - n as i64;
        if !matches!(m, -2 | 0 | 2) {
            continue;
        }
        let u_roots = hessian::u_poly_roots(l, n);
        let coeffs: Vec<Complex64> = critsolve::pdp_critical_poly(l, n)
            .iter()
            .map(|&c| Complex64::new(c as f64, 0.0))
            .collect();
        let crit_roots = roots::all_roots(&coeffs)?;
        for u in &u_roots {
            for c in &crit_roots {
                min_sep = min_sep.min((u - c).norm());
            }
        }
    }

    // |U(A)| at the emitted critical roots, plus the a-f and b-h margins
    let mut min_u = f64::INFINITY;
    let mut min_af = f64::INFINITY;
    let mut min_bh = f64::INFINITY;
    let mut min_af_imag_locus = f64::INFINITY;
    let mut min_bh_imag_locus = f64::INFINITY;
    for p in points {
        let Some(meta) = &p.meta else { continue };
        let a = meta.a;
        let u = hessian::u_poly_pdp(meta.l, n);
        min_u = min_u.min(hessian::u_poly_eval(&u, a).norm());
        if let Ok(params) = pdp_params(a, meta.l, n) {
            min_af = min_af.min((params.a - params.f).norm());
            min_bh = min_bh.min((params.b - params.h).norm());
        } else {
            min_af = -1.0;
            min_bh = -1.0;
        }
        // the loci 3/A^3 - 1/A = 0 and -3A^3 + A = 0 never meet the
        // critical relation; track the margins
        min_af_imag_locus = min_af_imag_locus.min((3.0 * a.powi(-3) - a.inv()).norm());
        min_bh_imag_locus = min_bh_imag_locus.min((-3.0 * a.powi(3) + a).norm());
    }
    let prefix = format!("pdp(n={n})");
    Ok(vec![
        check(
            &format!("{prefix}:u_coefficient_pattern"),
            pattern_ok,
            "odd coefficients vanish; pattern is 1,0,0,0,1 mod 2".to_string(),
            if pattern_ok { 1.0 } else { -1.0 },
        ),
        separation_check(&format!("{prefix}:u_vs_critical_roots"), min_sep, 1e-6),
        separation_check(&format!("{prefix}:u_nonzero_at_critical"), min_u, 1e-8),
        separation_check(&format!("{prefix}:a_minus_f_nonzero"), min_af, 1e-6),
        separation_check(&format!("{prefix}:b_minus_h_nonzero"), min_bh, 1e-6),
        separation_check(
            &format!("{prefix}:imaginary_locus_avoided"),
            min_af_imag_locus.min(min_bh_imag_locus),
            1e-6,
        ),
    ])
}

/// At every critical point of a product, Hessian entries coupling
/// different factors must vanish, and the full determinant must equal the
/// product of the factor-block determinants.
fn product_block_check(
    jet: &Jet,
    atoms: &[FamilyExpr],
    set: &CriticalSet,
) -> Result<CheckResult> {
    let mut offsets = Vec::with_capacity(atoms.len() + 1);
    offsets.push(0usize);
    for atom in atoms {
        offsets.push(offsets.last().unwrap() + atom.dim());
    }
    let n = *offsets.last().unwrap();
    let block_of = |i: usize| offsets.iter().rposition(|&o| o <= i).unwrap();

    let mut worst_cross = 0.0f64;
    let mut worst_det = 0.0f64;
    for p in set.points() {
        let coords: Vec<Complex64> = p.point.clone();
        let h = jet.hessian(&coords);
        for i in 0..n {
            for j in 0..n {
                if block_of(i) != block_of(j) {
                    worst_cross = worst_cross.max(h[(i, j)].norm());
                }
            }
        }
        let full = dense_det(&h);
        let mut block_prod = Complex64::new(1.0, 0.0);
        for w in offsets.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let m = hi - lo;
            let mut block = crate::linalg::DenseMatrix::zeros(m);
            for i in 0..m {
                for j in 0..m {
                    block[(i, j)] = h[(lo + i, lo + j)];
                }
            }
            block_prod *= dense_det(&block);
        }
        let scale = full.norm().max(block_prod.norm()).max(1e-12);
        worst_det = worst_det.max((full - block_prod).norm() / scale);
    }
    let passed = worst_cross < 1e-12 && worst_det <= 1e-9;
    Ok(check(
        "product_block_structure",
        passed,
        format!(
            "max cross-factor entry {worst_cross:.3e}; worst block-det mismatch {worst_det:.3e}"
        ),
        (1e-12 - worst_cross).min(1e-9 - worst_det),
    ))
}

/// Identity checks on the atom critical set of one del Pezzo factor.
pub fn check_dp_identities(k: u32, config: &Config) -> Result<Vec<CheckResult>> {
    let opts = SolveOptions::from_config(config);
    let set = critsolve::crit_del_pezzo(k, &opts)?;
    Ok(dp_identity_checks(set.points(), 2 * k as usize))
}

/// Case checks on the atom critical set of one pseudo del Pezzo factor.
pub fn check_pdp_cases(k: u32, config: &Config) -> Result<Vec<CheckResult>> {
    let opts = SolveOptions::from_config(config);
    let set = critsolve::crit_pseudo_del_pezzo(k, &opts)?;
    pdp_case_checks(set.points(), 2 * k as usize)
}

/// Block-structure check for a product expression.
pub fn check_product_block_structure(expr: &FamilyExpr, config: &Config) -> Result<CheckResult> {
    let atoms: Vec<FamilyExpr> = expr.atoms().into_iter().cloned().collect();
    assert!(atoms.len() >= 2, "product expression required");
    let opts = SolveOptions::from_config(config);
    let set = critsolve::crit_for_family(expr, &opts)?;
    let w = superpotential(&expr.realize()?);
    let jet = Jet::new(&w);
    product_block_check(&jet, &atoms, &set)
}

/// Recognizes a polytope as a convex-hull product of family atoms, up to
/// the block decomposition induced by coordinate coupling. Returns None
/// when some factor is not a family atom in canonical coordinates.
pub fn recognize_family(p: &LatticePolytope) -> Option<FamilyExpr> {
    let dim = p.dim();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for v in p.vertices() {
        let support: Vec<usize> = (0..dim).filter(|&i| v[i] != 0).collect();
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        let root = find(&mut parent, i);
        components.entry(root).or_default().push(i);
    }
    let mut components: Vec<Vec<usize>> = components.into_values().collect();
    components.sort_by_key(|c| c[0]);

    let mut atoms = Vec::new();
    for comp in &components {
        let sub: Vec<Vec<i64>> = p
            .vertices()
            .iter()
            .filter(|v| comp.iter().any(|&i| v[i] != 0))
            .map(|v| comp.iter().map(|&i| v[i]).collect())
            .collect();
        atoms.push(match_atom(&sub, comp.len())?);
    }
    FamilyExpr::product_of(atoms)
}

fn match_atom(vertices: &[Vec<i64>], dim: usize) -> Option<FamilyExpr> {
    let mut sorted: Vec<Vec<i64>> = vertices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vertices.len() {
        return None;
    }
    if dim == 1 {
        return (sorted == vec![vec![-1], vec![1]]).then_some(FamilyExpr::Seg);
    }
    if !dim.is_multiple_of(2) {
        return None;
    }
    let k = (dim / 2) as u32;
    let mut axes = crate::polytope::axis_vertex_list(k);
    axes.push(vec![1; dim]);
    let mut pdp = axes.clone();
    pdp.sort_unstable();
    if sorted == pdp {
        return Some(FamilyExpr::Pdp(k));
    }
    axes.push(vec![-1; dim]);
    let mut dp = axes;
    dp.sort_unstable();
    (sorted == dp).then_some(FamilyExpr::Dp(k))
}

/// Analysis entry point for a user polytope: validates the predicates,
/// then either dispatches to the recognized family expression (the report
/// is exactly the family report) or declines with INCONCLUSIVE.
pub fn analyze_polytope(p: &LatticePolytope, config: &Config) -> Result<SemisimplicityReport> {
    config.validate()?;
    if p.dim() > config.max_dim {
        return Err(Error::DimensionCap {
            dim: p.dim(),
            max: config.max_dim,
        });
    }
    if let Some(f) = p.facets().iter().find(|f| f.offset != 1) {
        return Err(Error::NotReflexive {
            normal: f.normal.clone(),
            offset: f.offset,
        });
    }
    if !p.is_smooth()? {
        return Err(Error::NotSmooth);
    }
    match recognize_family(p) {
        Some(expr) => analyze(&expr, config),
        None => {
            let w = superpotential(p);
            Ok(SemisimplicityReport {
                input: InputDescription {
                    kind: "polytope".to_string(),
                    expr: None,
                    vertices: Some(p.vertices().to_vec()),
                    superpotential: w.to_json_terms(),
                },
                dim: p.dim(),
                critical_count: 0,
                expected_count: 0,
                points: Vec::new(),
                min_abs_det: 0.0,
                checks: vec![check(
                    "recognized_family",
                    false,
                    "unrecognized polytope: not a coordinate-block product of family atoms"
                        .to_string(),
                    -1.0,
                )],
                verdict: Verdict::Inconclusive,
            })
        }
    }
}

/// Human-readable rendering of a report; deterministic.
pub fn render_text(report: &SemisimplicityReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let what = report
        .input
        .expr
        .clone()
        .unwrap_or_else(|| "polytope".to_string());
    writeln!(out, "input: {what} (dim {})", report.dim).unwrap();
    writeln!(
        out,
        "critical points: {} (expected {})",
        report.critical_count, report.expected_count
    )
    .unwrap();
    writeln!(out, "min |det Hess|: {:.6e}", report.min_abs_det).unwrap();
    for c in &report.checks {
        writeln!(
            out,
            "check {:<40} {} margin {:+.3e} ({})",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.worst_margin,
            c.detail
        )
        .unwrap();
    }
    if report.points.len() <= 16 {
        for p in &report.points {
            let coords: Vec<String> = p
                .coords
                .iter()
                .map(|c| format!("{:+.6}{:+.6}i", c[0], c[1]))
                .collect();
            writeln!(
                out,
                "point [{}] residual {:.3e} det {:+.6e}{:+.6e}i",
                coords.join(", "),
                p.residual,
                p.det_hessian[0],
                p.det_hessian[1]
            )
            .unwrap();
        }
    }
    writeln!(out, "verdict: {:?}", report.verdict).unwrap();
    out
}
