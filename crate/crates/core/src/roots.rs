//! Univariate complex root finding: simultaneous Aberth-Ehrlich iteration
//! with Newton polishing, plus a closed-form path for biquadratics.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;
const EPS: f64 = 1e-13;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * Complex64::new(i as f64, 0.0))
        .collect()
}

/// All complex roots of a polynomial given by ascending coefficients.
/// Exact zero leading coefficients are trimmed; zero constant terms yield
/// roots at the origin. Roots come back sorted by (re, im).
pub fn all_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut coeffs: Vec<Complex64> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Err(Error::RootFinder("polynomial is constant".into()));
    }
    let mut roots = Vec::new();
    while coeffs[0].norm() == 0.0 {
        roots.push(Complex64::new(0.0, 0.0));
        coeffs.remove(0);
        if coeffs.len() == 1 {
            sort_roots(&mut roots);
            return Ok(roots);
        }
    }
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();

    // Cauchy bound for the initial circle
    let radius = 1.0
        + monic[..degree]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut zs: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.376;
            Complex64::new(radius * theta.cos(), radius * theta.sin())
        })
        .collect();

    let deriv = derivative(&monic);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        let prev = zs.clone();
        for k in 0..degree {
            let z = prev[k];
            let p = horner(&monic, z);
            let dp = horner(&deriv, z);
            let newton = if dp.norm() == 0.0 {
                Complex64::new(EPS, EPS)
            } else {
                p / dp
            };
            let mut repulse = Complex64::new(0.0, 0.0);
            for (j, &zj) in prev.iter().enumerate() {
                if j != k {
                    let diff = z - zj;
                    if diff.norm() > 0.0 {
                        repulse += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() == 0.0 { newton } else { newton / denom };
            zs[k] = z - step;
            max_step = max_step.max(step.norm() / (1.0 + zs[k].norm()));
        }
        if max_step < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootFinder(format!(
            "Aberth iteration did not converge for degree {degree}"
        )));
    }
    for z in &mut zs {
        *z = polish(&monic, &deriv, *z);
    }
    roots.extend(zs);
    sort_roots(&mut roots);
    Ok(roots)
}

/// A few Newton steps on the original polynomial.
fn polish(coeffs: &[Complex64], deriv: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let p = horner(coeffs, z);
        let dp = horner(deriv, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Roots (with multiplicity) of c4 z^4 + c2 z^2 + c0 with c4 != 0, via the
/// quadratic formula in z^2. Immune to the slow Aberth convergence on
/// multiple roots.
pub fn biquadratic_roots(c4: f64, c2: f64, c0: f64) -> Vec<Complex64> {
    assert!(c4 != 0.0);
    let c4 = Complex64::new(c4, 0.0);
    let c2 = Complex64::new(c2, 0.0);
    let c0 = Complex64::new(c0, 0.0);
    let disc = (c2 * c2 - 4.0 * c4 * c0).sqrt();
    let halves = [
        (-c2 + disc) / (2.0 * c4),
        (-c2 - disc) / (2.0 * c4),
    ];
    let mut out = Vec::with_capacity(4);
    for y in halves {
        let r = y.sqrt();
        out.push(r);
        out.push(-r);
    }
    sort_roots(&mut out);
    out
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
    });
}
