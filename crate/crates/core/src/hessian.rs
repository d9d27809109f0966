//! The two-block symmetric matrix shape taken by every family Hessian at a
//! structured critical point: closed-form determinant and eigenvalues, the
//! per-family parameter substitutions, and a dense LU oracle.
//!
//! Matrix layout for parameters (a, f, b, h, d) and block sizes (L, n):
//! diagonal `a` and off-diagonal `f` on the leading L x L block, diagonal
//! `b` and off-diagonal `h` on the trailing (n-L) x (n-L) block, constant
//! `d` across the two blocks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::roots;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuredParams<S> {
    pub a: S,
    pub f: S,
    pub b: S,
    pub h: S,
    pub d: S,
    pub l: usize,
    pub n: usize,
}

impl<S: Scalar> StructuredParams<S> {
    fn check_shape(&self) {
        assert!(self.n >= 1, "matrix must be nonempty");
        assert!(self.l <= self.n, "block size exceeds matrix size");
    }
}

/// Materializes the structured matrix.
pub fn assemble_structured<S: Scalar>(p: &StructuredParams<S>) -> DenseMatrix<S> {
    p.check_shape();
    let mut m = DenseMatrix::zeros(p.n);
    for i in 0..p.n {
        for j in 0..p.n {
            let in_a = i < p.l;
            let in_a2 = j < p.l;
            m[(i, j)] = match (in_a, in_a2) {
                _ if i == j => {
                    if in_a {
                        p.a
                    } else {
                        p.b
                    }
                }
                (true, true) => p.f,
                (false, false) => p.h,
                _ => p.d,
            };
        }
    }
    m
}

/// Closed-form determinant. The L = 0 and L = n edges are split out
/// explicitly since the general exponent n-L-1 turns negative there.
pub fn structured_det<S: Scalar>(p: &StructuredParams<S>) -> S {
    p.check_shape();
    let nf = |x: usize| S::from_f64(x as f64);
    let (l, n) = (p.l, p.n);
    if l == 0 {
        return (p.b - p.h).powi(n as i32 - 1) * (p.b + p.h * nf(n - 1));
    }
    if l == n {
        return (p.a - p.f).powi(n as i32 - 1) * (p.a + p.f * nf(n - 1));
    }
    let quad = quadratic_constant(p);
    (p.a - p.f).powi(l as i32 - 1) * (p.b - p.h).powi((n - l) as i32 - 1) * quad
}

/// The constant term of the quadratic factor:
/// (a + f(L-1))(b + (n-L-1)h) - d^2 L(n-L). The linear coefficients are
/// signed, so the formula extends verbatim to L = 0 and L = n.
pub fn quadratic_constant<S: Scalar>(p: &StructuredParams<S>) -> S {
    p.check_shape();
    let sf = |x: i64| S::from_f64(x as f64);
    let (l, n) = (p.l as i64, p.n as i64);
    (p.a + p.f * sf(l - 1)) * (p.b + p.h * sf(n - l - 1)) - p.d * p.d * sf(l * (n - l))
}

/// Eigenvalues with multiplicities: a-f repeated L-1 times, b-h repeated
/// n-L-1 times, and the two eigenvalues on the span of the two block
/// indicator vectors (roots of a quadratic whose constant term is
/// `quadratic_constant`).
pub fn structured_eigen<S: Scalar>(p: &StructuredParams<S>) -> Vec<(S, usize)> {
    p.check_shape();
    let nf = |x: usize| S::from_f64(x as f64);
    let (l, n) = (p.l, p.n);
    let mut out = Vec::new();
    if l >= 2 {
        out.push((p.a - p.f, l - 1));
    }
    if n - l >= 2 {
        out.push((p.b - p.h, n - l - 1));
    }
    if l == 0 {
        out.push((p.b + p.h * nf(n - 1), 1));
    } else if l == n {
        out.push((p.a + p.f * nf(n - 1), 1));
    } else {
        let pa = p.a + p.f * nf(l - 1);
        let qb = p.b + p.h * nf(n - l - 1);
        let disc = (pa - qb) * (pa - qb) + p.d * p.d * nf(4 * l * (n - l));
        let sq = disc.sqrt();
        let half = S::from_f64(0.5);
        out.push(((pa + qb + sq) * half, 1));
        out.push(((pa + qb - sq) * half, 1));
    }
    debug_assert_eq!(out.iter().map(|(_, m)| m).sum::<usize>(), n);
    out
}

/// Dense determinant oracle: LU with partial pivoting; 0 for singular.
pub fn dense_det<S: Scalar>(m: &DenseMatrix<S>) -> S {
    m.det_lu()
}

fn sign_pow<S: Scalar>(l: usize) -> S {
    S::from_f64(if l.is_multiple_of(2) { 1.0 } else { -1.0 })
}

fn rel_check<S: Scalar>(x: S, y: S, tol: f64, what: &str) -> Result<()> {
    // relative to the max magnitude, with an absolute floor of 1e-12 on
    // the acceptable difference (both sides may legitimately vanish)
    let allowed = (tol * x.norm().max(y.norm())).max(1e-12);
    if (x - y).norm() > allowed {
        return Err(Error::ParamCheck(format!(
            "{what}: {:?} vs {:?}",
            x.to_c64(),
            y.to_c64()
        )));
    }
    Ok(())
}

/// del Pezzo Hessian parameters at a structured critical point with L
/// coordinates equal to A and n-L equal to B = -1/A. Validates that A is
/// (-1)^(L-1)-compatible root of unity, i.e. A^(2L-n-1) = (-1)^(L-1), and
/// that the raw substitution forms match the simplified ones.
pub fn dp_params<S: Scalar>(a_root: S, l: usize, n: usize) -> Result<StructuredParams<S>> {
    assert!(n >= 2 && n.is_multiple_of(2), "del Pezzo dimension must be even");
    assert!(l <= n);
    let il = l as i32;
    let im = n as i32;
    let unity = a_root.powi(2 * il - im - 1) - sign_pow::<S>(l + 1);
    if unity.norm() > 1e-8 {
        return Err(Error::ParamCheck(format!(
            "A = {:?} does not satisfy the root-of-unity relation for L = {l}, n = {n}",
            a_root.to_c64()
        )));
    }
    let x1 = a_root;
    let x2 = -a_root.inv();
    let two = S::from_f64(2.0);

    // raw substitution forms of the second partials
    let a_raw = two * x1.powi(-3) + two * x1.powi(-(il + 2)) * x2.powi(-(im - il));
    let b_raw = two * x2.powi(-3) + two * x1.powi(-il) * x2.powi(-(im - il + 2));
    let f_raw = x1.powi(il - 2) * x2.powi(im - il) + x1.powi(-(il + 2)) * x2.powi(-(im - il));
    let h_raw = x1.powi(il) * x2.powi(im - il - 2) + x1.powi(-il) * x2.powi(-(im - il + 2));
    let d_raw =
        x1.powi(il - 1) * x2.powi(im - il - 1) + x1.powi(-(il + 1)) * x2.powi(-(im - il + 1));

    // simplified forms
    let a = two * a_root.powi(-3) + sign_pow::<S>(l) * two * a_root.powi(im - 2 * il - 2);
    let b = -(two * a_root.powi(3)) - two * a_root;
    let f = -a_root.inv() - a_root.powi(-3);
    let h = -a_root.powi(3) - a_root;
    let d = a_root + a_root.inv();

    rel_check(a_raw, a, 1e-10, "dp a")?;
    rel_check(b_raw, b, 1e-10, "dp b")?;
    rel_check(f_raw, f, 1e-10, "dp f")?;
    rel_check(h_raw, h, 1e-10, "dp h")?;
    rel_check(d_raw, d, 1e-10, "dp d")?;

    Ok(StructuredParams { a, f, b, h, d, l, n })
}

/// Pseudo del Pezzo Hessian parameters at a structured critical point.
/// Validates the critical relation A - 1/A = (-1)^(L-1) A^(2L-n) and the
/// agreement of the power forms with their (A - 1/A)-simplifications.
pub fn pdp_params<S: Scalar>(a_root: S, l: usize, n: usize) -> Result<StructuredParams<S>> {
    assert!(n >= 2 && n.is_multiple_of(2), "pseudo del Pezzo dimension must be even");
    assert!(l <= n);
    let il = l as i32;
    let im = n as i32;
    let t = a_root - a_root.inv();
    let crit = t - sign_pow::<S>(l + 1) * a_root.powi(2 * il - im);
    if crit.norm() > 1e-8 {
        return Err(Error::ParamCheck(format!(
            "A = {:?} does not satisfy the critical relation for L = {l}, n = {n}",
            a_root.to_c64()
        )));
    }
    let x1 = a_root;
    let x2 = -a_root.inv();
    let two = S::from_f64(2.0);

    let a = two * x1.powi(-3);
    let b = two * x2.powi(-3);
    let f_raw = x1.powi(il - 2) * x2.powi(im - il);
    let h_raw = x1.powi(il) * x2.powi(im - il - 2);
    let d_raw = x1.powi(il - 1) * x2.powi(im - il - 1);

    // power forms in A alone
    let f = sign_pow::<S>(l) * a_root.powi(2 * il - im - 2);
    let h = sign_pow::<S>(l) * a_root.powi(2 * il - im + 2);
    let d = sign_pow::<S>(l + 1) * a_root.powi(2 * il - im);

    // simplifications through the critical relation
    let f_simpl = -(t * a_root.powi(-2));
    let h_simpl = -(t * a_root.powi(2));
    let d_simpl = t;

    rel_check(f_raw, f, 1e-10, "pdp f (substitution vs power)")?;
    rel_check(h_raw, h, 1e-10, "pdp h (substitution vs power)")?;
    rel_check(d_raw, d, 1e-10, "pdp d (substitution vs power)")?;
    rel_check(b, -(two * a_root.powi(3)), 1e-10, "pdp b")?;
    rel_check(f, f_simpl, 1e-10, "pdp f (power vs simplified)")?;
    rel_check(h, h_simpl, 1e-10, "pdp h (power vs simplified)")?;
    rel_check(d, d_simpl, 1e-10, "pdp d (power vs simplified)")?;

    Ok(StructuredParams { a, f, b, h, d, l, n })
}

/// Pseudo del Pezzo parameters from the (A - 1/A)-simplified forms alone.
/// Defined for every nonzero A, not just critical values; coincides with
/// `pdp_params` on the critical locus. Used to pin the quartic expansion by
/// sampling.
pub fn pdp_params_simplified<S: Scalar>(a_root: S, l: usize, n: usize) -> StructuredParams<S> {
    let t = a_root - a_root.inv();
    let two = S::from_f64(2.0);
    StructuredParams {
        a: two * a_root.powi(-3),
        b: -(two * a_root.powi(3)),
        f: -(t * a_root.powi(-2)),
        h: -(t * a_root.powi(2)),
        d: t,
        l,
        n,
    }
}

/// Closed form of the del Pezzo quadratic constant:
/// (2L - n - 1)(A + 1/A)^2.
pub fn chi_dp<S: Scalar>(a_root: S, l: usize, n: usize) -> S {
    let s = a_root + a_root.inv();
    S::from_f64((2 * l as i64 - n as i64 - 1) as f64) * s * s
}

/// Coefficients [c0, c1, c2, c3, c4] of the quartic equal to A^2 times the
/// pseudo del Pezzo quadratic constant under the simplified substitutions:
/// (2L - n - 1) A^4 - 2 A^2 + (n - 2L - 1). Odd coefficients vanish and
/// the even ones are odd integers at both ends, even in the middle.
pub fn u_poly_pdp(l: usize, n: usize) -> [i64; 5] {
    let l = l as i64;
    let n = n as i64;
    [n - 2 * l - 1, 0, -2, 0, 2 * l - n - 1]
}

pub fn u_poly_eval<S: Scalar>(coeffs: &[i64; 5], a_root: S) -> S {
    let mut acc = S::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        acc = acc + S::from_f64(c as f64) * a_root.powi(i as i32);
    }
    acc
}

/// All four roots of the quartic, via the closed biquadratic form (the odd
/// coefficients are identically zero).
pub fn u_poly_roots(l: usize, n: usize) -> Vec<Complex64> {
    let [c0, _, c2, _, c4] = u_poly_pdp(l, n);
    roots::biquadratic_roots(c4 as f64, c2 as f64, c0 as f64)
}
