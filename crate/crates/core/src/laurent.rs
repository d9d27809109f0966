//! Sparse Laurent polynomials over exact rational coefficients, with the
//! superpotential constructor and complex evaluation of values, gradients
//! and Hessians.
//!
//! Terms live in a BTreeMap keyed by exponent vectors, so iteration and
//! serialization follow lexicographic order.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::polytope::LatticePolytope;
use crate::scalar::{from_ratio, Scalar};

/// Integer exponent vector; entries may be negative.
pub type ExponentVector = Vec<i64>;

/// A point on the algebraic torus: all coordinates nonzero.
pub type ComplexPoint = Vec<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

/// Wire format for one term: `{"exps": [...], "coeff": "p/q"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<i64>,
    pub coeff: String,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(dim: usize, exps: ExponentVector, coeff: BigRational) -> Result<Self> {
        let mut p = Self::zero(dim);
        p.add_term(exps, coeff)?;
        Ok(p)
    }

    fn add_term(&mut self, exps: ExponentVector, coeff: BigRational) -> Result<()> {
        if exps.len() != self.dim {
            return Err(Error::LaurentDimension(format!(
                "exponent vector of length {} in a {}-variable polynomial",
                exps.len(),
                self.dim
            )));
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !coeff.is_zero() {
                    v.insert(coeff);
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    /// Sum of two polynomials in the same variables.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::LaurentDimension(format!(
                "adding polynomials in {} and {} variables",
                self.dim, other.dim
            )));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Reinterprets the polynomial in `total_dim` variables, its own
    /// variables occupying the block starting at `offset`.
    pub fn embed(&self, total_dim: usize, offset: usize) -> Result<Self> {
        if offset + self.dim > total_dim {
            return Err(Error::LaurentDimension(format!(
                "embedding {} variables at offset {} into {} variables",
                self.dim, offset, total_dim
            )));
        }
        let mut out = Self::zero(total_dim);
        for (e, c) in &self.terms {
            let mut exps = vec![0; total_dim];
            exps[offset..offset + self.dim].copy_from_slice(e);
            out.add_term(exps, c.clone())?;
        }
        Ok(out)
    }

    /// Ordinary partial derivative along axis `k`.
    pub fn partial(&self, k: usize) -> Self {
        assert!(k < self.dim, "axis {} out of range for dim {}", k, self.dim);
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[k] -= 1;
            let coeff = c * BigRational::from_integer(e[k].into());
            out.add_term(exps, coeff).expect("same dimension");
        }
        out
    }

    /// Value at a torus point (all coordinates nonzero).
    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        debug_assert_eq!(point.len(), self.dim);
        debug_assert!(point.iter().all(|x| x.norm() != 0.0));
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut term: S = from_ratio(c);
            for (x, &exp) in point.iter().zip(e) {
                if exp != 0 {
                    term = term * x.powi(exp as i32);
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Gradient vector at a torus point.
    pub fn gradient_at<S: Scalar>(&self, point: &[S]) -> Vec<S> {
        (0..self.dim)
            .map(|k| self.partial(k).eval(point))
            .collect()
    }

    /// Symmetric matrix of second partials at a torus point. Entries with
    /// j <= k are evaluated and mirrored; the polynomial identity
    /// d2W/dXj dXk = d2W/dXk dXj is covered by tests.
    pub fn hessian_at<S: Scalar>(&self, point: &[S]) -> DenseMatrix<S> {
        let partials: Vec<LaurentPoly> = (0..self.dim).map(|k| self.partial(k)).collect();
        let mut m = DenseMatrix::zeros(self.dim);
        for j in 0..self.dim {
            for k in j..self.dim {
                let v = partials[j].partial(k).eval(point);
                m[(j, k)] = v;
                m[(k, j)] = v;
            }
        }
        m
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson {
                exps: e.clone(),
                coeff: c.to_string(),
            })
            .collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &exp) in e.iter().enumerate() {
                if exp != 0 {
                    write!(f, "*X{}^{}", i + 1, exp)?;
                }
            }
        }
        Ok(())
    }
}

/// One monomial per vertex, all coefficients one.
pub fn superpotential(p: &LatticePolytope) -> LaurentPoly {
    let mut w = LaurentPoly::zero(p.dim());
    for v in p.vertices() {
        w.add_term(v.clone(), BigRational::from_integer(1.into()))
            .expect("vertex length matches dim");
    }
    w
}

/// Errors unless every coordinate is nonzero.
pub fn check_torus_point(point: &[Complex64]) -> Result<()> {
    for (i, x) in point.iter().enumerate() {
        if x.norm() == 0.0 {
            return Err(Error::ZeroCoordinate(i));
        }
    }
    Ok(())
}
