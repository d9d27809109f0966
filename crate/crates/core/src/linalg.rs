//! Dense complex matrices with LU factorization, generic over the scalar.

use crate::scalar::Scalar;

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn map_to_c64(&self) -> DenseMatrix<num_complex::Complex64> {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x.to_c64()).collect(),
        }
    }

    /// Determinant by LU with partial pivoting; 0 for singular input.
    pub fn det_lu(&self) -> S {
        let n = self.n;
        if n == 0 {
            return S::one();
        }
        let mut m = self.clone();
        let mut det = S::one();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&a, &b| {
                    m[(a, k)]
                        .norm()
                        .partial_cmp(&m[(b, k)].norm())
                        .expect("finite pivots")
                })
                .expect("nonempty range");
            if m[(pivot, k)].norm() == 0.0 {
                return S::zero();
            }
            if pivot != k {
                m.swap_rows(pivot, k);
                det = -det;
            }
            det = det * m[(k, k)];
            let inv_pivot = m[(k, k)].inv();
            for i in k + 1..n {
                let factor = m[(i, k)] * inv_pivot;
                for j in k..n {
                    let delta = factor * m[(k, j)];
                    m[(i, j)] = m[(i, j)] - delta;
                }
            }
        }
        det
    }

    /// Solves self * x = rhs; None when a pivot vanishes.
    pub fn solve(&self, rhs: &[S]) -> Option<Vec<S>> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut m = self.clone();
        let mut b = rhs.to_vec();
        for k in 0..n {
            let pivot = (k..n).max_by(|&a, &b2| {
                m[(a, k)]
                    .norm()
                    .partial_cmp(&m[(b2, k)].norm())
                    .expect("finite pivots")
            })?;
            if m[(pivot, k)].norm() == 0.0 {
                return None;
            }
            if pivot != k {
                m.swap_rows(pivot, k);
                b.swap(pivot, k);
            }
            let inv_pivot = m[(k, k)].inv();
            for i in k + 1..n {
                let factor = m[(i, k)] * inv_pivot;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in k..n {
                    let delta = factor * m[(k, j)];
                    m[(i, j)] = m[(i, j)] - delta;
                }
                let delta = factor * b[k];
                b[i] = b[i] - delta;
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for j in k + 1..n {
                let delta = m[(k, j)] * b[j];
                acc = acc - delta;
            }
            b[k] = acc * m[(k, k)].inv();
        }
        Some(b)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    /// Max |self - other| over entries, as f64.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl<S> std::ops::Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for DenseMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_identity_and_diagonal() {
        let id = DenseMatrix::<Complex64>::identity(4);
        assert!((id.det_lu() - c(1.0, 0.0)).norm() < 1e-15);

        let mut d = DenseMatrix::<Complex64>::zeros(4);
        for i in 0..4 {
            d[(i, i)] = c((i + 1) as f64, 0.0);
        }
        assert!((d.det_lu() - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn det_singular_is_zero() {
        let m = DenseMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        assert_eq!(m.det_lu().norm(), 0.0);
        assert!(m.solve(&[c(1.0, 0.0), c(0.0, 0.0)]).is_none());
    }

    #[test]
    fn det_matches_cofactor_expansion_small() {
        // recursive-expansion oracle for sizes <= 5
        fn cofactor_det(m: &[Vec<Complex64>]) -> Complex64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            let mut acc = c(0.0, 0.0);
            for j in 0..n {
                let minor: Vec<Vec<Complex64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += m[0][j] * cofactor_det(&minor) * c(sign, 0.0);
            }
            acc
        }

        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for n in 1..=5 {
            let rows: Vec<Vec<Complex64>> = (0..n)
                .map(|_| (0..n).map(|_| c(next(), next())).collect())
                .collect();
            let expect = cofactor_det(&rows);
            let got = DenseMatrix::from_rows(rows).det_lu();
            assert!(
                (got - expect).norm() <= 1e-10 * expect.norm().max(1.0),
                "n={n}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn solve_recovers_solution() {
        let m = DenseMatrix::from_rows(vec![
            vec![c(2.0, 1.0), c(0.0, -1.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0), c(1.0, 1.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(-2.0, 0.5)],
        ]);
        let x_true = [c(1.0, -1.0), c(0.5, 2.0), c(-0.25, 0.0)];
        let mut rhs = [c(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                rhs[i] += m[(i, j)] * x_true[j];
            }
        }
        let x = m.solve(&rhs).unwrap();
        for (got, want) in x.iter().zip(&x_true) {
            assert!((got - want).norm() < 1e-12);
        }
    }
}
