//! Exact integer linear algebra: fraction-free determinants, rank, and
//! generalized cross products. Fast path in i128 with checked arithmetic,
//! falling back to BigInt on overflow.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

enum DetOutcome {
    Value(i128),
    Singular,
    Overflow,
}

/// Bareiss fraction-free elimination over i128 with overflow detection.
fn det_i128(mut m: Vec<Vec<i128>>) -> DetOutcome {
    let n = m.len();
    if n == 0 {
        return DetOutcome::Value(1);
    }
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(swap) => {
                    m.swap(k, swap);
                    sign = -sign;
                }
                None => return DetOutcome::Singular,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let Some(a) = m[i][j].checked_mul(m[k][k]) else {
                    return DetOutcome::Overflow;
                };
                let Some(b) = m[i][k].checked_mul(m[k][j]) else {
                    return DetOutcome::Overflow;
                };
                let Some(num) = a.checked_sub(b) else {
                    return DetOutcome::Overflow;
                };
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    DetOutcome::Value(sign * m[n - 1][n - 1])
}

/// Bareiss over BigInt; exact for any input.
fn det_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(swap) => {
                    m.swap(k, swap);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Exact determinant of a square integer matrix given as rows.
pub fn det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let m128: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match det_i128(m128) {
        DetOutcome::Value(v) => BigInt::from(v),
        DetOutcome::Singular => BigInt::zero(),
        DetOutcome::Overflow => {
            let mbig: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            det_big(mbig)
        }
    }
}

/// Rank of an integer matrix (any shape) by fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    rank_i128(rows).unwrap_or_else(|| rank_big(rows))
}

fn rank_i128(rows: &[Vec<i64>]) -> Option<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Some(0);
    }
    let ncols = rows[0].len();
    let mut m: Vec<i128> = Vec::with_capacity(nrows * ncols);
    for r in rows {
        m.extend(r.iter().map(|&x| x as i128));
    }
    let at = |m: &Vec<i128>, i: usize, j: usize| m[i * ncols + j];
    let mut rank = 0usize;
    let mut prev: i128 = 1;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&i| at(&m, i, col) != 0);
        let Some(pivot) = pivot else { continue };
        if pivot != rank {
            for j in 0..ncols {
                m.swap(rank * ncols + j, pivot * ncols + j);
            }
        }
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let a = at(&m, i, j).checked_mul(at(&m, rank, col))?;
                let b = at(&m, i, col).checked_mul(at(&m, rank, j))?;
                m[i * ncols + j] = a.checked_sub(b)? / prev;
            }
            m[i * ncols + col] = 0;
        }
        prev = at(&m, rank, col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Some(rank)
}

fn rank_big(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&i| !m[i][col].is_zero());
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let v = (&m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Generalized cross product: given d-1 rows of length d, returns an
/// integer vector orthogonal to all of them (entry j is the signed
/// cofactor from deleting column j). Zero vector iff the rows are
/// linearly dependent.
pub fn cross_product(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let d = rows.len() + 1;
    debug_assert!(rows.iter().all(|r| r.len() == d));
    if let Some(fast) = cross_product_i128(rows, d) {
        return fast.into_iter().map(BigInt::from).collect();
    }
    let mut normal = Vec::with_capacity(d);
    for j in 0..d {
        let minor: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let cofactor = det(&minor);
        normal.push(if j % 2 == 0 { cofactor } else { -cofactor });
    }
    normal
}

pub enum CrossOutcome {
    /// i128 arithmetic overflowed or the entries exceed i64; retry in
    /// BigInt.
    Overflow,
    /// The rows are linearly dependent.
    Dependent,
    Normal(Vec<i64>),
}

/// Primitive integer vector orthogonal to d-1 rows, entirely in i128.
pub fn primitive_cross_i64(rows: &[Vec<i64>]) -> CrossOutcome {
    let d = rows.len() + 1;
    let Some(raw) = cross_product_i128(rows, d) else {
        return CrossOutcome::Overflow;
    };
    if raw.iter().all(|&x| x == 0) {
        return CrossOutcome::Dependent;
    }
    let mut g: i128 = 0;
    for &x in &raw {
        g = gcd_i128(g, x);
    }
    match raw
        .iter()
        .map(|&x| i64::try_from(x / g))
        .collect::<std::result::Result<Vec<i64>, _>>()
    {
        Ok(v) => CrossOutcome::Normal(v),
        Err(_) => CrossOutcome::Overflow,
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Kernel vector of a (d-1) x d integer matrix by one fraction-free
/// elimination plus integer back-substitution. The normalization pins the
/// free coordinate to the pivot subdeterminant, which makes every
/// back-substituted component an integer (it is a signed cofactor); the
/// division exactness is still checked at runtime and any violation or
/// overflow routes to the BigInt path.
fn cross_product_i128(rows: &[Vec<i64>], d: usize) -> Option<Vec<i128>> {
    let k = d - 1;
    let mut m = vec![0i128; k * d];
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            m[r * d + c] = x as i128;
        }
    }
    let mut pivot_cols = Vec::with_capacity(k);
    let mut prev: i128 = 1;
    let mut row = 0usize;
    for col in 0..d {
        if row == k {
            break;
        }
        let Some(pr) = (row..k).find(|&i| m[i * d + col] != 0) else {
            continue;
        };
        if pr != row {
            for j in 0..d {
                m.swap(row * d + j, pr * d + j);
            }
        }
        for i in row + 1..k {
            for j in col + 1..d {
                let a = m[i * d + j].checked_mul(m[row * d + col])?;
                let b = m[i * d + col].checked_mul(m[row * d + j])?;
                m[i * d + j] = a.checked_sub(b)? / prev;
            }
            m[i * d + col] = 0;
        }
        prev = m[row * d + col];
        pivot_cols.push(col);
        row += 1;
    }
    if row < k {
        return Some(vec![0; d]); // dependent rows
    }
    let free = (0..d).find(|c| !pivot_cols.contains(c)).expect("one free column");
    let mut z = vec![0i128; d];
    z[free] = prev;
    for r in (0..k).rev() {
        let c = pivot_cols[r];
        let mut acc: i128 = 0;
        for j in c + 1..d {
            acc = acc.checked_add(m[r * d + j].checked_mul(z[j])?)?;
        }
        let num = acc.checked_neg()?;
        let q = num / m[r * d + c];
        if q.checked_mul(m[r * d + c])? != num {
            return None;
        }
        z[c] = q;
    }
    Some(z)
}

/// Divides a vector by the gcd of its entries; None for the zero vector.
pub fn primitive(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    for x in v {
        g = gcd_big(&g, x);
    }
    if g.is_zero() {
        return None;
    }
    Some(v.iter().map(|x| x / &g).collect())
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Checked narrowing of a BigInt vector into i64 coordinates.
pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(i64::try_from).collect::<Result<_, _>>().ok()
}
