//! Small exact linear algebra: Gauss-Jordan over expression fields and over
//! big rationals, characteristic polynomials, ranks, nullspaces, and a float
//! Jacobi eigensolver for the signature probe.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::expr::{Expression, Rat, Vars};

/// Inverse and determinant of a square matrix of expressions, by Gauss-Jordan
/// with exact division. `None` when the matrix is singular as a matrix of
/// rational functions.
pub fn expr_inverse(
    m: &[Vec<Expression>],
    vars: &Vars,
) -> Option<(Vec<Vec<Expression>>, Expression)> {
    let n = m.len();
    let mut a: Vec<Vec<Expression>> = m.to_vec();
    let mut inv: Vec<Vec<Expression>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Expression::one(vars)
                    } else {
                        Expression::zero(vars)
                    }
                })
                .collect()
        })
        .collect();
    let mut det = Expression::one(vars);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = det.neg();
        }
        let p = a[col][col].clone();
        det = det.mul(&p);
        for j in 0..n {
            a[col][j] = a[col][j].div(&p).unwrap();
            inv[col][j] = inv[col][j].div(&p).unwrap();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = a[col][j].mul(&f);
                a[r][j] = a[r][j].sub(&t);
                let t = inv[col][j].mul(&f);
                inv[r][j] = inv[r][j].sub(&t);
            }
        }
    }
    Some((inv, det))
}

/// Determinant of a square matrix of expressions.
pub fn expr_det(m: &[Vec<Expression>], vars: &Vars) -> Expression {
    let n = m.len();
    let mut a: Vec<Vec<Expression>> = m.to_vec();
    let mut det = Expression::one(vars);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Expression::zero(vars);
        };
        if pivot != col {
            a.swap(pivot, col);
            det = det.neg();
        }
        let p = a[col][col].clone();
        det = det.mul(&p);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].div(&p).unwrap();
            for j in col..n {
                let t = a[col][j].mul(&f);
                a[r][j] = a[r][j].sub(&t);
            }
        }
    }
    det
}

/// Rank of a rational matrix (not necessarily square).
pub fn rat_rank(m: &[Vec<Rat>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let p = a[rank][col].clone();
        for r in 0..rows {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for j in col..cols {
                let t = &a[rank][j] * &f;
                a[r][j] = &a[r][j] - &t;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn rat_identity(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub fn rat_mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][l] * &b[l][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn rat_mat_sub_scaled_identity(m: &[Vec<Rat>], lambda: &Rat) -> Vec<Vec<Rat>> {
    let mut out = m.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    out
}

/// Inverse of a rational matrix; `None` when singular.
pub fn rat_inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv = rat_identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &a[col][j] * &f;
                a[r][j] = &a[r][j] - &t;
                let t = &inv[col][j] * &f;
                inv[r][j] = &inv[r][j] - &t;
            }
        }
    }
    Some(inv)
}

/// Characteristic polynomial `det(lambda I - M)` by Faddeev-LeVerrier,
/// little-endian coefficients, length `n + 1`, leading coefficient one.
pub fn rat_charpoly(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut aux = rat_identity(n);
    for k in 1..=n {
        aux = rat_mat_mul(m, &aux);
        let tr: Rat = (0..n)
            .map(|i| aux[i][i].clone())
            .fold(Rat::zero(), |s, v| s + v);
        let c = -tr / Rat::from_integer(BigInt::from(k as i64));
        coeffs[n - k] = c.clone();
        for (i, row) in aux.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    coeffs
}

/// Basis of the nullspace of a rational matrix, as column vectors.
pub fn rat_nullspace(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        let p = a[row][col].clone();
        for j in 0..cols {
            a[row][j] = &a[row][j] / &p;
        }
        for r in 0..rows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..cols {
                let t = &a[row][j] * &f;
                a[r][j] = &a[r][j] - &t;
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Signature (positive, negative) of a nondegenerate symmetric rational
/// matrix, by exact symmetric reduction; no square roots are needed to count
/// signs.
pub fn rat_signature(m: &[Vec<Rat>]) -> (usize, usize) {
    let n = m.len();
    let mut a = m.to_vec();
    let mut pos = 0;
    let mut neg = 0;
    let mut rows: Vec<usize> = (0..n).collect();
    while !rows.is_empty() {
        // Prefer a nonzero diagonal pivot.
        if let Some(pi) = rows.iter().position(|&r| !a[r][r].is_zero()) {
            let r0 = rows[pi];
            let p = a[r0][r0].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            rows.retain(|&r| r != r0);
            for &r in &rows {
                if a[r][r0].is_zero() {
                    continue;
                }
                let f = &a[r][r0] / &p;
                for &c in &rows {
                    let t = &a[r0][c] * &f;
                    a[r][c] = &a[r][c] - &t;
                }
            }
            for &r in &rows {
                let t = a[r][r0].clone();
                if !t.is_zero() {
                    a[r][r0] = Rat::zero();
                    a[r0][r] = Rat::zero();
                }
            }
            continue;
        }
        // All-zero diagonal: a nonzero off-diagonal entry spans a hyperbolic
        // plane contributing one sign of each.
        let mut found = None;
        'scan: for (i, &r) in rows.iter().enumerate() {
            for &c in rows.iter().skip(i + 1) {
                if !a[r][c].is_zero() {
                    found = Some((r, c));
                    break 'scan;
                }
            }
        }
        let Some((r0, c0)) = found else {
            // Remaining block is identically zero; degenerate input.
            break;
        };
        pos += 1;
        neg += 1;
        let b = a[r0][c0].clone();
        rows.retain(|&r| r != r0 && r != c0);
        // Project the remaining rows off the hyperbolic pair {r0, c0}.
        for &r in &rows {
            let x = &a[r][c0] / &b; // component along r0
            let y = &a[r][r0] / &b; // component along c0
            for &c in &rows {
                let t = &a[r0][c] * &x;
                a[r][c] = &a[r][c] - &t;
                let t = &a[c0][c] * &y;
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    (pos, neg)
}

/// Eigenvalues of a symmetric f64 matrix by cyclic Jacobi rotations,
/// ascending; used only for the advisory signature probe.
pub fn jacobi_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Exact integer square root test: `Some(s)` when `v = s^2` with `s >= 0`.
pub fn perfect_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let s = v.sqrt();
    if &s * &s == *v {
        Some(s)
    } else {
        None
    }
}

/// Exact rational square root test.
pub fn rat_perfect_sqrt(v: &Rat) -> Option<Rat> {
    let n = perfect_sqrt(v.numer())?;
    let d = perfect_sqrt(v.denom())?;
    Some(Rat::new(n, d))
}

/// Trial-division factorization. Returns `None` when a cofactor cannot be
/// resolved below the bound, so callers never work with an incomplete
/// factor list; perfect powers of large primes are peeled off by taking
/// exact roots.
fn factorize(v: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = v.abs();
    if n.is_zero() {
        return None;
    }
    let bound = BigInt::from(1_000_000u64);
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut k2 = 0;
    while n.is_even() {
        n /= 2;
        k2 += 1;
    }
    if k2 > 0 {
        factors.push((BigInt::from(2), k2));
    }
    let mut p = BigInt::from(3);
    while &p * &p <= n && p <= bound {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            factors.push((p.clone(), k));
        }
        p += 2;
    }
    if n.is_one() {
        return Some(factors);
    }
    if &p * &p > n {
        // The loop ran out of candidates below sqrt(n): n is prime.
        factors.push((n, 1));
        return Some(factors);
    }
    // Cofactor above the bound: only acceptable if it is an exact power of a
    // provable prime.
    if let Some(s) = perfect_sqrt(&n) {
        let inner = factorize(&s)?;
        for (q, k) in inner {
            factors.push((q, 2 * k));
        }
        return Some(factors);
    }
    None
}

/// All divisors of a nonzero integer, both signs. `None` when the number
/// cannot be fully factored, in which case the divisor list would be
/// incomplete and any conclusion drawn from it unsound.
pub fn all_divisors(v: &BigInt) -> Option<Vec<BigInt>> {
    let factors = factorize(v)?;
    let mut divs = vec![BigInt::one()];
    for (p, k) in factors {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pw);
                pw *= &p;
            }
        }
        divs = next;
    }
    let negs: Vec<BigInt> = divs.iter().map(|d| -d).collect();
    divs.extend(negs);
    Some(divs)
}
