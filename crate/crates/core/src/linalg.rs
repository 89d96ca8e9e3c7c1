//! Small exact linear algebra over Q and Z.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant by fraction-carrying Gaussian elimination.
pub fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Rank over Q.
pub fn rank_rational(mut a: Vec<Vec<BigRational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        let p = a[rank][col].clone();
        for r in 0..rows {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..cols {
                let t = &f * &a[rank][c];
                a[r][c] -= t;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over Q of an integer matrix.
pub fn rank_int(a: &[Vec<i64>]) -> usize {
    rank_rational(
        a.iter()
            .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect(),
    )
}

/// Integer determinant via Bareiss fraction-free elimination.
pub fn det_bigint(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(piv) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, piv);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinants of the leading principal `k x k` submatrices, `k = 1..=n`.
pub fn leading_minors(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    (1..=a.len())
        .map(|k| {
            let sub: Vec<Vec<BigInt>> = a[..k].iter().map(|row| row[..k].to_vec()).collect();
            det_bigint(&sub)
        })
        .collect()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}
