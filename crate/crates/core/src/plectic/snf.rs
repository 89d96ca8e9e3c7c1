//! Smith normal form over the local ring `Z/p^e`.

use super::module::Matrix;

/// Result of `P A Q = diag(p^v_0, p^v_1, ...)`. `valuations[t]` is the
/// valuation of the `t`-th diagonal entry, `e` for the zero columns, so the
/// kernel of `A` is `Q` applied to `sum_t p^(e - v_t) Z/p^e`.
#[derive(Clone, Debug)]
pub struct LocalSnf {
    pub valuations: Vec<u32>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub q: Matrix,
    pub q_inv: Matrix,
}

fn valuation(x: u64, p: u64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    let mut x = x;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

pub fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{a} is not a unit mod {m}");
    t0.rem_euclid(m as i128) as u64
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn submod(a: u64, b: u64, m: u64) -> u64 {
    (a + m - b % m) % m
}

pub fn local_snf(a: &Matrix, cols: usize, p: u64, e: u32) -> LocalSnf {
    let m = p.pow(e);
    let mut a: Matrix = a.iter().map(|r| r.iter().map(|x| x % m).collect()).collect();
    let rows = a.len();
    let mut q: Matrix = (0..cols).map(|i| (0..cols).map(|j| u64::from(i == j)).collect()).collect();
    let mut q_inv = q.clone();
    let mut valuations = Vec::with_capacity(cols);
    for t in 0..cols.min(rows) {
        // pivot of least valuation in the remaining block
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let v = valuation(x, p, e);
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else {
            break;
        };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in q.iter_mut() {
                row.swap(t, pj);
            }
            q_inv.swap(t, pj);
        }
        let pv = p.pow(v);
        let unit = inverse_mod(a[t][t] / pv, m);
        for x in a[t].iter_mut() {
            *x = mulmod(*x, unit, m);
        }
        debug_assert_eq!(a[t][t], pv);
        let pivot_row = a[t].clone();
        for i in 0..rows {
            if i == t || a[i][t] == 0 {
                continue;
            }
            let f = a[i][t] / pv;
            for (x, &y) in a[i].iter_mut().zip(&pivot_row) {
                *x = submod(*x, mulmod(f, y, m), m);
            }
        }
        for j in t + 1..cols {
            if a[t][j] == 0 {
                continue;
            }
            let f = a[t][j] / pv;
            // column j -= f * column t, on A and on Q; row t += f * row j on Q^-1
            for row in a.iter_mut() {
                row[j] = submod(row[j], mulmod(f, row[t], m), m);
            }
            for row in q.iter_mut() {
                row[j] = submod(row[j], mulmod(f, row[t], m), m);
            }
            let row_j = q_inv[j].clone();
            for (x, y) in q_inv[t].iter_mut().zip(row_j) {
                *x = (*x + mulmod(f, y, m)) % m;
            }
        }
        valuations.push(v);
    }
    valuations.resize(cols, e);
    LocalSnf { valuations, q, q_inv }
}
