use super::module::{factorize, GModule, Matrix};
use super::snf::local_snf;
use super::PlecticError;
use crate::group::FiniteGroup;

/// Bound on `|G| * |M|` for the linear systems below.
pub const FEASIBILITY_LIMIT: u128 = 1_000_000;

/// `H^1(G, M)` as a sorted list of prime-power elementary divisors; the
/// empty list is the zero group.
///
/// Cocycles are the solutions of `f(g s) = f(g) + g f(s)` for `s` running
/// over a generating set, which forces the identity for every pair by
/// induction on word length.
pub fn h1(group: &FiniteGroup, module: &GModule) -> Result<Vec<u64>, PlecticError> {
    let size = (group.order() as u128).saturating_mul(module.carrier_size());
    if size > FEASIBILITY_LIMIT {
        return Err(PlecticError::TooLarge { size });
    }
    let mut divisors = Vec::new();
    for (p, e) in factorize(module.modulus()) {
        divisors.extend(local_h1(group, module, p, e));
    }
    divisors.sort_unstable();
    Ok(divisors)
}

fn local_h1(group: &FiniteGroup, module: &GModule, p: u64, e: u32) -> Vec<u64> {
    let pe = p.pow(e);
    let k = module.rank();
    let n = group.order();
    let unknowns = n * k;
    let idx = |g: usize, c: usize| g * k + c;
    let mut rows: Matrix = Vec::new();
    for c in 0..k {
        let mut row = vec![0; unknowns];
        row[idx(group.identity(), c)] = 1;
        rows.push(row);
    }
    for s in group.generators() {
        for g in 0..n {
            let gs = group.mul(g, s);
            let a = module.matrix(g);
            for c in 0..k {
                let mut row = vec![0u64; unknowns];
                row[idx(gs, c)] = (row[idx(gs, c)] + 1) % pe;
                row[idx(g, c)] = (row[idx(g, c)] + pe - 1) % pe;
                for d in 0..k {
                    let coeff = a[c][d] % pe;
                    row[idx(s, d)] = (row[idx(s, d)] + pe - coeff) % pe;
                }
                rows.push(row);
            }
        }
    }
    let snf = local_snf(&rows, unknowns, p, e);
    // Z^1 = sum_t Z/p^v_t in the coordinates z_t = y_t / p^(e - v_t), y = Q^-1 x
    let live: Vec<usize> = (0..unknowns).filter(|&t| snf.valuations[t] > 0).collect();
    let mut relations: Matrix = Vec::new();
    for j in 0..k {
        // coboundary of the j-th basis vector: g -> g e_j - e_j
        let mut x = vec![0u64; unknowns];
        for g in 0..n {
            let a = module.matrix(g);
            for c in 0..k {
                x[idx(g, c)] = (a[c][j] % pe + pe - u64::from(c == j)) % pe;
            }
        }
        let y: Vec<u64> = snf
            .q_inv
            .iter()
            .map(|row| {
                let s: u128 = row.iter().zip(&x).map(|(&a, &b)| a as u128 * b as u128).sum();
                (s % pe as u128) as u64
            })
            .collect();
        let rel = live
            .iter()
            .map(|&t| {
                let shift = p.pow(e - snf.valuations[t]);
                assert_eq!(y[t] % shift, 0, "coboundary outside the cocycle lattice");
                y[t] / shift
            })
            .collect();
        relations.push(rel);
    }
    for (col, &t) in live.iter().enumerate() {
        let mut row = vec![0; live.len()];
        row[col] = p.pow(snf.valuations[t]) % pe;
        relations.push(row);
    }
    let quotient = local_snf(&relations, live.len(), p, e);
    quotient
        .valuations
        .into_iter()
        .filter(|&u| u > 0)
        .map(|u| p.pow(u))
        .collect()
}
