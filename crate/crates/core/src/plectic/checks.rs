use super::cohomology::h1;
use super::module::GModule;
use super::wreath::{coinduced_module, wreath_embedding, CosetEmbedding, WreathGroup};
use super::PlecticError;
use crate::group::FiniteGroup;
use crate::linalg::subsets;
use serde::Serialize;

/// Two divisor lists that must agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(lhs: Vec<u64>, rhs: Vec<u64>) -> Self {
        let passed = lhs == rhs;
        CheckOutcome { lhs, rhs, passed }
    }
}

/// `H^1(Q, M^k)` with `Q` acting through the coset embedding, against
/// `H^1(H, M)`. `module` is over the subgroup labelled in the order of `sub`.
pub fn shapiro_check(q: &FiniteGroup, sub: &[usize], module: &GModule) -> Result<CheckOutcome, PlecticError> {
    let transversal = q.left_transversal(sub)?;
    let emb = wreath_embedding(q, sub, &transversal)?;
    let big = emb.restricted_module(q, module)?;
    Ok(CheckOutcome::new(h1(q, &big)?, h1(&emb.subgroup, module)?))
}

/// `H^1(G ≀ Sym(k), M^k)` against `H^1(G, M)`, for `M^G = 0`.
pub fn plectic_h1_check(group: &FiniteGroup, size: usize, module: &GModule) -> Result<CheckOutcome, PlecticError> {
    let fixed = module.invariants_size();
    if fixed != 1 {
        return Err(PlecticError::InvariantsNonzero(fixed));
    }
    let (w, mw) = coinduced_module(module, &WreathGroup::new(group.clone(), size))?;
    Ok(CheckOutcome::new(h1(&w, &mw)?, h1(group, module)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorInductionOutcome {
    pub m: usize,
    pub dimension: usize,
    /// Character of the degree-`m` part of the tensor induction.
    pub tensor: Vec<i64>,
    /// Character of the unsigned `m`-subset power of the induced module.
    pub induced: Vec<i64>,
    pub passed: bool,
}

fn check_character(h: &FiniteGroup, chi: &[i64]) -> Result<(), PlecticError> {
    if chi.len() != h.order() {
        return Err(PlecticError::BadCharacter(format!("{} values for a group of order {}", chi.len(), h.order())));
    }
    if chi.iter().any(|&x| x != 1 && x != -1) {
        return Err(PlecticError::BadCharacter("values must be +1 or -1".into()));
    }
    for a in 0..h.order() {
        for b in 0..h.order() {
            if chi[h.mul(a, b)] != chi[a] * chi[b] {
                return Err(PlecticError::BadCharacter(format!("not multiplicative at ({a}, {b})")));
            }
        }
    }
    Ok(())
}

fn kron(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![0; na * nb]; na * nb];
    for i in 0..na {
        for k in 0..na {
            for j in 0..nb {
                for l in 0..nb {
                    out[i * nb + j][k * nb + l] = a[i][k] * b[j][l];
                }
            }
        }
    }
    out
}

fn mat_mul_i(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect())
        .collect()
}

/// Matrix of `(f, π)` on `(1 ⊕ chi)^{⊗k}`, basis vector `S` (a bitmask of
/// the positions carrying the `chi` line). Tensor factors are permuted
/// without signs.
fn tensor_matrix(emb: &CosetEmbedding, chi: &[i64], g: usize) -> Vec<Vec<i64>> {
    let e = &emb.images[g];
    let k = emb.index();
    let dim = 1usize << k;
    let mut perm = vec![vec![0; dim]; dim];
    for s in 0..dim {
        let t = (0..k).filter(|&j| s >> j & 1 == 1).fold(0, |acc, j| acc | 1 << e.pi[j]);
        perm[t][s] = 1;
    }
    // factor 0 ends up in the least significant bit
    let diag = (0..k).rev().fold(vec![vec![1]], |acc, i| kron(&acc, &[vec![1, 0], vec![0, chi[e.f[i]]]]));
    mat_mul_i(&diag, &perm)
}

fn permanent(m: &[Vec<i64>]) -> i64 {
    fn rec(m: &[Vec<i64>], row: usize, used: &mut Vec<bool>) -> i64 {
        if row == m.len() {
            return 1;
        }
        let mut acc = 0;
        for c in 0..m.len() {
            if !used[c] && m[row][c] != 0 {
                used[c] = true;
                acc += m[row][c] * rec(m, row + 1, used);
                used[c] = false;
            }
        }
        acc
    }
    rec(m, 0, &mut vec![false; m.len()])
}

/// Monomial matrix of `Ind(chi)` computed directly from the coset action.
fn induced_matrix(q: &FiniteGroup, sub: &[usize], transversal: &[usize], chi: &[i64], g: usize) -> Vec<Vec<i64>> {
    let k = transversal.len();
    let mut out = vec![vec![0; k]; k];
    for (i, &t) in transversal.iter().enumerate() {
        let x = q.mul(g, t);
        for (j, &tj) in transversal.iter().enumerate() {
            let h = q.mul(q.inv(tj), x);
            if let Some(pos) = sub.iter().position(|&s| s == h) {
                out[j][i] = chi[pos];
            }
        }
    }
    out
}

/// Degree-`m` part of the unsigned tensor induction of `1 ⊕ chi` against
/// the unsigned `m`-subset power of `Ind(chi)`, pointwise on characters.
pub fn tensor_induction_check(
    q: &FiniteGroup,
    sub: &[usize],
    chi: &[i64],
    m: usize,
) -> Result<TensorInductionOutcome, PlecticError> {
    let transversal = q.left_transversal(sub)?;
    let emb = wreath_embedding(q, sub, &transversal)?;
    check_character(&emb.subgroup, chi)?;
    let k = emb.index();
    if m > k {
        return Err(PlecticError::OutOfRange { m, index: k });
    }
    let graded: Vec<usize> = (0..1usize << k).filter(|s| s.count_ones() as usize == m).collect();
    let sets = subsets(k, m);
    let mut tensor = Vec::with_capacity(q.order());
    let mut induced = Vec::with_capacity(q.order());
    for g in 0..q.order() {
        let t = tensor_matrix(&emb, chi, g);
        tensor.push(graded.iter().map(|&s| t[s][s]).sum());
        let ind = induced_matrix(q, sub, &transversal, chi, g);
        induced.push(
            sets.iter()
                .map(|set| {
                    let block: Vec<Vec<i64>> = set.iter().map(|&r| set.iter().map(|&c| ind[r][c]).collect()).collect();
                    permanent(&block)
                })
                .sum(),
        );
    }
    let passed = tensor == induced && graded.len() == sets.len();
    Ok(TensorInductionOutcome { m, dimension: graded.len(), tensor, induced, passed })
}

/// Transfer `Q -> H^ab` through the coset embedding: the product of the
/// base coordinates, as a label in the abelianization of `H`.
pub fn transfer(q: &FiniteGroup, sub: &[usize]) -> Result<Vec<usize>, PlecticError> {
    let transversal = q.left_transversal(sub)?;
    let emb = wreath_embedding(q, sub, &transversal)?;
    let h = &emb.subgroup;
    let (labels, _) = h.abelianization();
    let prod = |g: usize| emb.images[g].f.iter().fold(h.identity(), |acc, &x| h.mul(acc, x));
    let out: Vec<usize> = (0..q.order()).map(|g| labels[prod(g)]).collect();
    for a in 0..q.order() {
        for b in 0..q.order() {
            if out[q.mul(a, b)] != labels[h.mul(prod(a), prod(b))] {
                return Err(PlecticError::NotAHomomorphism(a, b));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapiro_examples() {
        let c4 = FiniteGroup::cyclic(4);
        let (h, _) = c4.subgroup(&[0, 2]).unwrap();
        let m = GModule::trivial(&h, 2, 1).unwrap();
        let out = shapiro_check(&c4, &[0, 2], &m).unwrap();
        assert_eq!((out.lhs.clone(), out.rhs.clone()), (vec![2], vec![2]));
        let s3 = FiniteGroup::symmetric(3);
        let sub = s3.generated(&[s3.find_permutation(&[1, 0, 2]).unwrap()]);
        let (h, _) = s3.subgroup(&sub).unwrap();
        assert!(shapiro_check(&s3, &sub, &GModule::trivial(&h, 2, 1).unwrap()).unwrap().passed);
    }

    #[test]
    fn plectic_examples() {
        let c2 = FiniteGroup::cyclic(2);
        let m = GModule::scalar(&c2, 3, |g| if g == 0 { 1 } else { 2 }).unwrap();
        let out = plectic_h1_check(&c2, 2, &m).unwrap();
        assert!(out.passed && out.lhs.is_empty());
        let s3 = FiniteGroup::symmetric(3);
        let sign = |g: usize| {
            let p = s3.permutation(g).unwrap();
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            if inversions % 2 == 0 { 1 } else { 2 }
        };
        let m = GModule::scalar(&s3, 3, sign).unwrap();
        let out = plectic_h1_check(&s3, 2, &m).unwrap();
        assert!(out.passed);
        assert_eq!(
            plectic_h1_check(&c2, 2, &GModule::trivial(&c2, 3, 1).unwrap()),
            Err(PlecticError::InvariantsNonzero(3))
        );
    }

    #[test]
    fn tensor_examples() {
        let c4 = FiniteGroup::cyclic(4);
        let out = tensor_induction_check(&c4, &[0, 2], &[1, -1], 1).unwrap();
        assert!(out.passed);
        assert_eq!(out.dimension, 2);
        let zero = tensor_induction_check(&c4, &[0, 2], &[1, -1], 0).unwrap();
        assert_eq!(zero.tensor, vec![1; 4]);
        let triv = tensor_induction_check(&c4, &[0, 2], &[1, 1], 1).unwrap();
        // permutation character of C4 on two cosets
        assert_eq!(triv.tensor, vec![2, 0, 2, 0]);
        assert!(matches!(tensor_induction_check(&c4, &[0, 2], &[1, -1], 3), Err(PlecticError::OutOfRange { .. })));
        assert!(matches!(tensor_induction_check(&c4, &[0, 2], &[1, 2], 1), Err(PlecticError::BadCharacter(_))));
    }

    #[test]
    fn transfer_to_abelianization() {
        // transfer C4 -> C2 sends the generator to the generator
        let c4 = FiniteGroup::cyclic(4);
        let v = transfer(&c4, &[0, 2]).unwrap();
        assert_eq!(v[0], v[2]);
        assert_ne!(v[0], v[1]);
        let s3 = FiniteGroup::symmetric(3);
        let a3 = s3.generated(&[s3.find_permutation(&[1, 2, 0]).unwrap()]);
        // S3 -> A3: the transfer is trivial on the transpositions
        let v = transfer(&s3, &a3).unwrap();
        assert!(v.iter().all(|&x| x == v[0]));
    }
}
