use super::snf::local_snf;
use super::PlecticError;
use crate::group::FiniteGroup;
use std::collections::VecDeque;

/// Dense matrix over `Z/n`, row-major.
pub type Matrix = Vec<Vec<u64>>;

pub fn identity(k: usize) -> Matrix {
    (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, n: u64) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let s: u128 = row.iter().zip(b).map(|(&x, br)| x as u128 * br[j] as u128).sum();
                    (s % n as u128) as u64
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[u64], n: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            let s: u128 = row.iter().zip(v).map(|(&x, &y)| x as u128 * y as u128).sum();
            (s % n as u128) as u64
        })
        .collect()
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Finite module `(Z/n)^k` with a linear action of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    modulus: u64,
    rank: usize,
    action: Vec<Matrix>,
}

impl GModule {
    /// Validates shapes and the homomorphism law over all pairs; invertibility
    /// follows from `A(e) = I`.
    pub fn new(group: &FiniteGroup, modulus: u64, action: Vec<Matrix>) -> Result<Self, PlecticError> {
        let bad = |s: String| Err(PlecticError::BadModule(s));
        if modulus < 2 {
            return bad(format!("modulus {modulus} < 2"));
        }
        if action.len() != group.order() {
            return bad(format!("{} matrices for a group of order {}", action.len(), group.order()));
        }
        let rank = action.first().map_or(0, Vec::len);
        if rank == 0 {
            return bad("rank 0".into());
        }
        let action: Vec<Matrix> = action
            .into_iter()
            .map(|m| m.into_iter().map(|row| row.into_iter().map(|x| x % modulus).collect()).collect())
            .collect();
        if action.iter().any(|m| m.len() != rank || m.iter().any(|row| row.len() != rank)) {
            return bad("matrices are not all square of the same size".into());
        }
        if action[group.identity()] != identity(rank) {
            return bad("identity does not act trivially".into());
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if action[group.mul(g, h)] != mat_mul(&action[g], &action[h], modulus) {
                    return Err(PlecticError::NotAHomomorphism(g, h));
                }
            }
        }
        Ok(GModule { modulus, rank, action })
    }

    pub fn trivial(group: &FiniteGroup, modulus: u64, rank: usize) -> Result<Self, PlecticError> {
        Self::new(group, modulus, vec![identity(rank); group.order()])
    }

    /// Rank one module where `g` acts by the scalar `value(g)`.
    pub fn scalar(
        group: &FiniteGroup,
        modulus: u64,
        value: impl Fn(usize) -> u64,
    ) -> Result<Self, PlecticError> {
        Self::new(group, modulus, (0..group.order()).map(|g| vec![vec![value(g)]]).collect())
    }

    /// Extend prescribed images of generators along the Cayley graph.
    pub fn from_generators(
        group: &FiniteGroup,
        modulus: u64,
        rank: usize,
        images: &[(usize, Matrix)],
    ) -> Result<Self, PlecticError> {
        let n = group.order();
        let mut action: Vec<Option<Matrix>> = vec![None; n];
        action[group.identity()] = Some(identity(rank));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(g) = queue.pop_front() {
            for (s, a) in images {
                if *s >= n || a.len() != rank || a.iter().any(|row| row.len() != rank) {
                    return Err(PlecticError::BadModule(format!("bad generator image for element {s}")));
                }
                let gs = group.mul(g, *s);
                let m = mat_mul(action[g].as_ref().unwrap(), a, modulus);
                match &action[gs] {
                    Some(existing) if *existing != m => return Err(PlecticError::NotAHomomorphism(g, *s)),
                    Some(_) => {}
                    None => {
                        action[gs] = Some(m);
                        queue.push_back(gs);
                    }
                }
            }
        }
        let action: Option<Vec<Matrix>> = action.into_iter().collect();
        let action = action.ok_or_else(|| PlecticError::BadModule("images do not generate the group".into()))?;
        Self::new(group, modulus, action)
    }

    /// Same module viewed over another group through `hom: source -> group`.
    pub fn pullback(&self, source: &FiniteGroup, hom: &[usize]) -> Result<Self, PlecticError> {
        Self::new(source, self.modulus, hom.iter().map(|&g| self.action[g].clone()).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    pub fn act(&self, g: usize, v: &[u64]) -> Vec<u64> {
        mat_vec(&self.action[g], v, self.modulus)
    }

    /// `|M| = n^k`, saturating.
    pub fn carrier_size(&self) -> u128 {
        (self.modulus as u128).saturating_pow(self.rank as u32)
    }

    /// Number of vectors fixed by the whole group.
    pub fn invariants_size(&self) -> u128 {
        let k = self.rank;
        let mut rows: Matrix = Vec::new();
        for a in &self.action {
            for (i, row) in a.iter().enumerate() {
                rows.push(
                    row.iter()
                        .enumerate()
                        .map(|(j, &x)| (x + self.modulus - u64::from(i == j)) % self.modulus)
                        .collect(),
                );
            }
        }
        let mut total: u128 = 1;
        for (p, e) in factorize(self.modulus) {
            let pe = p.pow(e);
            let local: Matrix = rows.iter().map(|r| r.iter().map(|x| x % pe).collect()).collect();
            let snf = local_snf(&local, k, p, e);
            for v in snf.valuations {
                total *= (p as u128).pow(v);
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(7), vec![(7, 1)]);
    }

    #[test]
    fn generator_extension_and_invariants() {
        let c3 = FiniteGroup::cyclic(3);
        let m = GModule::from_generators(&c3, 2, 2, &[(1, vec![vec![0, 1], vec![1, 1]])]).unwrap();
        assert_eq!(m.invariants_size(), 1);
        assert_eq!(GModule::trivial(&c3, 4, 1).unwrap().invariants_size(), 4);
        let c2 = FiniteGroup::cyclic(2);
        // -1 on Z/4 fixes {0, 2}
        let neg = GModule::scalar(&c2, 4, |g| if g == 0 { 1 } else { 3 }).unwrap();
        assert_eq!(neg.invariants_size(), 2);
        // x2 has order 3 mod 7, so it cannot define a Z/2 action
        assert!(GModule::from_generators(&c2, 7, 1, &[(1, vec![vec![2]])]).is_err());
    }
}
