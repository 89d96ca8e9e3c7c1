//! Finite groups given by multiplication tables, and permutation actions.

use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};
use thiserror::Error;

/// Largest order for which associativity is checked on every triple.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not square or has out-of-range entries")]
    MalformedTable,
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("elements {0:?} do not form a subgroup")]
    NotASubgroup(Vec<usize>),
    #[error("action is not a homomorphism at ({0}, {1})")]
    NotAnAction(usize, usize),
    #[error("action has {got} permutations, group has order {expected}")]
    ActionSize { expected: usize, got: usize },
    #[error("unknown group name {0:?}")]
    UnknownName(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    /// Permutation realisation, when the group was built from permutations.
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(GroupError::MalformedTable);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(GroupError::NoInverse(g))?;
            inverse.push(inv);
        }
        let group = FiniteGroup { table, identity, inverse, perms: None };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<(), GroupError> {
        let n = self.order();
        let t = &self.table;
        let check = |a: usize, b: usize, c: usize| {
            if t[t[a][b]][c] == t[a][t[b][c]] {
                Ok(())
            } else {
                Err(GroupError::NotAssociative(a, b, c))
            }
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            // deterministic xorshift sample of triples
            let mut s: u64 = 0x9e37_79b9_7f4a_7c15 ^ n as u64;
            let mut next = || {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s % n as u64) as usize
            };
            for _ in 0..200_000 {
                let (a, b, c) = (next(), next(), next());
                check(a, b, c)?;
            }
        }
        Ok(())
    }

    /// Close a set of permutations of `0..degree` under composition.
    /// Element 0 is the identity; the product `a * b` applies `b` first.
    pub fn from_permutations(gens: &[Vec<usize>], degree: usize) -> Self {
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p = compose(g, &elems[i]);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let table = (0..n)
            .map(|a| (0..n).map(|b| index[&compose(&elems[a], &elems[b])]).collect())
            .collect();
        let inverse = (0..n).map(|a| index[&invert(&elems[a])]).collect();
        FiniteGroup { table, identity: 0, inverse, perms: Some(elems) }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n`, element `k` is the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        let perms = (0..n).map(|a| (0..n).map(|i| (i + a) % n).collect()).collect();
        FiniteGroup { table, identity: 0, inverse, perms: Some(perms) }
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(cyc);
        }
        Self::from_permutations(&gens, n)
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                // 3-cycle (0 1 k)
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(&gens, n)
    }

    /// Dihedral group of order `2n` acting on an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rot, refl], n)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        let inverse = (0..n).map(|x| a.inv(x / nb) * nb + b.inv(x % nb)).collect();
        FiniteGroup { table, identity: a.identity * nb + b.identity, inverse, perms: None }
    }

    /// Standard names: `Cn`, `Sn`, `An`, `Dn` (order 2n), `C2xC2`, and
    /// products `GxH` of those.
    pub fn by_name(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownName(name.to_string());
        if let Some((l, r)) = name.split_once('x') {
            return Ok(Self::direct_product(&Self::by_name(l)?, &Self::by_name(r)?));
        }
        if name.len() < 2 || !name.is_ascii() {
            return Err(unknown());
        }
        let (kind, num) = name.split_at(1);
        let k: usize = num.parse().map_err(|_| unknown())?;
        match (kind, k) {
            ("C", 1..=64) => Ok(Self::cyclic(k)),
            ("S", 1..=5) => Ok(Self::symmetric(k)),
            ("A", 3..=5) => Ok(Self::alternating(k)),
            ("D", 3..=32) => Ok(Self::dihedral(k)),
            _ => Err(unknown()),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn permutation(&self, g: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[g].as_slice())
    }

    /// Index of the element realised by permutation `p`, if any.
    pub fn find_permutation(&self, p: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|q| q == p)
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&x| x < self.order())
            && set.contains(&self.identity)
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for g in 0..self.order() {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.generated(&gens);
            }
            if span.len() == self.order() {
                break;
            }
        }
        gens
    }

    /// Greedy transversal of the left cosets `tH`, starting with the identity.
    pub fn left_transversal(&self, sub: &[usize]) -> Result<Vec<usize>, GroupError> {
        if !self.is_subgroup(sub) {
            return Err(GroupError::NotASubgroup(sub.to_vec()));
        }
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        let mut order: Vec<usize> = vec![self.identity];
        order.extend((0..self.order()).filter(|&g| g != self.identity));
        for g in order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &h in sub {
                covered[self.mul(g, h)] = true;
            }
        }
        Ok(reps)
    }

    /// Restrict to a subgroup, relabelling elements `0..|H|` in the order of
    /// `sub`. Returns the group and the embedding.
    pub fn subgroup(&self, sub: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_subgroup(sub) {
            return Err(GroupError::NotASubgroup(sub.to_vec()));
        }
        let pos: HashMap<usize, usize> = sub.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = sub
            .iter()
            .map(|&a| sub.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let mut h = FiniteGroup::from_table(table)?;
        if let Some(p) = &self.perms {
            h.perms = Some(sub.iter().map(|&g| p[g].clone()).collect());
        }
        Ok((h, sub.to_vec()))
    }

    /// Commutator subgroup `[G, G]`.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let n = self.order();
        let comms: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        self.generated(&comms)
    }

    /// Label of each element in `G / [G, G]` (coset index), and the number of
    /// cosets.
    pub fn abelianization(&self) -> (Vec<usize>, usize) {
        let derived = self.derived_subgroup();
        let mut label = vec![usize::MAX; self.order()];
        let mut next = 0;
        for g in 0..self.order() {
            if label[g] != usize::MAX {
                continue;
            }
            for &k in &derived {
                label[self.mul(g, k)] = next;
            }
            next += 1;
        }
        (label, next)
    }
}

/// `a ∘ b`: apply `b` first.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Left action of a finite group on `0..degree` by permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermAction {
    pub degree: usize,
    pub perms: Vec<Vec<usize>>,
}

impl PermAction {
    pub fn trivial(group: &FiniteGroup, degree: usize) -> Self {
        PermAction { degree, perms: vec![(0..degree).collect(); group.order()] }
    }

    pub fn new(group: &FiniteGroup, degree: usize, perms: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        if perms.len() != group.order() {
            return Err(GroupError::ActionSize { expected: group.order(), got: perms.len() });
        }
        for p in &perms {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (0..degree).collect::<Vec<_>>() {
                return Err(GroupError::MalformedTable);
            }
        }
        let action = PermAction { degree, perms };
        for g in 0..group.order() {
            for h in 0..group.order() {
                if action.perms[group.mul(g, h)] != compose(&action.perms[g], &action.perms[h]) {
                    return Err(GroupError::NotAnAction(g, h));
                }
            }
        }
        Ok(action)
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    pub fn fixed_points(&self, g: usize) -> usize {
        self.perms[g].iter().enumerate().filter(|(i, &j)| *i == j).count()
    }

    pub fn permutation_character(&self) -> Vec<i64> {
        (0..self.perms.len()).map(|g| self.fixed_points(g) as i64).collect()
    }
}
