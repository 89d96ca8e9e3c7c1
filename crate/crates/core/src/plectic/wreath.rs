//! Wreath products `G^k ⋊ Sym(k)` with the convention
//! `(f, π)(f', π') = (f · (f' ∘ π^-1), π π')`, acting on `M^k` by
//! `(f, π) · m = (f(i) m_{π^-1(i)})_i`.

use super::module::{GModule, Matrix};
use super::PlecticError;
use crate::group::{compose, invert, FiniteGroup};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub f: Vec<usize>,
    pub pi: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WreathGroup {
    base: FiniteGroup,
    size: usize,
    perms: Vec<Vec<usize>>,
    perm_index: HashMap<Vec<usize>, usize>,
}

/// Largest wreath product we realize as a multiplication table.
const MAX_REALIZED: usize = 2000;

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

impl WreathGroup {
    pub fn new(base: FiniteGroup, size: usize) -> Self {
        let perms = all_permutations(size);
        let perm_index = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        WreathGroup { base, size, perms, perm_index }
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `|G|^k k!`, saturating.
    pub fn order(&self) -> usize {
        self.base
            .order()
            .checked_pow(self.size as u32)
            .and_then(|x| x.checked_mul(self.perms.len()))
            .unwrap_or(usize::MAX)
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement { f: vec![self.base.identity(); self.size], pi: (0..self.size).collect() }
    }

    pub fn mul(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        let pinv = invert(&a.pi);
        let f = (0..self.size).map(|i| self.base.mul(a.f[i], b.f[pinv[i]])).collect();
        WreathElement { f, pi: compose(&a.pi, &b.pi) }
    }

    /// `perm_rank * |G|^k + sum_i f_i |G|^i`.
    pub fn index(&self, e: &WreathElement) -> usize {
        let n = self.base.order();
        let base = e.f.iter().rev().fold(0, |acc, &x| acc * n + x);
        self.perm_index[&e.pi] * n.pow(self.size as u32) + base
    }

    pub fn element(&self, mut idx: usize) -> WreathElement {
        let n = self.base.order();
        let nk = n.pow(self.size as u32);
        let pi = self.perms[idx / nk].clone();
        idx %= nk;
        let f = (0..self.size)
            .map(|_| {
                let x = idx % n;
                idx /= n;
                x
            })
            .collect();
        WreathElement { f, pi }
    }

    pub fn from_base(&self, f: Vec<usize>) -> WreathElement {
        WreathElement { f, pi: (0..self.size).collect() }
    }

    pub fn from_perm(&self, pi: Vec<usize>) -> WreathElement {
        WreathElement { f: vec![self.base.identity(); self.size], pi }
    }

    /// Multiplication table, for small orders.
    pub fn realize(&self) -> Result<FiniteGroup, PlecticError> {
        let order = self.order();
        if order > MAX_REALIZED {
            return Err(PlecticError::TooLarge { size: order as u128 });
        }
        let elems: Vec<WreathElement> = (0..order).map(|i| self.element(i)).collect();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| self.index(&self.mul(a, b))).collect())
            .collect();
        Ok(FiniteGroup::from_table(table)?)
    }

    /// Block matrix of `(f, π)` on `M^k`: block row `i`, block column
    /// `π^-1(i)` holds the action of `f(i)`.
    pub fn coinduced_matrix(&self, module: &GModule, e: &WreathElement) -> Matrix {
        let k = module.rank();
        let pinv = invert(&e.pi);
        let mut out = vec![vec![0; k * self.size]; k * self.size];
        for i in 0..self.size {
            let a = module.matrix(e.f[i]);
            let j = pinv[i];
            for r in 0..k {
                for c in 0..k {
                    out[i * k + r][j * k + c] = a[r][c];
                }
            }
        }
        out
    }
}

/// `M^k` as a module over the realized wreath product (indexed by
/// [`WreathGroup::index`]).
pub fn coinduced_module(
    module: &GModule,
    wreath: &WreathGroup,
) -> Result<(FiniteGroup, GModule), PlecticError> {
    let w = wreath.realize()?;
    let action = (0..w.order()).map(|i| wreath.coinduced_matrix(module, &wreath.element(i))).collect();
    let m = GModule::new(&w, module.modulus(), action)?;
    Ok((w, m))
}

/// Coset embedding of `Q` into `H ≀ Sym(Q/H)` attached to a left
/// transversal `t_0, ..., t_{k-1}`: `q t_i = t_{π(i)} h_i`, and the base
/// coordinate at position `π(i)` is `h_i`.
#[derive(Clone, Debug)]
pub struct CosetEmbedding {
    pub wreath: WreathGroup,
    pub subgroup: FiniteGroup,
    /// Elements of `Q` in the order of the subgroup's labels.
    pub sub: Vec<usize>,
    pub transversal: Vec<usize>,
    pub images: Vec<WreathElement>,
}

pub fn wreath_embedding(
    q: &FiniteGroup,
    sub: &[usize],
    transversal: &[usize],
) -> Result<CosetEmbedding, PlecticError> {
    if !q.is_subgroup(sub) {
        return Err(PlecticError::NotASubgroup);
    }
    let (h, _) = q.subgroup(sub)?;
    let pos: HashMap<usize, usize> = sub.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let k = q.order() / sub.len();
    if transversal.len() != k {
        return Err(PlecticError::BadTransversal(format!(
            "{} representatives for index {k}",
            transversal.len()
        )));
    }
    let mut seen = vec![false; q.order()];
    for &t in transversal {
        for &x in sub {
            let y = q.mul(t, x);
            if seen[y] {
                return Err(PlecticError::BadTransversal(format!("representative {t} repeats a coset")));
            }
            seen[y] = true;
        }
    }
    // coset index of every element
    let mut coset = vec![0; q.order()];
    for (i, &t) in transversal.iter().enumerate() {
        for &x in sub {
            coset[q.mul(t, x)] = i;
        }
    }
    let wreath = WreathGroup::new(h.clone(), k);
    let mut images = Vec::with_capacity(q.order());
    for g in 0..q.order() {
        let pi: Vec<usize> = transversal.iter().map(|&t| coset[q.mul(g, t)]).collect();
        let mut f = vec![0; k];
        for (i, &t) in transversal.iter().enumerate() {
            let j = pi[i];
            let hi = q.mul(q.inv(transversal[j]), q.mul(g, t));
            f[j] = pos[&hi];
        }
        images.push(WreathElement { f, pi });
    }
    let emb = CosetEmbedding { wreath, subgroup: h, sub: sub.to_vec(), transversal: transversal.to_vec(), images };
    emb.verify(q)?;
    Ok(emb)
}

impl CosetEmbedding {
    /// Exhaustive injectivity and homomorphism check.
    pub fn verify(&self, q: &FiniteGroup) -> Result<(), PlecticError> {
        let mut distinct: Vec<usize> = self.images.iter().map(|e| self.wreath.index(e)).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != q.order() {
            return Err(PlecticError::BadTransversal("embedding is not injective".into()));
        }
        for a in 0..q.order() {
            for b in 0..q.order() {
                if self.wreath.mul(&self.images[a], &self.images[b]) != self.images[q.mul(a, b)] {
                    return Err(PlecticError::NotAHomomorphism(a, b));
                }
            }
        }
        Ok(())
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    /// `M^k` restricted to `Q` along the embedding.
    pub fn restricted_module(&self, q: &FiniteGroup, module: &GModule) -> Result<GModule, PlecticError> {
        let action = self.images.iter().map(|e| self.wreath.coinduced_matrix(module, e)).collect();
        GModule::new(q, module.modulus(), action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wreath_law_and_embeddings() {
        let w = WreathGroup::new(FiniteGroup::cyclic(2), 3);
        assert_eq!(w.order(), 48);
        let g = w.realize().unwrap();
        assert_eq!(g.order(), 48);
        for i in 0..48 {
            assert_eq!(w.index(&w.element(i)), i);
        }
        // base and permutation subgroups embed homomorphically
        let a = w.from_base(vec![1, 0, 1]);
        let b = w.from_base(vec![1, 1, 0]);
        assert_eq!(w.mul(&a, &b), w.from_base(vec![0, 1, 1]));
        let s = w.from_perm(vec![1, 2, 0]);
        let t = w.from_perm(vec![1, 0, 2]);
        assert_eq!(w.mul(&s, &t), w.from_perm(compose(&[1, 2, 0], &[1, 0, 2])));
        // conjugating the base by a permutation moves coordinates
        let conj = w.mul(&w.mul(&s, &w.from_base(vec![1, 0, 0])), &w.from_perm(invert(&[1, 2, 0])));
        assert_eq!(conj.f, vec![0, 1, 0]);
    }

    #[test]
    fn coset_embeddings() {
        let c4 = FiniteGroup::cyclic(4);
        let e = wreath_embedding(&c4, &[0, 2], &[0, 1]).unwrap();
        assert_eq!(e.wreath.order(), 8);
        let s3 = FiniteGroup::symmetric(3);
        let swap = s3.find_permutation(&[1, 0, 2]).unwrap();
        let sub = s3.generated(&[swap]);
        let tr = s3.left_transversal(&sub).unwrap();
        let e = wreath_embedding(&s3, &sub, &tr).unwrap();
        assert_eq!(e.wreath.order(), 48);
        let same = wreath_embedding(&s3, &(0..6).collect::<Vec<_>>(), &[0]).unwrap();
        assert!(same.images.iter().all(|x| x.pi == vec![0]));
        assert!(matches!(wreath_embedding(&c4, &[0, 2], &[0, 2]), Err(PlecticError::BadTransversal(_))));
        assert!(matches!(wreath_embedding(&c4, &[0, 1], &[0, 2]), Err(PlecticError::NotASubgroup)));
    }

    #[test]
    fn coinduced_examples() {
        let c2 = FiniteGroup::cyclic(2);
        let m = GModule::scalar(&c2, 3, |g| if g == 0 { 1 } else { 2 }).unwrap();
        let (w, mw) = coinduced_module(&m, &WreathGroup::new(c2.clone(), 2)).unwrap();
        assert_eq!((w.order(), mw.carrier_size()), (8, 9));
        let (w1, m1) = coinduced_module(&m, &WreathGroup::new(c2.clone(), 1)).unwrap();
        assert_eq!(w1.order(), 2);
        assert_eq!(m1.matrix(1), m.matrix(1));
        let triv = GModule::trivial(&c2, 5, 1).unwrap();
        let (w, mt) = coinduced_module(&triv, &WreathGroup::new(c2, 2)).unwrap();
        assert_eq!(mt.invariants_size(), 5);
        assert_eq!(w.order(), 8);
    }
}
