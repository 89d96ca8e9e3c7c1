//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored constant term first. The zero polynomial is the
//! empty coefficient vector, so `degree()` of zero is `None`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the polynomial at `x`, computed exactly.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    /// Sign of the polynomial as `x -> +inf` (`positive`) or `-inf`.
    pub fn sign_at_infinity(&self, positive: bool) -> Ordering {
        match self.degree() {
            None => Ordering::Equal,
            Some(d) => {
                let s = self.leading().cmp(&BigRational::zero());
                if positive || d % 2 == 0 {
                    s
                } else {
                    s.reverse()
                }
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&lc.recip())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division. Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] / &lc;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[top - dd + j] -= &c * b;
                }
            }
            quot[top - dd] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) && rem.len() > dd {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant `Res(self, other)` by the Euclidean recurrence.
    ///
    /// For a monic `self` with roots `t_i` this equals `prod_i other(t_i)`.
    pub fn resultant(&self, other: &Self) -> BigRational {
        let (Some(mut n), Some(mut m)) = (self.degree(), other.degree()) else {
            return BigRational::zero();
        };
        let mut f = self.clone();
        let mut g = other.clone();
        let mut acc = BigRational::one();
        loop {
            if m == 0 {
                return acc * num_traits::pow(g.leading(), n);
            }
            let r = f.rem(&g);
            let Some(k) = r.degree() else {
                return BigRational::zero();
            };
            if (n * m) % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(g.leading(), n - k);
            f = g;
            g = r;
            n = m;
            m = k;
        }
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_bigints(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Rational roots of an integer polynomial, by the rational root test.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let Some(ints) = self.clear_denominators().to_bigints() else {
            return Vec::new();
        };
        if ints.is_empty() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        // strip factors of x
        let lead_zeros = ints.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            roots.push(BigRational::zero());
        }
        let ints = &ints[lead_zeros..];
        if ints.len() <= 1 {
            return roots;
        }
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let num_divs = divisors(&a0);
        let den_divs = divisors(&an);
        for p in &num_divs {
            for q in &den_divs {
                for s in [1i32, -1] {
                    let cand = BigRational::new(p * BigInt::from(s), q.clone());
                    if self.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Multiply through by the lcm of the denominators.
    pub fn clear_denominators(&self) -> Self {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.scale(&BigRational::from_integer(l))
    }

    /// Cauchy bound: every root lies in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let lc = self.leading().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one()
    }
}

/// Count sign changes in a sequence of signs, ignoring zeros.
pub fn sign_changes(signs: impl IntoIterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn sturm_count(seq: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    let va = sign_changes(seq.iter().map(|p| p.sign_at(a)));
    let vb = sign_changes(seq.iter().map(|p| p.sign_at(b)));
    va.saturating_sub(vb)
}

/// Number of distinct real roots on the whole line.
pub fn sturm_count_total(seq: &[QPoly]) -> usize {
    let vneg = sign_changes(seq.iter().map(|p| p.sign_at_infinity(false)));
    let vpos = sign_changes(seq.iter().map(|p| p.sign_at_infinity(true)));
    vneg.saturating_sub(vpos)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let e = n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}
