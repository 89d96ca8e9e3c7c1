//! Totally real number fields `Q[x]/(f)` with certified real embeddings.
//!
//! A field is described by a monic integer polynomial `f` of degree `r >= 2`.
//! Its `r` real roots are isolated by Sturm sequences into disjoint rational
//! intervals, sorted by value; the embedding index set is that ordered list.
//! Elements are stored in the power basis of a fixed root.

use crate::interval::Interval;
use crate::linalg::subsets;
use crate::poly::{sturm_count, sturm_count_total, QPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

/// Degree up to which irreducibility is decided without a caller assertion.
pub const MAX_CHECKED_DEGREE: usize = 16;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("polynomial must have degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("polynomial must be monic with integer coefficients")]
    NotMonic,
    #[error("polynomial is reducible over Q: {0}")]
    NotIrreducible(String),
    #[error("polynomial has only {real} distinct real roots out of {degree}")]
    NotTotallyReal { real: usize, degree: usize },
    #[error("irreducibility of a degree {0} polynomial is not checked; pass assert_irreducible")]
    IrreducibilityUnverified(usize),
    #[error("element {index} is not a unit: {detail}")]
    NotAUnit { index: usize, detail: String },
    #[error("expected {expected} units, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("element has {got} coordinates, field degree is {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("embedding index {index} out of range for degree {degree}")]
    BadEmbedding { index: usize, degree: usize },
    #[error("malformed field spec: {0}")]
    Parse(String),
}

/// How irreducibility of the defining polynomial was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    /// Rational root test, squarefreeness, and exhaustive search over root
    /// subsets for monic integer factors.
    Checked,
    /// Taken on the caller's word.
    Asserted,
}

#[derive(Clone, Debug)]
pub struct TotallyRealField {
    poly: QPoly,
    int_coeffs: Vec<BigInt>,
    sturm: Vec<QPoly>,
    embeddings: Vec<Interval>,
    disc: BigInt,
    irreducibility: Irreducibility,
    /// Bisection history per embedding, so a request is answered the same
    /// way whatever was asked before.
    bisections: Arc<Mutex<Vec<Bisection>>>,
}

/// Element of the field in the power basis `1, t, ..., t^(r-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        FieldElement { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        FieldElement {
            coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords.iter().skip(1).all(Zero::is_zero) {
            Some(self.coords.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(rational_string).collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_poly())
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, NumFieldError> {
    let s = s.trim();
    let bad = || NumFieldError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Build a field from the coefficient list of a monic integer polynomial,
/// constant term first.
pub fn make_field(coeffs: &[i64]) -> Result<TotallyRealField, NumFieldError> {
    let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| c.into()).collect();
    TotallyRealField::new(&coeffs, false)
}

/// Bisection of an isolating interval `[a/d, b/d]`. After `j` steps the
/// lower end is `lo_num / (d 2^j)` and the width `(b - a) / (d 2^j)`.
#[derive(Debug)]
struct Bisection {
    base: Interval,
    den: BigInt,
    width_num: BigInt,
    lo_num: BigInt,
    /// Whether step `j` kept the right half.
    right: Vec<bool>,
    exact: Option<BigRational>,
}

impl Bisection {
    fn new(iv: &Interval) -> Self {
        let den = num_integer::Integer::lcm(iv.lo().denom(), iv.hi().denom());
        let a = iv.lo().numer() * (&den / iv.lo().denom());
        let b = iv.hi().numer() * (&den / iv.hi().denom());
        Bisection { base: iv.clone(), width_num: b - &a, lo_num: a, den, right: Vec::new(), exact: None }
    }

    fn interval_at(&self, j: usize) -> Interval {
        let a = self.base.lo().numer() * (&self.den / self.base.lo().denom());
        let mut t = BigInt::zero();
        for &r in &self.right[..j] {
            t = (t << 1usize) + u8::from(r);
        }
        let lo = (a << j) + &self.width_num * &t;
        let hi = &lo + &self.width_num;
        let den = &self.den << j;
        Interval::new(BigRational::new(lo, den.clone()), BigRational::new(hi, den))
    }
}

impl TotallyRealField {
    pub fn new(coeffs: &[BigInt], assert_irreducible: bool) -> Result<Self, NumFieldError> {
        let poly = QPoly::from_bigints(coeffs);
        let degree = poly.degree().unwrap_or(0);
        if degree < 2 {
            return Err(NumFieldError::DegreeTooSmall(degree));
        }
        if !poly.leading().is_one() {
            return Err(NumFieldError::NotMonic);
        }
        if let Some(root) = poly.rational_roots().first() {
            return Err(NumFieldError::NotIrreducible(format!(
                "rational root {}",
                rational_string(root)
            )));
        }
        let g = poly.gcd(&poly.derivative());
        if g.degree() != Some(0) {
            return Err(NumFieldError::NotIrreducible(format!("repeated factor {g}")));
        }
        let sturm = poly.sturm_sequence();
        let real = sturm_count_total(&sturm);
        if real != degree {
            return Err(NumFieldError::NotTotallyReal { real, degree });
        }
        let embeddings = isolate_roots(&poly, &sturm);
        debug_assert_eq!(embeddings.len(), degree);
        let disc = discriminant(&poly);
        let mut field = TotallyRealField {
            int_coeffs: coeffs.to_vec(),
            poly,
            sturm,
            bisections: Arc::new(Mutex::new(embeddings.iter().map(Bisection::new).collect())),
            embeddings,
            disc,
            irreducibility: Irreducibility::Asserted,
        };
        if !assert_irreducible {
            if degree > MAX_CHECKED_DEGREE {
                return Err(NumFieldError::IrreducibilityUnverified(degree));
            }
            if let Some(factor) = field.find_factor() {
                return Err(NumFieldError::NotIrreducible(format!("factor {factor}")));
            }
            field.irreducibility = Irreducibility::Checked;
        }
        Ok(field)
    }

    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.int_coeffs
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    /// Initial isolating intervals, in increasing order of the roots.
    pub fn embeddings(&self) -> &[Interval] {
        &self.embeddings
    }

    pub fn sturm_sequence(&self) -> &[QPoly] {
        &self.sturm
    }

    /// Search the monic integer polynomials whose roots are a subset of the
    /// (real) roots of `f`. Any monic factor over Z is one of these.
    fn find_factor(&self) -> Option<QPoly> {
        let r = self.degree();
        for d in 2..=r / 2 {
            let mut bits = 24;
            let mut pending: Vec<Vec<usize>> = subsets(r, d);
            while !pending.is_empty() {
                let roots: Vec<Interval> =
                    (0..r).map(|i| self.embedding_enclosure(i, bits)).collect();
                let mut next = Vec::new();
                for subset in pending {
                    let sym = elementary_symmetric(subset.iter().map(|&i| &roots[i]), bits + 8);
                    if sym.iter().any(|e| e.width() >= BigRational::new(1.into(), 2.into())) {
                        next.push(subset);
                        continue;
                    }
                    let mut ints = Vec::with_capacity(d);
                    for e in &sym {
                        let c = e.hi().floor();
                        if !e.contains(&c) {
                            break;
                        }
                        ints.push(c);
                    }
                    if ints.len() < d {
                        continue;
                    }
                    // x^d - e1 x^(d-1) + e2 x^(d-2) - ...
                    let mut coeffs = vec![BigRational::zero(); d + 1];
                    coeffs[d] = BigRational::one();
                    for (k, e) in ints.into_iter().enumerate() {
                        let sign = if k % 2 == 0 { -BigRational::one() } else { BigRational::one() };
                        coeffs[d - 1 - k] = sign * e;
                    }
                    let cand = QPoly::new(coeffs);
                    if self.poly.rem(&cand).is_zero() {
                        return Some(cand);
                    }
                }
                pending = next;
                bits *= 2;
            }
        }
        None
    }

    /// Shrink the isolating interval of embedding `index` by bisection until
    /// its width is at most `width`. The result is contained in the initial
    /// isolating interval.
    pub fn refine_embedding(
        &self,
        index: usize,
        width: &BigRational,
    ) -> Result<Interval, NumFieldError> {
        if index >= self.degree() {
            return Err(NumFieldError::BadEmbedding { index, degree: self.degree() });
        }
        assert!(width.is_positive(), "refinement width must be positive");
        // bisection halves the width exactly, so the step count is known
        let ratio = self.embeddings[index].width() / width;
        let (p, q) = (ratio.numer(), ratio.denom());
        let mut needed = p.bits().saturating_sub(q.bits()) as usize;
        while &(q << needed) < p {
            needed += 1;
        }
        while needed > 0 && &(q << (needed - 1)) >= p {
            needed -= 1;
        }
        let mut cache = self.bisections.lock().expect("bisection cache poisoned");
        let b = &mut cache[index];
        let s_lo = self.sign_at(b.base.lo(), &BigInt::one());
        while b.right.len() < needed && b.exact.is_none() {
            // midpoint numerator over d 2^(j+1)
            let j = b.right.len() + 1;
            let mid = (&b.lo_num << 1usize) + &b.width_num;
            let den = &b.den << j;
            match self.sign_at(&BigRational::from_integer(mid.clone()), &den) {
                Ordering::Equal => b.exact = Some(BigRational::new(mid, den)),
                s if s == s_lo => {
                    b.lo_num = mid;
                    b.right.push(true);
                }
                _ => {
                    b.lo_num <<= 1usize;
                    b.right.push(false);
                }
            }
        }
        if let Some(x) = &b.exact {
            return Ok(Interval::point(x.clone()));
        }
        Ok(b.interval_at(needed))
    }

    /// Sign of the defining polynomial at `x/d` with `d > 0`, via
    /// `d^r f(x/d)` in integers when `x` is an integer.
    fn sign_at(&self, x: &BigRational, d: &BigInt) -> Ordering {
        let (n, d) = (x.numer(), x.denom() * d);
        // sum_i c_i n^i d^(r - i), Horner from the leading coefficient down
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.int_coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= &d;
        }
        acc.cmp(&BigInt::zero())
    }

    /// Enclosure of embedding `index` of width at most `2^-bits`.
    pub fn embedding_enclosure(&self, index: usize, bits: u32) -> Interval {
        let w = BigRational::new(BigInt::one(), BigInt::one() << bits);
        self.refine_embedding(index, &w).expect("embedding index in range")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::new(vec![BigRational::zero(); self.degree()])
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[0] = q;
        FieldElement::new(coords)
    }

    /// The generator `t`, a root of the defining polynomial.
    pub fn generator(&self) -> FieldElement {
        self.reduce(&QPoly::monomial(BigRational::one(), 1))
    }

    /// Validate the length of a coordinate vector and wrap it.
    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement, NumFieldError> {
        if coords.len() != self.degree() {
            return Err(NumFieldError::WrongLength { expected: self.degree(), got: coords.len() });
        }
        Ok(FieldElement::new(coords))
    }

    pub fn reduce(&self, p: &QPoly) -> FieldElement {
        let r = p.rem(&self.poly);
        FieldElement::new((0..self.degree()).map(|i| r.coeff(i)).collect())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.reduce(&a.as_poly().add(&b.as_poly()))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.reduce(&a.as_poly().sub(&b.as_poly()))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.reduce(&a.as_poly().mul(&b.as_poly()))
    }

    pub fn pow(&self, a: &FieldElement, mut k: u32) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Field norm as the resultant `Res(f, g)` for `elem = g(t)`.
    pub fn norm(&self, elem: &FieldElement) -> BigRational {
        let g = elem.as_poly();
        if g.is_zero() {
            return BigRational::zero();
        }
        self.poly.resultant(&g)
    }

    /// Matrix of multiplication by `elem` in the power basis (column `j` is
    /// `elem * t^j`).
    pub fn multiplication_matrix(&self, elem: &FieldElement) -> Vec<Vec<BigRational>> {
        let r = self.degree();
        let mut mat = vec![vec![BigRational::zero(); r]; r];
        let mut col = elem.clone();
        let t = self.generator();
        for j in 0..r {
            for i in 0..r {
                mat[i][j] = col.coords[i].clone();
            }
            col = self.mul(&col, &t);
        }
        mat
    }

    /// Characteristic polynomial of `elem` (monic, constant term first), via
    /// Faddeev-LeVerrier on the multiplication matrix.
    pub fn char_poly(&self, elem: &FieldElement) -> QPoly {
        let a = self.multiplication_matrix(elem);
        let n = a.len();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = vec![vec![BigRational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = BigRational::zero();
                    for l in 0..n {
                        s += &a[i][l] * &m[l][j];
                    }
                    next[i][j] = s;
                }
                next[i][i] += &coeffs[n - k + 1];
            }
            m = next;
            // c_{n-k} = -tr(A M_k) / k
            let mut tr = BigRational::zero();
            for i in 0..n {
                for l in 0..n {
                    tr += &a[i][l] * &m[l][i];
                }
            }
            coeffs[n - k] = -tr / BigRational::from_integer(k.into());
        }
        QPoly::new(coeffs)
    }

    /// True when `elem` is an algebraic integer.
    pub fn is_integral(&self, elem: &FieldElement) -> bool {
        self.char_poly(elem).is_integral()
    }

    /// Enclosure of `tau_index(elem)` with the root known to width `2^-bits`.
    pub fn embed(&self, elem: &FieldElement, index: usize, bits: u32) -> Interval {
        let root = self.embedding_enclosure(index, bits);
        let guard = bits + 16;
        let mut acc = Interval::point(BigRational::zero());
        for c in elem.coords.iter().rev() {
            acc = acc.mul(&root).add(&Interval::point(c.clone())).round_outward(guard);
        }
        acc
    }

    /// Floating-point approximation of every embedding of `elem`, for display
    /// and cross-checks only.
    pub fn embed_f64(&self, elem: &FieldElement) -> Vec<f64> {
        (0..self.degree()).map(|i| self.embed(elem, i, 60).mid_f64()).collect()
    }

    /// Validate `r - 1` supplied units: integrality and norm `+-1`.
    pub fn check_units(&self, units: &[FieldElement]) -> Result<UnitSystem, NumFieldError> {
        self.check_units_with(units, UnitProvenance::Supplied)
    }

    pub fn check_units_with(
        &self,
        units: &[FieldElement],
        provenance: UnitProvenance,
    ) -> Result<UnitSystem, NumFieldError> {
        let r = self.degree();
        if units.len() != r - 1 {
            return Err(NumFieldError::WrongCount { expected: r - 1, got: units.len() });
        }
        let mut norms = Vec::with_capacity(units.len());
        for (index, u) in units.iter().enumerate() {
            if u.coords.len() != r {
                return Err(NumFieldError::WrongLength { expected: r, got: u.coords.len() });
            }
            if !self.is_integral(u) {
                return Err(NumFieldError::NotAUnit {
                    index,
                    detail: "not an algebraic integer".into(),
                });
            }
            let n = self.norm(u);
            let sign = if n == BigRational::one() {
                1
            } else if n == -BigRational::one() {
                -1
            } else {
                return Err(NumFieldError::NotAUnit {
                    index,
                    detail: format!("norm {}", rational_string(&n)),
                });
            };
            norms.push(sign);
        }
        Ok(UnitSystem {
            units: units.to_vec(),
            norms,
            provenance,
            independence: Independence::Pending,
        })
    }
}

fn isolate_roots(poly: &QPoly, sturm: &[QPoly]) -> Vec<Interval> {
    let b = poly.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    let two = BigRational::from_integer(2.into());
    while let Some((lo, hi)) = stack.pop() {
        match sturm_count(sturm, &lo, &hi) {
            0 => {}
            1 => out.push(Interval::new(lo, hi)),
            _ => {
                let mut mid = (&lo + &hi) / &two;
                // no rational roots by the time we get here, but keep the
                // endpoints off the roots regardless
                while poly.sign_at(&mid) == Ordering::Equal {
                    mid = (&mid + &hi) / &two;
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo().cmp(b.lo()));
    out
}

fn elementary_symmetric<'a>(
    roots: impl Iterator<Item = &'a Interval>,
    bits: u32,
) -> Vec<Interval> {
    // e[k] for the roots seen so far
    let mut e = vec![Interval::from_int(1)];
    for x in roots {
        let mut next = e.clone();
        next.push(Interval::from_int(0));
        for k in 1..next.len() {
            next[k] = e.get(k).cloned().unwrap_or_else(|| Interval::from_int(0)).add(&e[k - 1].mul(x));
            next[k] = next[k].round_outward(bits);
        }
        e = next;
    }
    e.split_off(1)
}

/// Discriminant of a monic polynomial: `(-1)^(n(n-1)/2) Res(f, f')`.
fn discriminant(poly: &QPoly) -> BigInt {
    let n = poly.degree().unwrap_or(0);
    let mut res = poly.resultant(&poly.derivative());
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        res = -res;
    }
    res.to_integer()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitProvenance {
    Computed,
    Supplied,
}

/// Status of the multiplicative independence certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Independence {
    Pending,
    Certified,
}

/// `r - 1` units of norm `+-1`, spanning a finite-index sublattice of the
/// unit group once the regulator rank certificate passes.
#[derive(Clone, Debug)]
pub struct UnitSystem {
    pub units: Vec<FieldElement>,
    pub norms: Vec<i8>,
    pub provenance: UnitProvenance,
    pub independence: Independence,
}

impl UnitSystem {
    pub fn rank(&self) -> usize {
        self.units.len()
    }
}

/// JSON field description: `{"poly": [c0, ..., 1], "units": [[..]], "assert_irreducible": bool}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FieldSpec {
    pub poly: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Vec<Vec<serde_json::Value>>>,
    #[serde(default)]
    pub assert_irreducible: bool,
}

fn json_rational(v: &serde_json::Value) -> Result<BigRational, NumFieldError> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(i.into())),
            None => Err(NumFieldError::Parse(format!("non-integer number {n}; use a \"p/q\" string"))),
        },
        other => Err(NumFieldError::Parse(format!("expected rational, got {other}"))),
    }
}

impl FieldSpec {
    pub fn from_json(text: &str) -> Result<Self, NumFieldError> {
        serde_json::from_str(text).map_err(|e| NumFieldError::Parse(e.to_string()))
    }

    pub fn build_field(&self) -> Result<TotallyRealField, NumFieldError> {
        let coeffs = self
            .poly
            .iter()
            .map(|v| {
                let q = json_rational(v)?;
                if !q.is_integer() {
                    return Err(NumFieldError::NotMonic);
                }
                Ok(q.to_integer())
            })
            .collect::<Result<Vec<_>, _>>()?;
        TotallyRealField::new(&coeffs, self.assert_irreducible)
    }

    pub fn parse_units(&self, field: &TotallyRealField) -> Result<Option<Vec<FieldElement>>, NumFieldError> {
        let Some(units) = &self.units else {
            return Ok(None);
        };
        units
            .iter()
            .map(|u| {
                let coords = u.iter().map(json_rational).collect::<Result<Vec<_>, _>>()?;
                field.element(coords)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

/// Floating approximation of a rational, for tests and display.
pub fn approx(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Bisection on f64 as an independent root oracle.
    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (f(a) < 0.0) == (f(m) < 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn sqrt5_embeddings() {
        let k = make_field(&[-5, 0, 1]).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.discriminant(), &BigInt::from(20));
        let s5 = bisect(|x| x * x - 5.0, 0.0, 3.0);
        let e = k.embedding_enclosure(1, 50);
        assert!(e.contains(&BigRational::from_float(s5).unwrap()) || (e.mid_f64() - s5).abs() < 1e-14);
        assert!((k.embedding_enclosure(0, 50).mid_f64() + s5).abs() < 1e-14);
        assert_eq!(k.irreducibility(), Irreducibility::Checked);
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(make_field(&[-1, 0, 1]), Err(NumFieldError::NotIrreducible(_))));
        assert!(matches!(make_field(&[1, 0, 1]), Err(NumFieldError::NotTotallyReal { real: 0, degree: 2 })));
        assert!(matches!(make_field(&[3, 1]), Err(NumFieldError::DegreeTooSmall(1))));
        assert!(matches!(make_field(&[1, 0, 2]), Err(NumFieldError::NotMonic)));
        // (x^2 - 2)(x^2 - 3): totally real, no rational root
        assert!(matches!(make_field(&[6, 0, -5, 0, 1]), Err(NumFieldError::NotIrreducible(_))));
        // (x^2 - 2)^2
        assert!(matches!(make_field(&[4, 0, -4, 0, 1]), Err(NumFieldError::NotIrreducible(_))));
        // x^3 - 2 has one real root
        assert!(matches!(make_field(&[-2, 0, 0, 1]), Err(NumFieldError::NotTotallyReal { real: 1, degree: 3 })));
    }

    #[test]
    fn quartic_irreducible_and_asserted() {
        // x^4 - 4x^2 + 2: roots +-sqrt(2 +- sqrt 2)
        let k = make_field(&[2, 0, -4, 0, 1]).unwrap();
        assert_eq!(k.degree(), 4);
        let k = TotallyRealField::new(
            &[6, 0, -5, 0, 1].map(BigInt::from),
            true,
        )
        .unwrap();
        assert_eq!(k.irreducibility(), Irreducibility::Asserted);
    }

    #[test]
    fn refine_sqrt2() {
        let k = make_field(&[-2, 0, 1]).unwrap();
        let w = q(1, 1_000_000);
        let iv = k.refine_embedding(1, &w).unwrap();
        assert!(iv.width() <= w);
        let s2 = bisect(|x| x * x - 2.0, 0.0, 2.0);
        assert!(iv.lo_f64() <= s2 + 1e-15 && s2 - 1e-15 <= iv.hi_f64());
        assert!(iv.is_subset_of(&k.embeddings()[1]));
    }

    #[test]
    fn refine_noop_when_already_narrow() {
        let k = make_field(&[-5, 0, 1]).unwrap();
        for i in 0..2 {
            let init = k.embeddings()[i].clone();
            let w = init.width() + q(1, 1);
            assert_eq!(k.refine_embedding(i, &w).unwrap(), init);
        }
    }

    #[test]
    fn cubic_embeddings_disjoint() {
        let k = make_field(&[1, -2, -1, 1]).unwrap();
        assert_eq!(k.discriminant(), &BigInt::from(49));
        let w = q(1, 100_000_000);
        let ivs: Vec<_> = (0..3).map(|i| k.refine_embedding(i, &w).unwrap()).collect();
        let f = |x: f64| x * x * x - x * x - 2.0 * x + 1.0;
        let oracle = [bisect(f, -2.0, -1.0), bisect(f, 0.0, 1.0), bisect(f, 1.0, 2.0)];
        for i in 0..3 {
            assert!(ivs[i].width() <= w);
            assert!((ivs[i].mid_f64() - oracle[i]).abs() < 1e-8);
            for j in i + 1..3 {
                assert!(!ivs[i].overlaps(&ivs[j]));
            }
            let p = k.poly();
            assert_ne!(p.sign_at(k.embeddings()[i].lo()), p.sign_at(k.embeddings()[i].hi()));
        }
    }

    #[test]
    fn norms() {
        let k5 = make_field(&[-5, 0, 1]).unwrap();
        let phi = FieldElement::new(vec![q(1, 2), q(1, 2)]);
        assert_eq!(k5.norm(&phi), q(-1, 1));
        assert_eq!(k5.norm(&k5.one()), q(1, 1));
        let k2 = make_field(&[-2, 0, 1]).unwrap();
        assert_eq!(k2.norm(&FieldElement::from_ints(&[1, 1])), q(-1, 1));
        // determinant of the multiplication matrix is an independent route
        let m = k5.multiplication_matrix(&phi);
        assert_eq!(crate::linalg::det_rational(m), q(-1, 1));
    }

    #[test]
    fn unit_checks() {
        let k5 = make_field(&[-5, 0, 1]).unwrap();
        let phi = FieldElement::new(vec![q(1, 2), q(1, 2)]);
        let us = k5.check_units(&[phi]).unwrap();
        assert_eq!(us.norms, vec![-1]);
        assert_eq!(us.independence, Independence::Pending);
        let k2 = make_field(&[-2, 0, 1]).unwrap();
        let us = k2.check_units(&[FieldElement::from_ints(&[3, 2])]).unwrap();
        assert_eq!(us.norms, vec![1]);
        assert!(matches!(
            k5.check_units(&[FieldElement::from_ints(&[2, 0])]),
            Err(NumFieldError::NotAUnit { .. })
        ));
        assert!(matches!(k5.check_units(&[]), Err(NumFieldError::WrongCount { expected: 1, got: 0 })));
        // norm -1 but not integral: (1 + 2t)/... use 1/2 + t/2 in Q(sqrt 2): norm (1-2)/4
        let half = FieldElement::new(vec![q(1, 2), q(1, 2)]);
        assert!(k2.check_units(&[half]).is_err());
    }

    #[test]
    fn integrality_via_char_poly() {
        let k5 = make_field(&[-5, 0, 1]).unwrap();
        let phi = FieldElement::new(vec![q(1, 2), q(1, 2)]);
        assert_eq!(k5.char_poly(&phi), QPoly::from_ints(&[-1, -1, 1]));
        assert!(k5.is_integral(&phi));
        let k3 = make_field(&[-3, 0, 1]).unwrap();
        assert!(!k3.is_integral(&FieldElement::new(vec![q(1, 2), q(1, 2)])));
    }

    #[test]
    fn field_spec_parsing() {
        let spec = FieldSpec::from_json(r#"{"poly": [1, -2, -1, 1], "units": [["0","1","0"], ["1","1","0"]]}"#).unwrap();
        let k = spec.build_field().unwrap();
        let units = spec.parse_units(&k).unwrap().unwrap();
        let us = k.check_units(&units).unwrap();
        assert_eq!(us.rank(), 2);
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
    }
}
