//! Real quadratic fields: continued fractions, fundamental units, and class
//! numbers from cycles of reduced indefinite binary quadratic forms.

use crate::numfield::{make_field, FieldElement, NumFieldError, TotallyRealField};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuadArithError {
    #[error("m = {0} must be a squarefree integer greater than 1")]
    InvalidM(i64),
    #[error("{0} is not the discriminant of a real quadratic field")]
    InvalidDiscriminant(i64),
    #[error("inconsistent class data: {0}")]
    InconsistentData(String),
    #[error("invalid quadratic irrational: {0}")]
    InvalidIrrational(String),
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// `Q(sqrt m)` for squarefree `m > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadField {
    pub m: i64,
    /// Field discriminant.
    pub d: i64,
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self, QuadArithError> {
        if m <= 1 || !is_squarefree(m) {
            return Err(QuadArithError::InvalidM(m));
        }
        let d = if m % 4 == 1 { m } else { 4 * m };
        Ok(QuadField { m, d })
    }

    /// Recover the field from a fundamental discriminant.
    pub fn from_discriminant(d: i64) -> Result<Self, QuadArithError> {
        let bad = QuadArithError::InvalidDiscriminant(d);
        if d <= 1 {
            return Err(bad);
        }
        let m = if d % 4 == 1 {
            d
        } else if d % 4 == 0 && matches!((d / 4) % 4, 2 | 3) {
            d / 4
        } else {
            return Err(bad);
        };
        QuadField::new(m).map_err(|_| bad)
    }

    /// Trace and norm of `omega`, where `O_F = Z[omega]`.
    pub fn omega_trace_norm(&self) -> (i64, i64) {
        if self.m % 4 == 1 {
            (1, (1 - self.m) / 4)
        } else {
            (0, -self.m)
        }
    }

    /// `omega` as a quadratic irrational `(p + sqrt d)/q`.
    pub fn omega(&self) -> QuadraticIrrational {
        if self.m % 4 == 1 {
            QuadraticIrrational::new(1, 2, self.m).expect("valid omega")
        } else {
            QuadraticIrrational::new(0, 1, self.m).expect("valid omega")
        }
    }

    /// The field `Q[x]/(x^2 - m)`.
    pub fn to_field(&self) -> Result<TotallyRealField, QuadArithError> {
        Ok(make_field(&[-self.m, 0, 1])?)
    }
}

/// Exact element `a + b sqrt(d)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

impl QuadNumber {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        QuadNumber { a, b, d }
    }

    pub fn from_int(n: BigInt, d: &BigInt) -> Self {
        QuadNumber::new(BigRational::from_integer(n), BigRational::zero(), d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        QuadNumber::new(&self.a + &o.a, &self.b + &o.b, self.d.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadNumber::new(&self.a - &o.a, &self.b - &o.b, self.d.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        let d = BigRational::from_integer(self.d.clone());
        QuadNumber::new(
            &self.a * &o.a + &self.b * &o.b * d,
            &self.a * &o.b + &self.b * &o.a,
            self.d.clone(),
        )
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        QuadNumber::new(&self.a * &k, &self.b * &k, self.d.clone())
    }

    pub fn conj(&self) -> Self {
        QuadNumber::new(self.a.clone(), -&self.b, self.d.clone())
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = QuadNumber::from_int(BigInt::one(), &self.d);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Exact sign of `a + b sqrt d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        self.sub(o).signum()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

/// `(p + sqrt d)/q` with `q != 0`, `d > 0` not a square, and `q | d - p^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadraticIrrational {
    pub p: i64,
    pub q: i64,
    pub d: i64,
}

impl QuadraticIrrational {
    pub fn new(p: i64, q: i64, d: i64) -> Result<Self, QuadArithError> {
        let bad = |why: &str| QuadArithError::InvalidIrrational(format!("({p} + sqrt {d})/{q}: {why}"));
        if q == 0 {
            return Err(bad("zero denominator"));
        }
        if d <= 0 || d.sqrt() * d.sqrt() == d {
            return Err(bad("radicand must be a positive non-square"));
        }
        if (d - p * p) % q != 0 {
            return Err(bad("q does not divide d - p^2"));
        }
        Ok(QuadraticIrrational { p, q, d })
    }

    /// Scale an arbitrary `(p + sqrt d)/q` so that the divisibility
    /// invariant holds: multiply through by `|q|`.
    pub fn normalized(p: i64, q: i64, d: i64) -> Result<Self, QuadArithError> {
        if q != 0 && (d - p * p) % q == 0 {
            return Self::new(p, q, d);
        }
        let s = q.abs();
        Self::new(p * s, q * s, d * s * s)
    }

    pub fn isqrt_d(&self) -> i64 {
        self.d.sqrt()
    }

    /// `floor((p + sqrt d)/q)`, exactly.
    pub fn floor(&self) -> i64 {
        let s = self.isqrt_d();
        if self.q > 0 {
            Integer::div_floor(&(self.p + s), &self.q)
        } else {
            // (-p - sqrt d)/|q| and -sqrt d lies in (-s-1, -s)
            Integer::div_floor(&(-self.p - s - 1), &(-self.q))
        }
    }

    pub fn ceil(&self) -> i64 {
        self.floor() + 1
    }

    /// Sign of `x + sqrt d` (`conj`: of `x - sqrt d`) for integer `x`.
    fn sign_with_root(x: i64, d: i64, conj: bool) -> Ordering {
        if !conj {
            if x >= 0 || x * x < d {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if x <= 0 || x * x < d {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Compare the value (or its conjugate) with the integer `k`.
    pub fn cmp_int(&self, k: i64, conj: bool) -> Ordering {
        let s = Self::sign_with_root(self.p - k * self.q, self.d, conj);
        if self.q > 0 {
            s
        } else {
            s.reverse()
        }
    }

    /// Reduced for the minus continued fraction: `w > 1` and `0 < w' < 1`.
    pub fn is_minus_reduced(&self) -> bool {
        self.cmp_int(1, false) == Ordering::Greater
            && self.cmp_int(0, true) == Ordering::Greater
            && self.cmp_int(1, true) == Ordering::Less
    }

    /// `1 / (b - w)` for integer `b`.
    pub fn minus_step(&self, b: i64) -> Self {
        let pp = b * self.q - self.p;
        let qq = (pp * pp - self.d) / self.q;
        QuadraticIrrational { p: pp, q: qq, d: self.d }
    }

    /// `1 / (w - a)` for integer `a`.
    pub fn regular_step(&self, a: i64) -> Self {
        let pp = self.p - a * self.q;
        let qq = (self.d - pp * pp) / self.q;
        QuadraticIrrational { p: -pp, q: qq, d: self.d }
    }

    /// Exact value as `a + b sqrt d`.
    pub fn to_quad_number(&self) -> QuadNumber {
        QuadNumber::new(
            BigRational::new(self.p.into(), self.q.into()),
            BigRational::new(1.into(), self.q.into()),
            self.d.into(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + (self.d as f64).sqrt()) / self.q as f64
    }

    pub fn conj_f64(&self) -> f64 {
        (self.p as f64 - (self.d as f64).sqrt()) / self.q as f64
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + sqrt {})/{}", self.p, self.d, self.q)
    }
}

/// Unit `a + b*omega` of the maximal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadUnit {
    pub field: QuadField,
    pub a: BigInt,
    pub b: BigInt,
    pub norm: i8,
}

impl QuadUnit {
    /// Value as `x + y sqrt m`.
    pub fn to_quad_number(&self) -> QuadNumber {
        let m = BigInt::from(self.field.m);
        let a = BigRational::from_integer(self.a.clone());
        let b = BigRational::from_integer(self.b.clone());
        if self.field.m % 4 == 1 {
            let half = BigRational::new(1.into(), 2.into());
            QuadNumber::new(a + &b * &half, b * half, m)
        } else {
            QuadNumber::new(a, b, m)
        }
    }

    /// The unit as an element of `Q[x]/(x^2 - m)`.
    pub fn to_field_element(&self) -> FieldElement {
        let v = self.to_quad_number();
        FieldElement::new(vec![v.a, v.b])
    }

    pub fn to_f64(&self) -> f64 {
        self.to_quad_number().to_f64()
    }
}

/// Fundamental unit `> 1` of the ring of integers of `Q(sqrt m)`, read off
/// the first period of the regular continued fraction of `omega`.
pub fn fundamental_unit(m: i64) -> Result<QuadUnit, QuadArithError> {
    let field = QuadField::new(m)?;
    let omega = field.omega();
    let a0 = omega.floor();
    let x1 = omega.regular_step(a0);
    let mut partials = vec![a0];
    let mut x = x1;
    loop {
        let a = x.floor();
        partials.push(a);
        x = x.regular_step(a);
        if x == x1 {
            break;
        }
    }
    let period = partials.len() - 1;
    // convergent built from a_0 .. a_{period-1}
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for &a in &partials[1..period] {
        let a = BigInt::from(a);
        let np = &a * &p + &p_prev;
        let nq = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
    }
    // unit = p - q * conj(omega) = (p - q tr) + q omega
    let (tr, nm) = field.omega_trace_norm();
    let a = &p - &q * tr;
    let b = q;
    let norm = &a * &a + &a * &b * tr + &b * &b * nm;
    let norm = if norm.is_one() {
        1
    } else if norm == -BigInt::one() {
        -1
    } else {
        return Err(QuadArithError::InconsistentData(format!(
            "continued fraction of omega produced {a} + {b} omega of norm {norm}"
        )));
    };
    Ok(QuadUnit { field, a, b, norm })
}

/// The least totally positive unit `> 1`: the fundamental unit if it has
/// norm `+1`, its square otherwise.
pub fn totally_positive_unit(m: i64) -> Result<(QuadNumber, u32), QuadArithError> {
    let eps = fundamental_unit(m)?;
    let v = eps.to_quad_number();
    Ok(if eps.norm == 1 { (v, 1) } else { (v.pow(2), 2) })
}

/// Indefinite form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// `0 < b < sqrt D` and `sqrt D - b < 2|a| < sqrt D + b`.
    pub fn is_reduced(&self) -> bool {
        let d = self.discriminant();
        let two_a = 2 * self.a.abs();
        self.b > 0
            && self.b * self.b < d
            && d < (two_a + self.b) * (two_a + self.b)
            && (two_a <= self.b || (two_a - self.b) * (two_a - self.b) < d)
    }

    /// One step of the reduction operator: `(a, b, c) -> (c, b', c')` with
    /// `b' = -b mod 2|c|` and `sqrt D - 2|c| < b' < sqrt D`.
    pub fn rho(&self) -> Form {
        let d = self.discriminant();
        let s = d.sqrt();
        let m = 2 * self.c.abs();
        let b2 = s - (s + self.b).rem_euclid(m);
        let c2 = (b2 * b2 - d) / (4 * self.c);
        Form { a: self.c, b: b2, c: c2 }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All primitive reduced forms of discriminant `d`, by exhaustive scan of
/// `0 < b < sqrt D`, `0 < |a| < sqrt D`.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    let s = d.sqrt();
    let mut out = Vec::new();
    for b in 1..=s {
        if (b - d).rem_euclid(2) != 0 {
            continue;
        }
        let num = b * b - d;
        for abs_a in 1..=s {
            for a in [abs_a, -abs_a] {
                if num % (4 * a) != 0 {
                    continue;
                }
                let f = Form { a, b, c: num / (4 * a) };
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    out
}

/// Reduction cycles of primitive forms; the certificate behind `h+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormClass {
    pub discriminant: i64,
    pub cycles: Vec<Vec<Form>>,
}

impl FormClass {
    pub fn form_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }
}

fn is_fundamental_discriminant(d: i64) -> bool {
    QuadField::from_discriminant(d).is_ok()
}

/// Narrow class number as the number of `rho`-cycles of primitive reduced
/// forms of discriminant `d`.
pub fn narrow_class_number(d: i64) -> Result<(usize, FormClass), QuadArithError> {
    if !is_fundamental_discriminant(d) {
        return Err(QuadArithError::InvalidDiscriminant(d));
    }
    let forms = reduced_forms(d);
    let set: BTreeSet<Form> = forms.iter().copied().collect();
    let mut image = HashMap::new();
    for f in &forms {
        let g = f.rho();
        if !set.contains(&g) || g.discriminant() != d {
            return Err(QuadArithError::InconsistentData(format!("rho{f} = {g} is not reduced")));
        }
        if let Some(prev) = image.insert(g, *f) {
            return Err(QuadArithError::InconsistentData(format!(
                "rho is not injective: {prev} and {f} both map to {g}"
            )));
        }
    }
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        let mut cycle = vec![*f];
        seen.insert(*f);
        let mut g = f.rho();
        while g != *f {
            seen.insert(g);
            cycle.push(g);
            g = g.rho();
        }
        cycles.push(cycle);
    }
    Ok((cycles.len(), FormClass { discriminant: d, cycles }))
}

/// Wide class number from `h+` and the sign of the fundamental unit's norm.
pub fn wide_class_number(m: i64) -> Result<usize, QuadArithError> {
    let field = QuadField::new(m)?;
    let (hplus, _) = narrow_class_number(field.d)?;
    let eps = fundamental_unit(m)?;
    class_number_from_narrow(hplus, eps.norm)
}

pub fn class_number_from_narrow(hplus: usize, unit_norm: i8) -> Result<usize, QuadArithError> {
    if unit_norm == -1 {
        Ok(hplus)
    } else if hplus % 2 == 0 {
        Ok(hplus / 2)
    } else {
        Err(QuadArithError::InconsistentData(format!(
            "narrow class number {hplus} is odd but the fundamental unit has norm +1"
        )))
    }
}

/// Class data of a real quadratic field, as embedded in reports.
#[derive(Clone, Debug, Serialize)]
pub struct QuadClassData {
    pub m: i64,
    pub discriminant: i64,
    pub unit: [String; 2],
    pub unit_norm: i8,
    pub narrow_class_number: usize,
    pub class_number: usize,
}

pub fn class_data(m: i64) -> Result<QuadClassData, QuadArithError> {
    let field = QuadField::new(m)?;
    let eps = fundamental_unit(m)?;
    let (hplus, _) = narrow_class_number(field.d)?;
    let h = class_number_from_narrow(hplus, eps.norm)?;
    Ok(QuadClassData {
        m,
        discriminant: field.d,
        unit: [eps.a.to_string(), eps.b.to_string()],
        unit_norm: eps.norm,
        narrow_class_number: hplus,
        class_number: h,
    })
}
