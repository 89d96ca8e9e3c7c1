//! Cusp resolutions of Hilbert modular surfaces: the minus continued
//! fraction cycle of the cusp module, its monodromy matrix and unit, the
//! intersection matrix of the cycle of rational curves, and the homology of
//! the nerve before and after dividing by the unit lattice.

use crate::interval::Interval;
use crate::linalg::{leading_minors, rank_int};
use crate::numfield::FieldElement;
use crate::quadarith::{fundamental_unit, totally_positive_unit, QuadArithError, QuadField, QuadNumber, QuadraticIrrational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

/// Steps allowed before a reduction or period search is declared stuck.
pub const STEP_GUARD: usize = 10_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ToroidalError {
    #[error("no period after {0} steps")]
    NonTermination(usize),
    #[error("cycle of length {0} is too short for an intersection matrix")]
    TooShort(usize),
    #[error("empty cycle")]
    Empty,
    #[error("monodromy check failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Quad(#[from] QuadArithError),
}

/// Reduce under `w -> 1/(ceil(w) - w)` until `w > 1` and `0 < w' < 1`.
pub fn reduce_seed(w: QuadraticIrrational) -> Result<QuadraticIrrational, ToroidalError> {
    let mut w = w;
    for _ in 0..STEP_GUARD {
        if w.is_minus_reduced() {
            return Ok(w);
        }
        w = w.minus_step(w.ceil());
    }
    Err(ToroidalError::NonTermination(STEP_GUARD))
}

/// Period `(b_1, ..., b_t)` of the minus continued fraction, canonically
/// rotated, with the reduced irrational at which it starts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspCycle {
    pub b: Vec<i64>,
    pub seed: QuadraticIrrational,
    /// Field discriminant.
    pub discriminant: i64,
}

/// Cycle of the module `Z + Z w` for any irrational `w` of the field.
pub fn cycle_from_seed(w: QuadraticIrrational, discriminant: i64) -> Result<CuspCycle, ToroidalError> {
    let start = reduce_seed(w)?;
    let mut seen: HashMap<QuadraticIrrational, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut bs = Vec::new();
    let mut w = start;
    let first = loop {
        if let Some(&i) = seen.get(&w) {
            break i;
        }
        if states.len() >= STEP_GUARD {
            return Err(ToroidalError::NonTermination(STEP_GUARD));
        }
        seen.insert(w, states.len());
        states.push(w);
        let b = w.ceil();
        bs.push(b);
        w = w.minus_step(b);
    };
    let period = &bs[first..];
    let states = &states[first..];
    let t = period.len();
    let best = (0..t)
        .min_by(|&i, &j| {
            let ri = period[i..].iter().chain(&period[..i]);
            let rj = period[j..].iter().chain(&period[..j]);
            ri.cmp(rj)
        })
        .unwrap();
    let b: Vec<i64> = period[best..].iter().chain(&period[..best]).copied().collect();
    Ok(CuspCycle { b, seed: states[best], discriminant })
}

/// Cycle of the principal cusp: seeded with a generator `omega` of the
/// ring of integers.
pub fn cusp_cycle(field: &QuadField) -> Result<CuspCycle, ToroidalError> {
    cycle_from_seed(field.omega(), field.d)
}

/// Image of `w` under `[[a, b], [c, d]]` in `SL_2(Z)`. The radicand is
/// unchanged: `(a w + b)/(c w + d) = (P + sqrt r)/Q` with
/// `P = (AC - a c r)/q`, `Q = (C^2 - c^2 r)/q`, `A = ap + bq`, `C = cp + dq`.
pub fn mobius(w: &QuadraticIrrational, m: [[i64; 2]; 2]) -> Result<QuadraticIrrational, ToroidalError> {
    let [[a, b], [c, d]] = m;
    if a * d - b * c != 1 {
        return Err(ToroidalError::Invariant(format!("determinant of {m:?} is not 1")));
    }
    let (p, q, r) = (w.p as i128, w.q as i128, w.d as i128);
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    let big = a * p + b * q;
    let small = c * p + d * q;
    let num = big * small - a * c * r;
    let den = small * small - c * c * r;
    let narrow = |x: i128| i64::try_from(x).map_err(|_| ToroidalError::Invariant("Möbius image overflows i64".into()));
    Ok(QuadraticIrrational::new(narrow(num / q)?, narrow(den / q)?, w.d)?)
}

impl CuspCycle {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `b_k >= 2` everywhere and some `b_k >= 3`.
    pub fn invariants_hold(&self) -> bool {
        !self.b.is_empty() && self.b.iter().all(|&x| x >= 2) && self.b.iter().any(|&x| x >= 3)
    }
}

/// `prod_k [[b_k, -1], [1, 0]]`.
pub fn period_matrix(b: &[i64]) -> Result<[[i64; 2]; 2], ToroidalError> {
    if b.is_empty() {
        return Err(ToroidalError::Empty);
    }
    let mut m = [[1, 0], [0, 1]];
    for &x in b {
        m = [
            [m[0][0] * x + m[0][1], -m[0][0]],
            [m[1][0] * x + m[1][1], -m[1][0]],
        ];
    }
    Ok(m)
}

/// Monodromy of a cycle: its matrix, the unit by which it acts, and that
/// unit as a power of the fundamental and totally positive units.
#[derive(Clone, Debug, Serialize)]
pub struct Monodromy {
    pub matrix: [[i64; 2]; 2],
    pub trace: i64,
    /// `trace^2 - 4 = D s^2`.
    pub s: i64,
    /// Eigenvalue as `a + b sqrt m`, exact rationals.
    pub eigenvalue: [String; 2],
    pub unit_power: u32,
    pub totally_positive_power: u32,
    #[serde(skip)]
    pub eigen: QuadNumber,
}

fn isqrt_exact(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let s = (n as f64).sqrt().round() as i64;
    (s - 1..=s + 1).find(|x| *x >= 0 && x * x == n)
}

/// Exponent `k >= 1` with `x = u^k`, by exact multiplication.
fn unit_exponent(x: &QuadNumber, u: &QuadNumber) -> Option<u32> {
    let mut acc = u.clone();
    for k in 1..=64 {
        match acc.cmp_value(x) {
            Ordering::Equal => return Some(k),
            Ordering::Greater => return None,
            Ordering::Less => acc = acc.mul(u),
        }
    }
    None
}

pub fn monodromy(cycle: &CuspCycle, field: &QuadField) -> Result<Monodromy, ToroidalError> {
    let m = period_matrix(&cycle.b)?;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det != 1 {
        return Err(ToroidalError::Invariant(format!("determinant {det}")));
    }
    let w = cycle.seed.to_quad_number();
    let int = |n: i64| QuadNumber::from_int(BigInt::from(n), &w.d);
    let lhs = w.scale_int(&m[0][0].into()).add(&int(m[0][1]));
    let rhs = w.mul(&w.scale_int(&m[1][0].into()).add(&int(m[1][1])));
    if lhs != rhs {
        return Err(ToroidalError::Invariant("period matrix does not fix the seed".into()));
    }
    let trace = m[0][0] + m[1][1];
    let disc = trace * trace - 4;
    if disc % cycle.discriminant != 0 {
        return Err(ToroidalError::Invariant(format!("trace^2 - 4 = {disc} not divisible by D")));
    }
    let s = isqrt_exact(disc / cycle.discriminant)
        .filter(|&s| s >= 1)
        .ok_or_else(|| ToroidalError::Invariant(format!("(trace^2 - 4)/D = {} is not a square", disc / cycle.discriminant)))?;
    // (trace + s sqrt D)/2 with sqrt D = sqrt m or 2 sqrt m
    let half = BigRational::new(1.into(), 2.into());
    let root_coeff = if cycle.discriminant == field.m { half.clone() * BigInt::from(s) } else { BigRational::from_integer(s.into()) };
    let eigen = QuadNumber::new(half * BigInt::from(trace), root_coeff, field.m.into());
    let eps = fundamental_unit(field.m)?.to_quad_number();
    let (eps_plus, _) = totally_positive_unit(field.m)?;
    let unit_power = unit_exponent(&eigen, &eps)
        .ok_or_else(|| ToroidalError::Invariant("eigenvalue is not a power of the fundamental unit".into()))?;
    let totally_positive_power = unit_exponent(&eigen, &eps_plus)
        .ok_or_else(|| ToroidalError::Invariant("eigenvalue is not a power of the totally positive unit".into()))?;
    Ok(Monodromy {
        matrix: m,
        trace,
        s,
        eigenvalue: [eigen.a.to_string(), eigen.b.to_string()],
        unit_power,
        totally_positive_power,
        eigen,
    })
}

/// Intersection numbers of the cycle of curves with self-intersections
/// `-b_k`, and the leading principal minors deciding definiteness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionMatrix {
    pub matrix: Vec<Vec<i64>>,
    pub leading_minors: Vec<String>,
    pub negative_definite: bool,
}

pub fn intersection_matrix(b: &[i64]) -> Result<IntersectionMatrix, ToroidalError> {
    let t = b.len();
    if t < 2 {
        return Err(ToroidalError::TooShort(t));
    }
    let mut m = vec![vec![0i64; t]; t];
    for i in 0..t {
        m[i][i] = -b[i];
        let j = (i + 1) % t;
        if t == 2 {
            m[i][j] = 2;
        } else {
            m[i][j] += 1;
            m[j][i] += 1;
        }
    }
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let minors = leading_minors(&big);
    // negative definite: (-1)^k D_k > 0
    let negative_definite = minors.iter().enumerate().all(|(k, d)| {
        let signed = if k % 2 == 0 { -d } else { d.clone() };
        signed.is_positive()
    });
    Ok(IntersectionMatrix {
        matrix: m,
        leading_minors: minors.iter().map(BigInt::to_string).collect(),
        negative_definite,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NerveMode {
    /// Finite segment of the unquotiented chain with this many components.
    Truncated(usize),
    /// The cycle of length `t` after dividing by the unit lattice; `t = 1`
    /// is a loop and `t = 2` a doubled edge.
    Quotient(usize),
}

/// Ranks `(h0, h1)` of the rational homology of the nerve's cell complex.
pub fn nerve_homology(mode: NerveMode) -> (usize, usize) {
    let (v, edges): (usize, Vec<(usize, usize)>) = match mode {
        NerveMode::Truncated(n) => (n, (1..n).map(|i| (i - 1, i)).collect()),
        NerveMode::Quotient(t) => (t, (0..t).map(|i| (i, (i + 1) % t)).collect()),
    };
    // boundary matrix: rows vertices, columns edges
    let d1: Vec<Vec<i64>> = (0..v)
        .map(|x| {
            edges
                .iter()
                .map(|&(a, b)| i64::from(x == b) - i64::from(x == a))
                .collect()
        })
        .collect();
    let rank = if edges.is_empty() { 0 } else { rank_int(&d1) };
    (v - rank, edges.len() - rank)
}

/// Rank of `Pic^0` of a boundary component: the rank of the unit lattice,
/// `r - 1`.
pub fn pic0_rank(r: usize) -> usize {
    r.saturating_sub(1)
}

/// Enclosures of `log|tau(x)|` for both embeddings of a monodromy unit,
/// in the field `Q[x]/(x^2 - m)` with its embeddings in ascending order.
pub fn monodromy_logs(mono: &Monodromy, field: &QuadField, bits: u32) -> Result<Vec<Interval>, ToroidalError> {
    let f = field.to_field()?;
    let elem = FieldElement::new(vec![mono.eigen.a.clone(), mono.eigen.b.clone()]);
    (0..2)
        .map(|i| {
            f.embed(&elem, i, bits + 16)
                .abs()
                .ln(bits)
                .ok_or_else(|| ToroidalError::Invariant("embedding not separated from zero".into()))
        })
        .collect()
}

/// Everything about the principal cusp of `Q(sqrt m)`.
#[derive(Clone, Debug, Serialize)]
pub struct CuspResolution {
    pub cycle: Vec<i64>,
    pub seed: String,
    pub period_matrix: [[i64; 2]; 2],
    pub trace: i64,
    pub s: i64,
    pub eigenvalue: [String; 2],
    pub eigenvalue_unit_power: u32,
    pub totally_positive_power: u32,
    pub intersection: Option<IntersectionMatrix>,
    pub nerve: NerveReport,
    pub pic0_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveReport {
    pub truncated: [usize; 2],
    pub quotient: [usize; 2],
}

pub fn cusp_resolution(m: i64) -> Result<CuspResolution, ToroidalError> {
    let field = QuadField::new(m)?;
    let cycle = cusp_cycle(&field)?;
    if !cycle.invariants_hold() {
        return Err(ToroidalError::Invariant(format!("cycle {:?} violates b_k >= 2 with some b_k >= 3", cycle.b)));
    }
    let mono = monodromy(&cycle, &field)?;
    let intersection = match intersection_matrix(&cycle.b) {
        Ok(im) if !im.negative_definite => {
            return Err(ToroidalError::Invariant("intersection matrix is not negative definite".into()))
        }
        Ok(im) => Some(im),
        Err(ToroidalError::TooShort(_)) => None,
        Err(e) => return Err(e),
    };
    let (t0, t1) = nerve_homology(NerveMode::Truncated(10));
    let (q0, q1) = nerve_homology(NerveMode::Quotient(cycle.len()));
    Ok(CuspResolution {
        cycle: cycle.b.clone(),
        seed: cycle.seed.to_string(),
        period_matrix: mono.matrix,
        trace: mono.trace,
        s: mono.s,
        eigenvalue: mono.eigenvalue.clone(),
        eigenvalue_unit_power: mono.unit_power,
        totally_positive_power: mono.totally_positive_power,
        intersection,
        nerve: NerveReport { truncated: [t0, t1], quotient: [q0, q1] },
        pic0_rank: pic0_rank(2),
    })
}
