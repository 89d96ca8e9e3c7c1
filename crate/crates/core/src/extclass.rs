//! The extension class between boundary and interior cohomology: its
//! Kummer datum, its archimedean avatar (the logarithmic embedding matrix of
//! a unit system), and the cup-product computation that makes the higher
//! degree extensions split.

use crate::cohmodel::GaloisDatum;
use crate::interval::{DecimalInterval, Interval};
use crate::linalg::subsets;
use crate::numfield::{FieldElement, NumFieldError, TotallyRealField, UnitSystem};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

pub const DEFAULT_START_BITS: u32 = 128;
pub const DEFAULT_MAX_BITS: u32 = 4096;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExtClassError {
    #[error("precision cap of {cap} bits reached before the certificate was decided")]
    PrecisionExhausted { cap: u32 },
    #[error("unit system is rank deficient: {0}")]
    RankDeficient(String),
    #[error("row sum of the log-embedding matrix excludes zero for unit {0}")]
    RowSumViolation(usize),
    #[error("maximal minors disagree in absolute value")]
    MinorMismatch,
    #[error("m = {m} is outside 1 < m <= r/2 for r = {r}")]
    OutOfRange { r: usize, m: usize },
    #[error("target margin must be positive")]
    BadMargin,
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

/// Precision schedule: start, double, stop past `max_bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start_bits: DEFAULT_START_BITS, max_bits: DEFAULT_MAX_BITS }
    }
}

impl Precision {
    /// Default schedule with the cap read from `PLECTIC_MAX_BITS` if set.
    pub fn from_env() -> Self {
        let max_bits = std::env::var("PLECTIC_MAX_BITS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_BITS);
        Precision { start_bits: DEFAULT_START_BITS.min(max_bits), max_bits }
    }

    pub fn schedule(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::successors(Some(self.start_bits.max(8)), |b| b.checked_mul(2))
            .take_while(move |b| *b <= self.max_bits)
    }
}

/// `(r-1) x r` matrix of enclosures of `log|tau(eps_j)|`.
#[derive(Clone, Debug)]
pub struct RegulatorMatrix {
    pub entries: Vec<Vec<Interval>>,
    pub bits: u32,
}

fn interval_det(m: &[Vec<Interval>], bits: u32) -> Interval {
    match m.len() {
        0 => Interval::from_int(1),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Interval::from_int(0);
            for j in 0..n {
                let minor: Vec<Vec<Interval>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&interval_det(&minor, bits));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                acc = acc.round_outward(bits);
            }
            acc
        }
    }
}

impl RegulatorMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn row_sums(&self) -> Vec<Interval> {
        self.entries
            .iter()
            .map(|row| row.iter().fold(Interval::from_int(0), |a, x| a.add(x)))
            .collect()
    }

    /// Determinant of the square matrix obtained by deleting column `col`.
    pub fn minor(&self, col: usize) -> Interval {
        let sub: Vec<Vec<Interval>> = self
            .entries
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != col).map(|(_, x)| x.clone()).collect())
            .collect();
        interval_det(&sub, self.bits + 32)
    }

    pub fn maximal_minors(&self) -> Vec<Interval> {
        (0..self.cols()).map(|c| self.minor(c)).collect()
    }

    /// True when every pair of maximal minors agrees in absolute value up to
    /// interval overlap.
    pub fn minors_consistent(&self) -> bool {
        let abs: Vec<Interval> = self.maximal_minors().iter().map(Interval::abs).collect();
        abs.iter().all(|a| abs.iter().all(|b| a.overlaps(b)))
    }

    pub fn to_decimal(&self, digits: u32) -> Vec<Vec<DecimalInterval>> {
        self.entries.iter().map(|row| row.iter().map(|x| x.to_decimal(digits)).collect()).collect()
    }
}

/// `log|x|` enclosures of every embedding of `u` at `bits`, or `None` when
/// some embedding is not yet separated from zero.
fn log_row(field: &TotallyRealField, u: &FieldElement, bits: u32) -> Option<Vec<Interval>> {
    (0..field.degree())
        .map(|i| field.embed(u, i, bits + 16).abs().ln(bits))
        .collect()
}

fn matrix_at(field: &TotallyRealField, units: &UnitSystem, bits: u32) -> Option<RegulatorMatrix> {
    let entries = units
        .units
        .iter()
        .map(|u| log_row(field, u, bits))
        .collect::<Option<Vec<_>>>()?;
    Some(RegulatorMatrix { entries, bits })
}

fn reject_torsion(units: &UnitSystem) -> Result<(), ExtClassError> {
    for (j, u) in units.units.iter().enumerate() {
        if let Some(q) = u.as_rational() {
            if q.abs().is_one() {
                return Err(ExtClassError::RankDeficient(format!(
                    "unit {j} is the torsion element {q}, its log row is zero"
                )));
            }
        }
    }
    Ok(())
}

/// Log-embedding matrix of a unit system, refined until the rank
/// certificate (`|minor| >= margin` with width at most `margin`) and the
/// minor consistency check are both decided.
pub fn hodge_regulator_matrix(
    field: &TotallyRealField,
    units: &UnitSystem,
    margin: &BigRational,
    precision: &Precision,
) -> Result<RegulatorMatrix, ExtClassError> {
    if !margin.is_positive() {
        return Err(ExtClassError::BadMargin);
    }
    reject_torsion(units)?;
    for bits in precision.schedule() {
        let Some(m) = matrix_at(field, units, bits) else {
            continue;
        };
        if let Some(j) = m.row_sums().iter().position(|s| !s.contains_zero()) {
            return Err(ExtClassError::RowSumViolation(j));
        }
        let minor = m.minor(m.cols() - 1);
        if minor.width() > *margin {
            continue;
        }
        if minor.magnitude_lower() < *margin {
            continue;
        }
        if !m.minors_consistent() {
            return Err(ExtClassError::MinorMismatch);
        }
        return Ok(m);
    }
    Err(ExtClassError::PrecisionExhausted { cap: precision.max_bits })
}

/// `|det|` of the minor deleting the last column.
pub fn regulator(matrix: &RegulatorMatrix) -> Interval {
    matrix.minor(matrix.cols() - 1).abs()
}

/// Regulator at the decided precision together with an independent
/// evaluation at twice that precision by a different minor.
#[derive(Clone, Debug)]
pub struct RegulatorCertificate {
    pub matrix: RegulatorMatrix,
    pub regulator: Interval,
    pub recheck: Interval,
}

impl RegulatorCertificate {
    pub fn consistent(&self) -> bool {
        self.regulator.overlaps(&self.recheck)
    }
}

pub fn certified_regulator(
    field: &TotallyRealField,
    units: &UnitSystem,
    margin: &BigRational,
    precision: &Precision,
) -> Result<RegulatorCertificate, ExtClassError> {
    let matrix = hodge_regulator_matrix(field, units, margin, precision)?;
    let reg = regulator(&matrix);
    let doubled = matrix_at(field, units, matrix.bits * 2).ok_or(ExtClassError::PrecisionExhausted {
        cap: matrix.bits * 2,
    })?;
    let recheck = doubled.minor(0).abs();
    Ok(RegulatorCertificate { matrix, regulator: reg, recheck })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Nontrivial,
    Indeterminate,
}

/// Kummer datum of the class: the incidence matrix of the component map
/// tensored with the units read in `F^* (x) Q`.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolicExtensionClass {
    /// One row per cusp, one column per component.
    pub eps_matrix: Vec<Vec<u8>>,
    pub kummer_part: Vec<Vec<String>>,
    /// Decorative: the datum does not depend on the prime.
    pub ell: Option<u64>,
    pub sign_convention: i8,
}

#[derive(Clone, Debug)]
pub struct ExtensionClassReport {
    pub class: SymbolicExtensionClass,
    pub verdict: Verdict,
    pub certificate: Option<RegulatorCertificate>,
    pub certificates: Vec<String>,
    pub remark: Option<String>,
}

pub fn extension_class(
    field: &TotallyRealField,
    units: &UnitSystem,
    galois: &GaloisDatum,
    margin: &BigRational,
    precision: &Precision,
    ell: Option<u64>,
) -> Result<ExtensionClassReport, ExtClassError> {
    let r = field.degree();
    let eps_matrix = galois.eps_matrix();
    let class = SymbolicExtensionClass {
        eps_matrix: eps_matrix.clone(),
        kummer_part: units.units.iter().map(FieldElement::to_strings).collect(),
        ell,
        sign_convention: 1,
    };
    let mut certificates = Vec::new();
    let eps_nonzero = eps_matrix.iter().flatten().any(|&x| x == 1);
    if eps_nonzero {
        certificates.push(format!("component map is surjective onto {} components", galois.components()));
    }
    let remark = (r == 2).then(|| {
        "r = 2: the boundary/interior extension sits in middle degree; the same argument applies".to_string()
    });
    let (verdict, certificate) = match certified_regulator(field, units, margin, precision) {
        Ok(cert) => {
            certificates.push(format!(
                "log-embedding minor {} excludes 0 at {} bits",
                cert.regulator, cert.matrix.bits
            ));
            let v = if eps_nonzero && cert.consistent() { Verdict::Nontrivial } else { Verdict::Indeterminate };
            (v, Some(cert))
        }
        Err(ExtClassError::PrecisionExhausted { cap }) => {
            certificates.push(format!("rank certificate undecided at the {cap}-bit cap"));
            (Verdict::Indeterminate, None)
        }
        Err(e) => return Err(e),
    };
    Ok(ExtensionClassReport { class, verdict, certificate, certificates, remark })
}

/// Per-degree classification of where the boundary extension splits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub r: usize,
    /// Degrees `n` with `H^n_c` uniquely split.
    pub compact: Vec<usize>,
    /// Degrees `n` with `H^n` uniquely split.
    pub ordinary: Vec<usize>,
    pub non_split_compact: Vec<usize>,
    pub non_split_ordinary: Vec<usize>,
    pub justification: String,
    pub remark: Option<String>,
}

pub fn splitting_report(r: usize) -> SplittingReport {
    let justification = "boundary pure of weight 0".to_string();
    if r <= 2 {
        return SplittingReport {
            r,
            compact: Vec::new(),
            ordinary: Vec::new(),
            non_split_compact: vec![2],
            non_split_ordinary: vec![2],
            justification,
            remark: Some("r = 2: only the middle degree carries the extension, treated as a separate case".into()),
        };
    }
    SplittingReport {
        r,
        compact: (3..=r).collect(),
        ordinary: (r..2 * r - 2).collect(),
        non_split_compact: vec![2],
        non_split_ordinary: vec![2 * r - 2],
        justification,
        remark: None,
    }
}

/// Polynomial over Q in the lift coefficients `c_{tau,i}`, keyed by
/// exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoeffPoly(BTreeMap<Vec<u32>, BigRational>);

impl CoeffPoly {
    pub fn constant(q: BigRational, nvars: usize) -> Self {
        let mut m = BTreeMap::new();
        if !q.is_zero() {
            m.insert(vec![0; nvars], q);
        }
        CoeffPoly(m)
    }

    pub fn variable(index: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        CoeffPoly(BTreeMap::from([(e, BigRational::one())]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the polynomial is the constant `q`.
    pub fn is_constant(&self, q: &BigRational) -> bool {
        match self.0.len() {
            0 => q.is_zero(),
            1 => {
                let (e, c) = self.0.iter().next().unwrap();
                e.iter().all(|&x| x == 0) && c == q
            }
            _ => false,
        }
    }

    /// True when no lift coefficient occurs.
    pub fn is_scalar(&self) -> bool {
        self.0.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    fn add_assign(&mut self, o: &CoeffPoly) {
        for (e, c) in &o.0 {
            let entry = self.0.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                self.0.remove(e);
            }
        }
    }

    fn mul(&self, o: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_assign(&CoeffPoly(BTreeMap::from([(e, c1 * c2)])));
            }
        }
        out
    }
}

/// Monomial in the commuting degree-2 generators `x_tau` and `b_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub b: Vec<u32>,
}

impl Monomial {
    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            x: self.x.iter().zip(&o.x).map(|(a, b)| a + b).collect(),
            b: self.b.iter().zip(&o.b).map(|(a, b)| a + b).collect(),
        }
    }

    /// In the ideal `<b_i x_tau, b_i b_j>`: some boundary factor times any
    /// other generator.
    pub fn is_killed(&self) -> bool {
        let bdeg: u32 = self.b.iter().sum();
        let xdeg: u32 = self.x.iter().sum();
        bdeg >= 1 && bdeg + xdeg >= 2
    }

    pub fn is_pure_x(&self) -> bool {
        self.b.iter().all(|&e| e == 0)
    }
}

/// Element of the lift algebra with polynomial coefficients. Generators
/// all sit in degree 2 and commute without signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftElement {
    pub r: usize,
    pub nb: usize,
    pub terms: BTreeMap<Monomial, CoeffPoly>,
}

impl LiftElement {
    pub fn one(r: usize, nb: usize) -> Self {
        let mono = Monomial { x: vec![0; r], b: vec![0; nb] };
        LiftElement {
            r,
            nb,
            terms: BTreeMap::from([(mono, CoeffPoly::constant(BigRational::one(), r * nb))]),
        }
    }

    /// `x_I` for a set of embedding indices.
    pub fn x_monomial(r: usize, nb: usize, set: &[usize]) -> Self {
        let mut x = vec![0; r];
        for &t in set {
            x[t] += 1;
        }
        LiftElement {
            r,
            nb,
            terms: BTreeMap::from([(Monomial { x, b: vec![0; nb] }, CoeffPoly::constant(BigRational::one(), r * nb))]),
        }
    }

    /// Generic lift `x_tau + sum_i c_{tau,i} b_i` of `eta_tau` to compact
    /// support cohomology.
    pub fn generic_lift(r: usize, nb: usize, tau: usize) -> Self {
        let nvars = r * nb;
        let mut terms = BTreeMap::new();
        let mut x = vec![0; r];
        x[tau] = 1;
        terms.insert(Monomial { x, b: vec![0; nb] }, CoeffPoly::constant(BigRational::one(), nvars));
        for i in 0..nb {
            let mut b = vec![0; nb];
            b[i] = 1;
            terms.insert(Monomial { x: vec![0; r], b }, CoeffPoly::variable(tau * nb + i, nvars));
        }
        LiftElement { r, nb, terms }
    }

    /// Product without reduction.
    pub fn mul_raw(&self, o: &LiftElement) -> LiftElement {
        let mut terms: BTreeMap<Monomial, CoeffPoly> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let prod = c1.mul(c2);
                let entry = terms.entry(m1.mul(m2)).or_default();
                entry.add_assign(&prod);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LiftElement { r: self.r, nb: self.nb, terms }
    }

    pub fn reduce(&self) -> LiftElement {
        let terms = self
            .terms
            .iter()
            .filter(|(m, c)| !m.is_killed() && !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        LiftElement { r: self.r, nb: self.nb, terms }
    }

    pub fn mul(&self, o: &LiftElement) -> LiftElement {
        self.mul_raw(o).reduce()
    }

    /// Number of monomials that involve a boundary symbol or a lift
    /// coefficient.
    pub fn cross_terms(&self) -> usize {
        self.terms.iter().filter(|(m, c)| !m.is_pure_x() || !c.is_scalar()).count()
    }
}

/// Trace of the cup-product computation for one `(r, m)`.
#[derive(Clone, Debug, Serialize)]
pub struct LiftTrace {
    pub r: usize,
    pub m: usize,
    pub boundary_symbols: usize,
    pub products: usize,
    /// Cross terms present before reduction, summed over all products.
    pub cross_terms_killed: usize,
    pub all_reduce_to_x: bool,
    pub confluent: bool,
    pub independent: bool,
}

impl LiftTrace {
    pub fn passed(&self) -> bool {
        self.all_reduce_to_x && self.confluent && self.independent
    }
}

pub fn lift_independence_check(r: usize, m: usize) -> Result<LiftTrace, ExtClassError> {
    if m <= 1 || 2 * m > r {
        return Err(ExtClassError::OutOfRange { r, m });
    }
    let nb = r - 1;
    let lifts: Vec<LiftElement> = (0..r).map(|t| LiftElement::generic_lift(r, nb, t)).collect();
    let sets = subsets(r, m);
    let mut all_reduce = true;
    let mut confluent = true;
    let mut killed = 0;
    let mut normal_forms = Vec::with_capacity(sets.len());
    for set in &sets {
        let stepwise = set
            .iter()
            .fold(LiftElement::one(r, nb), |acc, &t| acc.mul(&lifts[t]));
        let raw = set
            .iter()
            .rev()
            .fold(LiftElement::one(r, nb), |acc, &t| acc.mul_raw(&lifts[t]));
        killed += raw.cross_terms();
        let at_end = raw.reduce();
        confluent &= stepwise == at_end;
        all_reduce &= stepwise == LiftElement::x_monomial(r, nb, set);
        normal_forms.push(stepwise);
    }
    let mut monomials: Vec<&Monomial> = normal_forms.iter().filter_map(|e| e.terms.keys().next()).collect();
    monomials.sort();
    monomials.dedup();
    let independent = monomials.len() == sets.len() && normal_forms.iter().all(|e| e.terms.len() == 1);
    Ok(LiftTrace {
        r,
        m,
        boundary_symbols: nb,
        products: sets.len(),
        cross_terms_killed: killed,
        all_reduce_to_x: all_reduce,
        confluent,
        independent,
    })
}
