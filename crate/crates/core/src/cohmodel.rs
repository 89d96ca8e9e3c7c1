//! Weight-graded dimension tables for the cohomology of a Hilbert modular
//! variety of dimension `r`: compact support `H_c`, ordinary `H`, interior
//! `H_!` and boundary `H_bd`, assembled from the boundary exterior-power
//! description, the interior list, and the short exact sequences that the
//! long boundary sequence splits into.
//!
//! Dimensions may depend linearly on the unknown cusp-form dimension `s`.

use crate::group::{FiniteGroup, GroupError, PermAction};
use crate::linalg::{binomial, subsets};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CohModelError {
    #[error("inconsistent Galois datum: {0}")]
    InconsistentDatum(String),
    #[error("no character is derived for descriptor {0}")]
    UnsupportedDescriptor(Descriptor),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("table invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `constant + s_coeff * s`, with `s` the cusp-form dimension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DimPoly {
    pub constant: i64,
    pub s_coeff: i64,
}

impl DimPoly {
    pub const ZERO: DimPoly = DimPoly { constant: 0, s_coeff: 0 };

    pub fn int(n: i64) -> Self {
        DimPoly { constant: n, s_coeff: 0 }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.constant >= 0 && self.s_coeff >= 0
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// Substitute a concrete value for `s`.
    pub fn eval(&self, s: i64) -> i64 {
        self.constant + self.s_coeff * s
    }
}

impl Add for DimPoly {
    type Output = DimPoly;
    fn add(self, o: DimPoly) -> DimPoly {
        DimPoly { constant: self.constant + o.constant, s_coeff: self.s_coeff + o.s_coeff }
    }
}

impl Sub for DimPoly {
    type Output = DimPoly;
    fn sub(self, o: DimPoly) -> DimPoly {
        self + (-o)
    }
}

impl Neg for DimPoly {
    type Output = DimPoly;
    fn neg(self) -> DimPoly {
        DimPoly { constant: -self.constant, s_coeff: -self.s_coeff }
    }
}

impl std::iter::Sum for DimPoly {
    fn sum<I: Iterator<Item = DimPoly>>(iter: I) -> DimPoly {
        iter.fold(DimPoly::ZERO, Add::add)
    }
}

impl fmt::Display for DimPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s_part = match self.s_coeff {
            0 => String::new(),
            1 => "s".to_string(),
            -1 => "-s".to_string(),
            k => format!("{k}s"),
        };
        match (self.constant, s_part.is_empty()) {
            (c, true) => write!(f, "{c}"),
            (0, false) => write!(f, "{s_part}"),
            (c, false) if self.s_coeff > 0 => write!(f, "{c}+{s_part}"),
            (c, false) => write!(f, "{c}{s_part}"),
        }
    }
}

impl Serialize for DimPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if self.s_coeff == 0 {
            ser.serialize_i64(self.constant)
        } else {
            ser.serialize_str(&self.to_string())
        }
    }
}

/// Dimension of the cusp-form part in middle degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspFormDim {
    Known(u64),
    Symbolic,
}

impl CuspFormDim {
    pub fn as_dim(&self) -> DimPoly {
        match *self {
            CuspFormDim::Known(s) => DimPoly::int(s as i64),
            CuspFormDim::Symbolic => DimPoly { constant: 0, s_coeff: 1 },
        }
    }
}

impl fmt::Display for CuspFormDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CuspFormDim::Known(s) => write!(f, "{s}"),
            CuspFormDim::Symbolic => write!(f, "s"),
        }
    }
}

/// Finite group acting on the components, the cusps and the embeddings,
/// with the equivariant component map `eps: cusps -> pi0`.
#[derive(Clone, Debug)]
pub struct GaloisDatum {
    pub group: FiniteGroup,
    pub pi0: PermAction,
    pub cusps: PermAction,
    pub sigma: PermAction,
    pub eps: Vec<usize>,
}

impl GaloisDatum {
    pub fn new(
        group: FiniteGroup,
        pi0: PermAction,
        cusps: PermAction,
        sigma: PermAction,
        eps: Vec<usize>,
    ) -> Result<Self, CohModelError> {
        let bad = |s: String| Err(CohModelError::InconsistentDatum(s));
        if pi0.degree == 0 {
            return bad("no connected components".into());
        }
        if eps.len() != cusps.degree {
            return bad(format!("eps has {} entries for {} cusps", eps.len(), cusps.degree));
        }
        if let Some(&x) = eps.iter().find(|&&x| x >= pi0.degree) {
            return bad(format!("eps value {x} is not a component"));
        }
        let mut hit = vec![false; pi0.degree];
        for &x in &eps {
            hit[x] = true;
        }
        if let Some(c) = hit.iter().position(|h| !h) {
            return bad(format!("eps is not surjective: component {c} has no cusp"));
        }
        for g in 0..group.order() {
            for (y, &e) in eps.iter().enumerate() {
                if eps[cusps.apply(g, y)] != pi0.apply(g, e) {
                    return bad(format!("eps is not equivariant at element {g}, cusp {y}"));
                }
            }
        }
        Ok(GaloisDatum { group, pi0, cusps, sigma, eps })
    }

    /// Trivial group, one component, `h` cusps, `r` embeddings.
    pub fn level_one(r: usize, h: usize) -> Result<Self, CohModelError> {
        let g = FiniteGroup::trivial();
        Self::new(
            g.clone(),
            PermAction::trivial(&g, 1),
            PermAction::trivial(&g, h),
            PermAction::trivial(&g, r),
            vec![0; h],
        )
    }

    pub fn components(&self) -> usize {
        self.pi0.degree
    }

    pub fn cusp_count(&self) -> usize {
        self.cusps.degree
    }

    /// Incidence matrix of `eps`: row per cusp, one 1 in the column of its
    /// component.
    pub fn eps_matrix(&self) -> Vec<Vec<u8>> {
        self.eps
            .iter()
            .map(|&c| (0..self.components()).map(|j| u8::from(j == c)).collect())
            .collect()
    }
}

/// JSON level datum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaloisDatumSpec {
    /// Standard group name (`"C2"`, `"S3"`, ...) when `table` is absent.
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    pub pi0: usize,
    #[serde(default)]
    pub pi0_action: Option<Vec<Vec<usize>>>,
    pub cusps: usize,
    #[serde(default)]
    pub cusp_action: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub sigma_action: Option<Vec<Vec<usize>>>,
    pub eps: Vec<usize>,
}

impl GaloisDatumSpec {
    pub fn build(&self, r: usize) -> Result<GaloisDatum, CohModelError> {
        let group = match (&self.table, &self.group) {
            (Some(t), _) => FiniteGroup::from_table(t.clone())?,
            (None, Some(name)) => FiniteGroup::by_name(name)?,
            (None, None) => FiniteGroup::trivial(),
        };
        let action = |perms: &Option<Vec<Vec<usize>>>, degree: usize| match perms {
            Some(p) => PermAction::new(&group, degree, p.clone()),
            None => Ok(PermAction::trivial(&group, degree)),
        };
        let pi0 = action(&self.pi0_action, self.pi0)?;
        let cusps = action(&self.cusp_action, self.cusps)?;
        let sigma = action(&self.sigma_action, r)?;
        GaloisDatum::new(group.clone(), pi0, cusps, sigma, self.eps.clone())
    }
}

/// What a graded piece is, as a module for the finite group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index")]
pub enum Descriptor {
    /// `H^0(cusps) (x) wedge^k Hom(units, Q)`, weight 0.
    BoundaryWedge(usize),
    /// Dual of `BoundaryWedge(k)`, twisted by `r`: weight `2r`.
    DualBoundaryWedge(usize),
    /// `H^0(cusps) / H^0(S)` in degree 1 of compact support, weight 0.
    ReducedBoundary,
    /// Its dual in degree `2r - 1`, weight `2r`.
    DualReducedBoundary,
    /// Span of the products `eta_I`, `|I| = m`, on every component.
    EtaSpan(usize),
    /// Cusp forms in middle degree; external input.
    Cusp,
    Zero,
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::BoundaryWedge(k) => write!(f, "BoundaryWedge({k})"),
            Descriptor::DualBoundaryWedge(k) => write!(f, "DualBoundaryWedge({k})"),
            Descriptor::ReducedBoundary => write!(f, "ReducedBoundary"),
            Descriptor::DualReducedBoundary => write!(f, "DualReducedBoundary"),
            Descriptor::EtaSpan(m) => write!(f, "EtaSpan({m})"),
            Descriptor::Cusp => write!(f, "Cusp"),
            Descriptor::Zero => write!(f, "Zero"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPiece {
    pub degree: usize,
    pub weight: i64,
    /// Tate twist exponent `t` in `Q_l(t)`.
    pub twist: i64,
    pub dim: DimPoly,
    pub descriptor: Descriptor,
}

/// Parameters of a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableParams {
    pub r: usize,
    pub components: usize,
    pub cusps: usize,
    pub s: CuspFormDim,
}

impl TableParams {
    /// Dimension and weight data of a piece with the given descriptor.
    pub fn piece(&self, degree: usize, descriptor: Descriptor) -> GradedPiece {
        let r = self.r;
        let (c, h) = (self.components as i64, self.cusps as i64);
        let rr = r as i64;
        let (weight, twist, dim) = match descriptor {
            Descriptor::BoundaryWedge(k) => (0, 0, DimPoly::int(h * binomial(r - 1, k) as i64)),
            Descriptor::DualBoundaryWedge(k) => {
                (2 * rr, -rr, DimPoly::int(h * binomial(r - 1, k) as i64))
            }
            Descriptor::ReducedBoundary => (0, 0, DimPoly::int(h - c)),
            Descriptor::DualReducedBoundary => (2 * rr, -rr, DimPoly::int(h - c)),
            Descriptor::EtaSpan(m) => {
                (2 * m as i64, -(m as i64), DimPoly::int(c * binomial(r, m) as i64))
            }
            Descriptor::Cusp => (rr, 0, self.s.as_dim()),
            Descriptor::Zero => (0, 0, DimPoly::ZERO),
        };
        GradedPiece { degree, weight, twist, dim, descriptor }
    }
}

/// `dim H^n_bd` for `n = 0..=2r`.
pub fn boundary_dims(r: usize, cusps: usize) -> Vec<u64> {
    (0..=2 * r)
        .map(|n| {
            let h = cusps as u64;
            if n < r {
                h * binomial(r - 1, n)
            } else if n < 2 * r {
                h * binomial(r - 1, 2 * r - 1 - n)
            } else {
                0
            }
        })
        .collect()
}

fn boundary_pieces(p: &TableParams, n: usize) -> Vec<GradedPiece> {
    let r = p.r;
    if n < r {
        vec![p.piece(n, Descriptor::BoundaryWedge(n))]
    } else if n < 2 * r {
        vec![p.piece(n, Descriptor::DualBoundaryWedge(2 * r - 1 - n))]
    } else {
        Vec::new()
    }
}

fn interior_pieces(p: &TableParams, n: usize) -> Vec<GradedPiece> {
    let r = p.r;
    if n == 0 || n >= 2 * r {
        return Vec::new();
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        out.push(p.piece(n, Descriptor::EtaSpan(n / 2)));
    }
    if n == r {
        out.push(p.piece(n, Descriptor::Cusp));
    }
    out
}

/// `dim H^n_!` for `n = 0..=2r`.
pub fn interior_dims(r: usize, components: usize, s: CuspFormDim) -> Vec<DimPoly> {
    let p = TableParams { r, components, cusps: 0, s };
    (0..=2 * r)
        .map(|n| interior_pieces(&p, n).iter().map(|x| x.dim).sum())
        .collect()
}

/// One degree of the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub compact: Vec<GradedPiece>,
    pub ordinary: Vec<GradedPiece>,
    pub interior: Vec<GradedPiece>,
    pub boundary: Vec<GradedPiece>,
}

fn total(pieces: &[GradedPiece]) -> DimPoly {
    pieces.iter().map(|p| p.dim).sum()
}

impl TableRow {
    pub fn hc(&self) -> DimPoly {
        total(&self.compact)
    }
    pub fn h(&self) -> DimPoly {
        total(&self.ordinary)
    }
    pub fn hint(&self) -> DimPoly {
        total(&self.interior)
    }
    pub fn hbd(&self) -> DimPoly {
        total(&self.boundary)
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyTable {
    pub params: TableParams,
    pub rows: Vec<TableRow>,
}

/// Assemble the table for dimension `r`, the given level datum, and cusp
/// form dimension `s`.
pub fn assemble_table(
    r: usize,
    galois: &GaloisDatum,
    s: CuspFormDim,
) -> Result<CohomologyTable, CohModelError> {
    if r < 2 {
        return Err(CohModelError::InvalidParameters(format!("r = {r} < 2")));
    }
    if galois.sigma.degree != r {
        return Err(CohModelError::InconsistentDatum(format!(
            "action on embeddings has degree {}, expected {r}",
            galois.sigma.degree
        )));
    }
    table_from_counts(r, galois.components(), galois.cusp_count(), s)
}

/// Same as [`assemble_table`] from the bare counts `c = |pi0|`,
/// `h = |cusps|`.
pub fn table_from_counts(
    r: usize,
    components: usize,
    cusps: usize,
    s: CuspFormDim,
) -> Result<CohomologyTable, CohModelError> {
    if r < 2 {
        return Err(CohModelError::InvalidParameters(format!("r = {r} < 2")));
    }
    if components == 0 || cusps < components {
        return Err(CohModelError::InconsistentDatum(format!(
            "{cusps} cusps cannot cover {components} components"
        )));
    }
    let p = TableParams { r, components, cusps, s };
    let rows = (0..=2 * r)
        .map(|n| {
            let boundary = boundary_pieces(&p, n);
            let interior = interior_pieces(&p, n);
            let compact = match n {
                0 => Vec::new(),
                1 => vec![p.piece(1, Descriptor::ReducedBoundary)],
                n if n <= r => {
                    let mut v: Vec<GradedPiece> = boundary_pieces(&p, n - 1)
                        .into_iter()
                        .map(|x| GradedPiece { degree: n, ..x })
                        .collect();
                    v.extend(interior.iter().copied());
                    v
                }
                n if n <= 2 * r - 2 => interior.clone(),
                n if n == 2 * r - 1 => Vec::new(),
                _ => vec![p.piece(n, Descriptor::EtaSpan(r))],
            };
            let ordinary = match n {
                0 => vec![p.piece(0, Descriptor::EtaSpan(0))],
                1 => Vec::new(),
                n if n < r => interior.clone(),
                n if n <= 2 * r - 2 => {
                    let mut v = interior.clone();
                    v.extend(boundary.iter().copied());
                    v
                }
                n if n == 2 * r - 1 => vec![p.piece(n, Descriptor::DualReducedBoundary)],
                _ => Vec::new(),
            };
            TableRow { n, compact, ordinary, interior, boundary }
        })
        .collect();
    let table = CohomologyTable { params: p, rows };
    table.verify()?;
    Ok(table)
}

/// Basis labels `eta_I` for `|I| = m`, one set per component.
pub fn eta_labels(r: usize, components: usize, m: usize) -> Vec<(usize, Vec<usize>)> {
    (0..components)
        .flat_map(|c| subsets(r, m).into_iter().map(move |i| (c, i)))
        .collect()
}

impl CohomologyTable {
    pub fn r(&self) -> usize {
        self.params.r
    }

    pub fn row(&self, n: usize) -> &TableRow {
        &self.rows[n]
    }

    /// Check every structural identity of the table; the first failure is
    /// reported.
    pub fn verify(&self) -> Result<(), CohModelError> {
        let r = self.r();
        let fail = |s: String| Err(CohModelError::InvariantViolation(s));
        let alt = |f: &dyn Fn(&TableRow) -> DimPoly| -> DimPoly {
            self.rows
                .iter()
                .map(|row| if row.n % 2 == 0 { f(row) } else { -f(row) })
                .sum()
        };
        let exact = alt(&|row| row.hc() - row.h() + row.hbd());
        if !exact.is_zero() {
            return fail(format!("alternating sum of the long exact sequence is {exact}"));
        }
        for n in 0..=2 * r {
            let row = &self.rows[n];
            for (name, d) in [("Hc", row.hc()), ("H", row.h()), ("H!", row.hint()), ("Hbd", row.hbd())] {
                if !d.is_nonnegative() {
                    return fail(format!("dim {name}^{n} = {d} is negative"));
                }
            }
            if n < 2 * r && row.hbd() != self.rows[2 * r - 1 - n].hbd() {
                return fail(format!("boundary duality fails in degree {n}"));
            }
            if row.hc() != self.rows[2 * r - n].h() {
                return fail(format!("Poincare duality fails: Hc^{n} vs H^{}", 2 * r - n));
            }
            for piece in row.compact.iter().chain(&row.ordinary).chain(&row.interior).chain(&row.boundary) {
                let expected = self.params.piece(piece.degree, piece.descriptor);
                if (expected.weight, expected.twist, expected.dim) != (piece.weight, piece.twist, piece.dim) {
                    return fail(format!("piece {} in degree {n} has inconsistent data", piece.descriptor));
                }
                if let Descriptor::EtaSpan(m) = piece.descriptor {
                    let labels = eta_labels(r, self.params.components, m).len() as i64;
                    if piece.dim != DimPoly::int(labels) {
                        return fail(format!("EtaSpan({m}) dimension differs from label count {labels}"));
                    }
                }
            }
        }
        let euler_h = alt(&|row| row.h());
        let euler_c = alt(&|row| row.hc());
        if euler_h != euler_c {
            return fail(format!("Euler characteristics differ: {euler_h} vs {euler_c}"));
        }
        if !self.rows[1].h().is_zero() {
            return fail("H^1 is nonzero".into());
        }
        if !self.rows[2 * r - 1].hc().is_zero() {
            return fail("Hc^(2r-1) is nonzero".into());
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> DimPoly {
        self.rows
            .iter()
            .map(|row| if row.n % 2 == 0 { row.h() } else { -row.h() })
            .sum()
    }

    pub fn to_report(&self) -> TableReport {
        TableReport {
            table: self
                .rows
                .iter()
                .map(|row| {
                    let mut weights = Vec::new();
                    for (space, pieces) in [
                        ("Hc", &row.compact),
                        ("H", &row.ordinary),
                        ("Hint", &row.interior),
                        ("Hbd", &row.boundary),
                    ] {
                        for p in pieces.iter().filter(|p| !p.dim.is_zero()) {
                            weights.push(WeightEntry {
                                space,
                                weight: p.weight,
                                twist: p.twist,
                                dim: p.dim,
                                descriptor: p.descriptor.to_string(),
                            });
                        }
                    }
                    RowReport {
                        n: row.n,
                        hc: row.hc(),
                        h: row.h(),
                        hint: row.hint(),
                        hbd: row.hbd(),
                        weights,
                    }
                })
                .collect(),
            params: self.params,
        }
    }

    /// Plain-text rendering.
    pub fn render(&self) -> String {
        let mut out = format!(
            "r = {}, components = {}, cusps = {}, s = {}\n{:>3} {:>8} {:>8} {:>8} {:>8}\n",
            self.params.r, self.params.components, self.params.cusps, self.params.s, "n", "Hc", "H", "H!", "Hbd"
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{:>3} {:>8} {:>8} {:>8} {:>8}\n",
                row.n,
                row.hc().to_string(),
                row.h().to_string(),
                row.hint().to_string(),
                row.hbd().to_string()
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightEntry {
    pub space: &'static str,
    pub weight: i64,
    pub twist: i64,
    pub dim: DimPoly,
    pub descriptor: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub n: usize,
    #[serde(rename = "Hc")]
    pub hc: DimPoly,
    #[serde(rename = "H")]
    pub h: DimPoly,
    #[serde(rename = "Hint")]
    pub hint: DimPoly,
    #[serde(rename = "Hbd")]
    pub hbd: DimPoly,
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: Vec<RowReport>,
    pub params: TableParams,
}

/// Character of the finite group on the given piece (twist not included).
pub fn module_descriptor(
    piece: &GradedPiece,
    galois: &GaloisDatum,
) -> Result<Vec<i64>, CohModelError> {
    let n = galois.group.order();
    let r = galois.sigma.degree;
    let pi0 = galois.pi0.permutation_character();
    let cusps = galois.cusps.permutation_character();
    Ok(match piece.descriptor {
        Descriptor::EtaSpan(m) => {
            let subs = subsets(r, m);
            (0..n)
                .map(|g| {
                    let fixed = subs
                        .iter()
                        .filter(|s| {
                            let mut img: Vec<usize> = s.iter().map(|&i| galois.sigma.apply(g, i)).collect();
                            img.sort_unstable();
                            &img == *s
                        })
                        .count() as i64;
                    fixed * pi0[g]
                })
                .collect()
        }
        Descriptor::BoundaryWedge(k) | Descriptor::DualBoundaryWedge(k) => {
            let mult = binomial(r - 1, k) as i64;
            cusps.iter().map(|x| x * mult).collect()
        }
        Descriptor::ReducedBoundary | Descriptor::DualReducedBoundary => {
            cusps.iter().zip(&pi0).map(|(a, b)| a - b).collect()
        }
        Descriptor::Zero => vec![0; n],
        Descriptor::Cusp => return Err(CohModelError::UnsupportedDescriptor(Descriptor::Cusp)),
    })
}
