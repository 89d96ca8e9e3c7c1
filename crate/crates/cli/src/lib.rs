//! Library side of the `plectic` command: input resolution, report
//! documents and the self-test suites. `main.rs` only parses arguments.

pub mod report;
pub mod selftest;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use plectic_core::cohmodel::{CohModelError, CuspFormDim, GaloisDatum, GaloisDatumSpec};
use plectic_core::extclass::{ExtClassError, Precision};
use plectic_core::numfield::{
    FieldElement, FieldSpec, NumFieldError, TotallyRealField, UnitProvenance, UnitSystem,
};
use plectic_core::plectic::PlecticError;
use plectic_core::quadarith::{
    class_data, fundamental_unit, is_squarefree, QuadArithError, QuadClassData, QuadField,
};
use plectic_core::toroidal::ToroidalError;
use serde_json::json;
use std::fmt;
use std::path::PathBuf;

/// Exit status 1: an invariant failed or a verdict stayed undecided.
pub const EXIT_VIOLATION: u8 = 1;
/// Exit status 2: the input was rejected.
pub const EXIT_BAD_INPUT: u8 = 2;

/// Error as printed on stdout: `{"error": code, "detail": message}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub detail: String,
    pub exit: u8,
}

impl CliError {
    pub fn bad_input(code: &str, detail: impl Into<String>) -> Self {
        CliError { code: code.into(), detail: detail.into(), exit: EXIT_BAD_INPUT }
    }

    pub fn violation(code: &str, detail: impl Into<String>) -> Self {
        CliError { code: code.into(), detail: detail.into(), exit: EXIT_VIOLATION }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&json!({ "error": self.code, "detail": self.detail }))
            .expect("error object serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

impl std::error::Error for CliError {}

/// Variant name of an error enum, taken from its `Debug` form.
fn variant<E: fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or("Error").to_string()
}

impl From<NumFieldError> for CliError {
    fn from(e: NumFieldError) -> Self {
        CliError::bad_input(&variant(&e), e.to_string())
    }
}

impl From<QuadArithError> for CliError {
    fn from(e: QuadArithError) -> Self {
        match e {
            QuadArithError::Field(inner) => inner.into(),
            QuadArithError::InconsistentData(_) => CliError::violation("InconsistentData", e.to_string()),
            _ => CliError::bad_input(&variant(&e), e.to_string()),
        }
    }
}

impl From<CohModelError> for CliError {
    fn from(e: CohModelError) -> Self {
        match e {
            CohModelError::InvariantViolation(_) => CliError::violation("InvariantViolation", e.to_string()),
            _ => CliError::bad_input(&variant(&e), e.to_string()),
        }
    }
}

impl From<ExtClassError> for CliError {
    fn from(e: ExtClassError) -> Self {
        match e {
            ExtClassError::Field(inner) => inner.into(),
            ExtClassError::RankDeficient(_) | ExtClassError::OutOfRange { .. } | ExtClassError::BadMargin => {
                CliError::bad_input(&variant(&e), e.to_string())
            }
            _ => CliError::violation(&variant(&e), e.to_string()),
        }
    }
}

impl From<PlecticError> for CliError {
    fn from(e: PlecticError) -> Self {
        CliError::bad_input(&variant(&e), e.to_string())
    }
}

impl From<ToroidalError> for CliError {
    fn from(e: ToroidalError) -> Self {
        match e {
            ToroidalError::Quad(inner) => inner.into(),
            ToroidalError::Invariant(_) | ToroidalError::NonTermination(_) => {
                CliError::violation(&variant(&e), e.to_string())
            }
            _ => CliError::bad_input(&variant(&e), e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(CliError::bad_input("BadArgument", format!("unknown format {other:?}"))),
        }
    }
}

/// Where the field comes from: exactly one of the two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSource {
    Quadratic(i64),
    Spec(PathBuf),
}

/// Parsed command-line configuration shared by the field-based commands.
#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub field: FieldSource,
    pub level: Option<PathBuf>,
    pub s: CuspFormDim,
    pub precision: Precision,
    pub format: Format,
}

impl ReportConfig {
    pub fn new(
        m: Option<i64>,
        field: Option<PathBuf>,
        level: Option<PathBuf>,
        s: Option<&str>,
        start_bits: Option<u32>,
        format: Format,
    ) -> Result<Self, CliError> {
        let field = match (m, field) {
            (Some(m), None) => FieldSource::Quadratic(m),
            (None, Some(path)) => FieldSource::Spec(path),
            (Some(_), Some(_)) => return Err(CliError::bad_input("BadArgument", "give either --m or --field, not both")),
            (None, None) => return Err(CliError::bad_input("BadArgument", "one of --m or --field is required")),
        };
        let mut precision = Precision::from_env();
        if let Some(bits) = start_bits {
            if bits == 0 {
                return Err(CliError::bad_input("BadArgument", "--precision must be positive"));
            }
            precision.start_bits = bits;
        }
        Ok(ReportConfig { field, level, s: parse_s(s.unwrap_or("symbolic"))?, precision, format })
    }
}

pub fn parse_s(s: &str) -> Result<CuspFormDim, CliError> {
    if s == "symbolic" {
        return Ok(CuspFormDim::Symbolic);
    }
    s.parse::<u64>()
        .map(CuspFormDim::Known)
        .map_err(|_| CliError::bad_input("BadArgument", format!("--s must be a nonnegative integer or \"symbolic\", got {s:?}")))
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::bad_input("Io", format!("{}: {e}", path.display())))
}

/// A field with its unit system, resolved from the configuration.
pub struct ResolvedField {
    pub field: TotallyRealField,
    pub units: UnitSystem,
    /// Squarefree `m` with `F = Q(sqrt m)` when `r = 2`.
    pub quadratic: Option<i64>,
    pub class_data: Option<QuadClassData>,
}

pub fn resolve_field(source: &FieldSource) -> Result<ResolvedField, CliError> {
    match source {
        FieldSource::Quadratic(m) => {
            let q = QuadField::new(*m)?;
            let field = q.to_field()?;
            let unit = fundamental_unit(*m)?.to_field_element();
            let units = field.check_units_with(&[unit], UnitProvenance::Computed)?;
            Ok(ResolvedField { field, units, quadratic: Some(*m), class_data: Some(class_data(*m)?) })
        }
        FieldSource::Spec(path) => {
            let spec = FieldSpec::from_json(&read(path)?)?;
            let field = spec.build_field()?;
            let r = field.degree();
            let quadratic = (r == 2).then(|| quadratic_m(&field)).flatten();
            let units = match spec.parse_units(&field)? {
                Some(units) => field.check_units(&units)?,
                None if r == 2 => {
                    let m = quadratic.ok_or_else(|| CliError::bad_input("UnitsRequired", "could not identify Q(sqrt m)"))?;
                    let unit = quadratic_unit_in_basis(&field, m)?;
                    field.check_units_with(&[unit], UnitProvenance::Computed)?
                }
                None => {
                    return Err(CliError::bad_input(
                        "UnitsRequired",
                        format!("degree {r} field: supply r - 1 = {} units in the field spec", r - 1),
                    ))
                }
            };
            let class_data = quadratic.map(class_data).transpose()?;
            Ok(ResolvedField { field, units, quadratic, class_data })
        }
    }
}

fn squarefree_part(n: &BigInt) -> Option<(i64, BigInt)> {
    // n = f^2 m with m squarefree; small discriminants only
    let n: i64 = n.try_into().ok()?;
    let mut m = n;
    let mut f = 1i64;
    let mut p = 2i64;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            f *= p;
        }
        p += 1;
    }
    debug_assert!(is_squarefree(m));
    Some((m, BigInt::from(f)))
}

/// `m` with `Q[x]/(x^2 + b x + c) = Q(sqrt m)`.
fn quadratic_m(field: &TotallyRealField) -> Option<i64> {
    let (m, _) = squarefree_part(field.discriminant())?;
    (m > 1).then_some(m)
}

/// Fundamental unit of `Q(sqrt m)` in the power basis of a root `t` of
/// `x^2 + b x + c`, using `sqrt(disc) = 2t + b`.
fn quadratic_unit_in_basis(field: &TotallyRealField, m: i64) -> Result<FieldElement, CliError> {
    let c = field.coefficients();
    let b = BigRational::from_integer(c[1].clone());
    let (_, f) = squarefree_part(field.discriminant())
        .ok_or_else(|| CliError::bad_input("UnitsRequired", "discriminant too large"))?;
    let u = fundamental_unit(m)?.to_quad_number();
    // sqrt m = (2t + b)/f
    let f = BigRational::from_integer(f);
    let two = BigRational::from_integer(2.into());
    let t_coeff = &u.b * &two / &f;
    let constant = &u.a + &u.b * &b / &f;
    Ok(FieldElement::new(vec![constant, t_coeff]))
}

/// Level datum from the `--level` file, or the default: trivial group, one
/// component, `h` cusps for `r = 2` and one cusp otherwise.
pub fn resolve_level(resolved: &ResolvedField, level: &Option<PathBuf>) -> Result<(GaloisDatum, &'static str), CliError> {
    let r = resolved.field.degree();
    match level {
        Some(path) => {
            let spec: GaloisDatumSpec = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::bad_input("Parse", format!("level datum: {e}")))?;
            Ok((spec.build(r)?, "supplied"))
        }
        None => {
            let h = resolved.class_data.as_ref().map_or(1, |c| c.class_number);
            Ok((GaloisDatum::level_one(r, h)?, "default level one"))
        }
    }
}

/// Margin below which the regulator rank certificate is not accepted.
pub fn margin() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000))
}
