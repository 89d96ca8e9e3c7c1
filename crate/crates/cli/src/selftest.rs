//! Built-in self-test: the library's own invariants over fixed inputs.

use crate::report::{emit, run_report};
use crate::{margin, CliError, FieldSource, Format, ReportConfig};
use plectic_core::cohmodel::{table_from_counts, CuspFormDim, GaloisDatum};
use plectic_core::extclass::{
    certified_regulator, extension_class, hodge_regulator_matrix, lift_independence_check, Precision, RegulatorMatrix,
    Verdict,
};
use plectic_core::interval::Interval;
use plectic_core::numfield::{make_field, FieldElement, TotallyRealField, UnitSystem};
use plectic_core::plectic::{
    builtin_cyclic, builtin_plectic, builtin_shapiro, builtin_tensor, h1, plectic_h1_check, shapiro_check,
    tensor_induction_check,
};
use plectic_core::quadarith::{class_data, fundamental_unit, is_squarefree, QuadField};
use plectic_core::toroidal::cusp_resolution;

pub const SUITES: [&str; 10] =
    ["regulator", "verdict", "lift", "table", "shapiro", "plectic", "tensor", "cusp", "classnumber", "determinism"];

/// Deliberate faults, to check that the harness notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sabotage {
    /// Shift one log-embedding entry so its row no longer sums to zero.
    RowSum,
}

impl std::str::FromStr for Sabotage {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rowsum" => Ok(Sabotage::RowSum),
            other => Err(CliError::bad_input("BadArgument", format!("unknown sabotage {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<String, String>;

/// The regulator test set: `Q(sqrt m)` for `m` in {2, 3, 5, 10} and the
/// cubic field of discriminant 49 with units `x`, `x - 1`.
pub fn regulator_fields() -> Vec<(String, TotallyRealField, UnitSystem)> {
    let mut out = Vec::new();
    for m in [2, 3, 5, 10] {
        let q = QuadField::new(m).expect("squarefree");
        let f = q.to_field().expect("quadratic field");
        let u = f.check_units(&[fundamental_unit(m).expect("unit").to_field_element()]).expect("unit");
        out.push((format!("Q(sqrt {m})"), f, u));
    }
    let f = make_field(&[1, -2, -1, 1]).expect("cubic");
    let u = f
        .check_units(&[FieldElement::from_ints(&[0, 1, 0]), FieldElement::from_ints(&[-1, 1, 0])])
        .expect("units");
    out.push(("x^3 - x^2 - 2x + 1".into(), f, u));
    out
}

fn sabotaged(m: &RegulatorMatrix) -> RegulatorMatrix {
    let mut m = m.clone();
    m.entries[0][0] = m.entries[0][0].add(&Interval::from_int(1));
    m
}

fn regulator_suite(sabotage: Option<Sabotage>) -> Check {
    for (name, f, u) in regulator_fields() {
        let m = hodge_regulator_matrix(&f, &u, &margin(), &Precision::from_env()).map_err(|e| format!("{name}: {e}"))?;
        let m = if sabotage == Some(Sabotage::RowSum) { sabotaged(&m) } else { m };
        if let Some(j) = m.row_sums().iter().position(|s| !s.contains_zero()) {
            return Err(format!("{name}: row sums contain 0 violated at row {j}"));
        }
        if !m.minors_consistent() {
            return Err(format!("{name}: maximal minors disagree"));
        }
        let cert = certified_regulator(&f, &u, &margin(), &Precision::from_env()).map_err(|e| format!("{name}: {e}"))?;
        if !cert.consistent() {
            return Err(format!("{name}: doubled precision does not reproduce the regulator"));
        }
    }
    Ok("5 fields, row sums contain 0, minors agree, doubled precision overlaps".into())
}

fn verdict_suite() -> Check {
    for (name, f, u) in regulator_fields() {
        let g = GaloisDatum::level_one(f.degree(), 1).map_err(|e| e.to_string())?;
        let rep = extension_class(&f, &u, &g, &margin(), &Precision::from_env(), None).map_err(|e| format!("{name}: {e}"))?;
        if rep.verdict != Verdict::Nontrivial {
            return Err(format!("{name}: verdict {:?}", rep.verdict));
        }
    }
    Ok("nontrivial on all 5 fields".into())
}

fn lift_suite() -> Check {
    let mut n = 0;
    for r in 3..=8 {
        for m in 2..=r / 2 {
            let t = lift_independence_check(r, m).map_err(|e| e.to_string())?;
            if !t.passed() {
                return Err(format!("r = {r}, m = {m}: {t:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} (r, m) pairs"))
}

fn table_suite() -> Check {
    let mut n = 0;
    for r in 2..=6 {
        for c in 1..=2 {
            for h in 1..=3 {
                if h < c {
                    continue;
                }
                for s in [CuspFormDim::Known(0), CuspFormDim::Known(1), CuspFormDim::Symbolic] {
                    let t = table_from_counts(r, c, h, s).map_err(|e| format!("({r}, {c}, {h}, {s:?}): {e}"))?;
                    t.verify().map_err(|e| format!("({r}, {c}, {h}, {s:?}): {e}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} tables verified"))
}

fn shapiro_suite() -> Check {
    let family = builtin_shapiro();
    for inst in &family {
        let out = shapiro_check(&inst.q, &inst.sub, &inst.module).map_err(|e| format!("{}: {e}", inst.name))?;
        if !out.passed {
            return Err(format!("{}: {:?} vs {:?}", inst.name, out.lhs, out.rhs));
        }
    }
    Ok(format!("{} instances", family.len()))
}

fn plectic_suite() -> Check {
    let family = builtin_plectic();
    for inst in &family {
        let out = plectic_h1_check(&inst.group, inst.size, &inst.module).map_err(|e| format!("{}: {e}", inst.name))?;
        if !out.passed {
            return Err(format!("{}: {:?} vs {:?}", inst.name, out.lhs, out.rhs));
        }
    }
    let cyclic = builtin_cyclic();
    for inst in &cyclic {
        h1(&plectic_core::group::FiniteGroup::cyclic(inst.n), &inst.module).map_err(|e| format!("{}: {e}", inst.name))?;
    }
    Ok(format!("{} plectic instances, {} cyclic modules", family.len(), cyclic.len()))
}

fn tensor_suite() -> Check {
    let family = builtin_tensor();
    for inst in &family {
        let k = inst.q.order() / inst.sub.len();
        for m in 0..=k {
            let out = tensor_induction_check(&inst.q, &inst.sub, &inst.chi, m).map_err(|e| format!("{}: {e}", inst.name))?;
            if !out.passed || out.dimension as u64 != plectic_core::linalg::binomial(k, m) {
                return Err(format!("{} m = {m}", inst.name));
            }
        }
    }
    Ok(format!("{} instances", family.len()))
}

fn cusp_suite() -> Check {
    for m in [2, 3, 5, 6, 7, 10] {
        let c = cusp_resolution(m).map_err(|e| format!("m = {m}: {e}"))?;
        if c.nerve.truncated != [1, 0] || c.nerve.quotient != [1, 1] {
            return Err(format!("m = {m}: nerve ranks {:?}", c.nerve));
        }
        if c.cycle.len() >= 2 && !c.intersection.as_ref().is_some_and(|i| i.negative_definite) {
            return Err(format!("m = {m}: intersection matrix not negative definite"));
        }
    }
    Ok("m in {2, 3, 5, 6, 7, 10}".into())
}

fn class_number_suite() -> Check {
    let mut n = 0;
    for m in (2..=200).filter(|&m| is_squarefree(m)) {
        let c = class_data(m).map_err(|e| format!("m = {m}: {e}"))?;
        let (hp, h) = (c.narrow_class_number, c.class_number);
        let rule = if c.unit_norm == -1 { hp == h } else { hp == 2 * h };
        if !rule {
            return Err(format!("m = {m}: h+ = {hp}, h = {h}, N(eps) = {}", c.unit_norm));
        }
        n += 1;
    }
    Ok(format!("{n} fields"))
}

fn determinism_suite() -> Check {
    let config = ReportConfig {
        field: FieldSource::Quadratic(5),
        level: None,
        s: CuspFormDim::Symbolic,
        precision: Precision::from_env(),
        format: Format::Json,
    };
    let once = || run_report(&config).map(|(doc, _)| emit(&doc, Format::Json)).map_err(|e| e.to_string());
    if once()? != once()? {
        return Err("two report runs differ".into());
    }
    Ok("report for m = 5 is byte-identical across runs".into())
}

pub fn run(only: &[String], sabotage: Option<Sabotage>) -> Result<Vec<SuiteResult>, CliError> {
    for name in only {
        if !SUITES.contains(&name.as_str()) {
            return Err(CliError::bad_input("BadArgument", format!("unknown suite {name:?}, expected one of {SUITES:?}")));
        }
    }
    let selected = SUITES.iter().filter(|s| only.is_empty() || only.iter().any(|o| o == *s));
    Ok(selected
        .map(|&name| {
            let outcome = match name {
                "regulator" => regulator_suite(sabotage),
                "verdict" => verdict_suite(),
                "lift" => lift_suite(),
                "table" => table_suite(),
                "shapiro" => shapiro_suite(),
                "plectic" => plectic_suite(),
                "tensor" => tensor_suite(),
                "cusp" => cusp_suite(),
                "classnumber" => class_number_suite(),
                _ => determinism_suite(),
            };
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            SuiteResult { name, passed, detail }
        })
        .collect())
}
