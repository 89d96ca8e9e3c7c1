//! JSON documents for every subcommand, plus a plain-text rendering.

use crate::{margin, resolve_field, resolve_level, CliError, Format, ReportConfig, ResolvedField};
use plectic_core::cohmodel::{assemble_table, table_from_counts, CohomologyTable, CuspFormDim, GaloisDatum};
use plectic_core::extclass::{extension_class, splitting_report, ExtensionClassReport, Precision, RegulatorMatrix, Verdict};
use plectic_core::interval::Interval;
use plectic_core::numfield::{rational_string, Irreducibility, UnitProvenance};
use plectic_core::plectic::{
    builtin_plectic, builtin_shapiro, builtin_tensor, plectic_h1_check, shapiro_check, tensor_induction_check, Instance,
    PlecticInstance, ShapiroInstance, TensorInstance,
};
use plectic_core::toroidal::cusp_resolution;
use serde_json::{json, Value};

/// Decimal places in emitted interval endpoints.
pub const DIGITS: u32 = 24;

fn iv(x: &Interval) -> Value {
    let d = x.to_decimal(DIGITS);
    json!({ "lo": d.lo, "hi": d.hi })
}

fn provenance(p: UnitProvenance) -> &'static str {
    match p {
        UnitProvenance::Computed => "computed",
        UnitProvenance::Supplied => "supplied",
    }
}

pub fn field_doc(f: &ResolvedField) -> Value {
    let field = &f.field;
    let bits = 96;
    let embeddings: Vec<Value> = (0..field.degree()).map(|i| iv(&field.embedding_enclosure(i, bits))).collect();
    let mut doc = json!({
        "poly": field.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "degree": field.degree(),
        "discriminant": field.discriminant().to_string(),
        "irreducibility": match field.irreducibility() {
            Irreducibility::Checked => "checked",
            Irreducibility::Asserted => "asserted",
        },
        "embeddings": embeddings,
        "units": {
            "units": f.units.units.iter().map(|u| u.to_strings()).collect::<Vec<_>>(),
            "norms": f.units.norms,
            "provenance": provenance(f.units.provenance),
            "lattice": "finite-index unit lattice",
        },
    });
    if let Some(m) = f.quadratic {
        doc["quadratic_m"] = json!(m);
    }
    if let Some(c) = &f.class_data {
        doc["class_numbers"] = json!({
            "narrow": c.narrow_class_number,
            "wide": c.class_number,
            "fundamental_unit": c.unit,
            "unit_norm": c.unit_norm,
            "discriminant": c.discriminant,
            "provenance": "computed",
        });
    }
    doc
}

fn matrix_doc(m: &RegulatorMatrix) -> Value {
    json!({
        "bits": m.bits,
        "entries": m.entries.iter().map(|row| row.iter().map(iv).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "row_sums": m.row_sums().iter().map(iv).collect::<Vec<_>>(),
        "maximal_minors": m.maximal_minors().iter().map(iv).collect::<Vec<_>>(),
    })
}

pub fn extension_doc(report: &ExtensionClassReport, r: usize) -> Value {
    let split = splitting_report(r);
    let mut doc = json!({
        "verdict": report.verdict,
        "sign_convention": report.class.sign_convention,
        "class": report.class,
        "certificates": report.certificates,
        "split_degrees": split,
        "margin": rational_string(&margin()),
    });
    if let Some(cert) = &report.certificate {
        doc["regulator"] = iv(&cert.regulator);
        doc["regulator_recheck"] = json!({ "bits": cert.matrix.bits * 2, "value": iv(&cert.recheck) });
        doc["matrix"] = matrix_doc(&cert.matrix);
        doc["independence"] = json!("certified");
    } else {
        doc["independence"] = json!("pending");
    }
    if let Some(remark) = &report.remark {
        doc["remark"] = json!(remark);
    }
    doc
}

pub fn run_extension(
    f: &ResolvedField,
    galois: &GaloisDatum,
    precision: &Precision,
) -> Result<(Value, Verdict), CliError> {
    let report = extension_class(&f.field, &f.units, galois, &margin(), precision, None)?;
    Ok((extension_doc(&report, f.field.degree()), report.verdict))
}

pub fn table_doc(table: &CohomologyTable) -> Value {
    serde_json::to_value(table.to_report()).expect("table report serializes")
}

pub fn cohomology_table(r: usize, galois: Option<&GaloisDatum>, s: CuspFormDim) -> Result<CohomologyTable, CliError> {
    Ok(match galois {
        Some(g) => assemble_table(r, g, s)?,
        None => table_from_counts(r, 1, 1, s)?,
    })
}

pub fn cusp_doc(m: i64) -> Result<Value, CliError> {
    Ok(serde_json::to_value(cusp_resolution(m)?).expect("cusp resolution serializes"))
}

/// Outcome of one plectic-family instance.
fn instance_doc(kind: &str, name: &str, body: Value, passed: bool) -> Value {
    json!({ "kind": kind, "name": name, "passed": passed, "outcome": body })
}

pub fn shapiro_doc(inst: &ShapiroInstance) -> Result<(Value, bool), CliError> {
    let out = shapiro_check(&inst.q, &inst.sub, &inst.module)?;
    Ok((instance_doc("shapiro", &inst.name, json!(out), out.passed), out.passed))
}

pub fn plectic_doc(inst: &PlecticInstance) -> Result<(Value, bool), CliError> {
    let out = plectic_h1_check(&inst.group, inst.size, &inst.module)?;
    Ok((instance_doc("plectic", &inst.name, json!(out), out.passed), out.passed))
}

pub fn tensor_doc(inst: &TensorInstance) -> Result<(Value, bool), CliError> {
    let k = inst.q.order() / inst.sub.len();
    let mut outs = Vec::new();
    let mut passed = true;
    for m in 0..=k {
        let out = tensor_induction_check(&inst.q, &inst.sub, &inst.chi, m)?;
        passed &= out.passed;
        outs.push(json!(out));
    }
    Ok((instance_doc("tensor", &inst.name, json!(outs), passed), passed))
}

pub fn builtin_instances() -> Vec<Instance> {
    let mut all: Vec<Instance> = builtin_shapiro().into_iter().map(Instance::Shapiro).collect();
    all.extend(builtin_plectic().into_iter().map(Instance::Plectic));
    all.extend(builtin_tensor().into_iter().map(Instance::Tensor));
    all
}

pub fn plectic_family_doc(instances: &[Instance]) -> Result<(Value, bool), CliError> {
    let mut docs = Vec::new();
    let mut all = true;
    for inst in instances {
        let (doc, ok) = match inst {
            Instance::Shapiro(i) => shapiro_doc(i)?,
            Instance::Plectic(i) => plectic_doc(i)?,
            Instance::Tensor(i) => tensor_doc(i)?,
        };
        all &= ok;
        docs.push(doc);
    }
    let failed = docs.iter().filter(|d| d["passed"] == json!(false)).count();
    Ok((json!({ "instances": docs, "total": docs.len(), "failed": failed, "passed": all }), all))
}

/// The full document. The flag is false when the verdict is indeterminate.
pub fn run_report(config: &ReportConfig) -> Result<(Value, bool), CliError> {
    let f = resolve_field(&config.field)?;
    let r = f.field.degree();
    let (galois, level_provenance) = resolve_level(&f, &config.level)?;
    let table = assemble_table(r, &galois, config.s)?;
    let (ext, verdict) = run_extension(&f, &galois, &config.precision)?;
    let mut doc = json!({
        "field": field_doc(&f),
        "level": {
            "components": galois.components(),
            "cusps": galois.cusp_count(),
            "group_order": galois.group.order(),
            "provenance": level_provenance,
        },
        "precision": { "start_bits": config.precision.start_bits, "max_bits": config.precision.max_bits },
        "cohomology_table": table_doc(&table),
        "extension_class": ext,
    });
    if let Some(m) = f.quadratic {
        doc["cusp_resolution"] = cusp_doc(m)?;
    }
    Ok((doc, verdict == Verdict::Nontrivial))
}

/// Serialize a document in the requested format, newline terminated.
pub fn emit(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("document serializes") + "\n",
        Format::Table => {
            let mut out = String::new();
            render_value(doc, 0, &mut out);
            out
        }
    }
}

fn is_interval(v: &Value) -> bool {
    v.as_object().is_some_and(|o| o.len() == 2 && o.contains_key("lo") && o.contains_key("hi"))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        _ if is_interval(v) => Some(format!("[{}, {}]", v["lo"].as_str()?, v["hi"].as_str()?)),
        Value::Array(items) if items.iter().all(|x| scalar(x).is_some() && !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- [{i}]\n"));
                        render_value(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
