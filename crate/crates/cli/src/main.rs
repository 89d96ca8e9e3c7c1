use clap::{Args, Parser, Subcommand};
use plectic_cli::report::{
    builtin_instances, cohomology_table, cusp_doc, emit, field_doc, plectic_family_doc, run_extension, run_report,
    table_doc,
};
use plectic_cli::selftest::{self, Sabotage};
use plectic_cli::{parse_s, resolve_field, resolve_level, CliError, Format, ReportConfig};
use plectic_core::cohmodel::GaloisDatumSpec;
use plectic_core::plectic::parse_instances;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plectic", version, about = "Cohomology tables, extension classes and cusp data for totally real fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Real quadratic field Q(sqrt m).
    #[arg(long)]
    m: Option<i64>,
    /// Field spec JSON: {"poly": [...], "units": [[...]], "assert_irreducible": bool}.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Output format: json or table.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args, Clone)]
struct LevelArgs {
    /// Level datum JSON; default is level one with trivial action.
    #[arg(long)]
    level: Option<PathBuf>,
    /// Cusp form dimension: a nonnegative integer or "symbolic".
    #[arg(long, default_value = "symbolic")]
    s: String,
    /// Starting precision in bits; doubled up to PLECTIC_MAX_BITS.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Field data, embeddings, units and (for r = 2) class numbers.
    FieldInfo(FieldArgs),
    /// Dimension table of the graded cohomology.
    CohomologyTable {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        level: LevelArgs,
        /// Dimension r, instead of a field.
        #[arg(long, conflicts_with_all = ["m", "field"])]
        r: Option<usize>,
    },
    /// Extension class, regulator certificate and verdict.
    ExtensionClass {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Minus continued fraction cycle and resolution data of the cusp at infinity.
    CuspResolution {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Run the finite-group checks on the built-in family or a JSON spec.
    PlecticCheck {
        #[arg(long, value_parser = ["builtin"], conflicts_with = "spec")]
        family: Option<String>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Everything about one field in a single document.
    Report {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Run the built-in self-test suites.
    Selftest {
        /// Comma-separated suite names.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Inject a fault (for testing the harness): rowsum.
        #[arg(long)]
        sabotage: Option<String>,
    },
}

fn config(field: &FieldArgs, level: &LevelArgs) -> Result<ReportConfig, CliError> {
    ReportConfig::new(
        field.m,
        field.field.clone(),
        level.level.clone(),
        Some(&level.s),
        level.precision,
        field.format.parse()?,
    )
}

/// Print the document; the flag says whether every verdict was decided.
fn run(cli: Cli) -> Result<(String, bool), CliError> {
    match cli.command {
        Command::FieldInfo(args) => {
            let format: Format = args.format.parse()?;
            let c = ReportConfig::new(args.m, args.field, None, None, None, format)?;
            Ok((emit(&field_doc(&resolve_field(&c.field)?), format), true))
        }
        Command::CohomologyTable { field, level, r } => {
            let format: Format = field.format.parse()?;
            let table = match r {
                Some(r) => {
                    let s = parse_s(&level.s)?;
                    let galois = match &level.level {
                        Some(path) => {
                            let text = std::fs::read_to_string(path)
                                .map_err(|e| CliError::bad_input("Io", format!("{}: {e}", path.display())))?;
                            let spec: GaloisDatumSpec = serde_json::from_str(&text)
                                .map_err(|e| CliError::bad_input("Parse", format!("level datum: {e}")))?;
                            Some(spec.build(r)?)
                        }
                        None => None,
                    };
                    cohomology_table(r, galois.as_ref(), s)?
                }
                None => {
                    let c = config(&field, &level)?;
                    let f = resolve_field(&c.field)?;
                    let (galois, _) = resolve_level(&f, &c.level)?;
                    cohomology_table(f.field.degree(), Some(&galois), c.s)?
                }
            };
            let text = match format {
                Format::Json => emit(&table_doc(&table), format),
                Format::Table => table.render(),
            };
            Ok((text, true))
        }
        Command::ExtensionClass { field, level } => {
            let c = config(&field, &level)?;
            let f = resolve_field(&c.field)?;
            let (galois, _) = resolve_level(&f, &c.level)?;
            let (doc, verdict) = run_extension(&f, &galois, &c.precision)?;
            Ok((emit(&doc, c.format), verdict == plectic_core::extclass::Verdict::Nontrivial))
        }
        Command::CuspResolution { m, format } => Ok((emit(&cusp_doc(m)?, format.parse()?), true)),
        Command::PlecticCheck { family, spec, format } => {
            let format: Format = format.parse()?;
            let instances = match (family, spec) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::bad_input("Io", format!("{}: {e}", path.display())))?;
                    parse_instances(&text)?
                }
                (Some(_), None) => builtin_instances(),
                (None, None) => return Err(CliError::bad_input("BadArgument", "one of --family builtin or --spec is required")),
            };
            let (doc, ok) = plectic_family_doc(&instances)?;
            Ok((emit(&doc, format), ok))
        }
        Command::Report { field, level } => {
            let c = config(&field, &level)?;
            let (doc, ok) = run_report(&c)?;
            Ok((emit(&doc, c.format), ok))
        }
        Command::Selftest { only, sabotage } => {
            let sabotage: Option<Sabotage> = sabotage.map(|s| s.parse()).transpose()?;
            let results = selftest::run(&only, sabotage)?;
            let mut out = String::new();
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{tag} {}: {}\n", r.name, r.detail));
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            out.push_str(&format!("{} suites, {failed} failed\n", results.len()));
            Ok((out, failed == 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::bad_input("BadArgument", e.to_string().trim().to_string());
            println!("{}", err.to_json());
            return ExitCode::from(err.exit);
        }
    };
    match run(cli) {
        Ok((text, true)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok((text, false)) => {
            print!("{text}");
            ExitCode::from(plectic_cli::EXIT_VIOLATION)
        }
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::from(e.exit)
        }
    }
}
