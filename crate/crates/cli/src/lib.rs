//! The `pairsing` command line: argument parsing, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numeric failure, 3 a theorem
//! check disagreed (an implementation bug).

pub mod family;
pub mod report;
pub mod table;

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use pairsing_core::adjoint::{epsilon_threshold, is_trivial, vanishing_orders};
use pairsing_core::adjunction::{
    diff_decomposition_check, different, inversion_check, klt_of_different, restricted_boundary,
};
use pairsing_core::model::{validate, warnings, Violation};
use pairsing_core::ohsawa::{is_locally_integrable, theorem_equivalence_check, OhsawaSetup};
use pairsing_core::singularities::classify_pair;
use pairsing_core::{Error as CoreError, SncModel};
use pairsing_numeric::fermat::{DEFAULT_DELTA_GRID, DEFAULT_T_GRID};
use pairsing_numeric::report::{shell_csv, tube_csv};
use pairsing_numeric::{
    df_density_probe, extension_independence_check, fermat_probe, limit_convergence_check, Budget, BumpFunction,
    NumericError, Trend,
};

use crate::family::Family;
use crate::report::{
    divisor_map, AdjointDoc, ClassReport, ClassifyDoc, InversionDoc, NumericDoc, OhsawaDoc, Report, ViolationReport,
};
use crate::table::emit_fermat_table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Levels at which the two extensions of `g` are compared.
pub const EXTENSION_LEVELS: [f64; 2] = [-10.0, -16.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Validate,
    Classify,
    Different,
    Ohsawa,
    Adjoint,
    Inversion,
    VerifyNumeric,
    Family,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "pairsing",
    version,
    about = "Singularities of pairs, adjunction and Ohsawa measures"
)]
pub struct Cli {
    pub verb: Verb,

    /// A model JSON file, `family NAME`, or a family name such as
    /// fermat:3,2 | node | a-surface:m | kollar | identity | monomial:n[:a,..] | fermat-table:2-6,1-9
    #[arg(required = true, num_args = 1..=2)]
    pub input: Vec<String>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long, env = "PAIRSING_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = Budget::DEFAULT_SAMPLES)]
    pub samples: u64,

    /// Comma-separated shell levels, decreasing.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t_grid: Option<Vec<f64>>,

    /// Also write the report here; a `.csv` path receives the estimates as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::fail(code, text)
            }
        }
    }
}

enum Input {
    Model(SncModel),
    Family(Family),
}

fn read_input(cli: &Cli) -> Result<Input, String> {
    let arg = match cli.input.as_slice() {
        [kw, name] if kw == "family" => return Family::parse(name).map(Input::Family),
        [one] => one,
        _ => return Err("expected a model path, `family NAME`, or a family name".into()),
    };
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        return SncModel::from_json_str(&text)
            .map(Input::Model)
            .map_err(|e| format!("{}: {e}", path.display()));
    }
    Family::parse(arg)
        .map(Input::Family)
        .map_err(|e| format!("{arg}: no such file, and {e}"))
}

fn violation_listing(violations: &[Violation]) -> String {
    let mut o = String::from("invalid model:\n");
    for v in violations {
        let _ = writeln!(o, "  {v}");
    }
    o
}

/// Resolves the input to a model, turning validation failures into exit 1
/// with the listing on stdout.
fn model_of(input: Input) -> Result<SncModel, Outcome> {
    let m = match input {
        Input::Model(m) => m,
        Input::Family(f) => f.model().map_err(|e| Outcome::fail(EXIT_INVALID, e))?,
    };
    let violations = validate(&m);
    if violations.is_empty() {
        Ok(m)
    } else {
        Err(Outcome {
            code: EXIT_INVALID,
            stdout: violation_listing(&violations),
            stderr: String::new(),
        })
    }
}

fn core_failure(e: CoreError) -> Outcome {
    match e {
        CoreError::InvalidModel(v) => Outcome {
            code: EXIT_INVALID,
            stdout: violation_listing(&v),
            stderr: String::new(),
        },
        e => Outcome::fail(EXIT_INVALID, e.to_string()),
    }
}

fn numeric_failure(e: NumericError) -> Outcome {
    match e {
        NumericError::InvalidParameter(_)
        | NumericError::InsufficientGrid { .. }
        | NumericError::UnknownExtension(_) => Outcome::fail(EXIT_INVALID, e.to_string()),
        e => Outcome::fail(EXIT_NUMERIC, e.to_string()),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let input = match read_input(cli) {
        Ok(i) => i,
        Err(e) => return Outcome::fail(EXIT_INVALID, e),
    };
    let (report, code) = match dispatch(cli, input) {
        Ok(r) => r,
        Err(o) => return o,
    };
    let rendered = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    let mut out = Outcome {
        code,
        stdout: rendered.clone(),
        stderr: String::new(),
    };
    if let Some(path) = &cli.out {
        let body = if path.extension().is_some_and(|e| e == "csv") {
            match csv_of(&report) {
                Some(c) => c,
                None => return Outcome::fail(EXIT_INVALID, "CSV output is only available for verify-numeric"),
            }
        } else {
            rendered
        };
        if let Err(e) = std::fs::write(path, body) {
            return Outcome::fail(EXIT_INVALID, format!("{}: {e}", path.display()));
        }
    }
    if code != EXIT_OK {
        out.stderr = "theorem check failed; this indicates an implementation bug\n".into();
    }
    out
}

fn csv_of(report: &Report) -> Option<String> {
    let Report::VerifyNumeric(n) = report else { return None };
    let mut o = String::new();
    if let Some(p) = &n.fermat {
        o += &shell_csv(&p.estimates);
    }
    if let Some(p) = &n.df_density {
        o += &tube_csv(&p.estimates);
    }
    if let Some(l) = &n.limit {
        o += &shell_csv(&l.estimates);
    }
    Some(o)
}

fn dispatch(cli: &Cli, input: Input) -> Result<(Report, i32), Outcome> {
    match cli.verb {
        Verb::Validate => {
            let m = match input {
                Input::Model(m) => m,
                Input::Family(f) => f.model().map_err(|e| Outcome::fail(EXIT_INVALID, e))?,
            };
            let violations: Vec<ViolationReport> = validate(&m).iter().map(Into::into).collect();
            let warnings: Vec<ViolationReport> = warnings(&m).iter().map(Into::into).collect();
            let valid = violations.is_empty();
            let code = if valid { EXIT_OK } else { EXIT_INVALID };
            Ok((
                Report::Validate {
                    valid,
                    violations,
                    warnings,
                },
                code,
            ))
        }
        Verb::Classify => {
            let doc = classify(&model_of(input)?).map_err(core_failure)?;
            let ok = doc.integrability_matches_klt && (doc.inversion.consistent || !doc.inversion.applicable);
            Ok((Report::Classify(doc), if ok { EXIT_OK } else { EXIT_VIOLATION }))
        }
        Verb::Different => {
            let m = model_of(input)?;
            let r = (|| -> pairsing_core::Result<Report> {
                Ok(Report::Different {
                    different: divisor_map(&different(&m)?),
                    restricted_on_yprime: divisor_map(&restricted_boundary(&m)?.on_yprime),
                    klt_of_different: (&klt_of_different(&m)?).into(),
                    decomposition_holds: diff_decomposition_check(&m)?,
                })
            })()
            .map_err(core_failure)?;
            let code = match &r {
                Report::Different {
                    decomposition_holds: false,
                    ..
                } => EXIT_VIOLATION,
                _ => EXIT_OK,
            };
            Ok((r, code))
        }
        Verb::Ohsawa => {
            let doc = ohsawa(&model_of(input)?).map_err(core_failure)?;
            let code = if doc.matches_klt_of_different {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            };
            Ok((Report::Ohsawa(doc), code))
        }
        Verb::Adjoint => {
            let m = model_of(input)?;
            let orders = vanishing_orders(&m).map_err(core_failure)?;
            let trivial = is_trivial(&m).map_err(core_failure)?;
            let epsilon_threshold = epsilon_threshold(&m).ok().map(|e| e.to_string());
            let doc = AdjointDoc {
                required_orders: orders.required_orders,
                trivial,
                epsilon_threshold,
            };
            Ok((Report::Adjoint(doc), EXIT_OK))
        }
        Verb::Inversion => {
            let r = inversion_check(&model_of(input)?).map_err(core_failure)?;
            let code = if r.applicable && !r.consistent {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            };
            Ok((Report::Inversion((&r).into()), code))
        }
        Verb::VerifyNumeric => verify_numeric(cli, input),
        Verb::Family => match input {
            Input::Family(Family::FermatTable { n, d }) => {
                let t = emit_fermat_table(n, d).map_err(|e| Outcome::fail(EXIT_INVALID, e))?;
                let code = if t.consistent { EXIT_OK } else { EXIT_VIOLATION };
                Ok((Report::FermatTable(t), code))
            }
            other => {
                let m = model_of(other)?;
                Ok((Report::Family { model: m.to_json() }, EXIT_OK))
            }
        },
    }
}

fn ohsawa(m: &SncModel) -> pairsing_core::Result<OhsawaDoc> {
    let setup = OhsawaSetup::twisted(m.clone());
    let v = is_locally_integrable(&setup)?;
    Ok(OhsawaDoc {
        integrable: v.integrable,
        pole_divisor: divisor_map(&v.pole_divisor_on_yprime),
        blocking_curve: v.blocking_curve.map(|c| c.name),
        matches_klt_of_different: theorem_equivalence_check(&setup)?,
    })
}

pub fn classify(m: &SncModel) -> pairsing_core::Result<ClassifyDoc> {
    let ohsawa = ohsawa(m)?;
    Ok(ClassifyDoc {
        pair: ClassReport::from(&classify_pair(m)?),
        different: divisor_map(&different(m)?),
        integrability_matches_klt: ohsawa.matches_klt_of_different,
        ohsawa,
        adjoint_trivial: is_trivial(m)?,
        inversion: InversionDoc::from(&inversion_check(m)?),
    })
}

/// The bump used for monomial weights: centre 0.5 and radius 0.1 in every
/// coordinate of `C^{n-1}`.
pub fn default_monomial_bump(n: usize) -> Result<BumpFunction, NumericError> {
    BumpFunction::real(&vec![0.5; n - 1], &vec![0.1; n - 1])
}

/// A flat contradiction between a numeric trend and the exact layer.
fn contradicts(trend: Trend, expected: Trend) -> bool {
    matches!(
        (trend, expected),
        (Trend::Convergent, Trend::Divergent) | (Trend::Divergent, Trend::Convergent)
    )
}

fn verify_numeric(cli: &Cli, input: Input) -> Result<(Report, i32), Outcome> {
    let budget = Budget::new(cli.samples, cli.seed);
    let t_grid = cli.t_grid.clone().unwrap_or_else(|| DEFAULT_T_GRID.to_vec());
    match input {
        Input::Family(Family::Fermat { n, d }) => {
            let shell = fermat_probe(n, d, &t_grid, &budget).map_err(numeric_failure)?;
            let tube = df_density_probe(n, d, &DEFAULT_DELTA_GRID, &budget).map_err(numeric_failure)?;
            let bad = contradicts(shell.trend, shell.expected) || contradicts(tube.trend, tube.expected);
            let doc = NumericDoc {
                fermat: Some(shell),
                df_density: Some(tube),
                limit: None,
                extension: None,
            };
            Ok((Report::VerifyNumeric(doc), if bad { EXIT_VIOLATION } else { EXIT_OK }))
        }
        Input::Family(Family::Monomial(w)) => {
            let g = default_monomial_bump(w.n).map_err(numeric_failure)?;
            let limit = limit_convergence_check(&w, &g, &t_grid, &budget).map_err(numeric_failure)?;
            let ext = extension_independence_check(&w, &g, &EXTENSION_LEVELS, &budget).map_err(numeric_failure)?;
            if let Some(e) = &limit.fit_error {
                return Err(Outcome::fail(EXIT_NUMERIC, format!("decay fit failed: {e}")));
            }
            let doc = NumericDoc {
                fermat: None,
                df_density: None,
                limit: Some(limit),
                extension: Some(ext),
            };
            Ok((Report::VerifyNumeric(doc), EXIT_OK))
        }
        _ => Err(Outcome::fail(
            EXIT_INVALID,
            "verify-numeric takes fermat:n,d or monomial:n[:a1,..]",
        )),
    }
}
