//! `bnalg`: dimension reports, constraint generation and vanishing checks for
//! discrete Bayesian networks with hidden variables.

mod cache;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bnalg_core::constraints::{check_vanishing, constraints_for_network, ConstraintSet, Family};
use bnalg_core::dimension::{classify_secant, dimension_report, dp_bound, Classification, NaiveBayesSpec};
use bnalg_core::net_model::{
    d_separated, observable_distribution, parse_network, sample_parameters, AnyTable, CIStatement,
};
use bnalg_core::{BigRational, Error, Mode, FORMAT_TAG};
use clap::{Parser, Subcommand};
use serde::Serialize;

const EXIT_NONVANISHING: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "bnalg",
    version,
    about = "Algebraic tools for Bayesian networks with hidden variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete, standard, expected and effective dimension of a network.
    Dim {
        network: PathBuf,
        /// Parameter samples for the Jacobian rank.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        seed: Vec<u64>,
    },
    /// Generate a constraint family for a network.
    Constraints {
        network: PathBuf,
        /// CI_MINORS, NB2_FLATTENING, QUADRATIC_5_1, CUBIC_5_2 or SEXTIC_5_3.
        #[arg(long)]
        family: Family,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cache directory, overridden by BNALG_CACHE.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Allow the unproven sextic extension to more than two X1 states.
        #[arg(long)]
        conjectural: bool,
    },
    /// Evaluate a constraint file on a table; exits 1 unless every polynomial vanishes.
    Check {
        constraints: PathBuf,
        table: PathBuf,
        /// Arithmetic for the check; defaults to the table's own mode.
        #[arg(long)]
        mode: Option<Mode>,
        /// Float-mode threshold on |p(θ)| / ‖p‖₁.
        #[arg(long, default_value_t = 1e-9, value_parser = positive_float)]
        tol: f64,
    },
    /// Sample parameters and write the observable table.
    Sample {
        network: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "rational")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a naive Bayes model given its class count and feature cardinalities.
    Classify {
        /// r r1 r2 ... rn
        #[arg(required = true, num_args = 3..)]
        params: Vec<usize>,
    },
    /// Test a d-separation statement A ⊥ B | given.
    Dsep {
        network: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        given: Vec<String>,
    },
}

fn positive_float(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RankDisagreement { .. } => EXIT_DISAGREEMENT,
            Error::ShapeMismatch(_) | Error::FamilyMismatch(_) | Error::Pattern(_) | Error::Bipartition(_) => {
                EXIT_MISMATCH
            }
            _ => EXIT_PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let text = format!("{}\n", text.trim_end());
    match out {
        Some(path) => cache::write_atomic(path, &text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn cmd_dim(network: &Path, seeds: &[u64]) -> Result<u8, Failure> {
    let net = parse_network(&read(network)?)?;
    emit(None, &pretty(&dimension_report(&net, seeds)?))?;
    Ok(0)
}

fn cmd_constraints(
    network: &Path,
    family: Family,
    out: Option<&Path>,
    cache_flag: Option<PathBuf>,
    conjectural: bool,
) -> Result<u8, Failure> {
    let bytes = std::fs::read(network).map_err(|e| io_failure(network, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", network.display()),
    })?;
    let net = parse_network(&text)?;
    let cached = cache::cache_dir(cache_flag).map(|dir| cache::cache_path(&dir, &bytes, family, conjectural));
    let json = match cached.as_deref().and_then(cache::lookup) {
        Some(hit) => hit,
        None => {
            let json = format!("{}\n", constraints_for_network(&net, family, conjectural)?.to_json());
            if let Some(path) = &cached {
                if let Err(e) = cache::write_atomic(path, &json) {
                    eprintln!("warning: could not write cache {}: {e}", path.display());
                }
            }
            json
        }
    };
    let cs = ConstraintSet::from_json(&json)?;
    if cs.is_empty() {
        eprintln!("warning: {family} yields no polynomials for this network");
    }
    if cs.is_conjectural() {
        eprintln!("warning: {family} set is conjectural and not known to vanish on the model");
    }
    emit(out, &json)?;
    Ok(0)
}

fn cmd_check(constraints: &Path, table: &Path, mode: Option<Mode>, tol: f64) -> Result<u8, Failure> {
    let cs = ConstraintSet::from_json(&read(constraints)?)?;
    let table = AnyTable::parse(&read(table)?)?;
    let report = match mode.unwrap_or(table.mode()) {
        Mode::Rational => check_vanishing::<BigRational>(&cs, &table.to_rational(), tol)?,
        Mode::Float => check_vanishing(&cs, &table.to_float(), tol)?,
    };
    emit(None, &pretty(&report))?;
    Ok(if report.all_vanish { 0 } else { EXIT_NONVANISHING })
}

fn cmd_sample(network: &Path, seed: u64, mode: Mode, out: Option<&Path>) -> Result<u8, Failure> {
    let net = parse_network(&read(network)?)?;
    let json = match mode {
        Mode::Rational => observable_distribution(&net, &sample_parameters::<BigRational>(&net, seed)).to_json(),
        Mode::Float => observable_distribution(&net, &sample_parameters::<f64>(&net, seed)).to_json(),
    };
    emit(out, &json)?;
    Ok(0)
}

#[derive(Serialize)]
struct ClassifyReport {
    format: &'static str,
    classes: usize,
    features: Vec<usize>,
    classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<usize>,
    rule: String,
    complete: usize,
    standard: usize,
    expected: usize,
    dp_bound: usize,
}

fn cmd_classify(params: &[usize]) -> Result<u8, Failure> {
    let nb = NaiveBayesSpec::new(params[0], params[1..].to_vec())?;
    let verdict = classify_secant(&nb);
    let report = ClassifyReport {
        format: FORMAT_TAG,
        classes: nb.classes(),
        features: nb.features().to_vec(),
        classification: verdict.classification,
        value: verdict.value,
        rule: verdict.rule,
        complete: nb.complete_dimension(),
        standard: nb.standard_dimension(),
        expected: nb.expected_dimension(),
        dp_bound: dp_bound(&nb),
    };
    emit(None, &pretty(&report))?;
    Ok(0)
}

#[derive(Serialize)]
struct DsepReport<'a> {
    format: &'static str,
    a: &'a [String],
    b: &'a [String],
    given: &'a [String],
    d_separated: bool,
}

fn cmd_dsep(network: &Path, a: &[String], b: &[String], given: &[String]) -> Result<u8, Failure> {
    let net = parse_network(&read(network)?)?;
    fn refs(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    let stmt = CIStatement::from_names(&net, &refs(a), &refs(b), &refs(given))?;
    let report = DsepReport {
        format: FORMAT_TAG,
        a,
        b,
        given,
        d_separated: d_separated(&net, &stmt),
    };
    emit(None, &pretty(&report))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Dim { network, seed } => cmd_dim(&network, &seed),
        Command::Constraints {
            network,
            family,
            out,
            cache,
            conjectural,
        } => cmd_constraints(&network, family, out.as_deref(), cache, conjectural),
        Command::Check {
            constraints,
            table,
            mode,
            tol,
        } => cmd_check(&constraints, &table, mode, tol),
        Command::Sample {
            network,
            seed,
            mode,
            out,
        } => cmd_sample(&network, seed, mode, out.as_deref()),
        Command::Classify { params } => cmd_classify(&params),
        Command::Dsep { network, a, b, given } => cmd_dsep(&network, &a, &b, &given),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
