//! Command-line front end: `compute`, `verify`, `list`, `show-matrix`.

pub mod catalog;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::braidrep::BraidWord;
use crate::invariants::{self, INVARIANT_NAMES};
use crate::laurent::GaussRational;
use crate::rmatrices::{self, EnhancedRMatrix};
use catalog::load_catalog;
use suites::{run_suite, Options, SuiteError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "knotpoly", version, about = "Exact link polynomials from enhanced R-matrices")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an invariant on a braid closure.
    Compute {
        #[arg(long)]
        invariant: String,
        /// Braid such as "strands=3; 1 -2 1 -2".
        #[arg(long, conflicts_with = "link")]
        braid: Option<String>,
        /// Catalog entry name.
        #[arg(long)]
        link: Option<String>,
    },
    /// Run a verification suite.
    Verify {
        /// axioms, isotopy, conjugacy, theorem2, skein, markov or all.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Catalog entry for `theorem2`, or `all`.
        #[arg(long, default_value = "all")]
        link: String,
        /// JSON pair checked by `axioms` instead of the built-in ones.
        #[arg(long)]
        matrix_file: Option<PathBuf>,
        /// Print wall times in text output.
        #[arg(long)]
        timings: bool,
    },
    /// List catalog links and built-in pairs.
    List,
    /// Print a built-in enhanced R-matrix.
    ShowMatrix { name: String },
}

/// Pairs that `show-matrix` knows, beyond the invariant names.
pub const MATRIX_NAMES: [&str; 9] = ["alexander", "v1", "v1-r-1", "lambda1", "lambda-1", "lambda-1-r-1", "sl3", "sl3-printed", "alexander-product"];

pub fn matrix_by_name(name: &str) -> Option<EnhancedRMatrix> {
    match name {
        "v1-r-1" => Some(rmatrices::build_v1(&GaussRational::from_int(-1))),
        "lambda-1-r-1" => rmatrices::build_lambda_minus1(-1).ok(),
        "sl3-printed" => Some(rmatrices::build_sl3_printed()),
        "alexander-product" => Some(invariants::alexander_product_pair()),
        other => rmatrices::by_name(other),
    }
}

/// Parse arguments and run, writing to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli, out)));
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(Failure::Usage(m))) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Ok(Err(Failure::Internal(m))) => {
            let _ = writeln!(err, "internal error: {m}");
            EXIT_INTERNAL
        }
        Err(_) => {
            let _ = writeln!(err, "internal error: panic");
            EXIT_INTERNAL
        }
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Usage(m) => Failure::Usage(m),
            SuiteError::Internal(m) => Failure::Internal(m),
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Internal(e.to_string())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Compute { invariant, braid, link } => {
            let beta = match (braid, link) {
                (Some(b), _) => BraidWord::parse(b).map_err(|e| Failure::Usage(e.to_string()))?,
                (None, Some(l)) => {
                    let cat = load_catalog().map_err(Failure::Internal)?;
                    catalog::find(&cat, l).ok_or_else(|| Failure::Usage(format!("unknown link '{l}'")))?.braid
                }
                (None, None) => return Err(Failure::Usage("need --braid or --link".into())),
            };
            let v = invariants::compute(invariant, &beta)
                .ok_or_else(|| Failure::Usage(format!("unknown invariant '{invariant}'; expected one of {}", INVARIANT_NAMES.join(", "))))?
                .map_err(|e| Failure::Internal(e.to_string()))?;
            if cli.json {
                let j = json!({
                    "invariant": v.name,
                    "braid": beta.to_string(),
                    "components": v.components,
                    "display": v.value.to_string(),
                    "value": v.value.to_json(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&j).expect("serializable")).map_err(io)?;
            } else {
                writeln!(out, "{}", v.value).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite, seed, samples, link, matrix_file, timings } => {
            let opts = Options { seed: *seed, samples: *samples, link: link.clone(), matrix_file: matrix_file.clone() };
            let mut report = run_suite(suite, &opts)?;
            if cli.json {
                writeln!(out, "{}", report.to_json()).map_err(io)?;
            } else {
                if !timings {
                    report.checks.iter_mut().for_each(|c| c.wall_ms = None);
                }
                writeln!(out, "{report}").map_err(io)?;
            }
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::List => {
            let cat = load_catalog().map_err(Failure::Internal)?;
            if cli.json {
                let j = json!({ "links": cat, "invariants": INVARIANT_NAMES, "matrices": MATRIX_NAMES });
                writeln!(out, "{}", serde_json::to_string_pretty(&j).expect("serializable")).map_err(io)?;
            } else {
                for e in &cat {
                    let notes = if e.notes.is_empty() { String::new() } else { format!("  {}", e.notes) };
                    writeln!(out, "{:<16} {:<28} {} component(s){notes}", e.name, e.braid.to_string(), e.expected_components).map_err(io)?;
                }
                writeln!(out, "invariants: {}", INVARIANT_NAMES.join(", ")).map_err(io)?;
                writeln!(out, "matrices: {}", MATRIX_NAMES.join(", ")).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::ShowMatrix { name } => {
            let e = matrix_by_name(name).ok_or_else(|| Failure::Usage(format!("unknown matrix '{name}'; expected one of {}", MATRIX_NAMES.join(", "))))?;
            if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable")).map_err(io)?;
            } else {
                writeln!(out, "{}: dim {}, context {}", e.name, e.dim, e.ctx).map_err(io)?;
                writeln!(out, "R ({} nonzero entries):", e.r.nnz()).map_err(io)?;
                for (row, col, v) in e.r.entries() {
                    writeln!(out, "  {row:?} <- {col:?}: {v}").map_err(io)?;
                }
                writeln!(out, "h:").map_err(io)?;
                for (row, col, v) in e.h.entries() {
                    writeln!(out, "  {row:?} <- {col:?}: {v}").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Size the global thread pool from `KNOTPOLY_THREADS`, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var("KNOTPOLY_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
