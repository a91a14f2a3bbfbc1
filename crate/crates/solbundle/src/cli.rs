//! Command-line surface: argument parsing, dispatch, and the exit-code
//! contract (0 success / all checks pass, 1 verification failure, 2 invalid
//! input).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analyze::{self, AnalyzeOutcome, AnalyzeError, DEFAULT_MAX_N};
use crate::arith::IntMatrix2;
use crate::batch::run_batch;
use crate::bundle::{BundleError, Monodromy};
use crate::characters::CharError;
use crate::output::{self, OutputFormat};
use crate::verify::{verify_bundle, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "solbundle",
    version,
    about = "Exact modular data of SOL torus bundles, constructed twice and machine-checked"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixInput {
    /// Monodromy matrix as row-major integers: a,b,c,d
    #[arg(long, value_name = "a,b,c,d", allow_hyphen_values = true)]
    pub matrix: Option<String>,

    /// JSON file holding the matrix, either [a,b,c,d] or {"matrix":[a,b,c,d]}
    #[arg(long, value_name = "PATH", conflicts_with = "matrix")]
    pub matrix_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CommonOpts {
    /// Output format
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: OutputFormat,

    /// Write output to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Prepend a metadata header (version, timestamp). Off by default so
    /// identical runs are byte-identical.
    #[arg(long)]
    pub metadata: bool,

    /// Refuse bundles with N above this bound (the S-matrices have Θ(N²)
    /// exact entries)
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub max_n: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full modular data: label set, q̃-table, CS/Tor/θ/d, both S-matrices,
    /// both T-vectors, fusion tensor
    Analyze {
        #[command(flatten)]
        matrix: MatrixInput,
        #[command(flatten)]
        common: CommonOpts,
        /// Sign choice in the W-symbols (+1 or -1)
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        epsilon: String,
    },
    /// Run every consistency and coincidence check; exit 0 iff all pass
    Verify {
        #[command(flatten)]
        matrix: MatrixInput,
        #[command(flatten)]
        common: CommonOpts,
        /// Sign choice in the W-symbols (+1 or -1); with -1 the
        /// coincidence checks are recorded as informational
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        epsilon: String,
        /// Also check homeomorphism invariance against B·A·B⁻¹ for this
        /// unimodular B (row-major a,b,c,d)
        #[arg(long, value_name = "a,b,c,d", allow_hyphen_values = true)]
        conjugate_by: Option<String>,
    },
    /// Brute-force character table (the independent oracle) for diffing
    /// against analyze
    Oracle {
        #[command(flatten)]
        matrix: MatrixInput,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Per-object table only (the Table-1-style view)
    Table {
        #[command(flatten)]
        matrix: MatrixInput,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep all SL(2,ℤ) matrices within an entry bound and trace range,
    /// verifying each; streams CSV or JSON-lines summaries
    Batch {
        /// Keep bundles with 2 < |trace| ≤ this bound
        #[arg(long, value_name = "T")]
        trace_range: i64,
        /// Entry bound: all of |a|,|b|,|c|,|d| ≤ B
        #[arg(long, value_name = "B")]
        entry_bound: i64,
        #[command(flatten)]
        common: CommonOpts,
        /// Sign choice in the W-symbols (+1 or -1)
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        epsilon: String,
    },
}

fn parse_epsilon(s: &str) -> Result<i8, String> {
    match s.trim() {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(format!("epsilon must be +1 or -1, got {other:?}")),
    }
}

fn parse_matrix_string(s: &str) -> Result<[i64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 comma-separated integers, got {}", parts.len()));
    }
    let mut out = [0i64; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse::<i64>()
            .map_err(|_| format!("invalid integer {part:?}"))?;
    }
    Ok(out)
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare([i64; 4]),
    Keyed { matrix: [i64; 4] },
}

fn read_matrix(input: &MatrixInput) -> Result<[i64; 4], String> {
    match (&input.matrix, &input.matrix_file) {
        (Some(s), None) => parse_matrix_string(s),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let parsed: MatrixFile = serde_json::from_str(&text)
                .map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
            Ok(match parsed {
                MatrixFile::Bare(m) => m,
                MatrixFile::Keyed { matrix } => matrix,
            })
        }
        _ => Err("exactly one of --matrix or --matrix-file is required".to_string()),
    }
}

struct Emitter {
    output: Option<PathBuf>,
    buffer: String,
}

impl Emitter {
    fn new(common: &CommonOpts) -> Emitter {
        let mut buffer = String::new();
        if common.metadata {
            buffer.push_str(&output::metadata_header(common.format));
        }
        Emitter { output: common.output.clone(), buffer }
    }

    fn push(&mut self, text: &str) {
        self.buffer.push_str(text);
        if !text.ends_with('\n') {
            self.buffer.push('\n');
        }
    }

    fn finish(self) -> i32 {
        match self.output {
            None => {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(self.buffer.as_bytes()).is_err() {
                    return EXIT_INVALID_INPUT;
                }
                EXIT_OK
            }
            Some(path) => match fs::write(&path, self.buffer.as_bytes()) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    EXIT_INVALID_INPUT
                }
            },
        }
    }
}

fn emit_error(code: &str, message: &str) -> i32 {
    println!("{}", output::error_json(code, message));
    eprintln!("error: {message}");
    EXIT_INVALID_INPUT
}

fn bundle_error_code(e: &BundleError) -> &'static str {
    match e {
        BundleError::Determinant { .. } => "DeterminantError",
        BundleError::NotSol { .. } => "NotSolError",
        BundleError::DegenerateBundle { .. } => "DegenerateBundle",
    }
}

fn analyze_error_code(e: &AnalyzeError) -> &'static str {
    match e {
        AnalyzeError::Char(CharError::Bundle(b)) => bundle_error_code(b),
        AnalyzeError::Char(CharError::InternalInconsistency(_)) => "InternalInconsistency",
        AnalyzeError::Char(CharError::NonRationalTwist { .. }) => "NonRationalTwist",
        AnalyzeError::TooLarge { .. } => "ResourceLimit",
    }
}

fn validated(matrix: &MatrixInput) -> Result<Monodromy, i32> {
    let entries = match read_matrix(matrix) {
        Ok(e) => e,
        Err(msg) => return Err(emit_error("InvalidArgument", &msg)),
    };
    Monodromy::new(entries[0], entries[1], entries[2], entries[3])
        .map_err(|e| emit_error(bundle_error_code(&e), &e.to_string()))
}

/// Executes a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Analyze { matrix, common, epsilon } => {
            let eps = match parse_epsilon(&epsilon) {
                Ok(e) => e,
                Err(msg) => return emit_error("InvalidArgument", &msg),
            };
            let m = match validated(&matrix) {
                Ok(m) => m,
                Err(code) => return code,
            };
            run_analyze(&m, eps, &common, false)
        }
        Command::Table { matrix, common } => {
            let m = match validated(&matrix) {
                Ok(m) => m,
                Err(code) => return code,
            };
            run_analyze(&m, 1, &common, true)
        }
        Command::Verify { matrix, common, epsilon, conjugate_by } => {
            let eps = match parse_epsilon(&epsilon) {
                Ok(e) => e,
                Err(msg) => return emit_error("InvalidArgument", &msg),
            };
            let m = match validated(&matrix) {
                Ok(m) => m,
                Err(code) => return code,
            };
            let conjugate = match conjugate_by.as_deref().map(parse_matrix_string).transpose() {
                Ok(c) => c.map(|[a, b, c2, d]| IntMatrix2::new(a, b, c2, d)),
                Err(msg) => return emit_error("InvalidArgument", &msg),
            };
            if let Some(b) = &conjugate {
                let det = b.det();
                if det != 1 && det != -1 {
                    return emit_error(
                        "InvalidArgument",
                        &format!("--conjugate-by matrix must be unimodular, got determinant {det}"),
                    );
                }
            }
            run_verify(&m, eps, conjugate, &common)
        }
        Command::Oracle { matrix, common } => {
            let m = match validated(&matrix) {
                Ok(m) => m,
                Err(code) => return code,
            };
            if m.n() > common.max_n {
                let e = AnalyzeError::TooLarge { n: m.n(), max: common.max_n };
                return emit_error(analyze_error_code(&e), &e.to_string());
            }
            let oracle = output::build_oracle(&m);
            let mut emitter = Emitter::new(&common);
            match common.format {
                OutputFormat::Json => emitter.push(&output::oracle_json(&oracle)),
                OutputFormat::Csv => emitter.push(&output::oracle_csv(&oracle)),
                OutputFormat::Latex => emitter.push(&output::oracle_latex(&oracle)),
                OutputFormat::Pretty => emitter.push(&output::oracle_pretty(&oracle)),
            }
            emitter.finish()
        }
        Command::Batch { trace_range, entry_bound, common, epsilon } => {
            let eps = match parse_epsilon(&epsilon) {
                Ok(e) => e,
                Err(msg) => return emit_error("InvalidArgument", &msg),
            };
            if trace_range <= 0 || entry_bound <= 0 {
                return emit_error("InvalidArgument", "batch bounds must be positive");
            }
            if !matches!(common.format, OutputFormat::Csv | OutputFormat::Json) {
                return emit_error(
                    "InvalidArgument",
                    "batch streams summaries as --format csv or --format json (JSON-lines)",
                );
            }
            let (rows, agg) = run_batch(entry_bound, trace_range, eps, common.max_n);
            let mut emitter = Emitter::new(&common);
            let aggregate = if rows.is_empty() { None } else { Some(&agg) };
            match common.format {
                OutputFormat::Csv => emitter.push(&output::batch_csv(&rows, aggregate)),
                OutputFormat::Json => emitter.push(&output::batch_jsonl(&rows, aggregate)),
                _ => unreachable!(),
            }
            let code = emitter.finish();
            if code != EXIT_OK {
                code
            } else if agg.fail > 0 || agg.error > 0 {
                EXIT_VERIFY_FAIL
            } else {
                EXIT_OK
            }
        }
    }
}

fn run_analyze(m: &Monodromy, epsilon: i8, common: &CommonOpts, table_only: bool) -> i32 {
    match analyze::compute(m, epsilon, common.max_n) {
        Err(e) => emit_error(analyze_error_code(&e), &e.to_string()),
        Ok(AnalyzeOutcome::Degenerate { n }) => {
            let payload = analyze::degenerate_output(m, epsilon, n);
            let mut emitter = Emitter::new(common);
            match common.format {
                OutputFormat::Json => emitter.push(&output::analyze_json(&payload)),
                other => emitter.push(&output::degenerate_text(&payload, other)),
            }
            emitter.finish()
        }
        Ok(AnalyzeOutcome::Data(data)) => {
            let mut emitter = Emitter::new(common);
            match (common.format, table_only) {
                (OutputFormat::Json, _) => {
                    let mut payload = analyze::to_output(&data);
                    if table_only {
                        payload.command = "table".to_string();
                    }
                    emitter.push(&output::analyze_json(&payload));
                }
                (OutputFormat::Csv, false) => emitter.push(&output::analyze_csv(&data)),
                (OutputFormat::Csv, true) => emitter.push(&output::table_csv(&data)),
                (OutputFormat::Latex, _) => emitter.push(&output::analyze_latex(&data)),
                (OutputFormat::Pretty, false) => emitter.push(&output::analyze_pretty(&data)),
                (OutputFormat::Pretty, true) => emitter.push(&output::table_csv(&data)),
            }
            emitter.finish()
        }
    }
}

fn run_verify(
    m: &Monodromy,
    epsilon: i8,
    conjugate_by: Option<IntMatrix2>,
    common: &CommonOpts,
) -> i32 {
    let opts = VerifyOptions { epsilon, conjugate_by, max_n: common.max_n };
    match verify_bundle(m, &opts) {
        Err(e) => emit_error(analyze_error_code(&e), &e.to_string()),
        Ok(report) => {
            let mut emitter = Emitter::new(common);
            match common.format {
                OutputFormat::Json => emitter.push(&output::verify_json(&report)),
                OutputFormat::Csv => emitter.push(&output::verify_csv(&report)),
                OutputFormat::Latex => emitter.push(&output::verify_latex(&report)),
                OutputFormat::Pretty => emitter.push(&output::verify_pretty(&report)),
            }
            let code = emitter.finish();
            if code != EXIT_OK {
                code
            } else if report.passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAIL
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_parsing() {
        assert_eq!(parse_matrix_string("2,1,1,1"), Ok([2, 1, 1, 1]));
        assert_eq!(parse_matrix_string(" -7, 4 , -2, 1"), Ok([-7, 4, -2, 1]));
        assert!(parse_matrix_string("2,1,1").is_err());
        assert!(parse_matrix_string("a,b,c,d").is_err());
    }

    #[test]
    fn epsilon_parsing() {
        assert_eq!(parse_epsilon("1"), Ok(1));
        assert_eq!(parse_epsilon("+1"), Ok(1));
        assert_eq!(parse_epsilon("-1"), Ok(-1));
        assert!(parse_epsilon("2").is_err());
    }

    #[test]
    fn cli_parses_subcommands() {
        let cli = Cli::try_parse_from([
            "solbundle", "verify", "--matrix", "2,1,1,1", "--epsilon", "-1",
        ])
        .unwrap();
        match cli.command {
            Command::Verify { epsilon, .. } => assert_eq!(epsilon, "-1"),
            _ => panic!("wrong command"),
        }
        assert!(Cli::try_parse_from(["solbundle", "analyze"]).is_ok());
        assert!(Cli::try_parse_from(["solbundle", "batch", "--trace-range", "5"]).is_err());
    }
}
