//! The `outarray` command line.
//!
//! [`run`] parses arguments, dispatches one subcommand and returns the exit
//! status together with everything that would be printed, so the binary and
//! the tests share one code path.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use outarray::analysis::{self, AnalysisError};
use outarray::engine::{self, EngineError, DEFAULT_MAX_WIDTH};
use outarray::io::{self, ArrayDocument, FormatError, OeisStrippedIndex, VerifyError};
use outarray::oracle::OracleError;
use outarray::polynomials::{self, PolyError};
use outarray::sequence::{self, InputSequenceSpec, SequenceError, DEFAULT_PHI_HORIZON};
use outarray::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WIDTH_LIMIT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

/// Environment variable read for the default `--max-width`.
pub const MAX_WIDTH_ENV: &str = "OUTARRAY_MAX_WIDTH";

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "outarray", version, about = "Output arrays and output sequences of integer input sequences")]
struct Cli {
    /// Largest row width (y_n + 1) any command may build.
    #[arg(long, global = true, env = MAX_WIDTH_ENV, default_value_t = DEFAULT_MAX_WIDTH)]
    max_width: usize,

    /// Horizon for `phi:(..)` specs without an explicit `@H`.
    #[arg(long, global = true, default_value_t = DEFAULT_PHI_HORIZON)]
    phi_horizon: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Bfile,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Catalog and input-sequence inspection.
    Seq {
        #[command(subcommand)]
        action: SeqAction,
    },
    /// Print rows 1..=R of the output array.
    Array {
        spec: String,
        #[arg(long)]
        rows: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// Print every column instead of the `(+L x v)` plateau shorthand.
        #[arg(long)]
        expand: bool,
        /// Maximum entries per row written to JSON before a plateau is noted.
        #[arg(long, default_value_t = io::DEFAULT_EXPAND_CAP)]
        expand_cap: usize,
    },
    /// Print the output sequence W(1..=N).
    Sums {
        spec: String,
        #[arg(long)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// First b-file index (defaults to 0 with --include-w0, else 1).
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<i64>,
        /// Prepend the conventional W(0) = 1.
        #[arg(long)]
        include_w0: bool,
    },
    /// Top/middle/small decomposition of row N.
    Stats {
        spec: String,
        #[arg(long)]
        n: usize,
        /// Use Heinz's recurrence (bracket sequence `power:2` only).
        #[arg(long)]
        via_heinz: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Fit the column polynomial p_K.
    Poly {
        spec: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = polynomials::DEFAULT_VERIFY_EXTRA)]
        verify_extra: usize,
        #[arg(long, value_enum, default_value_t = PolyStyle::Common)]
        style: PolyStyle,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Check the row-sum and entry bounds on rows 1..=N.
    Bounds {
        spec: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Cross-check every entry of rows 1..=N against direct tuple counts.
    Verify {
        spec: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Write W(1..=N) as an OEIS b-file.
    Bfile {
        spec: String,
        #[arg(long)]
        terms: usize,
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<i64>,
        #[arg(long)]
        include_w0: bool,
    },
    /// Search a local OEIS stripped dump for W(1..=N).
    Lookup {
        spec: String,
        #[arg(long)]
        stripped: PathBuf,
        #[arg(long, default_value_t = io::DEFAULT_MIN_MATCH)]
        terms: usize,
        #[arg(long, default_value_t = io::DEFAULT_MIN_MATCH)]
        min_match: usize,
    },
    /// Print Φ(spec) truncated to N terms, as an `explicit:` spec.
    Phi {
        spec: String,
        #[arg(long)]
        terms: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SeqAction {
    /// The built-in catalog.
    List {
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// The first terms of an input sequence.
    Show {
        spec: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolyStyle {
    /// `(x^2 + x - 2)/2`
    Common,
    /// `x^2/2 + x/2 - 1`
    Descending,
    /// `-1 + x/2 + x^2/2`
    Ascending,
    /// One `numerator/denominator` per line, constant term first.
    Pairs,
}

/// Settings shared by the commands that build rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub spec_text: String,
    pub rows: usize,
    pub max_width: usize,
    pub output_format: OutputFormat,
    pub offset: i64,
    pub include_w0: bool,
}

impl RunConfig {
    /// Parses the spec and fails before any row is built when `rows` is zero
    /// or row `rows` would not fit in `max_width`.
    pub fn prepare(&self, phi_horizon: usize) -> Result<InputSequenceSpec, CliError> {
        if self.rows == 0 {
            return Err(CliError::Usage("the number of rows/terms must be at least 1".into()));
        }
        let spec = sequence::parse_spec(&self.spec_text, phi_horizon)?;
        spec.validate(self.rows).map_err(|v| Error::Engine(EngineError::InvalidSpec(v)))?;
        let last = spec.term(self.rows)?;
        let required = &last + 1u32;
        if required > BigUint::from(self.max_width) {
            let row = spec
                .prefix(self.rows)?
                .iter()
                .position(|y| y + 1u32 > BigUint::from(self.max_width))
                .map_or(self.rows, |i| i + 1);
            let required = spec.term(row)? + 1u32;
            return Err(EngineError::WidthLimitExceeded { row, required, limit: self.max_width }.into());
        }
        Ok(spec)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Mismatch(String),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            CliError::Core(e) => core_exit_code(e),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Mismatch(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

fn engine_code(e: &EngineError) -> i32 {
    match e {
        EngineError::WidthLimitExceeded { .. } => EXIT_WIDTH_LIMIT,
        EngineError::Sequence(s) => sequence_code(s),
        _ => EXIT_FAILURE,
    }
}

fn sequence_code(e: &SequenceError) -> i32 {
    match e {
        SequenceError::Parse { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::Sequence(s) => sequence_code(s),
        Error::Engine(e) => engine_code(e),
        Error::Oracle(OracleError::BudgetExceeded { .. }) => EXIT_BUDGET,
        Error::Oracle(OracleError::Sequence(s)) => sequence_code(s),
        Error::Oracle(_) => EXIT_FAILURE,
        Error::Poly(PolyError::Engine(e)) => engine_code(e),
        Error::Poly(_) => EXIT_FAILURE,
        Error::Analysis(AnalysisError::Engine(e)) => engine_code(e),
        Error::Analysis(AnalysisError::Sequence(s)) => sequence_code(s),
        Error::Analysis(_) => EXIT_USAGE,
        Error::Format(FormatError::Engine(e)) => engine_code(e),
        Error::Format(FormatError::Io(_)) => EXIT_FAILURE,
        Error::Format(_) => EXIT_USAGE,
        Error::Verify(VerifyError::Engine(e)) => engine_code(e),
        Error::Verify(VerifyError::Oracle(OracleError::BudgetExceeded { .. })) => EXIT_BUDGET,
        Error::Verify(_) => EXIT_FAILURE,
    }
}

/// Runs one command line (`args[0]` is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(()) => Outcome { code: EXIT_OK, stdout: out, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: out, stderr: format!("error: {}\n", e.message()) },
    }
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn strings(values: &[BigUint]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn config(cli: &Cli, spec: &str, rows: usize, format: OutputFormat, offset: Option<i64>, include_w0: bool) -> RunConfig {
    RunConfig {
        spec_text: spec.to_string(),
        rows,
        max_width: cli.max_width,
        output_format: format,
        offset: offset.unwrap_or(if include_w0 { 0 } else { 1 }),
        include_w0,
    }
}

fn parse(cli: &Cli, spec: &str) -> Result<InputSequenceSpec, CliError> {
    Ok(sequence::parse_spec(spec, cli.phi_horizon)?)
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<(), CliError> {
    match &cli.command {
        Command::Seq { action } => seq(cli, action, out),
        Command::Array { spec, rows, format, expand, expand_cap } => {
            let cfg = config(cli, spec, *rows, *format, None, false);
            let parsed = cfg.prepare(cli.phi_horizon)?;
            let array = engine::build(&parsed, cfg.rows, cfg.max_width)?;
            match cfg.output_format {
                OutputFormat::Json => {
                    out.push_str(&ArrayDocument::from_array(&parsed.to_string(), &array, *expand_cap).to_json());
                    out.push('\n');
                }
                OutputFormat::Bfile => return Err(CliError::Usage("`array` supports table and json".into())),
                OutputFormat::Table => {
                    writeln!(out, "# spec: {parsed}").unwrap();
                    writeln!(out, "# y: {}", join(array.y())).unwrap();
                    if *expand {
                        let width = array.n_rows().to_string().len();
                        for n in 1..=array.n_rows() {
                            let row: Vec<&BigUint> = array.row(n)?.iter().collect();
                            writeln!(out, "{n:>width$}: {}", join(&row)).unwrap();
                        }
                    } else {
                        out.push_str(&io::render_table(&array));
                    }
                }
            }
            Ok(())
        }
        Command::Sums { spec, terms, format, offset, include_w0 } => {
            let cfg = config(cli, spec, *terms, *format, *offset, *include_w0);
            sums(cli, &cfg, out)
        }
        Command::Bfile { spec, terms, offset, include_w0 } => {
            let cfg = config(cli, spec, *terms, OutputFormat::Bfile, *offset, *include_w0);
            sums(cli, &cfg, out)
        }
        Command::Stats { spec, n, via_heinz, format } => {
            let parsed = parse(cli, spec)?;
            let stats = if *via_heinz {
                if parsed.kind() != InputSequenceSpec::power(2).kind() {
                    return Err(CliError::Usage(format!("--via-heinz needs the bracket sequence power:2, got {parsed}")));
                }
                analysis::bracket_stats_via_heinz(*n)?
            } else {
                analysis::stats_with(&parsed, *n, cli.max_width)?
            };
            match format {
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&stats.to_json()).unwrap()).unwrap(),
                OutputFormat::Bfile => return Err(CliError::Usage("`stats` supports table and json".into())),
                OutputFormat::Table => {
                    writeln!(out, "spec: {parsed}").unwrap();
                    writeln!(out, "{stats}").unwrap();
                    writeln!(out, "(decimals are approximations rounded to 15 places)").unwrap();
                }
            }
            Ok(())
        }
        Command::Poly { spec, k, verify_extra, style, format } => {
            let parsed = parse(cli, spec)?;
            let p = polynomials::column_polynomial(&parsed, *k, *verify_extra)?;
            match format {
                OutputFormat::Json => {
                    let pairs: Vec<[String; 2]> =
                        p.coefficient_pairs().iter().map(|(n, d)| [n.to_string(), d.to_string()]).collect();
                    let doc = json!({
                        "spec": parsed.to_string(),
                        "k": k,
                        "degree": p.degree(),
                        "coefficients": pairs,
                        "text": p.to_common_denominator_string(),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
                }
                OutputFormat::Bfile => return Err(CliError::Usage("`poly` supports table and json".into())),
                OutputFormat::Table => match style {
                    PolyStyle::Common => writeln!(out, "{}", p.to_common_denominator_string()).unwrap(),
                    PolyStyle::Descending => writeln!(out, "{}", p.to_descending_string()).unwrap(),
                    PolyStyle::Ascending => writeln!(out, "{}", p.to_ascending_string()).unwrap(),
                    PolyStyle::Pairs => {
                        for (n, d) in p.coefficient_pairs() {
                            writeln!(out, "{n}/{d}").unwrap();
                        }
                    }
                },
            }
            Ok(())
        }
        Command::Bounds { spec, n_max, format } => {
            let cfg = config(cli, spec, *n_max, *format, None, false);
            let parsed = cfg.prepare(cli.phi_horizon)?;
            let report = analysis::check_bounds_with(&parsed, cfg.rows, cfg.max_width, Default::default());
            match format {
                OutputFormat::Json => writeln!(out, "{}", report.to_json()).unwrap(),
                _ => writeln!(out, "{report}").unwrap(),
            }
            if report.violation.is_some() {
                return Err(CliError::Core(Error::Engine(EngineError::Inconsistent(format!(
                    "bound violated: {report}"
                )))));
            }
            if let Some(reason) = report.stopped {
                return Err(CliError::Core(Error::Engine(EngineError::Inconsistent(reason))));
            }
            Ok(())
        }
        Command::Verify { spec, n_max, format } => {
            let cfg = config(cli, spec, *n_max, *format, None, false);
            let parsed = cfg.prepare(cli.phi_horizon)?;
            let report = io::verify_against_oracle(&parsed, cfg.rows, cfg.max_width)?;
            match format {
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).unwrap(),
                _ => {
                    writeln!(out, "{}: {} entries checked over rows 1..={}", report.spec, report.entries_checked, report.n_max)
                        .unwrap();
                    for m in &report.mismatches {
                        writeln!(out, "mismatch at A({}, {}): engine {}, oracle {}", m.n, m.k, m.engine, m.oracle).unwrap();
                    }
                    if report.passed() {
                        writeln!(out, "engine and oracle agree").unwrap();
                    }
                }
            }
            if !report.passed() {
                return Err(CliError::Mismatch(format!("{} mismatching entries", report.mismatches.len())));
            }
            Ok(())
        }
        Command::Lookup { spec, stripped, terms, min_match } => {
            let cfg = config(cli, spec, *terms, OutputFormat::Table, None, false);
            let parsed = cfg.prepare(cli.phi_horizon)?;
            let w = engine::output_sequence(&parsed, cfg.rows, cfg.max_width)?;
            let index = OeisStrippedIndex::from_path(stripped)?;
            let hits = io::lookup_stripped(&index, &w, *min_match)?;
            writeln!(out, "W: {}", join(&w)).unwrap();
            if hits.is_empty() {
                writeln!(out, "not found in {} ({} sequences)", stripped.display(), index.len()).unwrap();
            } else {
                for id in hits {
                    writeln!(out, "{id}").unwrap();
                }
            }
            Ok(())
        }
        Command::Phi { spec, terms } => {
            let cfg = config(cli, spec, *terms, OutputFormat::Table, None, false);
            let parsed = cfg.prepare(cli.phi_horizon)?;
            let phi = analysis::phi_with(&parsed, cfg.rows, cfg.max_width)?;
            writeln!(out, "{phi}").unwrap();
            Ok(())
        }
    }
}

fn sums(cli: &Cli, cfg: &RunConfig, out: &mut String) -> Result<(), CliError> {
    let parsed = cfg.prepare(cli.phi_horizon)?;
    let mut w = engine::output_sequence(&parsed, cfg.rows, cfg.max_width)?;
    if cfg.include_w0 {
        w.insert(0, BigUint::from(1u32));
    }
    match cfg.output_format {
        OutputFormat::Table => writeln!(out, "{}", join(&w)).unwrap(),
        OutputFormat::Bfile => out.push_str(&io::export_bfile(&w, cfg.offset)),
        OutputFormat::Json => {
            let doc = json!({ "spec": parsed.to_string(), "offset": cfg.offset, "W": strings(&w) });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    Ok(())
}

fn seq(cli: &Cli, action: &SeqAction, out: &mut String) -> Result<(), CliError> {
    match action {
        SeqAction::List { format } => {
            let catalog = sequence::catalog();
            match format {
                OutputFormat::Json => {
                    let items: Vec<_> = catalog
                        .iter()
                        .map(|r| {
                            json!({
                                "item": r.item,
                                "name": r.name,
                                "spec": r.spec.to_string(),
                                "expected_output_prefix": strings(&r.expected_output_prefix),
                                "oeis": r.oeis.to_string(),
                                "discrepancy": r.discrepancy,
                                "notes": r.notes,
                            })
                        })
                        .collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&items).unwrap()).unwrap();
                }
                OutputFormat::Bfile => return Err(CliError::Usage("`seq list` supports table and json".into())),
                OutputFormat::Table => {
                    for r in &catalog {
                        let flag = if r.discrepancy { "  [discrepancy]" } else { "" };
                        writeln!(
                            out,
                            "{:>2}  {:<16} {:<14} {:<12} W = {}{flag}",
                            r.item,
                            r.name,
                            r.spec.to_string(),
                            r.oeis.to_string(),
                            join(&r.expected_output_prefix)
                        )
                        .unwrap();
                    }
                }
            }
            Ok(())
        }
        SeqAction::Show { spec, terms } => {
            let parsed = parse(cli, spec)?;
            let n = parsed.horizon().map_or(*terms, |h| h.min(*terms));
            writeln!(out, "spec: {parsed}").unwrap();
            writeln!(out, "y: {}", join(&parsed.prefix(n)?)).unwrap();
            if let Some(rec) = sequence::lookup(spec.trim()) {
                writeln!(out, "catalog item {}: {}", rec.item, rec.notes).unwrap();
                writeln!(out, "W: {}  ({})", join(&rec.expected_output_prefix), rec.oeis).unwrap();
            }
            Ok(())
        }
    }
}
