//! The `kfib` command-line front end.
//!
//! Exit status: 0 success, 2 usage or parse error, 3 domain error,
//! 4 verification failure (including disagreeing methods under
//! `fib --method all`), 1 internal error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{self, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::certified::CertifiedReal;
use crate::closed_forms::{kfib_binomial, kfib_ordinary, kfib_ordinary_alt};
use crate::decimal::{certified_strings, parse_rational};
use crate::error::Error;
use crate::root;
use crate::sequence::{kfib_order_k, kfib_order_k1, KIndex};
use crate::series::{self, Series};
use crate::verify::{run_suite, Suite, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "kfib",
    version,
    about = "Exact k-Fibonacci numbers, dominant roots and certified series"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print only values (text) or only failing cells (verify).
    #[arg(long, global = true)]
    quiet: bool,
    /// Report elapsed time on stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Recurrence,
    RecurrenceK1,
    Binomial,
    Ordinary,
    OrdinaryAlt,
    All,
}

impl Method {
    const ENGINES: [Method; 5] = [
        Method::Recurrence,
        Method::RecurrenceK1,
        Method::Binomial,
        Method::Ordinary,
        Method::OrdinaryAlt,
    ];

    fn name(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::RecurrenceK1 => "recurrence-k1",
            Method::Binomial => "binomial",
            Method::Ordinary => "ordinary",
            Method::OrdinaryAlt => "ordinary-alt",
            Method::All => "all",
        }
    }

    fn eval(self, k: KIndex, n: i64) -> Result<BigInt, Error> {
        if n < 0 {
            return Err(Error::IndexTooSmall { n, min: 0 });
        }
        match self {
            Method::Recurrence => Ok(kfib_order_k(k, n as usize)),
            Method::RecurrenceK1 => Ok(kfib_order_k1(k, n as usize)),
            Method::Binomial => kfib_binomial(k, n),
            Method::Ordinary => kfib_ordinary(k, n),
            Method::OrdinaryAlt => kfib_ordinary_alt(k, n),
            Method::All => unreachable!("expanded by the caller"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Thm1,
    Thm2,
    Thm3,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Engines,
    Identities,
    Series,
    Erratum,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The k-Fibonacci number F_N^(K).
    Fib {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
    },
    /// The dominant root rho_K (or eps_K = 2 - rho_K) to certified precision.
    Rho {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value_t = 64)]
        bits: u32,
        #[arg(long)]
        epsilon: bool,
    },
    /// A binomial series: rho^N (thm1), the generating sum at A (thm2) or As_N (thm3).
    Series {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, conflicts_with = "a")]
        n: Option<u64>,
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        /// Fixed number of terms.
        #[arg(long, conflicts_with = "tol")]
        terms: Option<usize>,
        /// Target tail bound, e.g. 1e-12 (default when --terms is absent).
        #[arg(long)]
        tol: Option<String>,
    },
    /// The asymptotic equivalent As_N^(K), or F_N^(K) / As_N^(K) with --ratio.
    Asymptotic {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 64)]
        bits: u32,
        #[arg(long)]
        ratio: bool,
    },
    /// Cross-verification sweeps.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        #[arg(long, default_value_t = 200)]
        n_max: u32,
    },
}

/// One computed quantity. Numeric fields are strings so that consumers never
/// lose precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub value: String,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<String>,
    pub method: String,
}

impl OutputRecord {
    fn exact(
        command: &str,
        params: &BTreeMap<String, String>,
        method: &str,
        value: String,
    ) -> Self {
        OutputRecord {
            command: command.into(),
            params: params.clone(),
            value,
            exact: true,
            error_bound: None,
            method: method.into(),
        }
    }

    fn certified(
        command: &str,
        params: &BTreeMap<String, String>,
        method: &str,
        x: &CertifiedReal,
    ) -> Self {
        let (value, bound) = certified_strings(x);
        OutputRecord {
            command: command.into(),
            params: params.clone(),
            value,
            exact: false,
            error_bound: Some(bound),
            method: method.into(),
        }
    }
}

enum Failure {
    Usage(String),
    Domain(Error),
    Internal(String),
    /// Downstream reader went away (e.g. `| head`); not an error.
    Closed,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::Closed
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e)
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Parses `args` (program name first) and runs the command against the
/// process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let start = Instant::now();
    let code = match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_INTERNAL
        }
        Err(Failure::Closed) => EXIT_OK,
    };
    if cli.timing {
        let _ = writeln!(
            err,
            "elapsed: {:.3} ms",
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    code
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Fib { k, n, method } => fib(cli, out, *k, *n, *method),
        Command::Rho { k, bits, epsilon } => {
            let k = KIndex::new(*k)?;
            let (x, method) = if *epsilon {
                (root::epsilon(k, *bits)?, "epsilon-fixed-point")
            } else {
                (root::rho(k, *bits)?, "fixed-point")
            };
            let p = params([("k", k.to_string()), ("bits", bits.to_string())]);
            emit_records(cli, out, &[OutputRecord::certified("rho", &p, method, &x)])
        }
        Command::Series {
            which,
            k,
            n,
            a,
            terms,
            tol,
        } => series_cmd(cli, out, *which, *k, *n, *a, *terms, tol.as_deref()),
        Command::Asymptotic { k, n, bits, ratio } => {
            let k = KIndex::new(*k)?;
            let p = params([
                ("k", k.to_string()),
                ("n", n.to_string()),
                ("bits", bits.to_string()),
            ]);
            let record = if *ratio {
                OutputRecord::certified(
                    "asymptotic",
                    &p,
                    "ratio",
                    &root::asymptotic_ratio(k, *n, *bits)?,
                )
            } else {
                OutputRecord::certified(
                    "asymptotic",
                    &p,
                    "dominant-root",
                    &root::asymptotic(k, *n, *bits)?,
                )
            };
            emit_records(cli, out, &[record])
        }
        Command::Verify {
            suite,
            k_max,
            n_max,
        } => {
            let opts = VerifyOptions {
                k_max: *k_max,
                n_max: *n_max,
            };
            let suites: Vec<Suite> = match suite {
                SuiteArg::Engines => vec![Suite::Engines],
                SuiteArg::Identities => vec![Suite::Identities],
                SuiteArg::Series => vec![Suite::Series],
                SuiteArg::Erratum => vec![Suite::Erratum],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let reports: Vec<VerifyReport> = suites.iter().map(|s| run_suite(*s, &opts)).collect();
            emit_reports(cli, out, &reports, *suite == SuiteArg::All)?;
            Ok(if reports.iter().all(VerifyReport::passed) {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
    }
}

fn fib(cli: &Cli, out: &mut dyn Write, k: i64, n: i64, method: Method) -> Result<i32, Failure> {
    let k = KIndex::new(k)?;
    let p = params([("k", k.to_string()), ("n", n.to_string())]);
    if method != Method::All {
        let v = method.eval(k, n)?;
        return emit_records(
            cli,
            out,
            &[OutputRecord::exact("fib", &p, method.name(), v.to_string())],
        );
    }
    // Every method whose domain contains (k, n); the recurrences always apply.
    let mut records = Vec::new();
    let mut values = Vec::new();
    for m in Method::ENGINES {
        match m.eval(k, n) {
            Ok(v) => {
                records.push(OutputRecord::exact("fib", &p, m.name(), v.to_string()));
                values.push(v);
            }
            Err(e) if matches!(m, Method::Recurrence | Method::RecurrenceK1) => {
                return Err(e.into())
            }
            Err(_) => {}
        }
    }
    emit_records(cli, out, &records)?;
    Ok(if values.windows(2).all(|w| w[0] == w[1]) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

#[allow(clippy::too_many_arguments)]
fn series_cmd(
    cli: &Cli,
    out: &mut dyn Write,
    which: Which,
    k: i64,
    n: Option<u64>,
    a: Option<i64>,
    terms: Option<usize>,
    tol: Option<&str>,
) -> Result<i32, Failure> {
    let k = KIndex::new(k)?;
    let (series, name, mut p) = match which {
        Which::Thm1 | Which::Thm3 => {
            let n = n.ok_or_else(|| Failure::Usage("--n is required for thm1 and thm3".into()))?;
            let s = if which == Which::Thm1 {
                Series::RhoPower { n }
            } else {
                Series::Asymptotic { n }
            };
            (
                s,
                if which == Which::Thm1 { "thm1" } else { "thm3" },
                params([("k", k.to_string()), ("n", n.to_string())]),
            )
        }
        Which::Thm2 => {
            let a = a.ok_or_else(|| Failure::Usage("--a is required for thm2".into()))?;
            (
                Series::Hermite { a },
                "thm2",
                params([("k", k.to_string()), ("a", a.to_string())]),
            )
        }
    };
    p.insert("which".into(), name.into());
    let (sum, method) = match terms {
        Some(count) => (series::partial_sum(series, k, count)?, "partial-sum"),
        None => {
            let text = tol.unwrap_or("1e-12");
            let tol: BigRational = parse_rational(text)
                .ok_or_else(|| Failure::Usage(format!("cannot parse tolerance {text:?}")))?;
            p.insert("tol".into(), text.into());
            (series::adaptive(series, k, &tol)?, "adaptive")
        }
    };
    p.insert("terms".into(), sum.terms_used.to_string());
    emit_records(
        cli,
        out,
        &[OutputRecord::certified(
            "series",
            &p,
            method,
            &sum.to_certified(),
        )],
    )
}

fn emit_records(cli: &Cli, out: &mut dyn Write, records: &[OutputRecord]) -> Result<i32, Failure> {
    let io_err = Failure::from;
    match cli.format {
        Format::Json => {
            let text = if records.len() == 1 {
                serde_json::to_string_pretty(&records[0])
            } else {
                serde_json::to_string_pretty(records)
            }
            .map_err(|e| Failure::Internal(e.to_string()))?;
            writeln!(out, "{text}").map_err(io_err)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let internal = |e: csv::Error| Failure::Internal(e.to_string());
            w.write_record([
                "command",
                "method",
                "params",
                "value",
                "exact",
                "error_bound",
            ])
            .map_err(internal)?;
            for r in records {
                let params: Vec<String> =
                    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                w.write_record([
                    r.command.as_str(),
                    r.method.as_str(),
                    &params.join(";"),
                    &r.value,
                    if r.exact { "true" } else { "false" },
                    r.error_bound.as_deref().unwrap_or(""),
                ])
                .map_err(internal)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::Internal(e.to_string()))?;
            out.write_all(&bytes).map_err(io_err)?;
        }
        Format::Text => {
            for r in records {
                let value = match &r.error_bound {
                    Some(b) => format!("{} ± {}", r.value, b),
                    None => r.value.clone(),
                };
                if cli.quiet {
                    writeln!(out, "{value}").map_err(io_err)?;
                } else {
                    let params: Vec<String> =
                        r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    writeln!(
                        out,
                        "{} [{}] {}: {}",
                        r.command,
                        params.join(" "),
                        r.method,
                        value
                    )
                    .map_err(io_err)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn emit_reports(
    cli: &Cli,
    out: &mut dyn Write,
    reports: &[VerifyReport],
    as_array: bool,
) -> Result<(), Failure> {
    let io_err = Failure::from;
    match cli.format {
        Format::Json => {
            let text = if as_array {
                serde_json::to_string_pretty(reports)
            } else {
                serde_json::to_string_pretty(&reports[0])
            }
            .map_err(|e| Failure::Internal(e.to_string()))?;
            writeln!(out, "{text}").map_err(io_err)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let internal = |e: csv::Error| Failure::Internal(e.to_string());
            w.write_record(["suite", "check", "k", "n", "pass", "expected", "actual"])
                .map_err(internal)?;
            for r in reports {
                for c in &r.cells {
                    w.write_record([
                        r.suite.as_str(),
                        c.check.as_str(),
                        &c.k.to_string(),
                        &c.n.to_string(),
                        if c.pass { "pass" } else { "fail" },
                        &c.expected,
                        &c.actual,
                    ])
                    .map_err(internal)?;
                }
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Failure::Internal(e.to_string()))?;
            out.write_all(&bytes).map_err(io_err)?;
        }
        Format::Text => {
            for r in reports {
                if !cli.quiet {
                    writeln!(
                        out,
                        "suite {}: {} cells, {} failures",
                        r.suite,
                        r.cells.len(),
                        r.failures
                    )
                    .map_err(io_err)?;
                    for c in r.cells.iter().filter(|c| c.check == "witness") {
                        writeln!(
                            out,
                            "  witness k={} n={}: correct {} vs erroneous {}",
                            c.k, c.n, c.expected, c.actual
                        )
                        .map_err(io_err)?;
                    }
                }
                for c in r.failed_cells() {
                    writeln!(
                        out,
                        "  FAIL {} {} k={} n={}: expected {}, got {}",
                        r.suite, c.check, c.k, c.n, c.expected, c.actual
                    )
                    .map_err(io_err)?;
                }
            }
        }
    }
    Ok(())
}
