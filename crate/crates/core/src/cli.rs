//! Command-line front end.
//!
//! Every subcommand prints JSON, CSV or aligned text. Big integers are
//! always written as decimal strings in JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::asymptotics::{self, RatioLimit, SaddleData};
use crate::codes::{self, LinearCode};
use crate::error::{Error, Result};
use crate::extremal::{self, Dims};
use crate::modforms;
use crate::serial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "z2kcodes", version, about = "Extremal theta series and Type II codes over Z/2kZ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of E4.
    E4 {
        #[arg(long)]
        terms: usize,
    },
    /// Forced coefficients of the extremal theta series.
    Extremal {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
    },
    /// beta1, beta2 over a range of lengths and the first negative beta2.
    Crossover {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// beta1 > 0 and the positivity certificate for every length up to nmax.
    Theorem1 {
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        k: u32,
    },
    /// Saddle point of F and the predicted ratio limit.
    Asymptotics {
        #[arg(long, default_value_t = asymptotics::DEFAULT_DIGITS)]
        digits: u32,
        /// Fold theta_1^3 for this k into the kernel.
        #[arg(long)]
        theta_k: Option<u32>,
    },
    /// Exact |b_{2(mu+2)} / b_{2(mu+1)}| against the threshold.
    Ratio {
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        n_list: Vec<u64>,
    },
    /// Codes over Z/2kZ.
    #[command(subcommand)]
    Code(CodeCommand),
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Check a code file for the Type II conditions.
    Verify(VerifyArgs),
    /// Find a length-8 Type II code.
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub file: std::path::PathBuf,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_len(flag: &str, n: u64) -> std::result::Result<(), Failure> {
    Dims::new(n).map(|_| ()).map_err(|_| usage(format!("--{flag} {n}: length must be a positive multiple of 8")))
}

fn check_k(k: u32) -> std::result::Result<(), Failure> {
    if k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    Ok(())
}

/// Reject bad combinations before any work starts.
fn validate(cli: &Cli) -> std::result::Result<(), Failure> {
    if cli.workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    match &cli.command {
        Command::E4 { terms } if *terms == 0 => Err(usage("--terms must be at least 1")),
        Command::E4 { .. } => Ok(()),
        Command::Extremal { n, k } => {
            check_k(*k)?;
            check_len("n", *n)
        }
        Command::Crossover { k, from, to } => {
            check_k(*k)?;
            check_len("from", *from)?;
            check_len("to", *to)?;
            if from > to {
                return Err(usage(format!("--from {from} exceeds --to {to}")));
            }
            Ok(())
        }
        Command::Theorem1 { nmax, k } => {
            check_k(*k)?;
            check_len("nmax", *nmax)
        }
        Command::Asymptotics { digits, theta_k } => {
            if *digits < 15 {
                return Err(usage(format!("--digits {digits}: need at least 15")));
            }
            theta_k.map_or(Ok(()), check_k)
        }
        Command::Ratio { k, n_list } => {
            check_k(*k)?;
            n_list.iter().try_for_each(|&n| check_len("n-list", n))
        }
        Command::Code(CodeCommand::Search { k, .. }) => {
            check_k(*k)?;
            if *k > 6 {
                return Err(usage(format!("--k {k}: search covers k <= 6")));
            }
            Ok(())
        }
        Command::Code(CodeCommand::Verify(_)) => Ok(()),
    }
}

/// The serde name of a unit enum variant.
fn label<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn rows_out(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        Format::Csv => csv(header, rows),
        _ => table(header, rows),
    }
}

fn cmd_e4(format: Format, terms: usize) -> Result<String> {
    let e4 = modforms::eisenstein_e4(terms)?;
    let coeffs: Vec<String> = e4.numerators().iter().map(ToString::to_string).collect();
    Ok(match format {
        Format::Text => format!("{}\n", coeffs.join(" ")),
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                coeffs.iter().enumerate().map(|(m, c)| vec![m.to_string(), c.clone()]).collect();
            csv(&["m", "coefficient"], &rows)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                terms: usize,
                coefficients: &'a [String],
            }
            json(&Out { terms, coefficients: &coeffs })?
        }
    })
}

#[derive(Serialize)]
struct ProfileOut<'a> {
    n: u64,
    k: u32,
    mu: u64,
    nu: u64,
    #[serde(serialize_with = "serial::bigint")]
    beta1: &'a num_bigint::BigInt,
    #[serde(serialize_with = "serial::bigint")]
    beta2: &'a num_bigint::BigInt,
    threshold: i64,
    j: u64,
    #[serde(serialize_with = "serial::bigints")]
    b: &'a [num_bigint::BigInt],
}

fn cmd_extremal(format: Format, n: u64, k: u32) -> Result<String> {
    let p = extremal::profile(n, k)?;
    let out = ProfileOut {
        n: p.n,
        k: p.k,
        mu: p.mu,
        nu: p.nu,
        beta1: &p.beta1,
        beta2: &p.beta2,
        threshold: p.threshold,
        j: p.j,
        b: &p.b,
    };
    Ok(match format {
        Format::Json => json(&out)?,
        Format::Csv => csv(
            &["n", "k", "mu", "nu", "beta1", "beta2", "threshold"],
            &[vec![
                p.n.to_string(),
                p.k.to_string(),
                p.mu.to_string(),
                p.nu.to_string(),
                p.beta1.to_string(),
                p.beta2.to_string(),
                p.threshold.to_string(),
            ]],
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n {}  k {}  j {}  mu {}  nu {}", p.n, p.k, p.j, p.mu, p.nu);
            for (i, b) in p.b.iter().enumerate() {
                let _ = writeln!(s, "b_{} {}", 2 * i, b);
            }
            let _ = writeln!(s, "beta1 {}", p.beta1);
            let _ = writeln!(s, "beta2 {}", p.beta2);
            let _ = writeln!(s, "threshold {}", p.threshold);
            s
        }
    })
}

fn cmd_crossover(format: Format, k: u32, from: u64, to: u64) -> Result<String> {
    let rep = extremal::crossover_scan(k, from, to)?;
    if format == Format::Json {
        return json(&rep);
    }
    let rows: Vec<Vec<String>> =
        rep.rows.iter().map(|r| vec![r.n.to_string(), r.beta1.to_string(), r.beta2.to_string()]).collect();
    let mut s = rows_out(format, &["n", "beta1", "beta2"], &rows);
    if format == Format::Text {
        let first = rep.first_negative.map_or("none".to_string(), |n| n.to_string());
        let _ = writeln!(s, "first n with beta2 < 0: {first}");
    }
    Ok(s)
}

fn cmd_theorem1(format: Format, nmax: u64, k: u32) -> Result<String> {
    let rows = extremal::theorem1_sweep(k, nmax)?;
    if format == Format::Json {
        #[derive(Serialize)]
        struct Out<'a> {
            k: u32,
            nmax: u64,
            all_pass: bool,
            rows: &'a [extremal::Theorem1Row],
        }
        let all_pass = rows.iter().all(extremal::Theorem1Row::pass);
        return json(&Out { k, nmax, all_pass, rows: &rows });
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.beta1.to_string(),
                r.certificate.min_coefficient.to_string(),
                r.certificate.min_exponent.to_string(),
                r.certificate.min_source.clone(),
                r.pass().to_string(),
            ]
        })
        .collect();
    let header = ["n", "beta1", "min_coefficient", "min_exponent", "min_source", "pass"];
    let mut s = rows_out(format, &header, &cells);
    if format == Format::Text {
        let failing: Vec<String> = rows.iter().filter(|r| !r.pass()).map(|r| r.n.to_string()).collect();
        let verdict = if failing.is_empty() { "all pass".to_string() } else { format!("fail at {}", failing.join(" ")) };
        let _ = writeln!(s, "{verdict}");
    }
    Ok(s)
}

fn cmd_asymptotics(format: Format, digits: u32, theta_k: Option<u32>) -> Result<String> {
    let sd = match theta_k {
        Some(k) => asymptotics::find_theta_saddle(k, digits)?,
        None => asymptotics::find_saddle(digits)?,
    };
    let lim = asymptotics::predicted_ratio_limit(&sd)?;
    #[derive(Serialize)]
    struct Out<'a> {
        saddle: &'a SaddleData,
        limit: &'a RatioLimit,
    }
    if format == Format::Json {
        return json(&Out { saddle: &sd, limit: &lim });
    }
    let d = sd.digits;
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
    let pairs = vec![
        ("digits", d.to_string()),
        ("theta_k", sd.theta_k.map_or("-".to_string(), |k| k.to_string())),
        ("y0", asymptotics::to_decimal(&sd.y0, d)),
        ("t0", asymptotics::to_decimal(&sd.t0, d)),
        ("c1", asymptotics::to_decimal(&sd.c1, d)),
        ("c2", asymptotics::to_decimal(&sd.c2, d)),
        ("h_terms", sd.h_terms.to_string()),
        ("stationarity", format!("{:.3e}", sd.stationarity)),
        ("limit", lim.limit_text.clone()),
        ("path_gap", format!("{:.3e}", lim.path_gap)),
        ("k_gap", opt(lim.k_gap)),
        ("quoted", format!("{}", lim.quoted)),
        ("quoted_gap", format!("{:.6}", lim.quoted_gap)),
    ];
    let rows: Vec<Vec<String>> = pairs.into_iter().map(|(a, b)| vec![a.to_string(), b]).collect();
    Ok(rows_out(format, &["key", "value"], &rows))
}

fn cmd_ratio(format: Format, k: u32, ns: &[u64]) -> Result<String> {
    let rep = asymptotics::ratio_report(k, ns)?;
    Ok(match format {
        Format::Json => json(&rep)?,
        Format::Csv => rep.to_csv(),
        Format::Text => {
            let opt = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        opt(&r.exact_ratio),
                        r.threshold.to_string(),
                        opt(&r.margin),
                        r.beta2_negative.to_string(),
                    ]
                })
                .collect();
            let mut s = table(&["n", "exact_ratio", "threshold", "margin", "beta2_negative"], &rows);
            let _ = writeln!(s, "trend {}", label(&rep.trend));
            s
        }
    })
}

fn code_summary(code: &LinearCode, report: &codes::TypeIIReport) -> String {
    let mut s = code.to_text();
    let d_e = report.d_e.map_or("-".to_string(), |d| d.to_string());
    let _ = writeln!(s, "gram_vanishes {}", report.gram_vanishes);
    let _ = writeln!(s, "cardinality {} of {}", report.cardinality, report.expected_cardinality);
    let _ = writeln!(s, "self_dual {}", report.self_dual);
    let _ = writeln!(s, "all_weights_div_4k {}", report.all_weights_div_4k);
    let _ = writeln!(s, "d_E {d_e}");
    let _ = writeln!(s, "type2 {}", report.type2);
    s
}

fn report_csv(report: &codes::TypeIIReport) -> String {
    csv(
        &["k", "n", "gram_vanishes", "cardinality", "self_dual", "all_weights_div_4k", "d_e", "type2"],
        &[vec![
            report.k.to_string(),
            report.n.to_string(),
            report.gram_vanishes.to_string(),
            report.cardinality.to_string(),
            report.self_dual.to_string(),
            report.all_weights_div_4k.to_string(),
            report.d_e.map_or(String::new(), |d| d.to_string()),
            report.type2.to_string(),
        ]],
    )
}

fn cmd_code_verify(format: Format, file: &std::path::Path) -> std::result::Result<String, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let code: LinearCode = text.parse()?;
    let report = codes::verify_type2(&code)?;
    let table = codes::swe(&code)?;
    Ok(match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                code: &'a LinearCode,
                report: &'a codes::TypeIIReport,
                swe: &'a codes::SweTable,
            }
            json(&Out { code: &code, report: &report, swe: &table })?
        }
        Format::Csv => report_csv(&report),
        Format::Text => code_summary(&code, &report),
    })
}

fn cmd_code_search(format: Format, k: u32, seed: u64) -> Result<String> {
    let found = codes::search_c8(k, seed)?;
    Ok(match format {
        Format::Json => json(&found)?,
        Format::Csv => report_csv(&found.report),
        Format::Text => {
            let mut s = code_summary(&found.code, &found.report);
            let _ = writeln!(s, "origin {}", label(&found.origin));
            let _ = writeln!(s, "trials {}", found.trials);
            s
        }
    })
}

fn dispatch(cli: &Cli) -> std::result::Result<String, Failure> {
    let f = cli.format;
    Ok(match &cli.command {
        Command::E4 { terms } => cmd_e4(f, *terms)?,
        Command::Extremal { n, k } => cmd_extremal(f, *n, *k)?,
        Command::Crossover { k, from, to } => cmd_crossover(f, *k, *from, *to)?,
        Command::Theorem1 { nmax, k } => cmd_theorem1(f, *nmax, *k)?,
        Command::Asymptotics { digits, theta_k } => cmd_asymptotics(f, *digits, *theta_k)?,
        Command::Ratio { k, n_list } => cmd_ratio(f, *k, n_list)?,
        Command::Code(CodeCommand::Verify(args)) => cmd_code_verify(f, &args.file)?,
        Command::Code(CodeCommand::Search { k, seed }) => cmd_code_search(f, *k, *seed)?,
    })
}

/// Parse `argv`, run the subcommand, and write its output. Returns the
/// process exit status: 0 on success, 1 when a computation fails, 2 on a
/// usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{first}");
            return 2;
        }
    };
    let result = validate(&cli).and_then(|()| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cli.workers {
            pool = pool.num_threads(w);
        }
        let pool = pool.build().map_err(|e| Failure::Compute(Error::InvalidArgument(e.to_string())))?;
        pool.install(|| dispatch(&cli))
    });
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
