//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 format error, 3 precondition violation,
//! 4 verification mismatch, 5 resource cap.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autolab::{jacobian_form_check, tail_vanishing_test, PolynomialMap, TailRecord};
use crate::error::{Error, Result};
use crate::format::{
    emit_header, emit_series, emit_series_json, emit_terms, parse_series, term_records, TermRecord,
};
use crate::graded::BlockMatrix;
use crate::inversion::{invert_traced, Method, PhiSequence};
use crate::multiindex::SeriesContext;
use crate::poly::Limits;
use crate::sample::{random_unit_tangent, MapShape};
use crate::series::TruncatedSeriesMap;

#[derive(Debug, Parser)]
#[command(
    name = "fpsrev",
    version,
    about = "Exact composition and inversion of multivariate power series"
)]
pub struct Cli {
    /// Emit JSON instead of the text format
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Neumann,
    Recurrence,
    Fixpoint,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invert a map with identity linear part
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        /// Truncation degree (defaults to the file's header)
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two maps, outer ∘ inner
    Compose {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// k-fold self-composition
    Iterate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        times: usize,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Φ_0 … Φ_M and their orders
    PhiSeq {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Exact search for a vanishing Φ tail of a polynomial map
    TailTest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "max-m")]
        max_m: usize,
        #[arg(long = "max-terms", default_value_t = Limits::default().max_terms)]
        max_terms: usize,
        #[arg(long = "max-degree", default_value_t = Limits::default().max_degree)]
        max_degree: u32,
    },
    /// Jacobian form of the condition Φ_m = 0
    JacobianCheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Dump M_φ, or e^{⊙M_φ} with --exp
    Matrix {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        exp: bool,
    },
    /// Time the three inversion methods on a seeded dense quadratic map
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(CliError::Kernel(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
        Err(CliError::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

enum CliError {
    Kernel(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Kernel(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn read_series(
    path: &Path,
    degree: Option<u32>,
) -> std::result::Result<TruncatedSeriesMap, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let map = parse_series(&text)?;
    Ok(match degree {
        Some(d) => recap(&map, d)?,
        None => map,
    })
}

/// Moves a map to cap `d`; listed coefficients are exact, so raising the cap
/// keeps them and treats everything else as zero.
fn recap(map: &TruncatedSeriesMap, d: u32) -> Result<TruncatedSeriesMap> {
    if d <= map.degree_cap() {
        map.truncate(d)
    } else {
        TruncatedSeriesMap::new(
            SeriesContext::new(map.nvars(), d)?,
            map.components().to_vec(),
        )
    }
}

fn series_output(map: &TruncatedSeriesMap, json: bool) -> String {
    if json {
        let mut s = emit_series_json(map);
        s.push('\n');
        s
    } else {
        emit_series(map)
    }
}

fn execute(
    cli: &Cli,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> std::result::Result<i32, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Invert {
            input,
            degree,
            method,
            out,
        } => {
            let phi = read_series(input, *degree)?;
            let inverse = match method {
                MethodArg::Neumann => invert_traced(&phi, Method::Neumann)?.inverse,
                MethodArg::Recurrence => invert_traced(&phi, Method::Recurrence)?.inverse,
                MethodArg::Fixpoint => invert_traced(&phi, Method::Fixpoint)?.inverse,
                MethodArg::All => {
                    let inverse = invert_all_verified(&phi)?;
                    writeln!(
                        stderr,
                        "neumann, recurrence and fixpoint agree; both compositions with the input are the identity through degree {}",
                        phi.degree_cap()
                    )?;
                    inverse
                }
            };
            let text = series_output(&inverse, json);
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => stdout.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Compose {
            outer,
            inner,
            degree,
        } => {
            let outer = read_series(outer, *degree)?;
            let inner = read_series(inner, Some(degree.unwrap_or(outer.degree_cap())))?;
            stdout.write_all(series_output(&outer.compose(&inner)?, json).as_bytes())?;
            Ok(0)
        }
        Command::Iterate {
            input,
            times,
            degree,
        } => {
            let phi = read_series(input, *degree)?;
            stdout.write_all(series_output(&phi.iterate(*times), json).as_bytes())?;
            Ok(0)
        }
        Command::PhiSeq { input, m, degree } => {
            let phi = read_series(input, *degree)?;
            let mut seq = PhiSequence::new(phi.clone());
            seq.term(*m)?;
            stdout.write_all(render_phi_seq(&phi, seq.terms(), json).as_bytes())?;
            Ok(0)
        }
        Command::TailTest {
            input,
            max_m,
            max_terms,
            max_degree,
        } => {
            let phi = PolynomialMap::from_truncated(&read_series(input, None)?);
            let limits = Limits {
                max_terms: *max_terms,
                max_degree: *max_degree,
            };
            let report = tail_vanishing_test(&phi, *max_m, limits)?;
            stdout.write_all(render_tail(&report, json).as_bytes())?;
            Ok(0)
        }
        Command::JacobianCheck { input, m, degree } => {
            let phi = PolynomialMap::from_truncated(&read_series(input, None)?);
            let check = jacobian_form_check(&phi, *m, *degree)?;
            stdout.write_all(render_jacobian(*m, *degree, &check, json).as_bytes())?;
            Ok(0)
        }
        Command::Matrix { input, degree, exp } => {
            let phi = read_series(input, *degree)?;
            let mut m = BlockMatrix::from_series(&phi);
            if *exp {
                m = m.odot_exp()?;
            }
            stdout.write_all(render_matrix(&m, json).as_bytes())?;
            Ok(0)
        }
        Command::Bench { n, degree, seed } => {
            let ctx = SeriesContext::new(*n, *degree)?;
            let shape = MapShape {
                max_degree: 2,
                coeff_bound: 3,
                density: 1.0,
            };
            let phi = random_unit_tangent(ctx, shape, &mut ChaCha8Rng::seed_from_u64(*seed));
            let (report, agree) = bench(&phi)?;
            stdout.write_all(report.as_bytes())?;
            Ok(if agree { 0 } else { 4 })
        }
    }
}

/// Runs all three methods, requires identical output and a two-sided identity.
pub fn invert_all_verified(phi: &TruncatedSeriesMap) -> Result<TruncatedSeriesMap> {
    let results: Vec<TruncatedSeriesMap> = Method::ALL
        .iter()
        .map(|&m| invert_traced(phi, m).map(|r| r.inverse))
        .collect::<Result<_>>()?;
    for (m, r) in Method::ALL.iter().zip(&results).skip(1) {
        if r != &results[0] {
            return Err(Error::Verification(format!(
                "{m} disagrees with {}",
                Method::ALL[0]
            )));
        }
    }
    let inverse = results.into_iter().next().expect("three methods");
    let id = TruncatedSeriesMap::identity(*phi.ctx());
    if phi.compose(&inverse)? != id {
        return Err(Error::Verification("φ∘ψ is not the identity".into()));
    }
    if inverse.compose(phi)? != id {
        return Err(Error::Verification("ψ∘φ is not the identity".into()));
    }
    Ok(inverse)
}

fn bench(phi: &TruncatedSeriesMap) -> Result<(String, bool)> {
    let mut out = String::new();
    writeln!(
        out,
        "bench n={} degree={} input_terms={}",
        phi.nvars(),
        phi.degree_cap(),
        phi.term_count()
    )
    .unwrap();
    let mut results = Vec::new();
    for method in Method::ALL {
        let start = Instant::now();
        let r = invert_traced(phi, method)?;
        let elapsed = start.elapsed();
        writeln!(
            out,
            "{:<10} {:>10.3} ms  peak_terms {:>6}  result_terms {:>6}",
            method.name(),
            elapsed.as_secs_f64() * 1e3,
            r.peak_terms,
            r.inverse.term_count()
        )
        .unwrap();
        results.push(r.inverse);
    }
    let agree = results.windows(2).all(|w| w[0] == w[1]);
    writeln!(out, "agreement {}", if agree { "yes" } else { "NO" }).unwrap();
    Ok((out, agree))
}

#[derive(Serialize)]
struct PhiRecord {
    m: usize,
    order: String,
    terms: Vec<TermRecord>,
}

#[derive(Serialize)]
struct PhiSeqRecord {
    vars: usize,
    degree: u32,
    phi: Vec<PhiRecord>,
}

fn render_phi_seq(phi: &TruncatedSeriesMap, terms: &[TruncatedSeriesMap], json: bool) -> String {
    if json {
        let record = PhiSeqRecord {
            vars: phi.nvars(),
            degree: phi.degree_cap(),
            phi: terms
                .iter()
                .enumerate()
                .map(|(m, t)| PhiRecord {
                    m,
                    order: t.order().to_string(),
                    terms: term_records(t.components()),
                })
                .collect(),
        };
        return serde_json::to_string_pretty(&record).expect("plain data") + "\n";
    }
    let mut out = emit_header(phi.ctx());
    for (m, t) in terms.iter().enumerate() {
        writeln!(out, "## Phi_{m} order {}", t.order()).unwrap();
        out.push_str(&emit_terms(t));
    }
    out
}

#[derive(Serialize)]
struct CertificateRecord {
    vars: usize,
    terms: Vec<TermRecord>,
}

#[derive(Serialize)]
struct TailJson<'a> {
    searched_upto: usize,
    vanishing_m0: Option<usize>,
    records: &'a [TailRecord],
    certificate_inverse: Option<CertificateRecord>,
}

fn render_tail(report: &crate::autolab::TailReport, json: bool) -> String {
    if json {
        let record = TailJson {
            searched_upto: report.searched_upto,
            vanishing_m0: report.vanishing_m0,
            records: &report.records,
            certificate_inverse: report
                .certificate_inverse
                .as_ref()
                .map(|c| CertificateRecord {
                    vars: c.nvars(),
                    terms: term_records(c.components()),
                }),
        };
        return serde_json::to_string_pretty(&record).expect("plain data") + "\n";
    }
    let mut out = String::new();
    writeln!(out, "# tail test, Phi_1 .. Phi_{}", report.searched_upto).unwrap();
    for r in &report.records {
        let degree = r.degree.map_or("-".to_string(), |d| d.to_string());
        writeln!(
            out,
            "m {} degree {} terms {} zero {}",
            r.m, degree, r.terms, r.zero
        )
        .unwrap();
    }
    match (&report.vanishing_m0, &report.certificate_inverse) {
        (Some(m0), Some(cert)) => {
            writeln!(out, "vanishing_m0 {m0}").unwrap();
            writeln!(out, "# polynomial inverse, verified by exact composition").unwrap();
            let degree = cert.degree().unwrap_or(1);
            let ctx = SeriesContext::new(cert.nvars(), degree).expect("positive");
            let as_map = TruncatedSeriesMap::new(ctx, cert.components().to_vec())
                .expect("fits its own degree");
            out.push_str(&emit_series(&as_map));
        }
        _ => writeln!(out, "vanishing_m0 none").unwrap(),
    }
    out
}

#[derive(Serialize)]
struct ResidualRecord {
    row: usize,
    col: usize,
    terms: Vec<TermRecord>,
}

#[derive(Serialize)]
struct JacobianJson {
    m: usize,
    degree: u32,
    holds: bool,
    residual: Vec<ResidualRecord>,
}

fn render_jacobian(
    m: usize,
    degree: u32,
    check: &crate::autolab::JacobianCheck,
    json: bool,
) -> String {
    let residual: Vec<ResidualRecord> = check
        .residual
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, t)| !t.is_empty())
                .map(move |(j, t)| ResidualRecord {
                    row: i + 1,
                    col: j + 1,
                    terms: term_records(std::slice::from_ref(t)),
                })
        })
        .collect();
    if json {
        let record = JacobianJson {
            m,
            degree,
            holds: check.holds,
            residual,
        };
        return serde_json::to_string_pretty(&record).expect("plain data") + "\n";
    }
    let mut out = format!(
        "jacobian-check m {m} degree {degree} holds {}\n",
        check.holds
    );
    for r in residual {
        for t in r.terms {
            let exps = t
                .exponent
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            let value = if t.den == "1" {
                t.num
            } else {
                format!("{}/{}", t.num, t.den)
            };
            writeln!(out, "residual ({},{}): {exps} -> {value}", r.row, r.col).unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct MatrixEntry {
    row_weight: u32,
    col_weight: u32,
    row: Vec<u32>,
    col: Vec<u32>,
    num: String,
    den: String,
}

fn render_matrix(m: &BlockMatrix, json: bool) -> String {
    if !json {
        return m.dump();
    }
    let entries: Vec<MatrixEntry> = m
        .blocks()
        .flat_map(|(&(r, c), b)| {
            b.nonzero_entries()
                .into_iter()
                .map(move |(ri, ci, v)| MatrixEntry {
                    row_weight: r,
                    col_weight: c,
                    row: ri.entries().to_vec(),
                    col: ci.entries().to_vec(),
                    num: v.numer().to_string(),
                    den: v.denom().to_string(),
                })
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("plain data") + "\n"
}
