//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde_json::{Map, Value};
use sympent_core::geometry::{ConicCoeffs, LinearForm};
use sympent_core::operators::rho_state;
use sympent_core::rational::parse_rational;
use sympent_core::regions::{boundary_sample, classify, CompiledRegion, RegionId};
use sympent_core::verify::{kbh_point, kred_point};
use sympent_core::{Dimension, Error, KIndex, RationalPoint2, Q};

use crate::io::{format_matrix, write_matrix};
use crate::report::{render, to_json};
use crate::suites::{run_suite, Suite, SuiteOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "SYMPENT_SEED";

#[derive(Parser, Debug)]
#[command(name = "sympent", version, about = "Regions, witnesses and checks for symplectic-covariant maps and invariant states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a parameter point (p,q).
    Classify {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Export a region boundary as CSV or SVG.
    Boundary {
        #[arg(long)]
        d: u32,
        /// P<k>, D, T or S<k>
        #[arg(long)]
        region: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Write the Choi matrix of a witness map.
    Witness {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum)]
        kind: WitnessKind,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(Suite))]
    pub suite: Suite,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 2000)]
    pub frames: usize,
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
    /// Sample count for the pairing, twirl and pptsq suites.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Include wall-clock runtime in the report.
    #[arg(long)]
    pub timing: bool,
}

impl clap::builder::ValueParserFactory for Suite {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Suite>())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    Kbh,
    Kred,
    Custom,
}

/// Validated settings shared by the commands.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub d: Dimension,
    pub tolerance: f64,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl CliConfig {
    pub fn new(d: u32, tolerance: f64, seed: u64, output_format: OutputFormat) -> Result<Self, Failure> {
        let d = Dimension::new(d).map_err(Failure::from)?;
        if !(tolerance > 0.0 && tolerance <= 1e-3) {
            return Err(Failure::usage(format!("tolerance {tolerance:e} outside (0, 1e-3]")));
        }
        Ok(CliConfig { d, tolerance, seed: seed_override(seed), output_format })
    }
}

fn seed_override(seed: u64) -> u64 {
    match std::env::var(SEED_ENV) {
        Ok(s) => match s.trim().parse() {
            Ok(v) => v,
            Err(_) => {
                warn!("ignoring {SEED_ENV}={s:?}: not an unsigned integer");
                seed
            }
        },
        Err(_) => seed,
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure { code: EXIT_USAGE, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_USAGE,
            Error::UnsupportedRegion(_) => EXIT_UNSUPPORTED,
            _ => EXIT_DOMAIN,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_DOMAIN, message: e.to_string() }
    }
}

/// Parses and runs; the return value is the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Classify { d, p, q } => cmd_classify(d, &p, &q, out),
        Command::Boundary { d, region, samples, format, out: path } => {
            cmd_boundary(d, &region, samples, format, path, out)
        }
        Command::Verify(args) => cmd_verify(args, out),
        Command::Witness { d, k, kind, p, q, out: path } => cmd_witness(d, k, kind, p, q, path, out),
    }
}

fn parse_q(s: &str) -> Result<(Q, bool), Failure> {
    parse_rational(s).map_err(|_| Failure::usage(format!("cannot parse {s:?} as a rational or decimal")))
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{}", render(v))?;
    Ok(())
}

pub fn cmd_classify(d: u32, p: &str, q: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let (p, pdec) = parse_q(p)?;
    let (q, qdec) = parse_q(q)?;
    let cfg = CliConfig::new(d, 1e-9, 0, OutputFormat::Json)?;
    let pt = RationalPoint2::new(p, q);
    let report = classify(cfg.d, &pt);
    let mut m = Map::new();
    m.insert("d".into(), d.into());
    m.insert("p".into(), pt.x.to_string().into());
    m.insert("q".into(), pt.y.to_string().into());
    if let Value::Object(r) = to_json(&report) {
        m.extend(r);
    }
    let warning = (pdec || qdec).then(|| "decimal input converted exactly from its binary floating-point value");
    m.insert("warning".into(), warning.map_or(Value::Null, Value::from));
    emit(out, &Value::Object(m))?;
    Ok(EXIT_PASS)
}

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn boundary_csv(region: RegionId, d: Dimension, pts: &[(f64, f64)]) -> String {
    let mut s = format!("# region={region} d={d}\n");
    for (x, y) in pts {
        s.push_str(&format!("{},{}\n", sig17(*x), sig17(*y)));
    }
    s
}

/// One closed path in a unit viewBox. Plane coordinates map to the box by
/// X = x/s − x0/s, Y = y1/s − y/s, recorded in the header.
pub fn boundary_svg(region: &CompiledRegion, d: Dimension, pts: &[(f64, f64)]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let s = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let transform =
        format!("X = {} * x + {}; Y = {} * y + {}", sig17(1.0 / s), sig17(-x0 / s), sig17(-1.0 / s), sig17(y1 / s));
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" data-region=\"{}\" data-d=\"{}\" data-transform=\"{}\">\n",
        region.id, d, transform
    ));
    out.push_str(&format!("<!-- region {} d={} -->\n", region.id, d));
    out.push_str(&format!("<!-- transform: {transform} -->\n"));
    let lin = |l: &LinearForm| format!("{l} <= 0");
    let mut ineqs: Vec<String> = region.linear.iter().map(lin).collect();
    ineqs.extend(region.conic_nonneg.iter().map(|c: &ConicCoeffs| format!("{c} >= 0")));
    ineqs.extend(region.cut_or_ellipse.iter().map(|(l, g)| format!("{} or {g} <= 0", lin(l))));
    let mut seen = std::collections::HashSet::new();
    for i in ineqs.into_iter().filter(|i| seen.insert(i.clone())) {
        out.push_str(&format!("<!-- inequality: {} -->\n", i.replace("--", "- -")));
    }
    let mut path = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        path.push_str(&format!("{cmd}{:.9} {:.9} ", (x - x0) / s, (y1 - y) / s));
    }
    path.push('Z');
    out.push_str(&format!(
        "<path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.002\"/>\n</svg>\n"
    ));
    out
}

pub fn cmd_boundary(
    d: u32,
    region: &str,
    samples: usize,
    format: OutputFormat,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let cfg = CliConfig::new(d, 1e-9, 0, format)?;
    if samples < 8 {
        return Err(Failure::usage(format!("--samples must be at least 8, got {samples}")));
    }
    let id: RegionId = region.parse().map_err(Failure::from)?;
    let compiled = CompiledRegion::new(cfg.d, id)?;
    let pts: Vec<(f64, f64)> = boundary_sample(cfg.d, id, samples)?.iter().map(|p| p.to_f64()).collect();
    info!("boundary {id} d={d}: {} points", pts.len());
    let text = match cfg.output_format {
        OutputFormat::Csv => boundary_csv(id, cfg.d, &pts),
        OutputFormat::Svg => boundary_svg(&compiled, cfg.d, &pts),
        OutputFormat::Json => return Err(Failure::usage("boundary supports csv and svg".into())),
    };
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_PASS)
}

pub fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = CliConfig::new(a.d, a.tol, a.seed, OutputFormat::Json)?;
    let k = a.k.map(|k| KIndex::new(cfg.d, k)).transpose()?;
    let opts = SuiteOptions {
        d: cfg.d,
        k,
        frames: a.frames,
        grid: a.grid,
        samples: a.samples,
        seed: cfg.seed,
        tol: cfg.tolerance,
        jobs: a.jobs.max(1),
        timing: a.timing,
    };
    info!("running suite {} d={} seed={}", a.suite.name(), cfg.d, cfg.seed);
    let report = run_suite(a.suite, &opts)?;
    emit(out, &report.to_value())?;
    Ok(if report.verdict.passed { EXIT_PASS } else { EXIT_FAIL })
}

pub fn witness_point(d: Dimension, k: u32, kind: WitnessKind, p: Option<&str>, q: Option<&str>) -> Result<RationalPoint2, Failure> {
    match kind {
        WitnessKind::Kbh => {
            if k < 1 || k + 1 > d.get() / 2 {
                return Err(Failure { code: EXIT_DOMAIN, message: format!("kbh needs 1 <= k <= d/2 - 1, got k = {k}") });
            }
            Ok(kbh_point(d, KIndex::new(d, k)?))
        }
        WitnessKind::Kred => Ok(kred_point(d, KIndex::new(d, k)?)),
        WitnessKind::Custom => {
            let (Some(p), Some(q)) = (p, q) else {
                return Err(Failure::usage("custom witness needs --p and --q".into()));
            };
            Ok(RationalPoint2::new(parse_q(p)?.0, parse_q(q)?.0))
        }
    }
}

pub fn cmd_witness(
    d: u32,
    k: u32,
    kind: WitnessKind,
    p: Option<String>,
    q: Option<String>,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let cfg = CliConfig::new(d, 1e-9, 0, OutputFormat::Json)?;
    let pt = witness_point(cfg.d, k, kind, p.as_deref(), q.as_deref())?;
    let (a, b) = pt.to_f64();
    let choi = rho_state(cfg.d, a, b, None)?;
    match path {
        Some(path) => {
            write_matrix(&path, &choi).map_err(|e| Failure { code: EXIT_DOMAIN, message: e.to_string() })?;
            let mut m = Map::new();
            m.insert("d".into(), d.into());
            m.insert("k".into(), k.into());
            m.insert("kind".into(), format!("{kind:?}").to_lowercase().into());
            m.insert("p".into(), pt.x.to_string().into());
            m.insert("q".into(), pt.y.to_string().into());
            m.insert("rows".into(), choi.rows().into());
            m.insert("out".into(), path.display().to_string().into());
            emit(out, &Value::Object(m))?;
        }
        None => out.write_all(format_matrix(&choi).as_bytes())?,
    }
    Ok(EXIT_PASS)
}
