//! Command-line front end: verification suites, embedding export, field
//! dumps and timing.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::embedding::{embedding_at, Embedding, Mode};
use crate::error::{Error, Result};
use crate::octahedron::{evolve_t, InitialData};
use crate::render::{embedding_svg, SvgStyle};
use crate::rings::{bit_length, integer, parse_positive, parse_rational, Complex64, GaussianRational, Rational};
use crate::verify::{run_suite, Suite, VerifyParams};
use crate::wavefield::{fundamental_observed, BoundaryData, Direction, PointSource, ResidueClass, Source, SourceWeights, WaveField};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tembed", version, about = "Exact t-embeddings of the two-periodic Aztec diamond")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Write the embedding and origami map at stage n as CSV or SVG.
    Emit(EmitArgs),
    /// Dump a wave-equation solution as CSV rows j,k,n,re,im.
    Field(FieldArgs),
    /// Dump the octahedron recurrence as CSV rows j,k,n,value.
    Octahedron(OctahedronArgs),
    /// Time the wave-field and embedding computations.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Theorem,
    Oracle,
    Geometry,
    Lemmas,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Theorem => Suite::Theorem,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Geometry => Suite::Geometry,
            SuiteArg::Lemmas => Suite::Lemmas,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Stage or depth.
    #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
    pub n: i64,
    /// Weight parameter, as p/q or a decimal.
    #[arg(long, default_value = "7/10", allow_hyphen_values = true)]
    pub a: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite to run.
    #[arg(value_enum)]
    pub suite_pos: Option<SuiteArg>,
    #[arg(long = "suite", value_enum)]
    pub suite: Option<SuiteArg>,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for the randomized initial data.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Arithmetic for CSV output; SVG is always drawn from double precision.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub common: Common,
    /// 00, 01, 10, 11 for a fundamental solution; E, N, W, S for a unit boundary source; T or O for the assembled boundary data.
    #[arg(long, default_value = "00")]
    pub source: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct OctahedronArgs {
    #[command(flatten)]
    pub common: Common,
    /// Initial values a,b,c,d; defaults to 1,1,1,1/a.
    #[arg(long)]
    pub init: Option<String>,
    /// Center j,k of the cone.
    #[arg(long, default_value = "0,0")]
    pub center: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    /// Run one mode only; both by default.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

/// Parses `a` and rejects non-positive values.
pub fn parse_a(text: &str) -> Result<Rational> {
    parse_positive(text)
}

fn check_n(n: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("n must be >= 1, got {n}")));
    }
    Ok(())
}

fn parse_pair(text: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidArgument(format!("expected j,k, got {text:?}"));
    let (j, k) = text.split_once(',').ok_or_else(bad)?;
    Ok((j.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Maps an error to its exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::InvalidArgument(_) | Error::ParseRational { .. } | Error::EnumerationGuard { .. } => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Emit(args) => emit(args).map(|_| EXIT_PASS),
        Command::Field(args) => field(args).map(|_| EXIT_PASS),
        Command::Octahedron(args) => octahedron(args).map(|_| EXIT_PASS),
        Command::Bench(args) => bench(args).map(|_| EXIT_PASS),
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let suite: Suite = args.suite.or(args.suite_pos).unwrap_or(SuiteArg::All).into();
    if args.format != Format::Json {
        return Err(Error::InvalidArgument("verify writes JSON only".into()));
    }
    let params = VerifyParams::new(args.common.n, parse_a(&args.common.a)?, args.mode.into(), args.tol, args.seed)?;
    let report = run_suite(suite, &params)?;
    write_output(&args.common.out, &report.to_json())?;
    eprintln!(
        "{} checks, {} failed: {}",
        report.summary.total,
        report.summary.failed,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}

fn emit(args: EmitArgs) -> Result<()> {
    check_n(args.common.n)?;
    let a = parse_a(&args.common.a)?;
    let text = match args.format {
        Format::Svg => embedding_svg(&embedding_at::<Complex64>(&a, args.common.n)?, &SvgStyle::default()),
        Format::Csv => match Mode::from(args.mode) {
            Mode::Exact => embedding_at::<GaussianRational>(&a, args.common.n)?.to_csv(),
            Mode::Float => embedding_at::<Complex64>(&a, args.common.n)?.to_csv(),
        },
        Format::Json => return Err(Error::InvalidArgument("emit writes csv or svg".into())),
    };
    write_output(&args.common.out, &text)
}

fn field_source(name: &str, a: &Rational) -> Result<Source<GaussianRational>> {
    let boundary = |data| Source::Boundary {
        data,
        weights: SourceWeights::EastGamma,
    };
    let dir = |d| Ok(boundary(BoundaryData::unit(d)));
    match name {
        "E" => dir(Direction::East),
        "N" => dir(Direction::North),
        "W" => dir(Direction::West),
        "S" => dir(Direction::South),
        "T" => Ok(boundary(BoundaryData::embedding(a))),
        "O" => Ok(boundary(BoundaryData::origami(a))),
        _ => {
            let digits: Vec<i64> = name.chars().filter_map(|c| c.to_digit(10).map(i64::from)).collect();
            if digits.len() != 2 || name.len() != 2 {
                return Err(Error::InvalidArgument(format!("unknown source {name:?}")));
            }
            let class = ResidueClass::new(digits[0], digits[1])?;
            let (site, sign) = class.source();
            Ok(Source::Points(vec![PointSource {
                site,
                weight: GaussianRational::new(integer(sign), integer(0)),
            }]))
        }
    }
}

fn to_float_source(source: &Source<GaussianRational>) -> Source<Complex64> {
    use crate::rings::ComplexScalar;
    match source {
        Source::Boundary { data, weights } => Source::Boundary {
            data: BoundaryData {
                b_0: data.b_0.to_c64(),
                b_e: data.b_e.to_c64(),
                b_n: data.b_n.to_c64(),
                b_w: data.b_w.to_c64(),
                b_s: data.b_s.to_c64(),
            },
            weights: *weights,
        },
        Source::Points(points) => Source::Points(
            points
                .iter()
                .map(|p| PointSource {
                    site: p.site,
                    weight: p.weight.to_c64(),
                })
                .collect(),
        ),
    }
}

fn field(args: FieldArgs) -> Result<()> {
    if args.common.n < 0 {
        return Err(Error::InvalidArgument(format!("n must be >= 0, got {}", args.common.n)));
    }
    let a = parse_a(&args.common.a)?;
    let source = field_source(&args.source, &a)?;
    let text = match Mode::from(args.mode) {
        Mode::Exact => WaveField::solve(&a, args.common.n, source)?.to_csv(),
        Mode::Float => WaveField::solve(&a, args.common.n, to_float_source(&source))?.to_csv(),
    };
    write_output(&args.common.out, &text)
}

fn octahedron(args: OctahedronArgs) -> Result<()> {
    if args.common.n < 0 {
        return Err(Error::InvalidArgument(format!("n must be >= 0, got {}", args.common.n)));
    }
    let a = parse_a(&args.common.a)?;
    let init = match &args.init {
        None => InitialData::two_periodic(&a)?,
        Some(text) => {
            let values = text.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            let [p, q, r, s]: [Rational; 4] = values
                .try_into()
                .map_err(|_| Error::InvalidArgument("--init needs four values".into()))?;
            InitialData::new(p, q, r, s)?
        }
    };
    let center = parse_pair(&args.center)?;
    write_output(&args.common.out, &evolve_t(&init, center, args.common.n)?.to_csv())
}

/// Peak resident set size in KiB, where the platform reports it.
pub fn peak_memory_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))?
        .split_whitespace()
        .nth(1)?
        .parse()
        .ok()
}

fn bench(args: BenchArgs) -> Result<()> {
    check_n(args.common.n)?;
    let a = parse_a(&args.common.a)?;
    let modes: Vec<Mode> = match args.mode {
        Some(m) => vec![m.into()],
        None => vec![Mode::Float, Mode::Exact],
    };
    let mut out = String::new();
    for mode in modes {
        out += &match mode {
            Mode::Float => bench_mode::<f64>(&a, args.common.n, "float", |_| None)?,
            Mode::Exact => bench_mode::<Rational>(&a, args.common.n, "exact", |z: &GaussianRational| {
                Some(bit_length(&z.re).max(bit_length(&z.im)))
            })?,
        };
    }
    if let Some(kib) = peak_memory_kib() {
        out += &format!("peak memory: {kib} KiB\n");
    }
    write_output(&args.common.out, &out)
}

fn bench_mode<R>(a: &Rational, n: i64, label: &str, bits: impl Fn(&num_complex::Complex<R>) -> Option<u64>) -> Result<String>
where
    R: crate::rings::RealScalar,
    num_complex::Complex<R>: crate::rings::ComplexScalar,
{
    let mut out = format!("# mode {label}, a = {a}, n = {n}\n");
    out += "phase,layer,millis\n";
    let total = Instant::now();
    for class in ResidueClass::ALL {
        let mut last = Instant::now();
        let mut rows = Vec::new();
        fundamental_observed::<R>(a, class, n + 1, |layer| {
            rows.push((layer, last.elapsed().as_secs_f64() * 1e3));
            last = Instant::now();
        })?;
        for (layer, ms) in rows {
            out += &format!("fundamental_{}{},{layer},{ms:.3}\n", class.eps, class.eta);
        }
    }
    let mut e = Embedding::<num_complex::Complex<R>>::base(a)?;
    let mut bit_rows = Vec::new();
    while e.stage() < n {
        let start = Instant::now();
        e = e.step()?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        out += &format!("embedding,{},{ms:.3}\n", e.stage());
        let widest = e
            .vertices()
            .filter_map(|(j, k)| bits(e.t(j, k).unwrap()).max(bits(e.o(j, k).unwrap())))
            .max();
        if let Some(b) = widest {
            bit_rows.push((e.stage(), b));
        }
    }
    if !bit_rows.is_empty() {
        out += "stage,max_bits\n";
        for (stage, b) in bit_rows {
            out += &format!("{stage},{b}\n");
        }
    }
    out += &format!("total {label}: {:.3} ms\n", total.elapsed().as_secs_f64() * 1e3);
    Ok(out)
}
