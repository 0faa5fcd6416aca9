//! `mubgeo` — generate MUB/geometry artifacts, run verification suites, and
//! inspect the Mean King tracking protocol.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure,
//! 2 usage error (bad arguments, invalid dimension, unparseable coordinates).

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mubgeo::dapg::{build_incidence, incident, LineCoord, PointCoord};
use mubgeo::entangled::{line_basis_json, overlap_point_line, overlap_table_csv};
use mubgeo::line_ops::line_operators_json;
use mubgeo::mean_king::{enumerate_protocol, simulate};
use mubgeo::mub::{mub_table_json, BasisLabel};
use mubgeo::prime_field::PrimeDim;
use mubgeo::verify::{run_geometry_corrupted, run_suite, Suite};

const DEFAULT_MAX_D: u64 = 101;

#[derive(Parser)]
#[command(name = "mubgeo", version, about = "Mutually unbiased bases, their dual affine plane geometry, the maximally entangled line-state basis, and the Mean King tracking protocol", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Absolute per-entry tolerance for floating-point verdicts.
    #[arg(long, global = true, default_value_t = mubgeo::TOL)]
    tolerance: f64,
    /// Cap on the dimension d (overrides the MUBGEO_MAX_D environment
    /// variable; default 101).
    #[arg(long, global = true)]
    max_d: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated table (MUB states, incidence geometry, entangled
    /// basis, or line operators) to stdout or a file.
    Gen(GenArgs),
    /// Run a verification suite; exits 0 iff every check passes.
    Verify(VerifyArgs),
    /// Print the two-particle overlap of a point state with a line state.
    Overlap(OverlapArgs),
    /// Enumerate or simulate the Mean King tracking protocol.
    Mkp(MkpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    /// The d+1 bases of d states each.
    Mub,
    /// The point/line incidence structure.
    Geometry,
    /// The d^2 orthonormal entangled line states.
    Basis,
    /// The d^2 unitary, Hermitian line operators.
    Lineops,
    /// The point-state/line-state overlap table (CSV-friendly).
    Overlaps,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Prime dimension, d >= 3.
    #[arg(long)]
    d: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Prime dimension, d >= 3.
    #[arg(long)]
    d: u64,
    /// One of: mub, geometry, lineops, entangled, collective, mkp, all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Output path for the JSON report; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    /// Flip one incidence bit before checking the geometry axioms; the
    /// suite must then fail with a counterexample (self-test of the
    /// failure path). Only meaningful with --suite geometry.
    #[arg(long, hide = true)]
    corrupt_geometry: bool,
}

#[derive(Args)]
struct OverlapArgs {
    /// Prime dimension, d >= 3.
    #[arg(long)]
    d: u64,
    /// Point coordinates "m,b" with b in {CB, 0..d-1}.
    #[arg(long)]
    point: String,
    /// Line coordinates "mcb,m0".
    #[arg(long)]
    line: String,
}

#[derive(Args)]
struct MkpArgs {
    #[command(subcommand)]
    mode: MkpMode,
}

#[derive(Subcommand)]
enum MkpMode {
    /// Exact joint-probability table over every King basis, outcome, and
    /// Alice outcome.
    Enumerate {
        /// Prime dimension, d >= 3.
        #[arg(long)]
        d: u64,
        /// Prepared line "mcb,m0".
        #[arg(long)]
        j: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Seeded Monte-Carlo simulation with a fixed King basis.
    Run {
        /// Prime dimension, d >= 3.
        #[arg(long)]
        d: u64,
        /// Prepared line "mcb,m0".
        #[arg(long)]
        j: String,
        /// King basis: "CB" or a Fourier label 0..d-1.
        #[arg(long)]
        king_basis: String,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let max = cli
        .max_d
        .or_else(|| {
            std::env::var("MUBGEO_MAX_D")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_MAX_D);
    match cli.command {
        Command::Gen(args) => {
            let dim = parse_dim(args.d, max)?;
            let text = match (args.kind, args.format) {
                (GenKind::Mub, Format::Json) => pretty(mub_table_json(dim)),
                (GenKind::Geometry, Format::Json) => pretty(build_incidence(dim).to_json()),
                (GenKind::Geometry, Format::Csv) => build_incidence(dim).to_csv(),
                (GenKind::Basis, Format::Json) => pretty(line_basis_json(dim)),
                (GenKind::Lineops, Format::Json) => pretty(line_operators_json(dim)),
                (GenKind::Overlaps, Format::Csv) => overlap_table_csv(dim),
                (GenKind::Overlaps, Format::Json) => {
                    return Err("overlap tables are CSV only; pass --format csv".into())
                }
                _ => return Err("CSV is offered only for geometry and overlaps".into()),
            };
            emit(&text, args.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let dim = parse_dim(args.d, max)?;
            let suite = Suite::parse(&args.suite)
                .ok_or_else(|| format!("unknown suite '{}'", args.suite))?;
            let report = if args.corrupt_geometry {
                if suite != Suite::Geometry {
                    return Err("--corrupt-geometry requires --suite geometry".into());
                }
                run_geometry_corrupted(dim)
            } else {
                run_suite(dim, suite)
            };
            let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            emit(&text, args.out.as_deref())?;
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Overlap(args) => {
            let dim = parse_dim(args.d, max)?;
            let point = parse_point(&args.point, dim)?;
            let line = parse_line(&args.line, dim)?;
            let amp = overlap_point_line(point, line);
            let on_line = incident(point, line);
            // cross-check the geometric verdict against the amplitude
            let magnitude = amp.norm();
            let expected = if on_line {
                1.0 / (dim.d() as f64).sqrt()
            } else {
                0.0
            };
            let consistent = (magnitude - expected).abs() <= cli.tolerance;
            let text = pretty(serde_json::json!({
                "d": dim.d(),
                "point": args.point,
                "line": args.line,
                "amplitude": { "re": amp.re, "im": amp.im },
                "magnitude": magnitude,
                "on_line": on_line,
                "consistent": consistent,
            }));
            emit(&text, None)?;
            Ok(if consistent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Mkp(args) => match args.mode {
            MkpMode::Enumerate { d, j, out } => {
                let dim = parse_dim(d, max)?;
                let j = parse_line(&j, dim)?;
                let table = enumerate_protocol(dim, j);
                emit(&pretty(table.to_json()), out.as_deref())?;
                Ok(ExitCode::SUCCESS)
            }
            MkpMode::Run {
                d,
                j,
                king_basis,
                trials,
                seed,
                out,
            } => {
                let dim = parse_dim(d, max)?;
                let j = parse_line(&j, dim)?;
                let b = parse_basis(&king_basis, dim)?;
                if trials == 0 {
                    return Err("--trials must be at least 1".into());
                }
                let stats = simulate(dim, j, b, trials, seed);
                let text = pretty(serde_json::json!({
                    "d": dim.d(),
                    "j": [j.m_cb.value(), j.m0.value()],
                    "king_basis": b.label(),
                    "seed": seed,
                    "stats": serde_json::to_value(&stats).map_err(|e| e.to_string())?,
                }));
                emit(&text, out.as_deref())?;
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn parse_dim(d: u64, max: u64) -> Result<PrimeDim, String> {
    PrimeDim::with_max(d, max).map_err(|e| e.to_string())
}

fn parse_basis(s: &str, dim: PrimeDim) -> Result<BasisLabel, String> {
    if s.eq_ignore_ascii_case("cb") {
        return Ok(BasisLabel::Cb);
    }
    let b: u64 = s
        .parse()
        .map_err(|_| format!("basis label '{s}' is neither CB nor an integer"))?;
    if b >= dim.d() {
        return Err(format!("basis label {b} out of range for d = {}", dim.d()));
    }
    Ok(BasisLabel::Fourier(dim.elem(b as i64)))
}

fn parse_field(s: &str, dim: PrimeDim, what: &str) -> Result<i64, String> {
    let v: u64 = s
        .parse()
        .map_err(|_| format!("{what} '{s}' is not an integer"))?;
    if v >= dim.d() {
        return Err(format!("{what} {v} out of range for d = {}", dim.d()));
    }
    Ok(v as i64)
}

fn parse_point(s: &str, dim: PrimeDim) -> Result<PointCoord, String> {
    let (m, b) = s
        .split_once(',')
        .ok_or_else(|| format!("point '{s}' is not of the form m,b"))?;
    let m = parse_field(m.trim(), dim, "point coordinate m")?;
    let basis = parse_basis(b.trim(), dim)?;
    Ok(PointCoord::new(dim.elem(m), basis))
}

fn parse_line(s: &str, dim: PrimeDim) -> Result<LineCoord, String> {
    let (m_cb, m0) = s
        .split_once(',')
        .ok_or_else(|| format!("line '{s}' is not of the form mcb,m0"))?;
    let m_cb = parse_field(m_cb.trim(), dim, "line coordinate mcb")?;
    let m0 = parse_field(m0.trim(), dim, "line coordinate m0")?;
    Ok(LineCoord::new(dim.elem(m_cb), dim.elem(m0)))
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).unwrap()
}

fn emit(text: &str, out: Option<&str>) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}"))?;
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{text}") {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    // downstream closed the pipe (e.g. `| head`); not an error
                    std::process::exit(0);
                }
                return Err(e.to_string());
            }
        }
    }
    Ok(())
}
