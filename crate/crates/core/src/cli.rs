//! The `zzcoh` command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or input error,
//! 3 oracle size guard exceeded.

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::diagram::{compare_diagrams, PersistenceDiagram};
use crate::engine::{compute_diagram_with, EngineError, EngineOptions};
use crate::field::Field;
use crate::filtration::random::{random_filtration, RandomParams};
use crate::filtration::{
    build_oscillating_rips, parse_ops, parse_points, write_points, FiltrationError, PointCloud,
    ZigzagFiltration,
};
use crate::oracle::{oracle_diagram, OracleError, OracleLimits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "zzcoh", version, about = "Zigzag persistent cohomology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the persistence diagram of a zigzag filtration.
    Zz(ZzArgs),
    /// Compare the engine against the brute-force oracle.
    Verify(VerifyArgs),
    /// Time oscillating Rips zigzags on point files, one TSV row each.
    Bench(BenchArgs),
    /// Sample a point cloud.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct ZzArgs {
    /// Point cloud file; builds an oscillating Rips zigzag.
    #[arg(long, conflicts_with = "ops", requires_all = ["eta", "rho"])]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub maxdim: usize,
    /// Filtration in the ops format.
    #[arg(long, required_unless_present = "points")]
    pub ops: Option<PathBuf>,
    /// Prime modulus of the coefficient field.
    #[arg(long, default_value_t = 2)]
    pub field: u64,
    /// Diagram destination. Without it the diagram goes to standard output
    /// and the report to standard error.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub ops: Option<PathBuf>,
    /// Number of random filtrations to check.
    #[arg(long, requires = "seed")]
    pub random: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub field: u64,
    #[arg(long, default_value_t = 6)]
    pub vertices: u32,
    #[arg(long, default_value_t = 60)]
    pub max_arrows: usize,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Point cloud files.
    pub datasets: Vec<PathBuf>,
    #[arg(long, default_value_t = 2.7)]
    pub eta: f64,
    #[arg(long, default_value_t = 2.75)]
    pub rho: f64,
    #[arg(long, default_value_t = 2)]
    pub maxdim: usize,
    #[arg(long, default_value_t = 2)]
    pub field: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Circle,
    Sphere2,
    Sphere3,
    Torus,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub shape: Shape,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Radial noise amplitude: points lie at distance `1 ± noise` from the
    /// origin (before the torus scaling).
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::usage(e)
    }
}

impl From<FiltrationError> for CliError {
    fn from(e: FiltrationError) -> Self {
        CliError::usage(e)
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::usage(e)
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::SizeGuard(_) => EXIT_GUARD,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn field_arg(p: u64) -> Result<Field, CliError> {
    Field::new(p).map_err(CliError::usage)
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Peak resident set size of this process in KiB, where the OS reports it.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))?
        .split_whitespace()
        .next()?
        .parse()
        .ok()
}

/// Summary of one `zz` run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub arrows: usize,
    pub max_complex_size: usize,
    pub peak_rows: usize,
    pub field: u32,
    pub intervals: usize,
    pub build_secs: f64,
    pub engine_secs: f64,
    /// Peak memory in bytes, from the OS or the engine's own accounting.
    pub memory_bytes: u64,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arrows {}", self.arrows)?;
        writeln!(f, "max_complex_size {}", self.max_complex_size)?;
        writeln!(f, "peak_rows {}", self.peak_rows)?;
        writeln!(f, "field {}", self.field)?;
        writeln!(f, "intervals {}", self.intervals)?;
        writeln!(f, "build_seconds {:.3}", self.build_secs)?;
        writeln!(f, "engine_seconds {:.3}", self.engine_secs)?;
        writeln!(f, "memory_mb {:.1}", self.memory_bytes as f64 / (1 << 20) as f64)
    }
}

/// Runs the engine on `fil`, timing it.
pub fn run_engine(
    fil: &ZigzagFiltration,
    field: Field,
    build_secs: f64,
) -> Result<(PersistenceDiagram, RunReport), EngineError> {
    let start = Instant::now();
    let (diagram, stats) = compute_diagram_with(fil, field, EngineOptions::from_env())?;
    let engine_secs = start.elapsed().as_secs_f64();
    let engine_bytes = (stats.peak_nonzeros * 12 + stats.peak_rows * 64) as u64;
    let report = RunReport {
        arrows: stats.arrows,
        max_complex_size: stats.max_complex_size,
        peak_rows: stats.peak_rows,
        field: field.modulus(),
        intervals: diagram.len(),
        build_secs,
        engine_secs,
        memory_bytes: peak_rss_kib().map_or(engine_bytes, |k| k * 1024),
    };
    Ok((diagram, report))
}

fn load_points(path: &Path) -> Result<PointCloud, CliError> {
    Ok(parse_points(open(path)?)?)
}

pub fn cmd_zz(args: &ZzArgs) -> Result<(), CliError> {
    let field = field_arg(args.field)?;
    let start = Instant::now();
    let fil = match (&args.points, &args.ops) {
        (Some(p), _) => {
            let (eta, rho) = (args.eta.expect("required"), args.rho.expect("required"));
            build_oscillating_rips(&load_points(p)?, eta, rho, args.maxdim)?
        }
        (None, Some(o)) => parse_ops(open(o)?)?,
        (None, None) => return Err(CliError::usage("either --points or --ops is required")),
    };
    let build_secs = start.elapsed().as_secs_f64();
    info!("filtration with {} arrows built in {build_secs:.3}s", fil.len());
    let (diagram, report) = run_engine(&fil, field, build_secs)?;
    match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            diagram.write_to(&mut w)?;
            w.flush()?;
            print!("{report}");
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            diagram.write_to(&mut w)?;
            w.flush()?;
            eprint!("{report}");
        }
    }
    Ok(())
}

/// Outcome of checking one filtration against the oracle.
fn verify_one(fil: &ZigzagFiltration, field: Field) -> Result<Option<String>, CliError> {
    let expected = oracle_diagram(fil, field, OracleLimits::default())?;
    let (got, _) = compute_diagram_with(fil, field, EngineOptions::from_env())?;
    let cmp = compare_diagrams(&expected, &got);
    Ok((!cmp.is_equal()).then(|| cmp.to_string()))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let field = field_arg(args.field)?;
    if let Some(path) = &args.ops {
        let fil = parse_ops(open(path)?)?;
        return match verify_one(&fil, field)? {
            None => {
                println!("ok {} arrows", fil.len());
                Ok(())
            }
            Some(diff) => Err(CliError {
                code: EXIT_MISMATCH,
                message: format!("engine and oracle differ (missing = oracle only, extra = engine only):\n{diff}"),
            }),
        };
    }
    let n = args.random.expect("clap enforces --ops or --random");
    let seed = args.seed.expect("clap enforces --seed");
    let params = RandomParams {
        vertices: args.vertices,
        max_arrows: args.max_arrows,
        max_dim: args.max_dim,
        ..RandomParams::default()
    };
    let results: Vec<(u64, Result<Option<String>, CliError>)> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let fil = random_filtration(&mut ChaCha8Rng::seed_from_u64(s), params);
            (s, verify_one(&fil, field))
        })
        .collect();
    let mut mismatches = 0;
    for (s, r) in results {
        match r {
            Ok(None) => {}
            Ok(Some(diff)) => {
                mismatches += 1;
                eprintln!("seed {s}: mismatch\n{diff}");
            }
            Err(e) => return Err(CliError { code: e.code, message: format!("seed {s}: {e}") }),
        }
    }
    if mismatches > 0 {
        return Err(CliError {
            code: EXIT_MISMATCH,
            message: format!("{mismatches} of {n} filtrations differ"),
        });
    }
    println!("ok {n} filtrations");
    Ok(())
}

pub const BENCH_HEADER: &str = "Data\t#P\td\tη\tρ\t#arrows\t#K_max\tT\tM";

/// One benchmark row in the table layout of [`BENCH_HEADER`]. `T` is in
/// seconds (filtration build plus engine), `M` in MB.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: String,
    pub points: usize,
    pub dim: usize,
    pub eta: f64,
    pub rho: f64,
    pub report: RunReport,
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.report;
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.2}\t{:.1}",
            self.name,
            self.points,
            self.dim,
            self.eta,
            self.rho,
            r.arrows,
            r.max_complex_size,
            r.build_secs + r.engine_secs,
            r.memory_bytes as f64 / (1 << 20) as f64
        )
    }
}

pub fn bench_points(
    name: &str,
    pc: &PointCloud,
    eta: f64,
    rho: f64,
    maxdim: usize,
    field: Field,
) -> Result<BenchRow, CliError> {
    let start = Instant::now();
    let fil = build_oscillating_rips(pc, eta, rho, maxdim)?;
    let (_, report) = run_engine(&fil, field, start.elapsed().as_secs_f64())?;
    Ok(BenchRow {
        name: name.to_string(),
        points: pc.len(),
        dim: pc.dim(),
        eta,
        rho,
        report,
    })
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let field = field_arg(args.field)?;
    println!("{BENCH_HEADER}");
    // Sequential on purpose: the M column reads the process-wide peak.
    let mut failed = 0;
    for path in &args.datasets {
        let name = path
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        let row = load_points(path)
            .and_then(|pc| bench_points(&name, &pc, args.eta, args.rho, args.maxdim, field));
        match row {
            Ok(row) => println!("{row}"),
            Err(e) => {
                failed += 1;
                error!("{name}: {e}");
                eprintln!("{name}: {e}");
            }
        }
    }
    if failed > 0 {
        return Err(CliError::usage(format!("{failed} dataset(s) failed")));
    }
    Ok(())
}

/// Deterministic sample of `n` points for the given seed.
pub fn generate(shape: Shape, n: usize, seed: u64, noise: f64) -> Result<PointCloud, CliError> {
    if !(noise.is_finite() && (0.0..1.0).contains(&noise)) {
        return Err(CliError::usage("noise must be in [0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |d: usize, rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    };
    let points = (0..n)
        .map(|_| {
            let p = match shape {
                Shape::Circle => {
                    let a = rng.random_range(0.0..std::f64::consts::TAU);
                    vec![a.cos(), a.sin()]
                }
                Shape::Sphere2 => unit(3, &mut rng),
                Shape::Sphere3 => unit(4, &mut rng),
                Shape::Torus => {
                    let a = rng.random_range(0.0..std::f64::consts::TAU);
                    let b = rng.random_range(0.0..std::f64::consts::TAU);
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    vec![s * a.cos(), s * a.sin(), s * b.cos(), s * b.sin()]
                }
            };
            let r = if noise > 0.0 {
                1.0 + rng.random_range(-noise..=noise)
            } else {
                1.0
            };
            p.into_iter().map(|x| x * r).collect()
        })
        .collect();
    Ok(PointCloud::new(points)?)
}

pub fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let pc = generate(args.shape, args.n, args.seed, args.noise)?;
    match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_points(&pc, &mut w)?;
            w.flush()?;
        }
        None => write_points(&pc, io::stdout().lock())?,
    }
    Ok(())
}

/// Parses `args` and runs the subcommand, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Zz(a) => cmd_zz(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_shapes_have_expected_geometry() {
        let pc = generate(Shape::Circle, 30, 1, 0.05).unwrap();
        assert_eq!((pc.len(), pc.dim()), (30, 2));
        for i in 0..pc.len() {
            let r = pc.point(i).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 1.0).abs() <= 0.05 + 1e-12);
        }
        let pc = generate(Shape::Sphere3, 100, 7, 0.0).unwrap();
        assert_eq!(pc.dim(), 4);
        for i in 0..pc.len() {
            let r = pc.point(i).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
        assert_eq!(generate(Shape::Torus, 10, 3, 0.0).unwrap().dim(), 4);
        assert_eq!(generate(Shape::Sphere2, 10, 3, 0.1).unwrap(), generate(Shape::Sphere2, 10, 3, 0.1).unwrap());
        assert!(generate(Shape::Circle, 3, 0, 2.0).is_err());
    }

    #[test]
    fn report_lines_are_key_value() {
        let r = RunReport {
            arrows: 7,
            max_complex_size: 7,
            peak_rows: 7,
            field: 2,
            intervals: 4,
            build_secs: 0.0,
            engine_secs: 0.0,
            memory_bytes: 1 << 20,
        };
        for line in r.to_string().lines() {
            assert_eq!(line.split(' ').count(), 2, "{line}");
        }
        assert!(r.to_string().contains("memory_mb 1.0"));
    }

    #[test]
    fn bench_header_has_table_columns() {
        let cols: Vec<&str> = BENCH_HEADER.split('\t').collect();
        assert_eq!(cols, ["Data", "#P", "d", "η", "ρ", "#arrows", "#K_max", "T", "M"]);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["zzcoh", "zz"]), EXIT_USAGE);
        assert_eq!(run(["zzcoh", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["zzcoh", "--help"]), EXIT_OK);
    }
}
