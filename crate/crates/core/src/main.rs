use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use weyl_orbit::grids::{self, Family};
use weyl_orbit::io::{self as fio, FieldFile, SlicePart};
use weyl_orbit::models::{self, BumpSpec, LatticeEstimator, Preset};
use weyl_orbit::transforms::{Interpolant, TransformPlan};
use weyl_orbit::verify::{self, SuiteOptions};
use weyl_orbit::{Algebra, AlgebraName, Error};

#[derive(Parser)]
#[command(name = "weyl-orbit", version, about = "Orbit functions, grids and discrete transforms of B3 and C3")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "ORBIT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Points of F_M^s or F_M^l.
    Grid(GridArgs),
    /// Weights of Λ_M^s or Λ_M^l.
    Weights(GridArgs),
    /// Forward transform of a sampled field.
    Transform(TransformArgs),
    /// Evaluate the interpolant of a spectral field.
    Interpolate(InterpolateArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Interpolate a bump and estimate the L² error.
    Experiment(ExperimentArgs),
    /// Planar cut of a bump or of its interpolant.
    Slice(SliceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    algebra: AlgebraName,
    #[arg(long)]
    family: Family,
    #[arg(long = "M", value_parser = clap::value_parser!(i64).range(1..))]
    modulus: i64,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file (stdout if omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    /// Sampled field as JSON.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Report the largest reconstruction residual on the grid.
    #[arg(long)]
    verify_roundtrip: bool,
}

#[derive(Args)]
struct InterpolateArgs {
    /// Spectral field as JSON.
    #[arg(long, short)]
    input: PathBuf,
    /// CSV of orthonormal points (x1,x2,x3 columns, header optional).
    /// Without it the interpolant is evaluated on its own grid.
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest modulus for the transform suites.
    #[arg(long = "max-M", default_value_t = 8, value_parser = clap::value_parser!(i64).range(2..))]
    max_m: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, hide = true)]
    corrupt_eps: bool,
}

#[derive(Args)]
struct BumpArgs {
    /// f1: C3, family s, centre (11/20, 1/3, 1/8).
    #[arg(long, conflicts_with_all = ["paper_f2", "algebra", "family", "center"])]
    paper_f1: bool,
    /// f2: B3, family l, centre (1/2, 1/3, 1/8).
    #[arg(long, conflicts_with_all = ["algebra", "family", "center"])]
    paper_f2: bool,
    #[arg(long, requires = "family")]
    algebra: Option<AlgebraName>,
    #[arg(long, requires = "algebra")]
    family: Option<Family>,
    #[arg(long, default_value_t = 1.0 / 20.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0 / 9.0)]
    beta: f64,
    /// Orthonormal centre as x,y,z.
    #[arg(long, value_parser = parse_triple)]
    center: Option<[f64; 3]>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    bump: BumpArgs,
    #[arg(long = "M", value_delimiter = ',', default_values_t = models::PRESET_MODULI.to_vec())]
    moduli: Vec<i64>,
    /// Lattice points for the error integral (rounded up to a cube).
    #[arg(long, default_value = "1e7", value_parser = parse_count)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write z = 1/8 slices of the interpolants into this directory.
    #[arg(long)]
    slices: Option<PathBuf>,
    #[arg(long, default_value_t = 128)]
    resolution: usize,
    /// Include wall-clock runtimes in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SliceArgs {
    #[command(flatten)]
    bump: BumpArgs,
    /// Spectral field to cut instead of a bump.
    #[arg(long, conflicts_with_all = ["paper_f1", "paper_f2", "algebra", "family", "center", "modulus"])]
    input: Option<PathBuf>,
    /// Interpolate the bump at this modulus and cut the interpolant.
    #[arg(long = "M", value_parser = clap::value_parser!(i64).range(1..))]
    modulus: Option<i64>,
    /// Fixed orthonormal axis (1, 2 or 3).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    axis: u8,
    #[arg(long, default_value_t = 0.125)]
    value: f64,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(2..))]
    resolution: u64,
    /// Files are written as PREFIX_re.csv, PREFIX_im.csv, PREFIX_abs.csv, PREFIX_axes.csv.
    #[arg(long)]
    prefix: PathBuf,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|_| "expected three comma-separated numbers".to_string())
}

fn parse_count(s: &str) -> Result<usize, String> {
    let v: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if !(v >= 1.0 && v.fract() == 0.0 && v < 1e15) {
        return Err(format!("'{s}' is not a positive integer"));
    }
    Ok(v as usize)
}

enum Failure {
    Verification(String),
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::InvalidBump { .. } | Error::InvalidModulus(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn write_output(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_field(path: &Path) -> Result<FieldFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    Ok(FieldFile::parse(&text)?)
}

fn cmd_grid(args: &GridArgs, weights: bool) -> CmdResult {
    let Target { algebra, family, modulus } = args.target;
    let alg = Algebra::get(algebra);
    let mut buf = Vec::new();
    let count = if weights {
        let ws = grids::enumerate_weights(alg, family, modulus)?;
        match args.format {
            Format::Csv => fio::write_weights_csv(&mut buf, &ws)?,
            Format::Json => buf = fio::weights_json(algebra, family, modulus, &ws)?.into_bytes(),
        }
        ws.len()
    } else {
        let ps = grids::enumerate_grid(alg, family, modulus)?;
        match args.format {
            Format::Csv => fio::write_grid_csv(&mut buf, &ps)?,
            Format::Json => buf = fio::grid_json(algebra, family, modulus, &ps)?.into_bytes(),
        }
        ps.len()
    };
    write_output(args.output.as_deref(), &String::from_utf8_lossy(&buf))?;
    eprintln!("{count} {}", if weights { "weights" } else { "points" });
    Ok(())
}

fn cmd_transform(args: &TransformArgs) -> CmdResult {
    let field = read_field(&args.input)?.into_samples()?;
    let plan = TransformPlan::new(field.algebra, field.family, field.modulus)?;
    let spectral = plan.forward(&field)?;
    write_output(args.output.as_deref(), &FieldFile::from_spectral(&spectral).to_json()?)?;
    if args.verify_roundtrip {
        let back = plan.inverse_on_grid(&spectral)?;
        let residual = back.values.iter().zip(&field.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        eprintln!("roundtrip residual {residual:.3e}");
        if residual > 1e-9 * field.values.iter().map(|v| v.norm()).fold(1.0, f64::max) {
            return Err(Failure::Verification(format!("roundtrip residual {residual:.3e} exceeds 1e-9")));
        }
    }
    Ok(())
}

fn read_points(path: &Path) -> Result<Vec<[f64; 3]>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (n == 0 && line.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E')) {
            continue;
        }
        out.push(parse_triple(line).map_err(|e| Failure::Data(format!("{}:{}: {e}", path.display(), n + 1)))?);
    }
    Ok(out)
}

fn cmd_interpolate(args: &InterpolateArgs) -> CmdResult {
    let spectral = read_field(&args.input)?.into_spectral()?;
    let text = match &args.points {
        None => {
            let plan = TransformPlan::new(spectral.algebra, spectral.family, spectral.modulus)?;
            FieldFile::from_samples(&plan.inverse_on_grid(&spectral)?).to_json()?
        }
        Some(path) => {
            let interp = Interpolant::new(&spectral)?;
            let mut s = String::from("x1,x2,x3,re,im\n");
            for p in read_points(path)? {
                let v = interp.eval_orthonormal(&p);
                s += &format!("{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n", p[0], p[1], p[2], v.re, v.im);
            }
            s
        }
    };
    write_output(args.output.as_deref(), &text)
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let opts = SuiteOptions { max_m: args.max_m, seed: args.seed, corrupt_eps: args.corrupt_eps };
    let mut first_failure = None;
    for check in verify::run_suite(&opts) {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({} checks): {}", check.name, check.checked, check.detail);
        if !check.passed && first_failure.is_none() {
            first_failure = Some(format!("{}: {}", check.name, check.detail));
        }
    }
    match first_failure {
        Some(f) => Err(Failure::Verification(f)),
        None => Ok(()),
    }
}

/// The bump and its target from the shared flags.
fn resolve_bump(b: &BumpArgs) -> Result<(AlgebraName, Family, BumpSpec, Option<Preset>), Failure> {
    let preset = if b.paper_f1 {
        Some(models::preset_f1())
    } else if b.paper_f2 {
        Some(models::preset_f2())
    } else {
        None
    };
    if let Some(p) = preset {
        let bump = BumpSpec::new(b.alpha, b.beta, p.bump.center)?;
        return Ok((p.algebra, p.family, bump, Some(p)));
    }
    match (b.algebra, b.family, b.center) {
        (Some(a), Some(f), Some(c)) => Ok((a, f, BumpSpec::new(b.alpha, b.beta, c)?, None)),
        _ => Err(Failure::Usage("give --paper-f1, --paper-f2, or all of --algebra, --family and --center".into())),
    }
}

fn write_slice(prefix: &Path, slice: &models::Slice) -> CmdResult {
    let name = prefix.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    for (suffix, part) in [("re", Some(SlicePart::Re)), ("im", Some(SlicePart::Im)), ("abs", Some(SlicePart::Abs)), ("axes", None)] {
        let path = prefix.with_file_name(format!("{name}_{suffix}.csv"));
        let mut buf = Vec::new();
        match part {
            Some(p) => fio::write_slice_csv(&mut buf, slice, p)?,
            None => fio::write_slice_axes(&mut buf, slice)?,
        }
        fs::write(&path, buf)?;
    }
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs) -> CmdResult {
    let (algebra, family, bump, preset) = resolve_bump(&args.bump)?;
    if let Some(&m) = args.moduli.iter().find(|&&m| m < 2) {
        return Err(Failure::Usage(format!("experiment moduli must be at least 2, got {m}")));
    }
    let start = Instant::now();
    let est = LatticeEstimator::new(algebra, family, &bump, args.samples, args.seed)?;
    let setup_ms = start.elapsed().as_millis();
    if let Some(dir) = &args.slices {
        fs::create_dir_all(dir)?;
        let s = models::slice_export(algebra, 2, 0.125, args.resolution, |p| Complex64::new(bump.eval(p), 0.0))?;
        write_slice(&dir.join("model"), &s)?;
    }
    let mut reports = Vec::new();
    for &m in &args.moduli {
        let t = Instant::now();
        let mut res = models::run_with_estimator(&est, m, &bump)?;
        res.report.reference = preset.and_then(|p| p.reference.iter().find(|(pm, _)| *pm == m).map(|(_, v)| *v));
        if args.timing {
            res.report.runtime_ms = Some(t.elapsed().as_millis() + setup_ms);
        }
        eprintln!(
            "{algebra} {family} M={m}: error {:.6e}{}",
            res.report.error_l2,
            res.report.reference.map(|r| format!(" (reference {r:.6e}, ratio {:.4})", res.report.error_l2 / r)).unwrap_or_default()
        );
        if let Some(dir) = &args.slices {
            let interp = Interpolant::new(&res.spectral)?;
            let s = models::slice_export(algebra, 2, 0.125, args.resolution, |p| interp.eval_orthonormal(p))?;
            write_slice(&dir.join(format!("interpolant_M{m}")), &s)?;
        }
        reports.push(res.report);
    }
    let text = serde_json::to_string_pretty(&reports).map_err(Error::from)? + "\n";
    write_output(args.output.as_deref(), &text)
}

fn cmd_slice(args: &SliceArgs) -> CmdResult {
    let axis = args.axis as usize - 1;
    let res = args.resolution as usize;
    let slice = if let Some(input) = &args.input {
        let spectral = read_field(input)?.into_spectral()?;
        let interp = Interpolant::new(&spectral)?;
        models::slice_export(spectral.algebra, axis, args.value, res, |p| interp.eval_orthonormal(p))?
    } else {
        let (algebra, family, bump, _) = resolve_bump(&args.bump)?;
        match args.modulus {
            Some(m) => {
                let plan = TransformPlan::new(algebra, family, m)?;
                let (_, spectral) = models::interpolate_bump(&plan, &bump)?;
                let interp = Interpolant::new(&spectral)?;
                models::slice_export(algebra, axis, args.value, res, |p| interp.eval_orthonormal(p))?
            }
            None => models::slice_export(algebra, axis, args.value, res, |p| Complex64::new(bump.eval(p), 0.0))?,
        }
    };
    write_slice(&args.prefix, &slice)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Grid(a) => cmd_grid(a, false),
        Command::Weights(a) => cmd_grid(a, true),
        Command::Transform(a) => cmd_transform(a),
        Command::Interpolate(a) => cmd_interpolate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Slice(a) => cmd_slice(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
