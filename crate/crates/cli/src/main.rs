//! Command-line pipeline: generate datasets, build distance matrices, sweep
//! dispersion scores, and evaluate single reports.
//!
//! Exit codes: 0 success, 2 usage error, 3 data/format error, 4 degenerate
//! curve without an elbow, 5 numerically degenerate matrix.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dispersal::clustering::APConfig;
use dispersal::dispersion::{self, Method};
use dispersal::error::Error;
use dispersal::synth::{self, MorphSpec, ToySpec};
use dispersal::{io as dio, pairwise_matrix};

const FORMAT_VERSION: &str = "dispersal/1";
const THREADS_ENV: &str = "DISPERSAL_THREADS";

#[derive(Parser)]
#[command(name = "dispersal", version, about = "Dispersion-score pipeline")]
struct Cli {
    /// Worker thread cap (default: DISPERSAL_THREADS, then all cores).
    /// Results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset plus a JSON manifest
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compute a pairwise distance matrix from dataset files
    Distmat(DistmatArgs),
    /// Sweep the dispersion score over cluster counts and detect the elbow
    Sweep(SweepArgs),
    /// Evaluate a single dispersion report at a fixed or auto-selected k
    Ds(DsArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// 2-D Gaussian cluster dataset (CSV of x, y, true_label)
    Toy2d(GenToyArgs),
    /// Sphere-to-cube morph point clouds (text clouds plus index file)
    Morph(GenMorphArgs),
}

#[derive(Args)]
struct GenToyArgs {
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 8)]
    clusters: usize,
    #[arg(long, default_value_t = 1.0)]
    std: f64,
    #[arg(long, default_value_t = 20.0)]
    box_half_width: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct GenMorphArgs {
    #[arg(long, default_value_t = 1000)]
    shapes: usize,
    #[arg(long, default_value_t = 2500)]
    points: usize,
    #[arg(long, default_value_t = 1.0)]
    sphere_radius: f64,
    #[arg(long, default_value_t = 1.0)]
    cube_half_edge: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rotate each shape into a sampled viewpoint with azimuth in
    /// [-alpha, alpha] degrees (viewer-centered output). Typical grid:
    /// 0, 15, 30, 45, 60, 75, 90.
    #[arg(long)]
    alpha: Option<f64>,
    /// Seed for viewpoint sampling (defaults to --seed)
    #[arg(long)]
    view_seed: Option<u64>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct DistmatArgs {
    /// CSV of row vectors (sqeuclidean) or a cloud-set index file or
    /// directory (chamfer)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    distance: DistanceKind,
    #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
    format: MatrixFormat,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Cluster counts as start:stop:step (inclusive when aligned)
    #[arg(long, default_value = "2:100:2")]
    ks: String,
    #[arg(long, value_enum, default_value_t = MethodKind::Kmedoids)]
    method: MethodKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving curve.csv, curve.json, elbow.json
    #[arg(long)]
    output: PathBuf,
    /// Also print the curve JSON to standard output
    #[arg(long)]
    stdout: bool,
}

#[derive(Args)]
struct DsArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Fixed cluster count (ignored for --method ap)
    #[arg(long, conflicts_with = "auto")]
    k: Option<usize>,
    /// Pick k at the elbow of a sweep over --ks
    #[arg(long)]
    auto: bool,
    #[arg(long, default_value = "2:100:2")]
    ks: String,
    #[arg(long, value_enum, default_value_t = MethodKind::Kmedoids)]
    method: MethodKind,
    /// Affinity-propagation preference percentile
    #[arg(long, default_value_t = 4.0)]
    q: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
    /// Also print the report JSON to standard output
    #[arg(long)]
    stdout: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceKind {
    Sqeuclidean,
    Chamfer,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Binary,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodKind {
    Kmedoids,
    Hierarchical,
    Ap,
}

impl MethodKind {
    fn to_method(self, q: f64) -> Method {
        match self {
            MethodKind::Kmedoids => Method::KMedoids,
            MethodKind::Hierarchical => Method::Hierarchical,
            MethodKind::Ap => Method::AffinityPropagation(APConfig::with_q(q)),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let run = || match cli.command {
        Command::Gen(GenCommand::Toy2d(args)) => gen_toy2d(args),
        Command::Gen(GenCommand::Morph(args)) => gen_morph(args),
        Command::Distmat(args) => distmat(args),
        Command::Sweep(args) => sweep(args),
        Command::Ds(args) => ds(args),
    };
    let result = match threads {
        Some(n) if n > 0 => {
            match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(run),
                Err(e) => {
                    eprintln!("dispersal: cannot build thread pool: {e}");
                    return ExitCode::from(2);
                }
            }
        }
        _ => run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dispersal: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidK { .. } | Error::InvalidSpec(_) | Error::GuardExceeded { .. } => 2,
        Error::NoElbow => 4,
        Error::DegenerateMatrix => 5,
        _ => 3,
    }
}

#[derive(Serialize)]
struct ToyManifest<'a> {
    format: &'a str,
    kind: &'a str,
    spec: ToySpec,
    points_file: &'a str,
}

fn gen_toy2d(args: GenToyArgs) -> Result<(), Error> {
    let spec = ToySpec {
        n_points: args.points,
        n_clusters: args.clusters,
        cluster_std: args.std,
        box_half_width: args.box_half_width,
        seed: args.seed,
    };
    let dataset = synth::gen_toy2d(&spec)?;
    std::fs::create_dir_all(&args.output).map_err(io_err(&args.output))?;
    dio::write_toy_csv(
        &args.output.join("points.csv"),
        dataset.points(),
        dataset.true_labels(),
    )?;
    let manifest = ToyManifest {
        format: FORMAT_VERSION,
        kind: "toy2d",
        spec,
        points_file: "points.csv",
    };
    write_json(&args.output.join("manifest.json"), &manifest)?;
    eprintln!(
        "wrote {} points to {}",
        dataset.len(),
        args.output.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct MorphManifest<'a> {
    format: &'a str,
    kind: &'a str,
    spec: MorphSpec,
    alpha_deg: Option<f64>,
    view_seed: Option<u64>,
    index_file: &'a str,
    ts: Vec<f64>,
    clouds: Vec<String>,
}

fn gen_morph(args: GenMorphArgs) -> Result<(), Error> {
    let spec = MorphSpec {
        n_shapes: args.shapes,
        points_per_shape: args.points,
        sphere_radius: args.sphere_radius,
        cube_half_edge: args.cube_half_edge,
        seed: args.seed,
    };
    let mut shapes = synth::gen_morph_dataset(&spec)?;
    let view_seed = args.view_seed.unwrap_or(args.seed);
    if let Some(alpha) = args.alpha {
        shapes = synth::to_viewer_centered(&shapes, alpha, view_seed)?;
    }
    let clouds = dio::write_cloud_set(&args.output, &shapes)?;
    let ts: Vec<f64> = (0..spec.n_shapes)
        .map(|i| {
            if spec.n_shapes == 1 {
                0.0
            } else {
                i as f64 / (spec.n_shapes - 1) as f64
            }
        })
        .collect();
    let manifest = MorphManifest {
        format: FORMAT_VERSION,
        kind: "morph",
        spec,
        alpha_deg: args.alpha,
        view_seed: args.alpha.map(|_| view_seed),
        index_file: dio::INDEX_FILE,
        ts,
        clouds,
    };
    write_json(&args.output.join("manifest.json"), &manifest)?;
    eprintln!(
        "wrote {} clouds to {}",
        spec.n_shapes,
        args.output.display()
    );
    Ok(())
}

fn distmat(args: DistmatArgs) -> Result<(), Error> {
    let start = Instant::now();
    let matrix = match args.distance {
        DistanceKind::Sqeuclidean => {
            let vectors = dio::read_vectors_csv(&args.input)?;
            pairwise_matrix(&vectors, |a, b| dispersal::squared_euclidean(a, b))?
        }
        DistanceKind::Chamfer => {
            let clouds = dio::read_cloud_set(&args.input)?;
            pairwise_matrix(&clouds, |a, b| Ok(dispersal::chamfer_distance(a, b)))?
        }
    };
    match args.format {
        MatrixFormat::Csv => dio::write_matrix_csv(&args.output, &matrix)?,
        MatrixFormat::Binary => dio::write_matrix_binary(&args.output, &matrix)?,
    }
    eprintln!(
        "n={} elapsed={:.3}s",
        matrix.n(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Error> {
    let matrix = dio::read_matrix(&args.matrix)?;
    let ks = parse_ks(&args.ks)?;
    let curve = dispersion::sweep(&matrix, &ks, args.method.to_method(4.0), args.seed)?;
    let elbow = dispersion::kneedle_elbow(&curve)?;
    std::fs::create_dir_all(&args.output).map_err(io_err(&args.output))?;
    dio::write_curve_csv(&args.output.join("curve.csv"), &curve.ks, &curve.scores)?;
    write_json(&args.output.join("curve.json"), &curve)?;
    write_json(&args.output.join("elbow.json"), &elbow)?;
    if args.stdout {
        println!("{}", serde_json::to_string_pretty(&curve).unwrap());
    }
    eprintln!("elbow_k={} over {} sweep points", elbow.elbow_k, curve.len());
    Ok(())
}

#[derive(Serialize)]
struct DsReport {
    method: dispersal::ClusteringMethod,
    k: usize,
    n_items: usize,
    inertia: f64,
    score: f64,
    seed: u64,
}

fn ds(args: DsArgs) -> Result<(), Error> {
    let matrix = dio::read_matrix(&args.matrix)?;
    let method = args.method.to_method(args.q);
    let report = if args.auto {
        let ks = parse_ks(&args.ks)?;
        let (_, report) = dispersion::auto_ds(&matrix, &ks, method, args.seed)?;
        report
    } else {
        match (args.k, &method) {
            (_, Method::AffinityPropagation(_)) => {
                dispersion::dispersion_score(&matrix, 1, method, args.seed)?
            }
            (Some(k), _) => dispersion::dispersion_score(&matrix, k, method, args.seed)?,
            (None, _) => {
                return Err(Error::InvalidSpec(
                    "pass --k, --auto, or --method ap".into(),
                ))
            }
        }
    };
    let out = DsReport {
        method: report.method,
        k: report.k,
        n_items: report.n_items,
        inertia: report.inertia,
        score: report.score,
        seed: args.seed,
    };
    write_json(&args.output, &out)?;
    if args.stdout {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    }
    eprintln!("k={} score={}", out.k, out.score);
    Ok(())
}

/// Parses "start:stop:step" into the swept cluster counts.
fn parse_ks(text: &str) -> Result<Vec<usize>, Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidSpec(format!("bad --ks {text:?}, expected start:stop:step"));
    let (start, stop, step) = match parts.as_slice() {
        [a, b, c] => (
            a.parse::<usize>().map_err(|_| bad())?,
            b.parse::<usize>().map_err(|_| bad())?,
            c.parse::<usize>().map_err(|_| bad())?,
        ),
        _ => return Err(bad()),
    };
    if start == 0 || step == 0 || stop < start {
        return Err(bad());
    }
    Ok((start..=stop).step_by(step).collect())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let body = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidSpec(format!("serialization failed: {e}")))?;
    std::fs::write(path, body + "\n").map_err(io_err(path))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_morph_defaults_match_protocol() {
        let cli = Cli::try_parse_from([
            "dispersal", "gen", "morph", "--output", "/tmp/x",
        ])
        .unwrap();
        match cli.command {
            Command::Gen(GenCommand::Morph(args)) => {
                assert_eq!(args.shapes, 1000);
                assert_eq!(args.points, 2500);
                assert_eq!(args.sphere_radius, 1.0);
                assert_eq!(args.cube_half_edge, 1.0);
            }
            _ => panic!("wrong command"),
        }
    }

    #[test]
    fn ks_parsing() {
        assert_eq!(parse_ks("2:10:2").unwrap(), vec![2, 4, 6, 8, 10]);
        assert_eq!(parse_ks("2:9:2").unwrap(), vec![2, 4, 6, 8]);
        assert_eq!(parse_ks("5:5:1").unwrap(), vec![5]);
        assert!(parse_ks("0:4:1").is_err());
        assert!(parse_ks("2:4:0").is_err());
        assert!(parse_ks("4:2:1").is_err());
        assert!(parse_ks("2-4-1").is_err());
        assert!(parse_ks("a:b:c").is_err());
    }

    #[test]
    fn exit_codes_cover_error_classes() {
        assert_eq!(exit_code(&Error::InvalidK { k: 9, n: 4 }), 2);
        assert_eq!(exit_code(&Error::InvalidSpec("x".into())), 2);
        assert_eq!(exit_code(&Error::NoElbow), 4);
        assert_eq!(exit_code(&Error::DegenerateMatrix), 5);
        assert_eq!(exit_code(&Error::NonFinite), 3);
        assert_eq!(
            exit_code(&Error::Format {
                path: "x".into(),
                msg: "bad".into()
            }),
            3
        );
    }
}
