//! `fbmrec`: simulate fractional Brownian motion, extract record sets, and run the
//! box-counting and scaling-law experiments from the command line.

mod manifest;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fbm_records::experiments::{self, ExperimentConfig, ExperimentKind, ExperimentReport};
use fbm_records::{extract_records, generate, FbmPath, GeneratorId, HurstParameter, RecordSet};
use serde_json::json;

use crate::manifest::{Job, RunManifest, MANIFEST_FILE};
use crate::output::{num, CliError, Format, OutputDir};

#[derive(Parser, Debug)]
#[command(name = "fbmrec", version, about = "Record sets of fractional Brownian motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one path and write t, X_t, the running maximum and the record indicator.
    Generate(GenerateArgs),
    /// Box-counting curve and dimension of the record set at one Hurst value.
    Dim(DimArgs),
    /// Record-set dimension over a grid of Hurst values.
    Sweep(SweepArgs),
    /// P(argmax of X on [0,1] lies in [0, ε]) over a grid of ε.
    Argmax(ScaleArgs),
    /// P(sup of X on [0,1] ≤ u) over a list of levels u.
    Survival(ThresholdArgs),
    /// P(the record set meets [a, a+ε]) over a grid of ε.
    Recprob(RecprobArgs),
    /// P(sup of X on [0,1] > v) and its ratio to v^{1/H} Ψ(v).
    Tail(ThresholdArgs),
    /// Re-run the job described by a manifest.json.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Write only this kind of data file; both by default. manifest.json is always written.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    #[arg(long, value_parser = parse_hurst)]
    hurst: HurstParameter,
    /// Grid size exponent: n = 2^size-exp.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=30))]
    size_exp: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    replicates: u64,
    /// Worker threads; 0 uses all cores. Affects speed only, never results.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum GeneratorArg {
    Circulant,
    DurbinLevinson,
    Cholesky,
}

impl From<GeneratorArg> for GeneratorId {
    fn from(g: GeneratorArg) -> Self {
        match g {
            GeneratorArg::Circulant => GeneratorId::CirculantEmbedding,
            GeneratorArg::DurbinLevinson => GeneratorId::DurbinLevinson,
            GeneratorArg::Cholesky => GeneratorId::CholeskyOracle,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value = "circulant")]
    generator: GeneratorArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FitBand {
    /// Coarsest scale exponent of the regression band.
    #[arg(long, requires = "kmax")]
    kmin: Option<u32>,
    /// Finest scale exponent of the regression band.
    #[arg(long, requires = "kmin")]
    kmax: Option<u32>,
}

#[derive(Args, Debug)]
struct DimArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    band: FitBand,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated Hurst values.
    #[arg(long, value_parser = parse_hurst, value_delimiter = ',', required = true)]
    hurst: Vec<HurstParameter>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=30))]
    size_exp: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    band: FitBand,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ScaleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated exponents k of ε = 2^-k.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8")]
    eps_exps: Vec<u32>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RecprobArgs {
    #[command(flatten)]
    scale: ScaleArgs,
    /// Left end a of the interval [a, a+ε].
    #[arg(long)]
    anchor: f64,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated levels.
    #[arg(long, value_delimiter = ',', required = true)]
    thresholds: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    manifest: PathBuf,
    /// Output directory; defaults to the manifest's directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn parse_hurst(s: &str) -> Result<HurstParameter, String> {
    s.parse::<HurstParameter>().map_err(|e| e.to_string())
}

fn experiment_config(common: &CommonArgs, run: &RunArgs) -> ExperimentConfig {
    ExperimentConfig::new(common.hurst, 1usize << common.size_exp, run.replicates, common.seed)
}

fn with_band(cfg: ExperimentConfig, band: &FitBand) -> ExperimentConfig {
    match (band.kmin, band.kmax) {
        (Some(lo), Some(hi)) => cfg.with_k_range(lo, hi),
        _ => cfg,
    }
}

fn into_job(command: Command) -> Result<(Job, PathBuf, Option<Format>, usize), CliError> {
    Ok(match command {
        Command::Generate(a) => (
            Job::Generate {
                hurst: a.common.hurst,
                n: 1usize << a.common.size_exp,
                seed: a.common.seed,
                generator: a.generator.into(),
            },
            a.output.out,
            a.output.format,
            0,
        ),
        Command::Dim(a) => {
            let cfg = with_band(experiment_config(&a.common, &a.run), &a.band);
            (Job::Dim(cfg), a.output.out, a.output.format, a.run.workers)
        }
        Command::Sweep(a) => {
            let cfg = ExperimentConfig::new(a.hurst[0], 1usize << a.size_exp, a.run.replicates, a.seed)
                .with_hurst_grid(a.hurst);
            (Job::Sweep(with_band(cfg, &a.band)), a.output.out, a.output.format, a.run.workers)
        }
        Command::Argmax(a) => {
            let cfg = experiment_config(&a.common, &a.run).with_eps_exps(a.eps_exps);
            (Job::Argmax(cfg), a.output.out, a.output.format, a.run.workers)
        }
        Command::Recprob(a) => {
            let s = a.scale;
            let cfg = experiment_config(&s.common, &s.run).with_eps_exps(s.eps_exps).with_anchor(a.anchor);
            (Job::Recprob(cfg), s.output.out, s.output.format, s.run.workers)
        }
        Command::Survival(a) => {
            let cfg = experiment_config(&a.common, &a.run).with_thresholds(a.thresholds);
            (Job::Survival(cfg), a.output.out, a.output.format, a.run.workers)
        }
        Command::Tail(a) => {
            let cfg = experiment_config(&a.common, &a.run).with_thresholds(a.thresholds);
            (Job::Tail(cfg), a.output.out, a.output.format, a.run.workers)
        }
        Command::Replay(a) => {
            let manifest = RunManifest::load(&a.manifest)?;
            let out = a.out.unwrap_or_else(|| a.manifest.parent().unwrap_or(Path::new(".")).to_path_buf());
            (manifest.job, out, manifest.format, a.workers)
        }
    })
}

fn execute(job: Job, out: &Path, format: Option<Format>, workers: usize) -> Result<(), CliError> {
    let start = Instant::now();
    let manifest = RunManifest::new(job, format);
    let dir = OutputDir::create(out)?;
    let summary = match &manifest.job {
        Job::Generate { hurst, n, seed, generator } => {
            let path = generate(*generator, *hurst, *n, *seed)?;
            let records = extract_records(&path);
            write_path(&dir, &manifest, &path, &records)?;
            format!("generate: {} H={hurst} n={n} seed={seed}: {} records", generator.as_str(), records.len())
        }
        Job::Dim(cfg) => {
            let report = experiments::run_dimension_sweep(cfg, workers)?;
            write_dimension(&dir, &manifest, &report)?;
            let d = &report.dimensions[0];
            format!(
                "dim: H={} n={} replicates={} fit k={}..{}: dimension {} ± {} (mean-curve fit {})",
                d.hurst, cfg.n, d.replicates, d.k_range.0, d.k_range.1, d.dim_mean, d.dim_stderr,
                d.mean_curve_fit.dimension
            )
        }
        Job::Sweep(cfg) => {
            let report = experiments::run_dimension_sweep(cfg, workers)?;
            write_sweep(&dir, &manifest, &report)?;
            let rows: Vec<String> =
                report.dimensions.iter().map(|d| format!("H={}: {} ± {}", d.hurst, d.dim_mean, d.dim_stderr)).collect();
            format!("sweep: n={} replicates={}: {}", cfg.n, cfg.replicates, rows.join(", "))
        }
        Job::Argmax(cfg) => probability(ExperimentKind::ArgmaxProb, cfg, workers, &dir, &manifest)?,
        Job::Survival(cfg) => probability(ExperimentKind::SurvivalProb, cfg, workers, &dir, &manifest)?,
        Job::Recprob(cfg) => probability(ExperimentKind::RecordIntervalProb, cfg, workers, &dir, &manifest)?,
        Job::Tail(cfg) => probability(ExperimentKind::SupTail, cfg, workers, &dir, &manifest)?,
    };
    dir.json(MANIFEST_FILE, &manifest)?;
    println!("{summary}");
    println!("wrote {} and {MANIFEST_FILE} to {}", manifest.outputs.join(", "), out.display());
    println!("wall-clock {:.3}s", start.elapsed().as_secs_f64());
    Ok(())
}

fn wants(manifest: &RunManifest, ext: &str) -> Option<String> {
    manifest.outputs.iter().find(|name| name.ends_with(ext)).cloned()
}

fn write_path(dir: &OutputDir, manifest: &RunManifest, path: &FbmPath, records: &RecordSet) -> Result<(), CliError> {
    let running_max = path.running_max();
    let mask = records.mask();
    if let Some(name) = wants(manifest, ".csv") {
        let rows = (0..=path.n()).map(|i| {
            vec![num(path.time(i)), num(path.values()[i]), num(running_max[i]), (mask[i] as u8).to_string()]
        });
        dir.csv(&name, &["t", "x", "running_max", "is_record"], rows)?;
    }
    if let Some(name) = wants(manifest, ".json") {
        let doc = json!({
            "manifest": manifest,
            "n": path.n(),
            "x": path.values(),
            "running_max": running_max,
            "record_indices": records.indices(),
        });
        dir.json(&name, &doc)?;
    }
    Ok(())
}

fn write_dimension(dir: &OutputDir, manifest: &RunManifest, report: &ExperimentReport) -> Result<(), CliError> {
    let d = &report.dimensions[0];
    if let Some(name) = wants(manifest, ".csv") {
        let rows = d.mean_counts.iter().map(|&(k, m)| vec![k.to_string(), num((-(k as f64)).exp2()), num(m)]);
        dir.csv(&name, &["k", "eps", "m_eps"], rows)?;
    }
    if let Some(name) = wants(manifest, ".json") {
        let doc = json!({
            "manifest": manifest,
            "dimension": d.dim_mean,
            "stderr": d.dim_stderr,
            "replicates": d.replicates,
            "k_range": d.k_range,
            "estimate": d.mean_curve_fit,
            "report": report,
        });
        dir.json(&name, &doc)?;
    }
    Ok(())
}

fn write_sweep(dir: &OutputDir, manifest: &RunManifest, report: &ExperimentReport) -> Result<(), CliError> {
    if let Some(name) = wants(manifest, ".csv") {
        let rows = report.dimensions.iter().map(|d| {
            vec![d.hurst.to_string(), num(d.dim_mean), num(d.dim_stderr), d.replicates.to_string()]
        });
        dir.csv(&name, &["hurst", "dim_mean", "dim_stderr", "replicates"], rows)?;
    }
    if let Some(name) = wants(manifest, ".json") {
        dir.json(&name, &json!({ "manifest": manifest, "report": report }))?;
    }
    Ok(())
}

fn probability(
    kind: ExperimentKind,
    cfg: &ExperimentConfig,
    workers: usize,
    dir: &OutputDir,
    manifest: &RunManifest,
) -> Result<String, CliError> {
    let report = experiments::run(kind, cfg, workers)?;
    if let Some(name) = wants(manifest, ".csv") {
        let rows = report.points.iter().map(|p| vec![num(p.param), num(p.p_hat), num(p.stderr)]);
        dir.csv(&name, &["param", "p_hat", "stderr"], rows)?;
    }
    if let Some(name) = wants(manifest, ".json") {
        let doc = json!({ "manifest": manifest, "exponent": report.exponent, "report": report });
        dir.json(&name, &doc)?;
    }
    let points: Vec<String> = report.points.iter().map(|p| format!("{}: {}", p.param, p.p_hat)).collect();
    let mut line =
        format!("{}: H={} n={} replicates={}: {}", kind.as_str(), cfg.hurst, cfg.n, cfg.replicates, points.join(", "));
    if let Some(e) = &report.exponent {
        line.push_str(&format!("; exponent {} ± {} (scaling law {})", e.exponent, e.stderr, e.target));
    }
    Ok(line)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = into_job(cli.command).and_then(|(job, out, format, workers)| execute(job, &out, format, workers));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fbmrec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
