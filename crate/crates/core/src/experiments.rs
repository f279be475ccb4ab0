//! Monte Carlo harness for the record-statistics scaling laws.
//!
//! Every experiment draws its paths from one [`CirculantGenerator`]. Work items are
//! replicate *pairs*: pair `j` is seeded with `replicate_seed(master_seed, j)`, and the
//! real and imaginary parts of its transform become replicates `2j` and `2j + 1`.
//! Per-replicate outcomes are collected in index order and reduced sequentially, so
//! a report depends only on its [`ExperimentConfig`], never on the worker count.
//!
//! All thresholds of one experiment (ε, u or v grids) are evaluated on the same
//! replicates.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{default_fit_range, estimate_dimension, ols_slope, DimensionEstimate};
use crate::generators::{CirculantGenerator, FbmPath};
use crate::hurst::HurstParameter;
use crate::normal::normal_tail;
use crate::records::{box_count_curve, extract_records, max_scale_exponent};
use crate::rng::replicate_seed;

pub const SCHEMA_VERSION: u32 = 1;

/// Grid points with fewer successes than this are left out of exponent fits.
pub const MIN_HITS: u64 = 100;

/// Minimum number of usable grid points for an exponent fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Slack for placing `a·n` and `(a+ε)·n` on the integer grid.
const GRID_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    DimensionSweep,
    RecordIntervalProb,
    ArgmaxProb,
    SurvivalProb,
    SupTail,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::DimensionSweep => "dimension-sweep",
            ExperimentKind::RecordIntervalProb => "record-interval-prob",
            ExperimentKind::ArgmaxProb => "argmax-prob",
            ExperimentKind::SurvivalProb => "survival-prob",
            ExperimentKind::SupTail => "sup-tail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub hurst: HurstParameter,
    /// Hurst values for a dimension sweep; empty means `[hurst]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hurst_grid: Vec<HurstParameter>,
    /// Grid size, a power of two.
    pub n: usize,
    pub replicates: u64,
    pub master_seed: u64,
    /// Scales `ε = 2^-k`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps_exps: Vec<u32>,
    /// Levels `u` (survival) or `v` (sup tail).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thresholds: Vec<f64>,
    /// Left end `a` of the record interval `[a, a+ε]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<f64>,
    /// Box-counting regression band; defaults to [`default_fit_range`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_range: Option<(u32, u32)>,
}

impl ExperimentConfig {
    pub fn new(hurst: HurstParameter, n: usize, replicates: u64, master_seed: u64) -> Self {
        Self {
            hurst,
            hurst_grid: Vec::new(),
            n,
            replicates,
            master_seed,
            eps_exps: Vec::new(),
            thresholds: Vec::new(),
            anchor: None,
            k_range: None,
        }
    }

    pub fn with_hurst_grid(mut self, grid: Vec<HurstParameter>) -> Self {
        self.hurst_grid = grid;
        self
    }

    pub fn with_eps_exps(mut self, exps: Vec<u32>) -> Self {
        self.eps_exps = exps;
        self
    }

    pub fn with_thresholds(mut self, thresholds: Vec<f64>) -> Self {
        self.thresholds = thresholds;
        self
    }

    pub fn with_anchor(mut self, a: f64) -> Self {
        self.anchor = Some(a);
        self
    }

    pub fn with_k_range(mut self, k_min: u32, k_max: u32) -> Self {
        self.k_range = Some((k_min, k_max));
        self
    }

    pub fn eps_values(&self) -> Vec<f64> {
        self.eps_exps.iter().map(|&k| (-(k as f64)).exp2()).collect()
    }

    fn validate_common(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidArgument("replicates must be at least 1".into()));
        }
        if self.n < 2 || !self.n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("n must be a power of two >= 2, got {}", self.n)));
        }
        Ok(())
    }

    fn validate_eps(&self) -> Result<()> {
        if self.eps_exps.len() < MIN_FIT_POINTS {
            return Err(Error::InvalidArgument(format!(
                "need at least {MIN_FIT_POINTS} scales for an exponent fit, got {}",
                self.eps_exps.len()
            )));
        }
        if let Some(&k) = self.eps_exps.iter().find(|&&k| k == 0 || k > 62) {
            return Err(Error::InvalidArgument(format!("scale exponent {k} outside 1..=62 (eps must lie in (0,1))")));
        }
        Ok(())
    }

    fn validate_thresholds(&self, min_points: usize) -> Result<()> {
        if self.thresholds.len() < min_points {
            return Err(Error::InvalidArgument(format!(
                "need at least {min_points} thresholds, got {}",
                self.thresholds.len()
            )));
        }
        if let Some(t) = self.thresholds.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::InvalidArgument(format!("thresholds must be positive and finite, got {t}")));
        }
        Ok(())
    }
}

/// One grid point of a probability experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityPoint {
    /// ε, u or v.
    pub param: f64,
    pub hits: u64,
    pub p_hat: f64,
    /// Binomial standard error `√(p̂(1−p̂)/R)`.
    pub stderr: f64,
    /// `p̂ / (v^{1/H} Ψ(v))`, sup-tail experiments only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

impl ProbabilityPoint {
    fn new(param: f64, hits: u64, replicates: u64) -> Self {
        let p_hat = hits as f64 / replicates as f64;
        let stderr = (p_hat * (1.0 - p_hat) / replicates as f64).sqrt();
        Self { param, hits, p_hat, stderr, ratio: None }
    }
}

/// Slope of `ln p̂` against `ln param`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// Value predicted by the scaling law.
    pub target: f64,
}

/// Dimension-sweep result at one Hurst value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionPoint {
    pub hurst: HurstParameter,
    pub dim_mean: f64,
    /// Standard error of the mean over replicates.
    pub dim_stderr: f64,
    pub replicates: u64,
    pub k_range: (u32, u32),
    /// Per-replicate mean of `M_ε` for every admissible `k`, starting at 0.
    pub mean_counts: Vec<(u32, f64)>,
    /// Fit to `mean_counts` over `k_range`.
    pub mean_curve_fit: DimensionEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<ProbabilityPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<ExponentFit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dimensions: Vec<DimensionPoint>,
    pub notes: Vec<String>,
    /// Not serialized: reports must be byte-identical across runs.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl ExperimentReport {
    fn new(kind: ExperimentKind, config: ExperimentConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind,
            config,
            points: Vec::new(),
            exponent: None,
            dimensions: Vec::new(),
            notes: Vec::new(),
            wall_clock: Duration::ZERO,
        }
    }
}

/// Runs `eval` on every replicate and returns the outcomes in replicate order.
///
/// `workers == 0` uses rayon's global pool.
pub fn map_replicates<T, F>(
    generator: &CirculantGenerator,
    replicates: u64,
    master_seed: u64,
    workers: usize,
    eval: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&FbmPath) -> Result<T> + Sync,
{
    let pairs = replicates.div_ceil(2);
    let run = || {
        (0..pairs)
            .into_par_iter()
            .map_init(
                || {
                    let h = generator.hurst();
                    (generator.workspace(), FbmPath::empty(h), FbmPath::empty(h))
                },
                |(ws, first, second), j| {
                    generator.sample_pair_into(replicate_seed(master_seed, j), ws, first, second);
                    let a = eval(first)?;
                    let b = if 2 * j + 1 < replicates { Some(eval(second)?) } else { None };
                    Ok((a, b))
                },
            )
            .collect::<Vec<Result<(T, Option<T>)>>>()
    };
    let outcomes = if workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))?
            .install(run)
    };

    let mut out = Vec::with_capacity(replicates as usize);
    for outcome in outcomes {
        let (a, b) = outcome?;
        out.push(a);
        out.extend(b);
    }
    Ok(out)
}

/// Sums per-replicate hit vectors point by point.
fn tally(outcomes: &[Vec<bool>], points: usize) -> Vec<u64> {
    let mut hits = vec![0u64; points];
    for row in outcomes {
        for (h, &hit) in hits.iter_mut().zip(row) {
            *h += u64::from(hit);
        }
    }
    hits
}

fn fit_exponent(points: &[ProbabilityPoint], target: f64) -> Result<ExponentFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.hits >= MIN_HITS)
        .map(|p| (p.param.ln(), p.p_hat.ln()))
        .collect();
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientHits(format!(
            "only {} of {} grid points reached {MIN_HITS} successes; need {MIN_FIT_POINTS}",
            usable.len(),
            points.len()
        )));
    }
    let fit = ols_slope(&usable)?;
    Ok(ExponentFit {
        exponent: fit.slope,
        stderr: fit.stderr,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        points_used: usable.len(),
        target,
    })
}

fn excluded_note(points: &[ProbabilityPoint]) -> Option<String> {
    let dropped: Vec<String> =
        points.iter().filter(|p| p.hits < MIN_HITS).map(|p| p.param.to_string()).collect();
    (!dropped.is_empty()).then(|| format!("excluded from fit (< {MIN_HITS} hits): {}", dropped.join(", ")))
}

const SHARED_NOTE: &str = "all grid points share the same replicates; point estimates are correlated";

/// Mean ± standard error of the per-replicate box-counting dimension, for each
/// Hurst value in the grid. Every Hurst value reuses the same replicate seeds.
pub fn run_dimension_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    cfg.validate_common()?;
    let (k_min, k_max) = match cfg.k_range {
        Some(r) => r,
        None => default_fit_range(cfg.n).ok_or_else(|| {
            Error::InvalidArgument(format!("n = {} too small for the default fit range; pass k_range", cfg.n))
        })?,
    };
    let curve_max = max_scale_exponent(cfg.n).unwrap_or(k_max).max(k_max);
    let grid = if cfg.hurst_grid.is_empty() { vec![cfg.hurst] } else { cfg.hurst_grid.clone() };

    let mut report = ExperimentReport::new(ExperimentKind::DimensionSweep, cfg.clone());
    for &h in &grid {
        let generator = CirculantGenerator::new(h, cfg.n)?;
        let outcomes = map_replicates(&generator, cfg.replicates, cfg.master_seed, workers, |path| {
            let curve = box_count_curve(&extract_records(path), 0, curve_max)?;
            let est = estimate_dimension(&curve, k_min, k_max)?;
            Ok((est.dimension, curve.entries.iter().map(|e| e.m_eps).collect::<Vec<_>>()))
        })?;

        let r = outcomes.len() as f64;
        let dim_mean = outcomes.iter().map(|o| o.0).sum::<f64>() / r;
        let dim_stderr = if outcomes.len() > 1 {
            let var = outcomes.iter().map(|o| (o.0 - dim_mean).powi(2)).sum::<f64>() / (r - 1.0);
            (var / r).sqrt()
        } else {
            0.0
        };
        let mean_counts: Vec<(u32, f64)> = (0..=curve_max)
            .map(|k| (k, outcomes.iter().map(|o| o.1[k as usize] as f64).sum::<f64>() / r))
            .collect();
        let mean_curve_fit = crate::estimator::dimension_from_counts(&mean_counts[k_min as usize..=k_max as usize])?;
        report.dimensions.push(DimensionPoint {
            hurst: h,
            dim_mean,
            dim_stderr,
            replicates: cfg.replicates,
            k_range: (k_min, k_max),
            mean_counts,
            mean_curve_fit,
        });
    }
    report.notes.push("box-counting (Minkowski) dimension estimates".into());
    if grid.len() > 1 {
        report.notes.push("every Hurst value uses the same replicate seeds (common random numbers)".into());
    }
    report.wall_clock = start.elapsed();
    Ok(report)
}

/// Fraction of replicates with a record time in `[a, a+ε]`, for each ε.
pub fn estimate_record_interval_prob(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    cfg.validate_common()?;
    cfg.validate_eps()?;
    let a = cfg.anchor.ok_or_else(|| Error::InvalidArgument("record-interval experiment needs an anchor".into()))?;
    let eps = cfg.eps_values();
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!("anchor must be non-negative, got {a}")));
    }
    if let Some(e) = eps.iter().find(|&&e| a + e > 1.0 + GRID_SLACK) {
        return Err(Error::InvalidArgument(format!("interval [{a}, {}] leaves [0, 1]", a + e)));
    }
    let nf = cfg.n as f64;
    let lo = ((a * nf - GRID_SLACK).ceil().max(0.0)) as usize;
    let ranges: Vec<(usize, usize)> = eps
        .iter()
        .map(|&e| (lo, (((a + e) * nf + GRID_SLACK).floor() as usize).min(cfg.n)))
        .collect();

    let generator = CirculantGenerator::new(cfg.hurst, cfg.n)?;
    let outcomes = map_replicates(&generator, cfg.replicates, cfg.master_seed, workers, |path| {
        let recs = extract_records(path);
        Ok(ranges.iter().map(|&(l, h)| l <= h && recs.hits_index_range(l, h)).collect::<Vec<bool>>())
    })?;
    let hits = tally(&outcomes, eps.len());

    let mut report = ExperimentReport::new(ExperimentKind::RecordIntervalProb, cfg.clone());
    report.points = eps.iter().zip(&hits).map(|(&e, &h)| ProbabilityPoint::new(e, h, cfg.replicates)).collect();
    report.exponent = Some(fit_exponent(&report.points, 1.0 - cfg.hurst.value())?);
    report.notes.push(SHARED_NOTE.into());
    report.notes.extend(excluded_note(&report.points));
    report.wall_clock = start.elapsed();
    Ok(report)
}

/// Index of the first maximum.
pub fn first_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Fraction of replicates whose first argmax time is at most ε, for each ε.
pub fn estimate_argmax_prob(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    cfg.validate_common()?;
    cfg.validate_eps()?;
    let eps = cfg.eps_values();
    let nf = cfg.n as f64;
    let cutoffs: Vec<usize> = eps.iter().map(|&e| (e * nf + GRID_SLACK).floor() as usize).collect();

    let generator = CirculantGenerator::new(cfg.hurst, cfg.n)?;
    let outcomes = map_replicates(&generator, cfg.replicates, cfg.master_seed, workers, |path| {
        let i_star = first_argmax(path.values());
        Ok(cutoffs.iter().map(|&c| i_star <= c).collect::<Vec<bool>>())
    })?;
    let hits = tally(&outcomes, eps.len());

    let mut report = ExperimentReport::new(ExperimentKind::ArgmaxProb, cfg.clone());
    report.points = eps.iter().zip(&hits).map(|(&e, &h)| ProbabilityPoint::new(e, h, cfg.replicates)).collect();
    report.exponent = Some(fit_exponent(&report.points, 1.0 - cfg.hurst.value())?);
    report.notes.push(SHARED_NOTE.into());
    report.notes.push("ties broken toward the earliest maximizing index".into());
    report.notes.extend(excluded_note(&report.points));
    report.wall_clock = start.elapsed();
    Ok(report)
}

fn path_max(path: &FbmPath) -> f64 {
    path.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Fraction of replicates with `max_i X_i ≤ u`, for each level u.
pub fn estimate_survival_prob(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    cfg.validate_common()?;
    cfg.validate_thresholds(MIN_FIT_POINTS)?;
    let generator = CirculantGenerator::new(cfg.hurst, cfg.n)?;
    let outcomes = map_replicates(&generator, cfg.replicates, cfg.master_seed, workers, |path| {
        let m = path_max(path);
        Ok(cfg.thresholds.iter().map(|&u| m <= u).collect::<Vec<bool>>())
    })?;
    let hits = tally(&outcomes, cfg.thresholds.len());

    let mut report = ExperimentReport::new(ExperimentKind::SurvivalProb, cfg.clone());
    report.points =
        cfg.thresholds.iter().zip(&hits).map(|(&u, &h)| ProbabilityPoint::new(u, h, cfg.replicates)).collect();
    let h = cfg.hurst.value();
    report.exponent = Some(fit_exponent(&report.points, (1.0 - h) / h)?);
    report.notes.push(SHARED_NOTE.into());
    report.notes.push("sampled maximum <= continuous maximum: p_hat over-estimates P[sup <= u]".into());
    report.notes.extend(excluded_note(&report.points));
    report.wall_clock = start.elapsed();
    Ok(report)
}

/// Fraction of replicates with `max_i X_i > v`, and its ratio to `v^{1/H} Ψ(v)`.
pub fn estimate_sup_tail(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    cfg.validate_common()?;
    cfg.validate_thresholds(1)?;
    let generator = CirculantGenerator::new(cfg.hurst, cfg.n)?;
    let outcomes = map_replicates(&generator, cfg.replicates, cfg.master_seed, workers, |path| {
        let m = path_max(path);
        Ok(cfg.thresholds.iter().map(|&v| m > v).collect::<Vec<bool>>())
    })?;
    let hits = tally(&outcomes, cfg.thresholds.len());

    let inv_h = 1.0 / cfg.hurst.value();
    let points: Vec<ProbabilityPoint> = cfg
        .thresholds
        .iter()
        .zip(&hits)
        .map(|(&v, &h)| {
            let mut p = ProbabilityPoint::new(v, h, cfg.replicates);
            p.ratio = Some(p.p_hat / (v.powf(inv_h) * normal_tail(v)));
            p
        })
        .collect();
    if let Some(p) = points.iter().find(|p| p.hits < MIN_HITS) {
        return Err(Error::InsufficientHits(format!(
            "v = {} has {} exceedances (< {MIN_HITS}); increase replicates",
            p.param, p.hits
        )));
    }

    let mut report = ExperimentReport::new(ExperimentKind::SupTail, cfg.clone());
    report.points = points;
    report.notes.push(SHARED_NOTE.into());
    report.notes.push("sampled maximum <= continuous maximum: p_hat under-estimates P[sup > v]".into());
    report.wall_clock = start.elapsed();
    Ok(report)
}

/// Dispatch on the experiment kind.
pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    match kind {
        ExperimentKind::DimensionSweep => run_dimension_sweep(cfg, workers),
        ExperimentKind::RecordIntervalProb => estimate_record_interval_prob(cfg, workers),
        ExperimentKind::ArgmaxProb => estimate_argmax_prob(cfg, workers),
        ExperimentKind::SurvivalProb => estimate_survival_prob(cfg, workers),
        ExperimentKind::SupTail => estimate_sup_tail(cfg, workers),
    }
}
