//! Least-squares fits and covering utilities.
//!
//! Dimension estimates here are box-counting (Minkowski) estimates: the slope of
//! `log2 M_ε` against `log2 ε` over a band of dyadic scales.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::records::{max_scale_exponent, BoxCountCurve};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn ols_slope(points: &[(f64, f64)]) -> Result<OlsFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::DegenerateRegression(format!("need at least 3 points, got {n}")));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::DegenerateRegression("non-finite point".into()));
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse = points
        .iter()
        .map(|&(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum::<f64>();
    let stderr = (sse / (nf - 2.0) / sxx).sqrt();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
    Ok(OlsFit { slope, intercept, stderr, r_squared })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    /// d log2 M / d log2 ε
    pub slope: f64,
    /// `-slope`
    pub dimension: f64,
    pub stderr: f64,
    pub k_range: (u32, u32),
    pub r_squared: f64,
}

/// Number of scales in the default regression band.
pub const DEFAULT_FIT_SCALES: u32 = 6;

/// Default regression band: the [`DEFAULT_FIT_SCALES`] finest scales whose boxes still
/// span at least 8 grid steps, i.e. `k ∈ [log2(n) − 8, log2(n) − 3]` for `n ≥ 2^8`.
///
/// Per-path log-log slopes only settle near `H` at fine scales; coarse scales carry
/// a crossover that biases the fit toward ½. `None` when fewer than three scales fit.
pub fn default_fit_range(n: usize) -> Option<(u32, u32)> {
    let k_max = max_scale_exponent(n)?;
    (k_max >= 2).then(|| (k_max.saturating_sub(DEFAULT_FIT_SCALES - 1), k_max))
}

/// Fits `log2 M` against `log2 ε = -k` for arbitrary (possibly averaged) counts.
pub fn dimension_from_counts(counts: &[(u32, f64)]) -> Result<DimensionEstimate> {
    let (Some(first), Some(last)) = (counts.first(), counts.last()) else {
        return Err(Error::DegenerateRegression("no scales".into()));
    };
    if counts.iter().any(|&(_, m)| !(m > 0.0)) {
        return Err(Error::DegenerateRegression("box counts must be positive".into()));
    }
    let points: Vec<(f64, f64)> = counts.iter().map(|&(k, m)| (-(k as f64), m.log2())).collect();
    let fit = ols_slope(&points)?;
    Ok(DimensionEstimate {
        slope: fit.slope,
        dimension: -fit.slope,
        stderr: fit.stderr,
        k_range: (first.0, last.0),
        r_squared: fit.r_squared,
    })
}

pub fn estimate_dimension(curve: &BoxCountCurve, k_min: u32, k_max: u32) -> Result<DimensionEstimate> {
    if k_min > k_max {
        return Err(Error::InvalidArgument(format!("k_min {k_min} > k_max {k_max}")));
    }
    let counts = (k_min..=k_max)
        .map(|k| {
            curve
                .entry(k)
                .map(|e| (k, e.m_eps as f64))
                .ok_or_else(|| Error::InvalidArgument(format!("curve has no entry for k = {k}")))
        })
        .collect::<Result<Vec<_>>>()?;
    dimension_from_counts(&counts)
}

/// A finite family of closed intervals `[left, right]` with `left < right`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Covering {
    intervals: Vec<(f64, f64)>,
}

impl Covering {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(l, r) in &intervals {
            if !(l.is_finite() && r.is_finite() && l < r) {
                return Err(Error::InvalidArgument(format!("invalid covering interval [{l}, {r}]")));
            }
        }
        Ok(Self { intervals })
    }

    /// `count` consecutive intervals of length `width` starting at 0.
    pub fn uniform(count: usize, width: f64) -> Result<Self> {
        Self::new((0..count).map(|i| (i as f64 * width, (i + 1) as f64 * width)).collect())
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn diameters(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals.iter().map(|(l, r)| r - l)
    }
}

/// `Σ diam(E_i)^α` over the covering.
pub fn alpha_value(cov: &Covering, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be non-negative, got {alpha}")));
    }
    Ok(cov.diameters().map(|d| d.powf(alpha)).sum())
}
