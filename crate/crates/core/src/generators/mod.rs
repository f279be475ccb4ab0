//! Exact samplers of fBm on the grid `t_i = i/n`, `i = 0..=n`.
//!
//! All three produce unit-spacing increments (or the grid values directly, for the
//! oracle) and are deterministic functions of `(h, n, seed)`.

mod cholesky;
mod circulant;
mod durbin_levinson;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurst::HurstParameter;

pub use cholesky::{fbm_covariance_matrix, generate_cholesky_oracle, CholeskyOracle, MAX_ORACLE_N};
pub use circulant::{generate_circulant, generate_circulant_pair, CirculantGenerator, CirculantWorkspace};
pub use durbin_levinson::generate_durbin_levinson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorId {
    CirculantEmbedding,
    DurbinLevinson,
    CholeskyOracle,
}

impl GeneratorId {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorId::CirculantEmbedding => "circulant",
            GeneratorId::DurbinLevinson => "durbin-levinson",
            GeneratorId::CholeskyOracle => "cholesky",
        }
    }
}

impl std::str::FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circulant" => Ok(GeneratorId::CirculantEmbedding),
            "durbin-levinson" => Ok(GeneratorId::DurbinLevinson),
            "cholesky" => Ok(GeneratorId::CholeskyOracle),
            other => Err(Error::InvalidArgument(format!("unknown generator {other:?}"))),
        }
    }
}

/// A sampled path: `values[i]` is `X` at `t_i = i/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbmPath {
    n: usize,
    values: Vec<f64>,
    hurst: HurstParameter,
    seed: u64,
    generator: GeneratorId,
}

impl FbmPath {
    /// Wraps externally produced values, checking the path invariants.
    pub fn from_values(values: Vec<f64>, hurst: HurstParameter, seed: u64, generator: GeneratorId) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument("a path needs at least two grid points".into()));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidArgument(format!("path must start at 0, got {}", values[0])));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value at index {i}")));
        }
        Ok(Self { n: values.len() - 1, values, hurst, seed, generator })
    }

    /// Builds `X_0 = 0, X_i = n^{-H} Σ_{j<i} increments[j]`.
    pub(crate) fn from_increments(
        increments: &[f64],
        hurst: HurstParameter,
        seed: u64,
        generator: GeneratorId,
    ) -> Self {
        let mut path = Self::empty(hurst);
        path.refill(increments.iter().copied(), hurst, seed, generator);
        path
    }

    /// Placeholder to be overwritten by [`refill`](Self::refill).
    pub(crate) fn empty(hurst: HurstParameter) -> Self {
        Self { n: 0, values: Vec::new(), hurst, seed: 0, generator: GeneratorId::CirculantEmbedding }
    }

    /// In-place version of [`from_increments`](Self::from_increments).
    pub(crate) fn refill(
        &mut self,
        increments: impl ExactSizeIterator<Item = f64>,
        hurst: HurstParameter,
        seed: u64,
        generator: GeneratorId,
    ) {
        let n = increments.len();
        let scale = (n as f64).powf(-hurst.value());
        self.values.clear();
        self.values.reserve(n + 1);
        self.values.push(0.0);
        let mut acc = 0.0;
        for dx in increments {
            acc += dx;
            self.values.push(acc * scale);
        }
        self.n = n;
        self.hurst = hurst;
        self.seed = seed;
        self.generator = generator;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn hurst(&self) -> HurstParameter {
        self.hurst
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator(&self) -> GeneratorId {
        self.generator
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    /// Running maximum `max_{j ≤ i} X_j`.
    pub fn running_max(&self) -> Vec<f64> {
        let mut m = f64::NEG_INFINITY;
        self.values
            .iter()
            .map(|&v| {
                m = m.max(v);
                m
            })
            .collect()
    }
}

/// Dispatch on a generator id.
pub fn generate(generator: GeneratorId, h: HurstParameter, n: usize, seed: u64) -> Result<FbmPath> {
    match generator {
        GeneratorId::CirculantEmbedding => generate_circulant(h, n, seed),
        GeneratorId::DurbinLevinson => generate_durbin_levinson(h, n, seed),
        GeneratorId::CholeskyOracle => generate_cholesky_oracle(h, n, seed),
    }
}
