use super::{FbmPath, GeneratorId};
use crate::error::{Error, Result};
use crate::fgn::fbm_covariance;
use crate::hurst::HurstParameter;
use crate::rng::{fill_standard_normal, path_rng};

pub const MAX_ORACLE_N: usize = 512;

/// Pivots within this fraction of the diagonal below zero are treated as exact zeros.
const PIVOT_TOLERANCE: f64 = 1e-12;

/// Full fBm covariance on `t_i = i/n`, `i = 1..=n`, row-major.
pub fn fbm_covariance_matrix(h: HurstParameter, n: usize) -> Vec<f64> {
    let t = |i: usize| (i + 1) as f64 / n as f64;
    let mut sigma = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let c = fbm_covariance(h, t(i), t(j));
            sigma[i * n + j] = c;
            sigma[j * n + i] = c;
        }
    }
    sigma
}

/// Lower Cholesky factor of a symmetric positive semi-definite matrix.
pub(crate) fn cholesky_lower(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let d = a[j * n + j] - (0..j).map(|k| l[j * n + k] * l[j * n + k]).sum::<f64>();
        let tol = PIVOT_TOLERANCE * a[j * n + j].abs();
        if d < -tol || d.is_nan() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        if d <= tol {
            // degenerate direction: column stays zero
            continue;
        }
        let ljj = d.sqrt();
        l[j * n + j] = ljj;
        for i in (j + 1)..n {
            let s = a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            l[i * n + j] = s / ljj;
        }
    }
    Ok(l)
}

/// Brute-force sampler: factorize the dense grid covariance once and apply the
/// factor to standard normal vectors. O(n³) setup; ground truth for the fast generators.
#[derive(Debug, Clone)]
pub struct CholeskyOracle {
    hurst: HurstParameter,
    n: usize,
    factor: Vec<f64>,
}

impl CholeskyOracle {
    pub fn new(hurst: HurstParameter, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_N {
            return Err(Error::InvalidArgument(format!("oracle needs 1 <= n <= {MAX_ORACLE_N}, got {n}")));
        }
        let factor = cholesky_lower(&fbm_covariance_matrix(hurst, n), n)?;
        Ok(Self { hurst, n, factor })
    }

    pub fn sample(&self, seed: u64) -> FbmPath {
        let n = self.n;
        let mut z = vec![0.0; n];
        fill_standard_normal(&mut path_rng(seed), &mut z);
        let mut values = Vec::with_capacity(n + 1);
        values.push(0.0);
        values.extend((0..n).map(|i| (0..=i).map(|k| self.factor[i * n + k] * z[k]).sum::<f64>()));
        FbmPath { n, values, hurst: self.hurst, seed, generator: GeneratorId::CholeskyOracle }
    }
}

pub fn generate_cholesky_oracle(h: HurstParameter, n: usize, seed: u64) -> Result<FbmPath> {
    Ok(CholeskyOracle::new(h, n)?.sample(seed))
}
