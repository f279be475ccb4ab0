use super::{FbmPath, GeneratorId};
use crate::error::{Error, Result};
use crate::fgn::FgnAutocovariance;
use crate::hurst::HurstParameter;
use crate::rng::{fill_standard_normal, path_rng};

/// Sequential exact fGn synthesis by the Durbin–Levinson recursion, O(n²).
///
/// Each increment is its best linear prediction from the past plus an independent
/// innovation with the recursion's prediction-error variance.
pub fn generate_durbin_levinson(h: HurstParameter, n: usize, seed: u64) -> Result<FbmPath> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let gamma = FgnAutocovariance::new(h, n);
    let mut z = vec![0.0; n];
    fill_standard_normal(&mut path_rng(seed), &mut z);

    let mut x = Vec::with_capacity(n);
    let mut phi: Vec<f64> = Vec::with_capacity(n);
    let mut prev: Vec<f64> = Vec::with_capacity(n);
    let mut variance = gamma.get(0);
    x.push(variance.sqrt() * z[0]);

    for t in 1..n {
        // reflection coefficient φ_tt
        let acc: f64 = phi.iter().enumerate().map(|(j, p)| p * gamma.get(t - 1 - j)).sum();
        let kappa = (gamma.get(t) - acc) / variance;

        prev.clear();
        prev.extend_from_slice(&phi);
        for j in 0..phi.len() {
            phi[j] = prev[j] - kappa * prev[prev.len() - 1 - j];
        }
        phi.push(kappa);

        variance *= 1.0 - kappa * kappa;
        if !(variance > 0.0) {
            return Err(Error::NumericalBreakdown { step: t, variance });
        }

        // phi[j] multiplies x[t-1-j]
        let mean: f64 = phi.iter().enumerate().map(|(j, p)| p * x[t - 1 - j]).sum();
        x.push(mean + variance.sqrt() * z[t]);
    }

    Ok(FbmPath::from_increments(&x, h, seed, GeneratorId::DurbinLevinson))
}
