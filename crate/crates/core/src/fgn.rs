use serde::{Deserialize, Serialize};

use crate::hurst::HurstParameter;

/// Autocovariance of unit-spacing fractional Gaussian noise at lag `k`:
/// `½(|k+1|^{2H} − 2|k|^{2H} + |k−1|^{2H})`.
pub fn fgn_autocovariance(h: HurstParameter, k: i64) -> f64 {
    let two_h = h.twice();
    let k = k.unsigned_abs() as f64;
    let pow = |x: f64| if x == 0.0 { 0.0 } else { x.powf(two_h) };
    0.5 * (pow(k + 1.0) - 2.0 * pow(k) + pow((k - 1.0).abs()))
}

/// Covariance of fBm itself, `½(|t|^{2H} + |s|^{2H} − |t−s|^{2H})`.
pub fn fbm_covariance(h: HurstParameter, t: f64, s: f64) -> f64 {
    let two_h = h.twice();
    let pow = |x: f64| if x == 0.0 { 0.0 } else { x.abs().powf(two_h) };
    0.5 * (pow(t) + pow(s) - pow(t - s))
}

/// Tabulated `γ(0..=max_lag)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FgnAutocovariance {
    pub hurst: HurstParameter,
    pub lags: Vec<f64>,
}

impl FgnAutocovariance {
    pub fn new(hurst: HurstParameter, max_lag: usize) -> Self {
        let lags = (0..=max_lag as i64).map(|k| fgn_autocovariance(hurst, k)).collect();
        Self { hurst, lags }
    }

    pub fn max_lag(&self) -> usize {
        self.lags.len() - 1
    }

    pub fn get(&self, k: usize) -> f64 {
        self.lags[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(x: f64) -> HurstParameter {
        HurstParameter::new(x).unwrap()
    }

    #[test]
    fn lag_zero_is_unit_variance() {
        for x in [0.1, 0.3, 0.5, 0.75, 0.95] {
            assert_eq!(fgn_autocovariance(h(x), 0), 1.0);
        }
    }

    #[test]
    fn brownian_increments_uncorrelated() {
        for k in 1..50 {
            assert!(fgn_autocovariance(h(0.5), k).abs() < 1e-12);
        }
        let table = FgnAutocovariance::new(h(0.5), 64);
        assert!(table.lags[1..].iter().all(|&g| g == 0.0));
    }

    #[test]
    fn closed_forms() {
        assert!((fgn_autocovariance(h(0.75), 1) - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!((fgn_autocovariance(h(0.7), 1) - 0.3195079107728943).abs() < 1e-14);
        // H = 0.3 reference values from a 30-digit evaluation.
        let want = [1.0, -0.242141716744801, -0.04912554404451671, -0.0266254066795287];
        for (k, w) in want.iter().enumerate() {
            assert!((fgn_autocovariance(h(0.3), k as i64) - w).abs() < 1e-13);
        }
    }

    #[test]
    fn symmetric_in_lag() {
        for k in 0..20 {
            assert_eq!(fgn_autocovariance(h(0.3), k), fgn_autocovariance(h(0.3), -k));
        }
    }

    #[test]
    fn second_difference_of_fbm_covariance() {
        // γ(k) = Cov(X_{k+1} − X_k, X_1 − X_0) for unit spacing.
        let hp = h(0.62);
        for k in 0..10 {
            let kf = k as f64;
            let c = fbm_covariance(hp, kf + 1.0, 1.0) - fbm_covariance(hp, kf, 1.0);
            assert!((c - fgn_autocovariance(hp, k)).abs() < 1e-12);
        }
    }

    #[test]
    fn fbm_covariance_values() {
        assert_eq!(fbm_covariance(h(0.5), 0.5, 1.0), 0.5);
        assert!((fbm_covariance(h(0.75), 0.5, 1.0) - 0.5).abs() < 1e-15);
        assert!((fbm_covariance(h(0.75), 0.5, 0.5) - 0.5f64.powf(1.5)).abs() < 1e-15);
    }
}
