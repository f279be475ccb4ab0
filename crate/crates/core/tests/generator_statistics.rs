//! Distributional checks of the three samplers against closed forms.

use fbm_records::fgn::{fbm_covariance, fgn_autocovariance};
use fbm_records::{generate_durbin_levinson, CholeskyOracle, CirculantGenerator, FbmPath, HurstParameter};

fn h(x: f64) -> HurstParameter {
    HurstParameter::new(x).unwrap()
}

/// `count` circulant paths, two per synthesis.
fn circulant_paths(hurst: f64, n: usize, count: usize, seed0: u64) -> Vec<FbmPath> {
    let g = CirculantGenerator::new(h(hurst), n).unwrap();
    let mut ws = g.workspace();
    let mut out = Vec::with_capacity(count);
    let (mut a, mut b) = g.sample_pair(seed0);
    for s in 0..(count as u64).div_ceil(2) {
        g.sample_pair_into(seed0 + s, &mut ws, &mut a, &mut b);
        out.push(a.clone());
        out.push(b.clone());
    }
    out.truncate(count);
    out
}

/// Unit-spacing increments `n^H (X_{i+1} − X_i)`.
fn unit_increments(p: &FbmPath) -> Vec<f64> {
    let scale = (p.n() as f64).powf(p.hurst().value());
    p.values().windows(2).map(|w| (w[1] - w[0]) * scale).collect()
}

/// Mean of `x·y` with the standard error of a zero-mean Gaussian product moment.
fn second_moment(xs: &[f64], ys: &[f64], var_x: f64, var_y: f64, cov: f64) -> (f64, f64) {
    let r = xs.len() as f64;
    let m = xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / r;
    (m, ((var_x * var_y + cov * cov) / r).sqrt())
}

fn assert_within(label: &str, got: f64, want: f64, se: f64, k: f64) {
    assert!((got - want).abs() <= k * se, "{label}: {got} vs {want} (±{k}·{se})");
}

#[test]
fn circulant_brownian_endpoint_variance() {
    let paths = circulant_paths(0.5, 1 << 16, 10_000, 1);
    let x1: Vec<f64> = paths.iter().map(|p| p.values()[p.n()]).collect();
    let (var, se) = second_moment(&x1, &x1, 1.0, 1.0, 1.0);
    assert_within("Var(X_1)", var, 1.0, se, 4.0);
}

#[test]
fn circulant_lag_one_correlation() {
    let rho = fgn_autocovariance(h(0.7), 1);
    assert!((rho - 0.3195079107728943).abs() < 1e-14);
    let paths = circulant_paths(0.7, 64, 10_000, 2);
    let (u0, u1): (Vec<f64>, Vec<f64>) = paths
        .iter()
        .map(|p| {
            let u = unit_increments(p);
            (u[0], u[1])
        })
        .unzip();
    let r = u0.len() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / r;
    let (m0, m1) = (mean(&u0), mean(&u1));
    let cov = u0.iter().zip(&u1).map(|(a, b)| (a - m0) * (b - m1)).sum::<f64>() / r;
    let v0 = u0.iter().map(|a| (a - m0).powi(2)).sum::<f64>() / r;
    let v1 = u1.iter().map(|b| (b - m1).powi(2)).sum::<f64>() / r;
    let corr = cov / (v0 * v1).sqrt();
    assert_within("lag-1 correlation", corr, rho, (1.0 - rho * rho) / r.sqrt(), 4.0);
}

#[test]
fn circulant_brownian_increments_uncorrelated() {
    let paths = circulant_paths(0.5, 256, 10_000, 3);
    let incs: Vec<Vec<f64>> = paths.iter().map(unit_increments).collect();
    for lag in 1..=5 {
        let (a, b): (Vec<f64>, Vec<f64>) = incs.iter().map(|u| (u[10], u[10 + lag])).unzip();
        let (m, se) = second_moment(&a, &b, 1.0, 1.0, 0.0);
        assert_within(&format!("lag {lag}"), m, 0.0, se, 4.0);
    }
}

#[test]
fn durbin_levinson_autocovariance() {
    for hurst in [0.5, 0.3] {
        let incs: Vec<Vec<f64>> = (0..10_000u64)
            .map(|s| unit_increments(&generate_durbin_levinson(h(hurst), 256, 1000 + s).unwrap()))
            .collect();
        for lag in 0..=5 {
            let gamma = fgn_autocovariance(h(hurst), lag as i64);
            // start mid-sequence so the check covers late recursion steps too
            let (a, b): (Vec<f64>, Vec<f64>) = incs.iter().map(|u| (u[100], u[100 + lag])).unzip();
            let (m, se) = second_moment(&a, &b, 1.0, 1.0, gamma);
            assert_within(&format!("H={hurst} lag {lag}"), m, gamma, se, 4.0);
        }
    }
}

#[test]
fn cholesky_midpoint_variance() {
    let oracle = CholeskyOracle::new(h(0.75), 128).unwrap();
    let x: Vec<f64> = (0..10_000u64).map(|s| oracle.sample(s).values()[64]).collect();
    let want = 0.5f64.powf(1.5);
    assert!((want - 0.35355339).abs() < 1e-8);
    let (var, se) = second_moment(&x, &x, want, want, want);
    assert_within("Var(X_1/2)", var, want, se, 4.0);
}

#[test]
fn variance_grows_as_t_to_the_2h() {
    let hurst = 0.3;
    let n = 256;
    let dl: Vec<FbmPath> = (0..10_000u64).map(|s| generate_durbin_levinson(h(hurst), n, 50_000 + s).unwrap()).collect();
    let circ = circulant_paths(hurst, n, 10_000, 7);
    for (name, paths) in [("durbin-levinson", &dl), ("circulant", &circ)] {
        for i in [1, 17, 128, 256] {
            let t = i as f64 / n as f64;
            let want = fbm_covariance(h(hurst), t, t);
            let x: Vec<f64> = paths.iter().map(|p| p.values()[i]).collect();
            let (var, se) = second_moment(&x, &x, want, want, want);
            assert_within(&format!("{name} Var(X_{t})"), var, want, se, 4.0);
        }
    }
}
