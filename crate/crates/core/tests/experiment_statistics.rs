//! Monte Carlo experiments against the Brownian (H = ½) closed forms, plus the
//! reproducibility and coherence properties of the harness.

use std::f64::consts::{FRAC_2_PI, SQRT_2};

use fbm_records::experiments::{
    estimate_argmax_prob, estimate_record_interval_prob, estimate_sup_tail, estimate_survival_prob,
    run_dimension_sweep, ExperimentConfig,
};
use fbm_records::{normal_tail, Error, HurstParameter};

fn h(x: f64) -> HurstParameter {
    HurstParameter::new(x).unwrap()
}

/// Lévy's arcsine law: `P(argmax ≤ x)` for Brownian motion on [0, 1].
fn arcsine_cdf(x: f64) -> f64 {
    FRAC_2_PI * x.sqrt().asin()
}

fn close(label: &str, got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol, "{label}: {got} vs {want} (tol {tol})");
}

#[test]
fn closed_form_references() {
    close("arcsine(1/4)", arcsine_cdf(0.25), 1.0 / 3.0, 1e-15);
    close("arcsine(1/2)", arcsine_cdf(0.5), 0.5, 1e-15);
    close("2Ψ(3)", 2.0 * normal_tail(3.0), 0.0026997960632601890, 1e-15);
    close("erf(0.1/√2)", libm::erf(0.1 / SQRT_2), 0.07965567455405796, 1e-15);
}

#[test]
fn record_in_last_quarter_matches_arcsine() {
    let cfg = ExperimentConfig::new(h(0.5), 1 << 12, 20_000, 11).with_eps_exps(vec![2, 3, 4, 5]).with_anchor(0.75);
    let report = estimate_record_interval_prob(&cfg, 0).unwrap();
    let p = &report.points[0];
    assert_eq!(p.param, 0.25);
    close("P[Rec ∩ [3/4, 1]]", p.p_hat, 1.0 / 3.0, (4.0 * p.stderr).max(0.005));
    let exp = report.exponent.unwrap();
    assert_eq!(exp.target, 0.5);
}

#[test]
fn argmax_half_by_symmetry_and_cross_coherence() {
    let base = ExperimentConfig::new(h(0.5), 1 << 12, 20_000, 12);
    let argmax = estimate_argmax_prob(&base.clone().with_eps_exps(vec![1, 2, 3, 4]), 0).unwrap();
    let half = &argmax.points[0];
    close("P[argmax ≤ 1/2]", half.p_hat, 0.5, 4.0 * half.stderr);

    // Record in [1 − ε, 1] ⇔ argmax in [1 − ε, 1]; time reversal maps it to argmax ≤ ε.
    let rec = estimate_record_interval_prob(&base.with_eps_exps(vec![2, 3, 4, 5]).with_anchor(0.75), 0).unwrap();
    let (a, b) = (&argmax.points[1], &rec.points[0]);
    assert_eq!(a.param, b.param);
    let combined = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    close("reversal coherence", a.p_hat, b.p_hat, 3.0 * combined);
}

#[test]
fn survival_against_reflection_principle() {
    let cfg = ExperimentConfig::new(h(0.5), 1 << 14, 20_000, 13).with_thresholds(vec![0.05, 0.1, 0.2, 0.4, 10.0]);
    let report = estimate_survival_prob(&cfg, 0).unwrap();
    for p in &report.points[..4] {
        let want = libm::erf(p.param / SQRT_2);
        // sampled max ≤ true max: p̂ sits slightly above the continuous value
        close(&format!("P[sup ≤ {}]", p.param), p.p_hat, want, (4.0 * p.stderr).max(0.008));
        assert!(p.p_hat >= want - 4.0 * p.stderr);
    }
    assert_eq!(report.points[4].p_hat, 1.0);
    let exp = report.exponent.unwrap();
    assert_eq!(exp.target, 1.0);
    assert_eq!(exp.points_used, 5);
}

#[test]
fn sup_tail_against_reflection_principle() {
    let cfg = ExperimentConfig::new(h(0.5), 1 << 10, 200_000, 14).with_thresholds(vec![2.0, 2.5, 3.0]);
    let report = estimate_sup_tail(&cfg, 0).unwrap();
    for p in &report.points {
        let want = 2.0 * normal_tail(p.param);
        // discretization lowers the exceedance rate by a few percent at n = 2^10
        close(&format!("P[sup > {}]", p.param), p.p_hat, want, 4.0 * p.stderr + 0.1 * want);
        let ratio = p.ratio.unwrap();
        close("ratio", ratio, p.p_hat / (p.param.powi(2) * normal_tail(p.param)), 1e-12);
    }
    assert!(report.exponent.is_none());
}

#[test]
fn reports_independent_of_worker_count() {
    let cfgs = [
        ExperimentConfig::new(h(0.4), 1 << 8, 3001, 5).with_eps_exps(vec![1, 2, 3, 4]),
        ExperimentConfig::new(h(0.6), 1 << 8, 3000, 6).with_thresholds(vec![0.5, 1.0, 1.5, 2.0]),
    ];
    for workers in [1, 2, 3, 4] {
        let a = estimate_argmax_prob(&cfgs[0], workers).unwrap();
        let b = estimate_argmax_prob(&cfgs[0], 1).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let s = estimate_survival_prob(&cfgs[1], workers).unwrap();
        let t = estimate_survival_prob(&cfgs[1], 1).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), serde_json::to_string(&t).unwrap());
    }
    let sweep = ExperimentConfig::new(h(0.5), 1 << 12, 21, 7).with_hurst_grid(vec![h(0.3), h(0.7)]);
    let one = serde_json::to_vec(&run_dimension_sweep(&sweep, 1).unwrap()).unwrap();
    let many = serde_json::to_vec(&run_dimension_sweep(&sweep, 3).unwrap()).unwrap();
    assert_eq!(one, many);
}

#[test]
fn insufficient_hits_reported() {
    let cfg = ExperimentConfig::new(h(0.5), 1 << 10, 300, 1).with_thresholds(vec![0.001, 0.002, 0.004, 0.008]);
    assert!(matches!(estimate_survival_prob(&cfg, 0), Err(Error::InsufficientHits(_))));
}
