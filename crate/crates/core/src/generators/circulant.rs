use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{FbmPath, GeneratorId};
use crate::error::{Error, Result};
use crate::fgn::fgn_autocovariance;
use crate::hurst::HurstParameter;
use crate::rng::{fill_standard_normal, path_rng};

/// Relative tolerance below which negative circulant eigenvalues count as round-off.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-8;

/// Circulant-embedding (Davies–Harte / Wood–Chan) sampler for a fixed `(H, n)`.
///
/// The length-`n` fGn autocovariance is embedded in a circulant of size `2n`, whose
/// eigenvalues are computed once. Each draw multiplies `2n` complex Gaussians by
/// `√(λ_k / 2n)` and transforms; the real and imaginary parts are two independent
/// exact fGn samples.
#[derive(Clone)]
pub struct CirculantGenerator {
    hurst: HurstParameter,
    n: usize,
    sqrt_eigenvalues: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CirculantGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantGenerator").field("hurst", &self.hurst).field("n", &self.n).finish()
    }
}

impl CirculantGenerator {
    pub fn new(hurst: HurstParameter, n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "circulant generator needs a power-of-two n >= 2, got {n}"
            )));
        }
        let m = 2 * n;
        let mut row: Vec<Complex64> = Vec::with_capacity(m);
        row.extend((0..=n as i64).map(|k| Complex64::new(fgn_autocovariance(hurst, k), 0.0)));
        row.extend((1..n as i64).rev().map(|k| Complex64::new(fgn_autocovariance(hurst, k), 0.0)));

        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut row);

        let eigenvalues: Vec<f64> = row.iter().map(|c| c.re).collect();
        let max = eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tolerance = EIGENVALUE_TOLERANCE * max.abs();
        let sqrt_eigenvalues = eigenvalues
            .into_iter()
            .map(|lambda| {
                if lambda < -tolerance {
                    Err(Error::EmbeddingNotPsd { eigenvalue: lambda, tolerance })
                } else {
                    Ok((lambda.max(0.0) / m as f64).sqrt())
                }
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self { hurst, n, sqrt_eigenvalues, fft })
    }

    pub fn hurst(&self) -> HurstParameter {
        self.hurst
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Scratch buffers for repeated sampling at this size.
    pub fn workspace(&self) -> CirculantWorkspace {
        let m = 2 * self.n;
        CirculantWorkspace {
            normals: vec![0.0; 2 * m],
            buf: vec![Complex64::default(); m],
            scratch: vec![Complex64::default(); self.fft.get_inplace_scratch_len()],
        }
    }

    /// Runs one synthesis; the first `n` entries of `ws.buf` then hold two independent
    /// fGn sequences in their real and imaginary parts.
    fn synthesize(&self, seed: u64, ws: &mut CirculantWorkspace) {
        fill_standard_normal(&mut path_rng(seed), &mut ws.normals);
        for ((c, z), &s) in ws.buf.iter_mut().zip(ws.normals.chunks_exact(2)).zip(&self.sqrt_eigenvalues) {
            *c = Complex64::new(s * z[0], s * z[1]);
        }
        self.fft.process_with_scratch(&mut ws.buf, &mut ws.scratch);
    }

    /// Two independent fGn increment sequences of length `n` from one transform.
    pub fn sample_increment_pair(&self, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut ws = self.workspace();
        self.synthesize(seed, &mut ws);
        ws.buf[..self.n].iter().map(|c| (c.re, c.im)).unzip()
    }

    /// Overwrites `first` and `second` with the pair drawn from `seed`, reusing all buffers.
    pub fn sample_pair_into(&self, seed: u64, ws: &mut CirculantWorkspace, first: &mut FbmPath, second: &mut FbmPath) {
        self.synthesize(seed, ws);
        let inc = &ws.buf[..self.n];
        let id = GeneratorId::CirculantEmbedding;
        first.refill(inc.iter().map(|c| c.re), self.hurst, seed, id);
        second.refill(inc.iter().map(|c| c.im), self.hurst, seed, id);
    }

    /// Two independent paths, both tagged with `seed`.
    pub fn sample_pair(&self, seed: u64) -> (FbmPath, FbmPath) {
        let mut ws = self.workspace();
        let mut first = FbmPath::empty(self.hurst);
        let mut second = FbmPath::empty(self.hurst);
        self.sample_pair_into(seed, &mut ws, &mut first, &mut second);
        (first, second)
    }

    /// The real-part path of [`sample_pair`](Self::sample_pair).
    pub fn sample(&self, seed: u64) -> FbmPath {
        let (re, _) = self.sample_increment_pair(seed);
        FbmPath::from_increments(&re, self.hurst, seed, GeneratorId::CirculantEmbedding)
    }
}

/// Reusable buffers for [`CirculantGenerator::sample_pair_into`].
#[derive(Debug, Clone)]
pub struct CirculantWorkspace {
    normals: Vec<f64>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

pub fn generate_circulant(h: HurstParameter, n: usize, seed: u64) -> Result<FbmPath> {
    Ok(CirculantGenerator::new(h, n)?.sample(seed))
}

pub fn generate_circulant_pair(h: HurstParameter, n: usize, seed: u64) -> Result<(FbmPath, FbmPath)> {
    Ok(CirculantGenerator::new(h, n)?.sample_pair(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(x: f64) -> HurstParameter {
        HurstParameter::new(x).unwrap()
    }

    #[test]
    fn rejects_bad_sizes() {
        for n in [0, 1, 3, 100] {
            assert!(matches!(CirculantGenerator::new(h(0.5), n), Err(Error::InvalidArgument(_))));
        }
    }

    #[test]
    fn eigenvalues_nonnegative_across_h() {
        for x in [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            for n in [2, 16, 1024] {
                let g = CirculantGenerator::new(h(x), n).unwrap();
                assert!(g.sqrt_eigenvalues.iter().all(|s| s.is_finite() && *s >= 0.0));
            }
        }
    }

    #[test]
    fn eigenvalues_reconstruct_autocovariance() {
        // Inverse DFT of λ/m recovers the first row of the circulant.
        let n = 8;
        let g = CirculantGenerator::new(h(0.7), n).unwrap();
        let m = 2 * n;
        for j in 0..=n {
            let c: f64 = g
                .sqrt_eigenvalues
                .iter()
                .enumerate()
                .map(|(k, s)| s * s * (2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64).cos())
                .sum();
            assert!((c - fgn_autocovariance(h(0.7), j as i64)).abs() < 1e-12, "lag {j}");
        }
    }

    #[test]
    fn workspace_reuse_matches_fresh_sampling() {
        let g = CirculantGenerator::new(h(0.65), 64).unwrap();
        let mut ws = g.workspace();
        let mut a = FbmPath::empty(g.hurst());
        let mut b = FbmPath::empty(g.hurst());
        for seed in [3, 99, 3] {
            g.sample_pair_into(seed, &mut ws, &mut a, &mut b);
            let (fa, fb) = g.sample_pair(seed);
            assert_eq!(a, fa);
            assert_eq!(b, fb);
        }
    }

    #[test]
    fn sample_is_real_part_of_pair() {
        let g = CirculantGenerator::new(h(0.4), 32).unwrap();
        let (a, b) = g.sample_pair(5);
        assert_eq!(g.sample(5), a);
        assert_ne!(a.values(), b.values());
        assert_eq!(generate_circulant(h(0.4), 32, 5).unwrap(), a);
    }
}
