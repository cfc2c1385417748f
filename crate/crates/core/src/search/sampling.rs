//! Haar-random pure states and GUE observables.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::rng::{stream_rng, Stream};
use crate::error::{Error, Result};
use crate::linalg::{c, Complex, ComplexMatrix, ComplexVector};
use crate::quantum::{Observable, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    dimension: usize,
    seed: u64,
    count: usize,
}

impl SampleConfig {
    pub fn new(dimension: usize, seed: u64, count: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::DimensionTooSmall {
                min: 2,
                actual: dimension,
            });
        }
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        Ok(Self {
            dimension,
            seed,
            count,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized vector of independent standard complex Gaussians.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v = ComplexVector::from_entries_unchecked((0..dim).map(|_| complex_gaussian(rng)).collect());
        if let Ok(state) = PureState::from_unnormalized(v) {
            return state;
        }
    }
}

/// `(G + G^†) / 2` for a matrix `G` of independent standard complex
/// Gaussians. The upper triangle is mirrored, so the result is exactly
/// Hermitian.
pub fn gue_observable<R: Rng + ?Sized>(dim: usize, rng: &mut R, label: &str) -> Observable {
    let g: Vec<Complex> = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    let mut h = vec![Complex::default(); dim * dim];
    for i in 0..dim {
        h[i * dim + i] = c(g[i * dim + i].re, 0.0);
        for j in (i + 1)..dim {
            let z = 0.5 * (g[i * dim + j] + g[j * dim + i].conj());
            h[i * dim + j] = z;
            h[j * dim + i] = z.conj();
        }
    }
    let matrix = ComplexMatrix::new(dim, h).expect("finite Gaussian draws");
    Observable::new(label, matrix).expect("Hermitian by construction")
}

/// State `k` comes from stream `(HaarState, k)`.
pub fn sample_haar_state(config: &SampleConfig) -> Vec<PureState> {
    (0..config.count)
        .map(|k| haar_state(config.dimension, &mut stream_rng(config.seed, Stream::HaarState, k as u64)))
        .collect()
}

/// Observable `k` comes from stream `(GueObservable, k)`.
pub fn sample_gue_observable(config: &SampleConfig) -> Vec<Observable> {
    (0..config.count)
        .map(|k| {
            let mut rng = stream_rng(config.seed, Stream::GueObservable, k as u64);
            gue_observable(config.dimension, &mut rng, &format!("gue{k}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SampleConfig::new(1, 0, 1).is_err());
        assert!(SampleConfig::new(2, 0, 0).is_err());
    }

    #[test]
    fn haar_is_deterministic_and_normalized() {
        let cfg = SampleConfig::new(2, 42, 3).unwrap();
        let a = sample_haar_state(&cfg);
        let b = sample_haar_state(&cfg);
        assert_eq!(a, b);
        for s in &a {
            assert!((s.vector().norm() - 1.0).abs() <= 1e-12);
        }
        assert_ne!(a[0], a[1]);
        // prefix property
        let longer = sample_haar_state(&SampleConfig::new(2, 42, 5).unwrap());
        assert_eq!(&longer[..3], &a[..]);
    }

    #[test]
    fn haar_first_component_moment() {
        // |<e_1|φ>|² ~ Beta(1, d-1): mean 1/d, variance (d-1)/(d²(d+1)).
        let d = 4.0;
        let n = 10_000;
        let states = sample_haar_state(&SampleConfig::new(4, 2024, n).unwrap());
        let mean = states.iter().map(|s| s.vector().entries()[0].norm_sqr()).sum::<f64>() / n as f64;
        let sigma = ((d - 1.0) / (d * d * (d + 1.0)) / n as f64).sqrt();
        assert!((mean - 0.25).abs() <= 3.0 * sigma, "mean {mean}, 3σ {}", 3.0 * sigma);
    }

    #[test]
    fn gue_is_exactly_hermitian() {
        for obs in sample_gue_observable(&SampleConfig::new(5, 1, 20).unwrap()) {
            assert_eq!(obs.matrix().hermiticity_residual(), 0.0);
            assert_eq!(obs.matrix(), &obs.matrix().adjoint());
        }
    }

    #[test]
    fn gue_diagonal_mean_is_zero() {
        // Diagonal entries are N(0, 1).
        let n = 1000;
        let obs = sample_gue_observable(&SampleConfig::new(8, 3, n).unwrap());
        let total: f64 = obs.iter().map(|o| o.matrix().trace().re).sum();
        let samples = (8 * n) as f64;
        let mean = total / samples;
        assert!(mean.abs() <= 3.0 / samples.sqrt(), "mean {mean}");
    }

    #[test]
    fn gue_seeds_differ() {
        let a = sample_gue_observable(&SampleConfig::new(3, 1, 1).unwrap());
        let b = sample_gue_observable(&SampleConfig::new(3, 2, 1).unwrap());
        assert_ne!(a[0].matrix(), b[0].matrix());
    }
}
