use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::{DensityMatrix, ProjectorSet};
use crate::{Error, Result};

/// Imperfections applied before measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    /// Weight `p` of the ideal state in `p ρ + (1 − p) I/d²`.
    pub white_noise_p: f64,
    /// `None` yields exact probabilities.
    pub shots_per_setting: Option<u64>,
    pub rng_seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { white_noise_p: 1.0, shots_per_setting: None, rng_seed: 0 }
    }
}

/// One joint setting `(u, v)` and its observed count or probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountRecord {
    pub u: usize,
    pub v: usize,
    pub value: f64,
}

/// Outcomes for every joint setting of a [`ProjectorSet`].
#[derive(Clone, Debug, PartialEq)]
pub struct CountTable {
    pub labels: Vec<i32>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub records: Vec<CountRecord>,
}

impl CountTable {
    /// Observed relative frequencies: counts divided by shots, or the stored
    /// probabilities when no shots were taken.
    pub fn frequencies(&self) -> Vec<f64> {
        let scale = self.shots.map_or(1.0, |s| 1.0 / s as f64);
        self.records.iter().map(|r| r.value * scale).collect()
    }
}

pub fn simulate_counts(rho: &DensityMatrix, set: &ProjectorSet, noise: &NoiseModel) -> Result<CountTable> {
    if rho.labels() != set.labels() {
        return Err(Error::DimensionMismatch { expected: set.d() * set.d(), actual: rho.dim() });
    }
    if noise.shots_per_setting == Some(0) {
        return Err(Error::InvalidShots);
    }
    let noisy = rho.with_white_noise(noise.white_noise_p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.rng_seed);
    let n = set.per_photon().len();
    let mut records = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let prob = noisy.expectation(&set.joint_ket(u, v)).max(0.0);
            let value = match noise.shots_per_setting {
                None => prob,
                Some(shots) => {
                    let lambda = shots as f64 * prob;
                    if lambda > 0.0 {
                        let dist = Poisson::new(lambda).map_err(|_| Error::InvalidShots)?;
                        dist.sample(&mut rng)
                    } else {
                        0.0
                    }
                }
            };
            records.push(CountRecord { u, v, value });
        }
    }
    Ok(CountTable {
        labels: set.labels().to_vec(),
        shots: noise.shots_per_setting,
        seed: noise.rng_seed,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{eq1_state, BellBasisConfig, BellId};
    use crate::tomography::build_projector_set;

    const LABELS: [i32; 4] = [-3, -1, 1, 3];

    fn setting(set: &ProjectorSet, basis_u: i32, basis_v: i32) -> (usize, usize) {
        let iu = set.labels().iter().position(|&l| l == basis_u).unwrap();
        let iv = set.labels().iter().position(|&l| l == basis_v).unwrap();
        (iu, iv)
    }

    #[test]
    fn pure_state_probability() {
        let set = build_projector_set(&LABELS).unwrap();
        let psi = eq1_state(BellId::new(2, 1, 0).unwrap(), &BellBasisConfig::default());
        let rho = DensityMatrix::from_pure(&psi, &LABELS).unwrap();
        let table = simulate_counts(&rho, &set, &NoiseModel::default()).unwrap();
        let (u, v) = setting(&set, 1, 3);
        let rec = table.records.iter().find(|r| r.u == u && r.v == v).unwrap();
        assert!((rec.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_basis_settings() {
        let set = build_projector_set(&LABELS).unwrap();
        let rho = DensityMatrix::maximally_mixed(&LABELS).unwrap();
        let table = simulate_counts(&rho, &set, &NoiseModel::default()).unwrap();
        for r in table.records.iter().filter(|r| r.u < 4 && r.v < 4) {
            assert!((r.value - 1.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let set = build_projector_set(&LABELS).unwrap();
        let psi = eq1_state(BellId::new(1, 0, 1).unwrap(), &BellBasisConfig::default());
        let rho = DensityMatrix::from_pure(&psi, &LABELS).unwrap();
        let noise = NoiseModel { white_noise_p: 0.9, shots_per_setting: Some(1000), rng_seed: 42 };
        let a = simulate_counts(&rho, &set, &noise).unwrap();
        let b = simulate_counts(&rho, &set, &noise).unwrap();
        assert_eq!(a, b);
        assert!(a.records.iter().all(|r| r.value >= 0.0 && r.value.fract() == 0.0));
        let other = simulate_counts(&rho, &set, &NoiseModel { rng_seed: 43, ..noise }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn argument_checks() {
        let set = build_projector_set(&[1, 3]).unwrap();
        let rho = DensityMatrix::maximally_mixed(&LABELS).unwrap();
        assert!(matches!(
            simulate_counts(&rho, &set, &NoiseModel::default()),
            Err(Error::DimensionMismatch { .. })
        ));
        let set = build_projector_set(&LABELS).unwrap();
        let noise = NoiseModel { shots_per_setting: Some(0), ..NoiseModel::default() };
        assert_eq!(simulate_counts(&rho, &set, &noise), Err(Error::InvalidShots));
    }
}
