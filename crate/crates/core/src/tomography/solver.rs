//! Least-squares state reconstruction by projected gradient descent.
//!
//! Minimizes `J(ρ) = Σ_s (⟨w_s|ρ|w_s⟩ − f_s)²` over density matrices. Each
//! step moves against the gradient `2 Σ_s r_s |w_s⟩⟨w_s|` with step `1/L`,
//! `L = 2 λ_max(T)` for `T(X) = Σ_s ⟨w_s|X|w_s⟩ |w_s⟩⟨w_s|`, then projects
//! back by clipping the spectrum onto the probability simplex.

use alloc::vec::Vec;

use super::linalg::{eigh, project_simplex, CMatrix};
use super::{CountTable, DensityMatrix, ProjectorSet};
use crate::{Error, Result, C64};

const POWER_ITERATIONS: usize = 100;
const POWER_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Stop once the objective changes by less than this between steps.
    pub tolerance: f64,
    /// Keep the objective after every step in [`Reconstruction::history`].
    pub record_history: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_iterations: 20_000, tolerance: 1e-12, record_history: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    /// Final iterate; the best one seen when `converged` is false.
    pub rho: DensityMatrix,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub lipschitz: f64,
    /// Objective at the start and after each step, when requested.
    pub history: Vec<f64>,
}

fn frequencies_in_order(counts: &CountTable, set: &ProjectorSet) -> Result<Vec<f64>> {
    let n = set.per_photon().len();
    let mut f = alloc::vec![None; n * n];
    for (r, value) in counts.records.iter().zip(counts.frequencies()) {
        if r.u < n && r.v < n {
            f[r.u * n + r.v] = Some(value);
        }
    }
    f.iter()
        .enumerate()
        .map(|(i, x)| x.ok_or(Error::MissingSetting { u: i / n, v: i % n }))
        .collect()
}

struct Problem {
    kets: Vec<Vec<C64>>,
    freqs: Vec<f64>,
    dim: usize,
}

impl Problem {
    fn residuals(&self, rho: &CMatrix) -> Vec<f64> {
        self.kets.iter().zip(&self.freqs).map(|(w, f)| rho.quad(w).re - f).collect()
    }

    fn objective(&self, rho: &CMatrix) -> f64 {
        self.residuals(rho).iter().map(|r| r * r).sum()
    }

    /// `Σ_s c_s |w_s⟩⟨w_s|`
    fn weighted_sum(&self, coeffs: &[f64]) -> CMatrix {
        let n = self.dim;
        let mut data = alloc::vec![C64::new(0.0, 0.0); n * n];
        for (w, &c) in self.kets.iter().zip(coeffs) {
            if c == 0.0 {
                continue;
            }
            for i in 0..n {
                if w[i] == C64::new(0.0, 0.0) {
                    continue;
                }
                let wi = w[i] * c;
                for j in 0..n {
                    data[i * n + j] += wi * w[j].conj();
                }
            }
        }
        CMatrix::from_row_major(data).expect("square by construction")
    }

    fn apply_t(&self, x: &CMatrix) -> CMatrix {
        let coeffs: Vec<f64> = self.kets.iter().map(|w| x.quad(w).re).collect();
        self.weighted_sum(&coeffs)
    }

    fn largest_eigenvalue(&self) -> f64 {
        let mut x = CMatrix::identity(self.dim);
        let mut lambda = 0.0;
        for _ in 0..POWER_ITERATIONS {
            let tx = self.apply_t(&x);
            let next = x.frobenius_dot(&tx) / x.frobenius_dot(&x);
            let norm = crate::math::sqrt(tx.frobenius_dot(&tx));
            if norm == 0.0 {
                return 0.0;
            }
            x = tx.scaled(1.0 / norm);
            let done = (next - lambda).abs() <= POWER_TOL * next.abs();
            lambda = next;
            if done {
                break;
            }
        }
        lambda
    }
}

fn project(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(m);
    CMatrix::from_eigen(&project_simplex(&vals), &vecs).hermitian_part()
}

/// Reconstructs `ρ` from a complete count table, starting at `I/d²`.
pub fn reconstruct(counts: &CountTable, set: &ProjectorSet, opts: &SolverOptions) -> Result<Reconstruction> {
    if counts.labels != set.labels() {
        return Err(Error::DimensionMismatch { expected: set.d(), actual: counts.labels.len() });
    }
    let dim = set.d() * set.d();
    let problem = Problem { kets: set.joint_kets(), freqs: frequencies_in_order(counts, set)?, dim };
    let lipschitz = 2.0 * problem.largest_eigenvalue();
    let mut rho = CMatrix::identity(dim).scaled(1.0 / dim as f64);
    let mut objective = problem.objective(&rho);
    let mut history = Vec::new();
    if opts.record_history {
        history.push(objective);
    }
    let mut converged = false;
    let mut iterations = 0;
    if lipschitz > 0.0 {
        while iterations < opts.max_iterations {
            iterations += 1;
            let residuals = problem.residuals(&rho);
            let twice: Vec<f64> = residuals.iter().map(|r| 2.0 * r).collect();
            let grad = problem.weighted_sum(&twice);
            let next = project(&rho.add_scaled(&grad, -1.0 / lipschitz));
            let next_objective = problem.objective(&next);
            if opts.record_history {
                history.push(next_objective);
            }
            let change = (objective - next_objective).abs();
            if next_objective <= objective {
                rho = next;
                objective = next_objective;
            }
            if change < opts.tolerance {
                converged = true;
                break;
            }
        }
    } else {
        converged = true;
    }
    Ok(Reconstruction {
        rho: DensityMatrix::from_parts(set.labels().to_vec(), rho),
        iterations,
        converged,
        objective,
        lipschitz,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{eq1_state, BellBasisConfig, BellId};
    use crate::tomography::{build_projector_set, fidelity, simulate_counts, NoiseModel};

    const LABELS: [i32; 4] = [-3, -1, 1, 3];

    fn pure(f: u8, m: u8, n: u8) -> DensityMatrix {
        let psi = eq1_state(BellId::new(f, m, n).unwrap(), &BellBasisConfig::default());
        DensityMatrix::from_pure(&psi, &LABELS).unwrap()
    }

    #[test]
    fn noiseless_counts_recover_the_state() {
        let set = build_projector_set(&LABELS).unwrap();
        let target = pure(1, 1, 1);
        let counts = simulate_counts(&target, &set, &NoiseModel::default()).unwrap();
        let opts = SolverOptions { record_history: true, ..SolverOptions::default() };
        let rec = reconstruct(&counts, &set, &opts).unwrap();
        assert!(rec.converged);
        assert!(rec.rho.validate().is_ok());
        assert!(fidelity(&rec.rho, &target).unwrap() > 0.999);
        for w in rec.history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-18, "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn maximally_mixed_is_a_fixed_point() {
        let set = build_projector_set(&LABELS).unwrap();
        let mixed = DensityMatrix::maximally_mixed(&LABELS).unwrap();
        let counts = simulate_counts(&mixed, &set, &NoiseModel::default()).unwrap();
        let rec = reconstruct(&counts, &set, &SolverOptions::default()).unwrap();
        assert!(rec.rho.matrix().max_abs_diff(mixed.matrix()) < 1e-6);
    }

    #[test]
    fn white_noise_fidelity_matches_closed_form() {
        let set = build_projector_set(&LABELS).unwrap();
        let target = pure(2, 0, 1);
        let p = 0.7867;
        let noise = NoiseModel { white_noise_p: p, ..NoiseModel::default() };
        let counts = simulate_counts(&target, &set, &noise).unwrap();
        let rec = reconstruct(&counts, &set, &SolverOptions::default()).unwrap();
        let f = fidelity(&rec.rho, &target).unwrap();
        assert!((f - (p + (1.0 - p) / 16.0)).abs() < 1e-3, "{f}");
    }

    #[test]
    fn missing_settings_are_rejected() {
        let set = build_projector_set(&[1, 3]).unwrap();
        let rho = DensityMatrix::maximally_mixed(&[1, 3]).unwrap();
        let mut counts = simulate_counts(&rho, &set, &NoiseModel::default()).unwrap();
        counts.records.retain(|r| !(r.u == 1 && r.v == 2));
        assert_eq!(
            reconstruct(&counts, &set, &SolverOptions::default()),
            Err(Error::MissingSetting { u: 1, v: 2 })
        );
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let set = build_projector_set(&LABELS).unwrap();
        let counts = simulate_counts(&pure(1, 0, 0), &set, &NoiseModel::default()).unwrap();
        let opts = SolverOptions { max_iterations: 3, ..SolverOptions::default() };
        let rec = reconstruct(&counts, &set, &opts).unwrap();
        assert!(!rec.converged);
        assert_eq!(rec.iterations, 3);
    }
}
