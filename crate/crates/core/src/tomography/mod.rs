//! Simulated two-qudit OAM tomography.
//!
//! Joint density matrices live on ordered OAM pairs `|ℓ_a⟩|ℓ_b⟩` in
//! row-major order over the sorted label list, so for labels
//! `(−3, −1, 1, 3)` the basis reads `|−3⟩|−3⟩, |−3⟩|−1⟩, …, |3⟩|3⟩`.

mod counts;
mod fidelity;
pub mod linalg;
mod projectors;
mod solver;

use alloc::vec::Vec;

pub use counts::{simulate_counts, CountRecord, CountTable, NoiseModel};
pub use fidelity::{dimension_witness, fidelity, overlap_matrix};
pub use linalg::CMatrix;
pub use projectors::{build_projector_set, ProjectorSet};
pub use solver::{reconstruct, Reconstruction, SolverOptions};

use crate::modes::TwoPhotonState;
use crate::{Error, Result, C64};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// A two-qudit density matrix over the ordered pairs of `labels`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<i32>,
    matrix: CMatrix,
}

fn sorted_labels(labels: &[i32]) -> Result<Vec<i32>> {
    let mut l = labels.to_vec();
    l.sort_unstable();
    if l.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateLabels);
    }
    Ok(l)
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(labels: &[i32], matrix: CMatrix) -> Result<Self> {
        let labels = sorted_labels(labels)?;
        let dim = labels.len() * labels.len();
        if matrix.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: matrix.dim() });
        }
        let rho = DensityMatrix { labels, matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Skips validation; used for solver iterates that are valid by construction.
    pub(crate) fn from_parts(labels: Vec<i32>, matrix: CMatrix) -> Self {
        DensityMatrix { labels, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrix.max_abs_diff(&self.matrix.adjoint()) > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix("not Hermitian"));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix("trace differs from one"));
        }
        let (vals, _) = linalg::eigh(&self.matrix);
        if vals.first().is_some_and(|&v| v < -PSD_TOL) {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(())
    }

    /// `|ψ⟩⟨ψ|` from a state vector in pair order.
    pub fn from_vector(labels: &[i32], psi: &[C64]) -> Result<Self> {
        let labels = sorted_labels(labels)?;
        let dim = labels.len() * labels.len();
        if psi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: psi.len() });
        }
        let n: f64 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / crate::math::sqrt(n);
        let v: Vec<C64> = psi.iter().map(|c| c * s).collect();
        Ok(DensityMatrix { labels, matrix: CMatrix::outer(&v) })
    }

    /// `|ψ⟩⟨ψ|` for an OAM-only two-photon state: each slot must sit in a
    /// single path and polarization, with OAM values drawn from `labels`.
    pub fn from_pure(state: &TwoPhotonState, labels: &[i32]) -> Result<Self> {
        Self::from_vector(labels, &state_vector(state, labels)?)
    }

    /// `I / d²`
    pub fn maximally_mixed(labels: &[i32]) -> Result<Self> {
        let labels = sorted_labels(labels)?;
        let dim = labels.len() * labels.len();
        Ok(DensityMatrix { labels, matrix: CMatrix::identity(dim).scaled(1.0 / dim as f64) })
    }

    /// `p ρ + (1 − p) I/d²`
    pub fn with_white_noise(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidNoiseWeight(p));
        }
        let dim = self.dim();
        let mixed = CMatrix::identity(dim).scaled((1.0 - p) / dim as f64);
        Ok(DensityMatrix { labels: self.labels.clone(), matrix: mixed.add_scaled(&self.matrix, p) })
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    /// `d²`
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `⟨ψ|ρ|ψ⟩` for a vector in pair order.
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        self.matrix.quad(psi).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigh(&self.matrix).0
    }

    /// Ordered pair labels of the basis.
    pub fn basis(&self) -> Vec<(i32, i32)> {
        self.labels
            .iter()
            .flat_map(|&a| self.labels.iter().map(move |&b| (a, b)))
            .collect()
    }
}

/// Amplitudes of `state` in pair order over sorted `labels`.
pub fn state_vector(state: &TwoPhotonState, labels: &[i32]) -> Result<Vec<C64>> {
    let labels = sorted_labels(labels)?;
    let d = labels.len();
    let mut psi = alloc::vec![C64::new(0.0, 0.0); d * d];
    let mut frame = None;
    for ((a, b), c) in state.iter() {
        let key = (a.path, a.pol, b.path, b.pol);
        if frame.is_some_and(|f| f != key) {
            return Err(Error::NotOamOnly);
        }
        frame = Some(key);
        let i = labels.binary_search(&a.oam).map_err(|_| Error::NotOamOnly)?;
        let j = labels.binary_search(&b.oam).map_err(|_| Error::NotOamOnly)?;
        psi[i * d + j] += c;
    }
    Ok(psi)
}
