use alloc::vec::Vec;

use super::linalg::{eigh, CMatrix};
use super::{state_vector, DensityMatrix};
use crate::math::sqrt;
use crate::modes::TwoPhotonState;
use crate::{Error, Result};

const PURE_TOL: f64 = 1e-10;

/// Uhlmann fidelity `[Tr √(√σ ρ √σ)]²` with `σ = target`. A rank-one
/// target reduces to `⟨ψ|ρ|ψ⟩`.
pub fn fidelity(rho: &DensityMatrix, target: &DensityMatrix) -> Result<f64> {
    if rho.labels() != target.labels() {
        return Err(Error::DimensionMismatch { expected: target.dim(), actual: rho.dim() });
    }
    rho.validate()?;
    target.validate()?;
    let (vals, vecs) = eigh(target.matrix());
    let top = vals[vals.len() - 1];
    if (top - 1.0).abs() < PURE_TOL {
        let psi = vecs.column(vals.len() - 1);
        return Ok(rho.expectation(&psi).clamp(0.0, 1.0));
    }
    let roots: Vec<f64> = vals.iter().map(|&v| sqrt(v.max(0.0))).collect();
    let sqrt_sigma = CMatrix::from_eigen(&roots, &vecs);
    let m = sqrt_sigma.mul(rho.matrix()).mul(&sqrt_sigma);
    let (mv, _) = eigh(&m);
    let tr: f64 = mv.iter().map(|&v| sqrt(v.max(0.0))).sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

/// Largest `k ∈ 1..=d` with `F > (k − 1)/d`.
pub fn dimension_witness(f: f64, d: usize) -> usize {
    (1..=d).rev().find(|&k| f > (k - 1) as f64 / d as f64).unwrap_or(1)
}

/// `M[i][j] = ⟨ψ_j|ρ_i|ψ_j⟩`.
pub fn overlap_matrix(reconstructed: &[DensityMatrix], targets: &[TwoPhotonState]) -> Result<Vec<Vec<f64>>> {
    if reconstructed.len() != targets.len() {
        return Err(Error::DimensionMismatch { expected: targets.len(), actual: reconstructed.len() });
    }
    reconstructed
        .iter()
        .map(|rho| {
            targets
                .iter()
                .map(|t| {
                    let psi = state_vector(t, rho.labels())?;
                    let n: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
                    if n == 0.0 {
                        return Err(Error::ZeroNorm);
                    }
                    Ok(rho.expectation(&psi) / n)
                })
                .collect()
        })
        .collect()
}
