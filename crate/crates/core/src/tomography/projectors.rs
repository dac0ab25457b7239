use alloc::vec::Vec;

use super::linalg::{kron, rank, CMatrix};
use crate::math::{cis, FRAC_1_SQRT_2};
use crate::modes::{Path, Pol, SingleModeLabel, SinglePhotonState};
use crate::{Error, Result, C64};

const RANK_TOL: f64 = 1e-10;

/// Per-photon measurement kets over `labels`; joint settings are all ordered
/// pairs `(u, v)` with `u` on photon 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorSet {
    labels: Vec<i32>,
    per_photon: Vec<Vec<C64>>,
}

/// Basis kets, then `(|a⟩ + e^{iθ}|b⟩)/√2` for every `a < b` and
/// `θ ∈ {0, π/2}`. Labels are sorted; `d` must be 2, 4 or 6.
pub fn build_projector_set(labels: &[i32]) -> Result<ProjectorSet> {
    let d = labels.len();
    if !matches!(d, 2 | 4 | 6) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateLabels);
    }
    let zero = C64::new(0.0, 0.0);
    let mut kets = Vec::new();
    for i in 0..d {
        let mut k = alloc::vec![zero; d];
        k[i] = C64::new(1.0, 0.0);
        kets.push(k);
    }
    for a in 0..d {
        for b in (a + 1)..d {
            for theta in [0.0, core::f64::consts::FRAC_PI_2] {
                let mut k = alloc::vec![zero; d];
                k[a] = C64::new(FRAC_1_SQRT_2, 0.0);
                k[b] = cis(theta) * FRAC_1_SQRT_2;
                kets.push(k);
            }
        }
    }
    let set = ProjectorSet { labels: sorted, per_photon: kets };
    let r = set.single_photon_rank();
    let required = d * d;
    if r < required {
        return Err(Error::RankDeficient { rank: r * r, required: required * required });
    }
    Ok(set)
}

impl ProjectorSet {
    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn d(&self) -> usize {
        self.labels.len()
    }

    pub fn per_photon(&self) -> &[Vec<C64>] {
        &self.per_photon
    }

    pub fn num_settings(&self) -> usize {
        self.per_photon.len() * self.per_photon.len()
    }

    /// `u ⊗ v`
    pub fn joint_ket(&self, u: usize, v: usize) -> Vec<C64> {
        kron(&self.per_photon[u], &self.per_photon[v])
    }

    /// All joint kets in setting order (`u` major).
    pub fn joint_kets(&self) -> Vec<Vec<C64>> {
        let n = self.per_photon.len();
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).map(|(u, v)| self.joint_ket(u, v)).collect()
    }

    /// Per-photon ket as a state at `path` with horizontal polarization.
    pub fn photon_state(&self, index: usize, path: Path) -> SinglePhotonState {
        SinglePhotonState::from_terms(
            self.labels
                .iter()
                .zip(&self.per_photon[index])
                .map(|(&l, &c)| (SingleModeLabel::new(path, Pol::H, l), c)),
        )
    }

    /// Rank of `Π ↦ vec(Π)` over the per-photon projectors.
    pub fn single_photon_rank(&self) -> usize {
        let rows: Vec<Vec<C64>> = self.per_photon.iter().map(|k| CMatrix::outer(k).data().to_vec()).collect();
        rank(&rows, RANK_TOL)
    }

    /// Rank of the joint measurement map; the joint map is a tensor square, so
    /// its rank is the square of the single-photon rank.
    pub fn measurement_rank(&self) -> usize {
        let r = self.single_photon_rank();
        r * r
    }

    /// Rank of the joint map computed directly from the `d⁴`-entry rows.
    pub fn measurement_rank_brute_force(&self) -> usize {
        let rows: Vec<Vec<C64>> = self.joint_kets().iter().map(|k| CMatrix::outer(k).data().to_vec()).collect();
        rank(&rows, RANK_TOL)
    }
}
