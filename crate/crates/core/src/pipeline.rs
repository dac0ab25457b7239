//! Preparation recipes for the sixteen Bell states.
//!
//! A recipe runs: polarization-entangled source → spin-orbit coupler on each
//! arm → optional spiral phase plates → Bell filter → Dove prism on the
//! port-`c` photon → erasure polarizers on both outputs → optional OAM flip
//! on the port-`d` photon.

use alloc::collections::BTreeMap;
use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use core::fmt;
use core::str::FromStr;

use crate::bell::{eq1_state, BellBasisConfig, BellId};
use crate::hom::{bell_filter, DetectorFrame};
use crate::math::FRAC_1_SQRT_2;
use crate::modes::{inner_product, Path, PolKet, SinglePhotonState, TwoPhotonState};
use crate::optics::{apply, apply_both, dove_prism, erasure_axis, oam_flip, polarizer, spin_orbit_coupler, spiral_phase_plate, Arm};
use crate::{Result, C64};

/// Initial polarization-entangled states, `(|XY⟩ + φ|X'Y'⟩)/√2` with the
/// first letter on the signal arm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolBell {
    RlPlusLr,
    RlMinusLr,
    RlPlusILr,
    RlMinusILr,
    RrPlusLl,
    RrMinusLl,
    LrPlusRl,
    LrMinusRl,
}

impl PolBell {
    pub const ALL: [PolBell; 8] = [
        PolBell::RlPlusLr,
        PolBell::RlMinusLr,
        PolBell::RlPlusILr,
        PolBell::RlMinusILr,
        PolBell::RrPlusLl,
        PolBell::RrMinusLl,
        PolBell::LrPlusRl,
        PolBell::LrMinusRl,
    ];

    /// `((X, Y), (X', Y'), φ)`
    pub fn terms(self) -> ((PolKet, PolKet), (PolKet, PolKet), C64) {
        use PolKet::{L, R};
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            PolBell::RlPlusLr => ((R, L), (L, R), one),
            PolBell::RlMinusLr => ((R, L), (L, R), -one),
            PolBell::RlPlusILr => ((R, L), (L, R), i),
            PolBell::RlMinusILr => ((R, L), (L, R), -i),
            PolBell::RrPlusLl => ((R, R), (L, L), one),
            PolBell::RrMinusLl => ((R, R), (L, L), -one),
            PolBell::LrPlusRl => ((L, R), (R, L), one),
            PolBell::LrMinusRl => ((L, R), (R, L), -one),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PolBell::RlPlusLr => "RL+LR",
            PolBell::RlMinusLr => "RL-LR",
            PolBell::RlPlusILr => "RL+iLR",
            PolBell::RlMinusILr => "RL-iLR",
            PolBell::RrPlusLl => "RR+LL",
            PolBell::RrMinusLl => "RR-LL",
            PolBell::LrPlusRl => "LR+RL",
            PolBell::LrMinusRl => "LR-RL",
        }
    }
}

impl fmt::Display for PolBell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolBell {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        PolBell::ALL.into_iter().find(|p| p.as_str() == s).ok_or(())
    }
}

/// `(|X,0⟩_a|Y,0⟩_b + φ|X',0⟩_a|Y',0⟩_b)/√2`
pub fn polarization_bell(spec: PolBell) -> TwoPhotonState {
    let ((x, y), (x2, y2), phase) = spec.terms();
    let ket = |path, k| SinglePhotonState::polarized(path, k, 0);
    TwoPhotonState::product(&ket(Path::A, x), &ket(Path::B, y))
        .add(&TwoPhotonState::product(&ket(Path::A, x2), &ket(Path::B, y2)).scaled(phase))
        .scaled(C64::new(FRAC_1_SQRT_2, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recipe {
    pub pol_state: PolBell,
    /// `2q` of the signal-arm coupler.
    pub qplate_signal: i32,
    pub qplate_idler: i32,
    pub spp_signal: Option<i32>,
    pub spp_idler: Option<i32>,
    pub dove_alpha: f64,
    pub flip_oam: bool,
}

impl Recipe {
    const fn direct(pol_state: PolBell, dove_alpha: f64) -> Self {
        Recipe {
            pol_state,
            qplate_signal: 1,
            qplate_idler: 3,
            spp_signal: None,
            spp_idler: None,
            dove_alpha,
            flip_oam: false,
        }
    }

    const fn shifted(pol_state: PolBell, dove_alpha: f64, flip_oam: bool) -> Self {
        Recipe {
            pol_state,
            qplate_signal: 1,
            qplate_idler: 1,
            spp_signal: Some(2),
            spp_idler: Some(-2),
            dove_alpha,
            flip_oam,
        }
    }
}

/// One row of the preparation table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub target: (u8, u8, u8),
    pub recipe: Recipe,
}

const fn row(target: (u8, u8, u8), recipe: Recipe) -> TableRow {
    TableRow { target, recipe }
}

/// The sixteen recipes, valid for the default labels `(−3, 3, −1, 1)`.
pub const TABLE: [TableRow; 16] = {
    use PolBell::*;
    [
        row((1, 1, 0), Recipe::direct(RlPlusLr, 0.0)),
        row((1, 1, 1), Recipe::direct(RlMinusLr, 0.0)),
        row((1, 0, 0), Recipe::direct(RlPlusILr, FRAC_PI_8)),
        row((1, 0, 1), Recipe::direct(RlMinusILr, FRAC_PI_8)),
        row((2, 1, 0), Recipe::direct(RrMinusLl, 0.0)),
        row((2, 1, 1), Recipe::direct(RrPlusLl, 0.0)),
        row((2, 0, 0), Recipe::direct(RrMinusLl, FRAC_PI_4)),
        row((2, 0, 1), Recipe::direct(RrPlusLl, FRAC_PI_4)),
        row((3, 1, 0), Recipe::shifted(LrPlusRl, 0.0, false)),
        row((3, 1, 1), Recipe::shifted(LrMinusRl, 0.0, false)),
        row((3, 0, 0), Recipe::shifted(LrMinusRl, FRAC_PI_4, false)),
        row((3, 0, 1), Recipe::shifted(LrPlusRl, FRAC_PI_4, false)),
        row((4, 1, 0), Recipe::shifted(LrPlusRl, 0.0, true)),
        row((4, 1, 1), Recipe::shifted(LrMinusRl, 0.0, true)),
        row((4, 0, 0), Recipe::shifted(LrMinusRl, FRAC_PI_4, true)),
        row((4, 0, 1), Recipe::shifted(LrPlusRl, FRAC_PI_4, true)),
    ]
};

impl TableRow {
    pub fn target_id(&self) -> BellId {
        let (f, m, n) = self.target;
        BellId::new(f, m, n).expect("table ids are valid")
    }
}

/// Table row whose output is `id`.
pub fn recipe_for(id: BellId) -> Recipe {
    TABLE
        .iter()
        .find(|r| r.target_id() == id)
        .map(|r| r.recipe)
        .expect("table covers every id")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineResult {
    /// Normalized output on ports `c` (slot 1) and `d` (slot 2).
    pub final_state: TwoPhotonState,
    /// Filter success probability times polarizer transmission.
    pub throughput: f64,
    /// Set when the recipe is a table row.
    pub target: Option<BellId>,
}

/// The source state entering the beam splitter.
pub fn precursor(r: &Recipe) -> Result<TwoPhotonState> {
    let mut s = polarization_bell(r.pol_state);
    s = apply(&s, Arm::Signal, &spin_orbit_coupler(r.qplate_signal))?;
    s = apply(&s, Arm::Idler, &spin_orbit_coupler(r.qplate_idler))?;
    if let Some(dl) = r.spp_signal {
        s = apply(&s, Arm::Signal, &spiral_phase_plate(dl))?;
    }
    if let Some(dl) = r.spp_idler {
        s = apply(&s, Arm::Idler, &spiral_phase_plate(dl))?;
    }
    Ok(s)
}

/// Post-filter optics of `r` as seen from the detectors.
pub fn detector_frame(r: &Recipe) -> Result<DetectorFrame> {
    let pol = polarizer(erasure_axis())?;
    let port_c = dove_prism(r.dove_alpha).then(&pol);
    let port_d = if r.flip_oam { pol.then(&oam_flip()) } else { pol };
    Ok(DetectorFrame::new(Some(port_c), Some(port_d)))
}

pub fn run_recipe(r: &Recipe) -> Result<PipelineResult> {
    let target = TABLE.iter().find(|row| row.recipe == *r).map(TableRow::target_id);
    let empty = |target| PipelineResult { final_state: TwoPhotonState::new(), throughput: 0.0, target };
    let filtered = bell_filter(&precursor(r)?)?;
    if filtered.success_prob == 0.0 {
        return Ok(empty(target));
    }
    let mut s = apply(&filtered.state, Arm::Signal, &dove_prism(r.dove_alpha))?;
    s = apply_both(&s, &polarizer(erasure_axis())?)?;
    let transmission = s.norm_sqr();
    if s.is_empty() {
        return Ok(empty(target));
    }
    s = s.normalized()?;
    if r.flip_oam {
        s = apply(&s, Arm::Idler, &oam_flip())?;
    }
    Ok(PipelineResult {
        final_state: s,
        throughput: filtered.success_prob * transmission,
        target,
    })
}

/// `|⟨a|b⟩|²`
pub fn state_fidelity(a: &TwoPhotonState, b: &TwoPhotonState) -> f64 {
    inner_product(a, b).norm_sqr()
}

/// Fidelity of each table recipe's output to its target basis state.
/// Only the default labels are reachable by the table.
pub fn verify_all_recipes(cfg: &BellBasisConfig) -> Result<BTreeMap<BellId, f64>> {
    BellId::all()
        .map(|id| {
            let out = run_recipe(&recipe_for(id))?;
            Ok((id, state_fidelity(&eq1_state(id, cfg), &out.final_state)))
        })
        .collect()
}
