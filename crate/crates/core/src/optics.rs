//! Optical elements as sparse single-photon linear maps.
//!
//! Every element is a [`ModeMap`] tabulated over a finite mode space
//! (all paths, both polarizations, `|ℓ| ≤ l_max`). Inputs whose image would
//! leave the space are recorded as blocked and fail on application.
//!
//! Retarder conventions (fast axis at angle `θ` from H, no global phase):
//!
//! ```text
//! HWP(θ) = [[cos 2θ,  sin 2θ], [sin 2θ, −cos 2θ]]
//! QWP(θ) = [[c² + i s², (1 − i) s c], [(1 − i) s c, s² + i c²]]   c = cos θ, s = sin θ
//! ```
//!
//! With these, `HWP(π/8)|H⟩ = |D⟩` and `QWP(π/4)² = HWP(π/4)` exactly.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{cis, cos, sin, sqrt, FRAC_1_SQRT_2};
use crate::modes::{
    check_oam, Path, Pol, PolKet, SingleModeLabel, SinglePhotonState, TwoPhotonState,
    DEFAULT_L_MAX,
};
use crate::{Error, Result, C64};

const NORM_TOL: f64 = 1e-12;

/// Which photon of a [`TwoPhotonState`] an element acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arm {
    /// Slot 1.
    Signal,
    /// Slot 2.
    Idler,
}

/// The finite single-photon mode space an element is tabulated over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeSpace {
    pub l_max: i32,
}

impl Default for ModeSpace {
    fn default() -> Self {
        ModeSpace { l_max: DEFAULT_L_MAX }
    }
}

impl ModeSpace {
    pub fn new(l_max: i32) -> Self {
        ModeSpace { l_max: l_max.abs() }
    }

    /// Every label of the space in ascending order.
    pub fn labels(&self) -> impl Iterator<Item = SingleModeLabel> + '_ {
        let l = self.l_max;
        Path::ALL.into_iter().flat_map(move |path| {
            Pol::ALL
                .into_iter()
                .flat_map(move |pol| (-l..=l).map(move |oam| SingleModeLabel::new(path, pol, oam)))
        })
    }

    pub fn identity(&self) -> ModeMap {
        ModeMap::tabulate(*self, true, |l| vec1(l, C64::new(1.0, 0.0)))
    }

    /// Effective polarization-preserving q-plate: `R,ℓ → R,ℓ+2q` and `L,ℓ → L,ℓ−2q`.
    pub fn spin_orbit_coupler(&self, two_q: i32) -> ModeMap {
        ModeMap::tabulate(*self, true, |l| {
            let mut out = Vec::with_capacity(4);
            for (ket, shift) in [(PolKet::R, two_q), (PolKet::L, -two_q)] {
                let weight = ket.amplitude(l.pol).conj();
                for pol in Pol::ALL {
                    out.push((
                        SingleModeLabel::new(l.path, pol, l.oam + shift),
                        weight * ket.amplitude(pol),
                    ));
                }
            }
            out
        })
    }

    pub fn spiral_phase_plate(&self, dl: i32) -> ModeMap {
        ModeMap::tabulate(*self, true, |l| vec1(l.with_oam(l.oam + dl), C64::new(1.0, 0.0)))
    }

    /// `|ℓ⟩ → e^{i2ℓα}|ℓ⟩`
    pub fn dove_prism(&self, alpha: f64) -> ModeMap {
        ModeMap::tabulate(*self, true, |l| vec1(l, cis(2.0 * l.oam as f64 * alpha)))
    }

    pub fn oam_flip(&self) -> ModeMap {
        ModeMap::tabulate(*self, true, |l| vec1(l.with_oam(-l.oam), C64::new(1.0, 0.0)))
    }

    pub fn half_wave_plate(&self, theta: f64) -> ModeMap {
        let (c2, s2) = (cos(2.0 * theta), sin(2.0 * theta));
        let m = [
            [C64::new(c2, 0.0), C64::new(s2, 0.0)],
            [C64::new(s2, 0.0), C64::new(-c2, 0.0)],
        ];
        self.jones(m, true)
    }

    pub fn quarter_wave_plate(&self, theta: f64) -> ModeMap {
        let (c, s) = (cos(theta), sin(theta));
        let off = C64::new(s * c, -s * c);
        let m = [
            [C64::new(c * c, s * s), off],
            [off, C64::new(s * s, c * c)],
        ];
        self.jones(m, true)
    }

    /// Rank-one projector `|axis⟩⟨axis|` on polarization, `axis` given on `[H, V]`.
    pub fn polarizer(&self, axis: [C64; 2]) -> Result<ModeMap> {
        let n = sqrt(axis[0].norm_sqr() + axis[1].norm_sqr());
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedAxis(n));
        }
        let m = [
            [axis[0] * axis[0].conj(), axis[0] * axis[1].conj()],
            [axis[1] * axis[0].conj(), axis[1] * axis[1].conj()],
        ];
        Ok(self.jones(m, false))
    }

    /// Like [`ModeSpace::polarizer`], taking the axis as a state on a single
    /// path with `ℓ = 0`.
    pub fn polarizer_from_state(&self, axis: &SinglePhotonState) -> Result<ModeMap> {
        let mut path = None;
        for l in axis.labels() {
            if l.oam != 0 || path.is_some_and(|p| p != l.path) {
                return Err(Error::AxisNotPolarization);
            }
            path = Some(l.path);
        }
        self.polarizer([axis.internal_amplitude(Pol::H, 0), axis.internal_amplitude(Pol::V, 0)])
    }

    /// Balanced beam splitter: `a → (d + i c)/√2`, `b → (c + i d)/√2`.
    /// Photons on `c` or `d` are rejected.
    pub fn beam_splitter(&self) -> ModeMap {
        let t = C64::new(FRAC_1_SQRT_2, 0.0);
        let r = C64::new(0.0, FRAC_1_SQRT_2);
        let mut map = ModeMap::tabulate(*self, true, |l| match l.path {
            Path::A => vec![(l.with_path(Path::D), t), (l.with_path(Path::C), r)],
            Path::B => vec![(l.with_path(Path::C), t), (l.with_path(Path::D), r)],
            Path::C | Path::D => Vec::new(),
        });
        for l in self.labels().filter(|l| matches!(l.path, Path::C | Path::D)) {
            map.entries.remove(&l);
            map.blocked.insert(l, Error::BeamSplitterPort(l.path));
        }
        map
    }

    fn jones(&self, m: [[C64; 2]; 2], unitary: bool) -> ModeMap {
        ModeMap::tabulate(*self, unitary, |l| {
            let col = match l.pol {
                Pol::H => 0,
                Pol::V => 1,
            };
            vec![
                (l.with_pol(Pol::H), m[0][col]),
                (l.with_pol(Pol::V), m[1][col]),
            ]
        })
    }
}

fn vec1(l: SingleModeLabel, c: C64) -> Vec<(SingleModeLabel, C64)> {
    vec![(l, c)]
}

/// A sparse linear map between single-photon modes.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeMap {
    entries: BTreeMap<SingleModeLabel, Vec<(SingleModeLabel, C64)>>,
    blocked: BTreeMap<SingleModeLabel, Error>,
    unitary: bool,
    space: ModeSpace,
}

impl ModeMap {
    /// Tabulates `f` over every label of `space`. Images are merged per
    /// output label and negligible coefficients dropped.
    pub fn tabulate<F>(space: ModeSpace, unitary: bool, mut f: F) -> Self
    where
        F: FnMut(SingleModeLabel) -> Vec<(SingleModeLabel, C64)>,
    {
        let mut entries = BTreeMap::new();
        let mut blocked = BTreeMap::new();
        for label in space.labels() {
            let image = SinglePhotonState::from_terms(f(label));
            let overflow = image.labels().map(|o| o.oam).find(|&o| check_oam(o, space.l_max).is_err());
            match overflow {
                Some(oam) => {
                    blocked.insert(label, Error::OamOutOfRange { oam, l_max: space.l_max });
                }
                None => {
                    entries.insert(label, image.iter().map(|(l, c)| (*l, *c)).collect());
                }
            }
        }
        ModeMap { entries, blocked, unitary, space }
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    /// Image of one basis label.
    pub fn image(&self, label: &SingleModeLabel) -> Result<&[(SingleModeLabel, C64)]> {
        if let Some(out) = self.entries.get(label) {
            return Ok(out);
        }
        Err(self
            .blocked
            .get(label)
            .cloned()
            .unwrap_or(Error::UnmappedLabel(*label)))
    }

    pub fn apply_single(&self, state: &SinglePhotonState) -> Result<SinglePhotonState> {
        let mut terms = Vec::new();
        for (label, amp) in state.iter() {
            for (out, c) in self.image(label)? {
                terms.push((*out, amp * c));
            }
        }
        Ok(SinglePhotonState::from_terms(terms))
    }

    /// `next ∘ self`: `self` acts first.
    pub fn then(&self, next: &ModeMap) -> ModeMap {
        let mut entries = BTreeMap::new();
        let mut blocked = self.blocked.clone();
        for (label, image) in &self.entries {
            let mut terms = Vec::new();
            let mut failure = None;
            for (mid, c) in image {
                match next.image(mid) {
                    Ok(out) => terms.extend(out.iter().map(|(o, d)| (*o, c * d))),
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
            match failure {
                Some(e) => {
                    blocked.insert(*label, e);
                }
                None => {
                    let s = SinglePhotonState::from_terms(terms);
                    entries.insert(*label, s.iter().map(|(l, c)| (*l, *c)).collect());
                }
            }
        }
        ModeMap {
            entries,
            blocked,
            unitary: self.unitary && next.unitary,
            space: self.space,
        }
    }

    /// Conjugate transpose over the tabulated entries. Blocked inputs are
    /// dropped; labels outside the image map to zero.
    pub fn adjoint(&self) -> ModeMap {
        let mut cols: BTreeMap<SingleModeLabel, Vec<(SingleModeLabel, C64)>> =
            self.space.labels().map(|l| (l, Vec::new())).collect();
        for (input, image) in &self.entries {
            for (out, c) in image {
                cols.entry(*out).or_default().push((*input, c.conj()));
            }
        }
        ModeMap {
            entries: cols,
            blocked: BTreeMap::new(),
            unitary: self.unitary,
            space: self.space,
        }
    }

    /// Largest deviation of the tabulated columns from orthonormality.
    pub fn unitarity_defect(&self) -> f64 {
        let cols: Vec<SinglePhotonState> = self
            .entries
            .values()
            .map(|img| SinglePhotonState::from_terms(img.iter().copied()))
            .collect();
        let mut worst: f64 = 0.0;
        for (i, a) in cols.iter().enumerate() {
            for (j, b) in cols.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Applies `map` to one slot of `state`. No renormalization.
pub fn apply(state: &TwoPhotonState, arm: Arm, map: &ModeMap) -> Result<TwoPhotonState> {
    let mut terms = Vec::new();
    for ((a, b), amp) in state.iter() {
        let acted = match arm {
            Arm::Signal => a,
            Arm::Idler => b,
        };
        for (out, c) in map.image(acted)? {
            let key = match arm {
                Arm::Signal => (*out, *b),
                Arm::Idler => (*a, *out),
            };
            terms.push((key, amp * c));
        }
    }
    Ok(TwoPhotonState::from_terms(terms))
}

/// Applies `map` to both slots.
pub fn apply_both(state: &TwoPhotonState, map: &ModeMap) -> Result<TwoPhotonState> {
    apply(&apply(state, Arm::Signal, map)?, Arm::Idler, map)
}

pub fn identity() -> ModeMap {
    ModeSpace::default().identity()
}

pub fn spin_orbit_coupler(two_q: i32) -> ModeMap {
    ModeSpace::default().spin_orbit_coupler(two_q)
}

pub fn spiral_phase_plate(dl: i32) -> ModeMap {
    ModeSpace::default().spiral_phase_plate(dl)
}

pub fn dove_prism(alpha: f64) -> ModeMap {
    ModeSpace::default().dove_prism(alpha)
}

pub fn oam_flip() -> ModeMap {
    ModeSpace::default().oam_flip()
}

pub fn half_wave_plate(theta: f64) -> ModeMap {
    ModeSpace::default().half_wave_plate(theta)
}

pub fn quarter_wave_plate(theta: f64) -> ModeMap {
    ModeSpace::default().quarter_wave_plate(theta)
}

pub fn polarizer(axis: [C64; 2]) -> Result<ModeMap> {
    ModeSpace::default().polarizer(axis)
}

pub fn beam_splitter() -> ModeMap {
    ModeSpace::default().beam_splitter()
}

/// The erasure polarizer axis `(R + L)/√2`, which equals `H`.
pub fn erasure_axis() -> [C64; 2] {
    let r = PolKet::R.components();
    let l = PolKet::L.components();
    [(r[0] + l[0]) * FRAC_1_SQRT_2, (r[1] + l[1]) * FRAC_1_SQRT_2]
}
