//! Two-photon OAM Bell bases.
//!
//! The generalized four-dimensional basis has four families of four states,
//! each built from two OAM pairings with exchange phases `e^{imπ}` and
//! `e^{inπ}`:
//!
//! ```text
//! ψ¹ = (|ℓ₁ℓ₄⟩ + e^{imπ}|ℓ₄ℓ₁⟩ + e^{inπ}|ℓ₂ℓ₃⟩ + e^{i(m+n)π}|ℓ₃ℓ₂⟩)/2
//! ψ² = (|ℓ₁ℓ₃⟩ + e^{imπ}|ℓ₃ℓ₁⟩ + e^{inπ}|ℓ₄ℓ₂⟩ + e^{i(m+n)π}|ℓ₂ℓ₄⟩)/2
//! ψ³ = (|ℓ₁ℓ₂⟩ + e^{imπ}|ℓ₂ℓ₁⟩ + e^{inπ}|ℓ₃ℓ₄⟩ + e^{i(m+n)π}|ℓ₄ℓ₃⟩)/2
//! ψ⁴ = (|ℓ₁ℓ₁⟩ + e^{imπ}|ℓ₂ℓ₂⟩ + e^{inπ}|ℓ₃ℓ₃⟩ + e^{i(m+n)π}|ℓ₄ℓ₄⟩)/2
//! ```
//!
//! With the default labels `(ℓ₁, ℓ₂, ℓ₃, ℓ₄) = (−3, 3, −1, 1)`, `m = 1` states
//! of families 1–3 are antisymmetric and the other ten are symmetric.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::math::{cis, sqrt};
use crate::modes::{check_oam, OamEmbedding, SymmetryClass, TwoPhotonState, DEFAULT_L_MAX, DEFAULT_SYMMETRY_TOL};
use crate::{Error, Result, C64};

/// Identifies one of the sixteen states: family `1..=4`, `m, n ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BellId {
    family: u8,
    m: u8,
    n: u8,
}

impl BellId {
    pub fn new(family: u8, m: u8, n: u8) -> Result<Self> {
        if !(1..=4).contains(&family) || m > 1 || n > 1 {
            return Err(Error::InvalidBellId { family, m, n });
        }
        Ok(BellId { family, m, n })
    }

    pub fn family(self) -> u8 {
        self.family
    }

    pub fn m(self) -> u8 {
        self.m
    }

    pub fn n(self) -> u8 {
        self.n
    }

    /// All sixteen ids, family-major.
    pub fn all() -> impl Iterator<Item = BellId> {
        (1..=4u8).flat_map(|family| {
            (0..=1u8).flat_map(move |m| (0..=1u8).map(move |n| BellId { family, m, n }))
        })
    }
}

/// Formats as `psi{family}_{m}{n}`.
impl fmt::Display for BellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi{}_{}{}", self.family, self.m, self.n)
    }
}

impl FromStr for BellId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = Error::InvalidBellId { family: 0, m: 0, n: 0 };
        let rest = s.strip_prefix("psi").ok_or(bad.clone())?;
        let b = rest.as_bytes();
        if b.len() != 4 || b[1] != b'_' || !b.iter().enumerate().all(|(i, c)| i == 1 || c.is_ascii_digit()) {
            return Err(bad);
        }
        BellId::new(b[0] - b'0', b[2] - b'0', b[3] - b'0')
    }
}

/// The four OAM values `ℓ₁..ℓ₄` the basis is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BellBasisConfig {
    l: [i32; 4],
}

impl Default for BellBasisConfig {
    fn default() -> Self {
        BellBasisConfig { l: [-3, 3, -1, 1] }
    }
}

impl BellBasisConfig {
    pub fn new(l1: i32, l2: i32, l3: i32, l4: i32) -> Result<Self> {
        Self::with_limit([l1, l2, l3, l4], DEFAULT_L_MAX)
    }

    pub fn with_limit(l: [i32; 4], l_max: i32) -> Result<Self> {
        for &x in &l {
            check_oam(x, l_max)?;
        }
        ensure_distinct(&l)?;
        Ok(BellBasisConfig { l })
    }

    /// `[ℓ₁, ℓ₂, ℓ₃, ℓ₄]`
    pub fn labels(&self) -> [i32; 4] {
        self.l
    }

    pub fn sorted_labels(&self) -> [i32; 4] {
        let mut s = self.l;
        s.sort_unstable();
        s
    }
}

fn ensure_distinct(labels: &[i32]) -> Result<()> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        Err(Error::DuplicateLabels)
    } else {
        Ok(())
    }
}

fn sign(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The four `(slot 1, slot 2)` OAM pairs of a family, in phase order
/// `1, e^{imπ}, e^{inπ}, e^{i(m+n)π}`.
pub fn family_pairs(family: u8, cfg: &BellBasisConfig) -> [(i32, i32); 4] {
    let [l1, l2, l3, l4] = cfg.l;
    match family {
        1 => [(l1, l4), (l4, l1), (l2, l3), (l3, l2)],
        2 => [(l1, l3), (l3, l1), (l4, l2), (l2, l4)],
        3 => [(l1, l2), (l2, l1), (l3, l4), (l4, l3)],
        _ => [(l1, l1), (l2, l2), (l3, l3), (l4, l4)],
    }
}

/// Basis state embedded at the filter output ports (`c`, `d`, horizontal).
pub fn eq1_state(id: BellId, cfg: &BellBasisConfig) -> TwoPhotonState {
    eq1_state_in(id, cfg, OamEmbedding::default())
}

pub fn eq1_state_in(id: BellId, cfg: &BellBasisConfig, emb: OamEmbedding) -> TwoPhotonState {
    let pairs = family_pairs(id.family, cfg);
    let phases = [1.0, sign(id.m), sign(id.n), sign(id.m) * sign(id.n)];
    TwoPhotonState::from_oam_terms(
        emb,
        pairs
            .iter()
            .zip(phases)
            .map(|(&(a, b), p)| (a, b, C64::new(0.5 * p, 0.0))),
    )
}

/// `(1/√d) Σ_k e^{i2πnk/d} |k⟩|k ⊕ m⟩`, with `|k⟩` the `k`-th entry of `labels`.
pub fn conventional_state(m: usize, n: usize, labels: &[i32]) -> Result<TwoPhotonState> {
    let d = labels.len();
    if d < 2 || m >= d || n >= d {
        return Err(Error::InvalidConventionalIndex { m, n, d });
    }
    ensure_distinct(labels)?;
    let amp = 1.0 / sqrt(d as f64);
    Ok(TwoPhotonState::from_oam_terms(
        OamEmbedding::default(),
        (0..d).map(|k| {
            let phase = root_of_unity((n * k) % d, d);
            (labels[k], labels[(k + m) % d], phase * amp)
        }),
    ))
}

/// `e^{i2πj/d}`, exact on the quarter turns.
fn root_of_unity(j: usize, d: usize) -> C64 {
    if (4 * j) % d == 0 {
        match (4 * j) / d {
            0 => return C64::new(1.0, 0.0),
            1 => return C64::new(0.0, 1.0),
            2 => return C64::new(-1.0, 0.0),
            3 => return C64::new(0.0, -1.0),
            _ => {}
        }
    }
    cis(2.0 * core::f64::consts::PI * j as f64 / d as f64)
}

/// `(|ℓ₁ℓ₂⟩ − |ℓ₂ℓ₁⟩ + |ℓ₃ℓ₄⟩ − |ℓ₄ℓ₃⟩ + |ℓ₅ℓ₆⟩ − |ℓ₆ℓ₅⟩)/√6`
pub fn sixdim_antisym(labels: [i32; 6]) -> Result<TwoPhotonState> {
    ensure_distinct(&labels)?;
    let a = 1.0 / sqrt(6.0);
    let terms: Vec<_> = labels
        .chunks(2)
        .flat_map(|p| [(p[0], p[1], C64::new(a, 0.0)), (p[1], p[0], C64::new(-a, 0.0))])
        .collect();
    Ok(TwoPhotonState::from_oam_terms(OamEmbedding::default(), terms))
}

/// Exchange symmetry of every basis state.
pub fn symmetry_table(cfg: &BellBasisConfig) -> BTreeMap<BellId, SymmetryClass> {
    BellId::all()
        .map(|id| {
            let class = eq1_state(id, cfg)
                .classify_symmetry(DEFAULT_SYMMETRY_TOL)
                .expect("basis states are normalized");
            (id, class)
        })
        .collect()
}
