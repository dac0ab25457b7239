//! Discrete photonic modes and one/two-photon state vectors.
//!
//! A photon's mode is `path ⊗ polarization ⊗ OAM`. Two-photon states use a
//! distinguishable-slot representation: slot 1 is the signal photon and slot 2
//! the idler photon (after the Bell-state filter: slot 1 is port `c`, slot 2 is
//! port `d`). Amplitude maps are kept canonical, entries with modulus below
//! `1e-15` are dropped after every operation.
//!
//! Polarization is stored in the `{H, V}` basis. Derived kets are fixed as
//!
//! ```text
//! R = (H - iV)/√2    L = (H + iV)/√2    D = (H + V)/√2    A = (H - V)/√2
//! ```

use alloc::collections::BTreeMap;
use core::fmt;

use crate::math::{sqrt, FRAC_1_SQRT_2};
use crate::{Error, Result, C64};

/// Default bound on `|ℓ|` for mode spaces.
pub const DEFAULT_L_MAX: i32 = 8;

/// Default relative tolerance for exchange-symmetry classification.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-10;

const ZERO_CUTOFF: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    A,
    B,
    C,
    D,
}

impl Path {
    pub const ALL: [Path; 4] = [Path::A, Path::B, Path::C, Path::D];

    pub fn as_str(self) -> &'static str {
        match self {
            Path::A => "a",
            Path::B => "b",
            Path::C => "c",
            Path::D => "d",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    pub const ALL: [Pol; 2] = [Pol::H, Pol::V];

    pub fn as_str(self) -> &'static str {
        match self {
            Pol::H => "H",
            Pol::V => "V",
        }
    }

    fn index(self) -> usize {
        match self {
            Pol::H => 0,
            Pol::V => 1,
        }
    }
}

/// Named polarization kets, expressed in the canonical `{H, V}` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolKet {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl PolKet {
    /// Amplitudes on `[H, V]`.
    pub fn components(self) -> [C64; 2] {
        let s = FRAC_1_SQRT_2;
        match self {
            PolKet::H => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            PolKet::V => [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            PolKet::D => [C64::new(s, 0.0), C64::new(s, 0.0)],
            PolKet::A => [C64::new(s, 0.0), C64::new(-s, 0.0)],
            PolKet::R => [C64::new(s, 0.0), C64::new(0.0, -s)],
            PolKet::L => [C64::new(s, 0.0), C64::new(0.0, s)],
        }
    }

    pub fn amplitude(self, pol: Pol) -> C64 {
        self.components()[pol.index()]
    }
}

/// One photon's discrete mode. Ordered lexicographically by (path, pol, oam).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SingleModeLabel {
    pub path: Path,
    pub pol: Pol,
    pub oam: i32,
}

impl SingleModeLabel {
    pub const fn new(path: Path, pol: Pol, oam: i32) -> Self {
        SingleModeLabel { path, pol, oam }
    }

    /// Like [`SingleModeLabel::new`] but rejects `|oam| > l_max`.
    pub fn checked(path: Path, pol: Pol, oam: i32, l_max: i32) -> Result<Self> {
        check_oam(oam, l_max)?;
        Ok(SingleModeLabel { path, pol, oam })
    }

    pub fn with_path(self, path: Path) -> Self {
        SingleModeLabel { path, ..self }
    }

    pub fn with_pol(self, pol: Pol) -> Self {
        SingleModeLabel { pol, ..self }
    }

    pub fn with_oam(self, oam: i32) -> Self {
        SingleModeLabel { oam, ..self }
    }

    /// Polarization and OAM, i.e. everything except the spatial path.
    pub fn internal(self) -> (Pol, i32) {
        (self.pol, self.oam)
    }
}

impl fmt::Display for SingleModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.path.as_str(), self.pol.as_str(), self.oam)
    }
}

pub(crate) fn check_oam(oam: i32, l_max: i32) -> Result<()> {
    if oam.unsigned_abs() > l_max.unsigned_abs() {
        Err(Error::OamOutOfRange { oam, l_max })
    } else {
        Ok(())
    }
}

fn insert_canonical<K: Ord>(map: &mut BTreeMap<K, C64>, key: K, amp: C64) {
    let entry = map.entry(key).or_insert(C64::new(0.0, 0.0));
    *entry += amp;
}

fn canonicalize<K: Ord>(map: &mut BTreeMap<K, C64>) {
    map.retain(|_, c| c.norm() >= ZERO_CUTOFF);
}

/// Exchange-symmetry class of a two-photon state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymmetryClass {
    Symmetric,
    Antisymmetric,
    Neither,
}

impl SymmetryClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryClass::Symmetric => "Symmetric",
            SymmetryClass::Antisymmetric => "Antisymmetric",
            SymmetryClass::Neither => "Neither",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sparse single-photon state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SinglePhotonState {
    amps: BTreeMap<SingleModeLabel, C64>,
}

impl SinglePhotonState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(label: SingleModeLabel) -> Self {
        Self::from_terms([(label, C64::new(1.0, 0.0))])
    }

    /// Sums repeated labels, then drops negligible amplitudes.
    pub fn from_terms<I: IntoIterator<Item = (SingleModeLabel, C64)>>(terms: I) -> Self {
        let mut amps = BTreeMap::new();
        for (label, amp) in terms {
            insert_canonical(&mut amps, label, amp);
        }
        canonicalize(&mut amps);
        SinglePhotonState { amps }
    }

    /// `|ket⟩ ⊗ |oam⟩` on `path`.
    pub fn polarized(path: Path, ket: PolKet, oam: i32) -> Self {
        Self::from_terms(
            Pol::ALL
                .iter()
                .map(|&pol| (SingleModeLabel::new(path, pol, oam), ket.amplitude(pol))),
        )
    }

    pub fn amplitude(&self, label: &SingleModeLabel) -> C64 {
        self.amps.get(label).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Sum of amplitudes carrying the given polarization and OAM, over all paths.
    pub fn internal_amplitude(&self, pol: Pol, oam: i32) -> C64 {
        self.amps
            .iter()
            .filter(|(l, _)| l.pol == pol && l.oam == oam)
            .map(|(_, c)| *c)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SingleModeLabel, &C64)> {
        self.amps.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &SingleModeLabel> {
        self.amps.keys()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self::from_terms(self.amps.iter().map(|(l, c)| (*l, c * factor)))
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &SinglePhotonState) -> C64 {
        self.amps
            .iter()
            .filter_map(|(l, c)| other.amps.get(l).map(|d| c.conj() * d))
            .sum()
    }

    /// The same amplitudes moved onto `path`.
    pub fn on_path(&self, path: Path) -> Self {
        Self::from_terms(self.amps.iter().map(|(l, c)| (l.with_path(path), *c)))
    }
}

/// Sparse two-photon amplitude map over ordered (slot 1, slot 2) label pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TwoPhotonState {
    amps: BTreeMap<(SingleModeLabel, SingleModeLabel), C64>,
}

impl TwoPhotonState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((SingleModeLabel, SingleModeLabel), C64)>,
    {
        let mut amps = BTreeMap::new();
        for (key, amp) in terms {
            insert_canonical(&mut amps, key, amp);
        }
        canonicalize(&mut amps);
        TwoPhotonState { amps }
    }

    /// `|u⟩ ⊗ |v⟩`
    pub fn product(u: &SinglePhotonState, v: &SinglePhotonState) -> Self {
        Self::from_terms(
            u.iter()
                .flat_map(|(a, ca)| v.iter().map(move |(b, cb)| ((*a, *b), ca * cb))),
        )
    }

    /// Builds a state from OAM-pair terms, placing both photons in `emb`.
    pub fn from_oam_terms<I>(emb: OamEmbedding, terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, i32, C64)>,
    {
        Self::from_terms(terms.into_iter().map(|(l1, l2, c)| (emb.labels(l1, l2), c)))
    }

    pub fn amplitude(&self, first: &SingleModeLabel, second: &SingleModeLabel) -> C64 {
        self.amps
            .get(&(*first, *second))
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(SingleModeLabel, SingleModeLabel), &C64)> {
        self.amps.iter()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    /// `√(Σ |c_jk|²)`, zero for the empty state.
    pub fn norm(&self) -> f64 {
        sqrt(self.norm_sqr())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self::from_terms(self.amps.iter().map(|(k, c)| (*k, c * factor)))
    }

    pub fn add(&self, other: &TwoPhotonState) -> Self {
        Self::from_terms(self.amps.iter().chain(other.amps.iter()).map(|(k, c)| (*k, *c)))
    }

    pub fn sub(&self, other: &TwoPhotonState) -> Self {
        self.add(&other.scaled(C64::new(-1.0, 0.0)))
    }

    /// Exchanges the photons' internal content (polarization and OAM) between
    /// the two slots. Each slot keeps its spatial path, so slot 1 stays the
    /// signal/port-`c` photon. For states whose two slots share a path this is
    /// the plain particle exchange. Involution.
    pub fn swap_photons(&self) -> Self {
        Self::from_terms(self.amps.iter().map(|((a, b), c)| {
            let first = SingleModeLabel::new(a.path, b.pol, b.oam);
            let second = SingleModeLabel::new(b.path, a.pol, a.oam);
            ((first, second), *c)
        }))
    }

    /// `(s + swap(s)) / 2`
    pub fn symmetric_part(&self) -> Self {
        self.add(&self.swap_photons()).scaled(C64::new(0.5, 0.0))
    }

    /// `(s − swap(s)) / 2`
    pub fn antisymmetric_part(&self) -> Self {
        self.sub(&self.swap_photons()).scaled(C64::new(0.5, 0.0))
    }

    pub fn classify_symmetry(&self, tol: f64) -> Result<SymmetryClass> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let swapped = self.swap_photons();
        if swapped.sub(self).norm() < tol * n {
            Ok(SymmetryClass::Symmetric)
        } else if swapped.add(self).norm() < tol * n {
            Ok(SymmetryClass::Antisymmetric)
        } else {
            Ok(SymmetryClass::Neither)
        }
    }

    /// `⟨u ⊗ v|self⟩ = Σ c_jk · conj(u_j) · conj(v_k)`, `u` on slot 1.
    pub fn project_pair(&self, u: &SinglePhotonState, v: &SinglePhotonState) -> C64 {
        self.amps
            .iter()
            .map(|((a, b), c)| c * u.amplitude(a).conj() * v.amplitude(b).conj())
            .sum()
    }

    /// Applies `f` to every term, summing amplitudes of coinciding keys.
    pub fn map_terms<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&SingleModeLabel, &SingleModeLabel, C64) -> Option<((SingleModeLabel, SingleModeLabel), C64)>,
    {
        Self::from_terms(self.amps.iter().filter_map(|((a, b), c)| f(a, b, *c)))
    }

    /// Reduced single-slot supports.
    pub fn slot_labels(&self) -> (alloc::vec::Vec<SingleModeLabel>, alloc::vec::Vec<SingleModeLabel>) {
        let mut first: alloc::vec::Vec<_> = self.amps.keys().map(|(a, _)| *a).collect();
        let mut second: alloc::vec::Vec<_> = self.amps.keys().map(|(_, b)| *b).collect();
        first.sort();
        first.dedup();
        second.sort();
        second.dedup();
        (first, second)
    }
}

/// `⟨x|y⟩`, conjugate-linear in `x`.
pub fn inner_product(x: &TwoPhotonState, y: &TwoPhotonState) -> C64 {
    x.amps
        .iter()
        .filter_map(|(k, c)| y.amps.get(k).map(|d| c.conj() * d))
        .sum()
}

/// Where OAM-only kets `|ℓ₁⟩|ℓ₂⟩` live in the full mode space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OamEmbedding {
    pub path1: Path,
    pub path2: Path,
    pub pol: Pol,
}

impl Default for OamEmbedding {
    /// Filter output ports `c`/`d` with the erased (horizontal) polarization.
    fn default() -> Self {
        OamEmbedding {
            path1: Path::C,
            path2: Path::D,
            pol: Pol::H,
        }
    }
}

impl OamEmbedding {
    /// Slot 1 on path `a`, slot 2 on path `b`: the beam-splitter inputs.
    pub fn source() -> Self {
        OamEmbedding {
            path1: Path::A,
            path2: Path::B,
            pol: Pol::H,
        }
    }

    pub fn labels(self, l1: i32, l2: i32) -> (SingleModeLabel, SingleModeLabel) {
        (
            SingleModeLabel::new(self.path1, self.pol, l1),
            SingleModeLabel::new(self.path2, self.pol, l2),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{eq1_state, BellBasisConfig, BellId};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn oam(l1: i32, l2: i32, amp: f64) -> ((SingleModeLabel, SingleModeLabel), C64) {
        (OamEmbedding::default().labels(l1, l2), c(amp, 0.0))
    }

    fn ket(l: i32) -> SinglePhotonState {
        SinglePhotonState::basis(SingleModeLabel::new(Path::C, Pol::H, l))
    }

    fn ket_d(l: i32) -> SinglePhotonState {
        SinglePhotonState::basis(SingleModeLabel::new(Path::D, Pol::H, l))
    }

    fn psi(family: u8, m: u8, n: u8) -> TwoPhotonState {
        eq1_state(BellId::new(family, m, n).unwrap(), &BellBasisConfig::default())
    }

    #[test]
    fn norm_examples() {
        assert!((psi(1, 1, 0).norm() - 1.0).abs() < 1e-15);
        assert_eq!(TwoPhotonState::new().norm(), 0.0);
        let s = TwoPhotonState::from_terms([oam(1, 3, 2.0)]);
        assert_eq!(s.norm(), 2.0);
    }

    #[test]
    fn inner_product_examples() {
        assert!(inner_product(&psi(1, 1, 0), &psi(1, 1, 1)).norm() < 1e-15);
        let a = TwoPhotonState::from_terms([oam(1, 3, 1.0)]);
        let b = TwoPhotonState::from_terms([oam(3, 1, 1.0)]);
        assert_eq!(inner_product(&a, &b), c(0.0, 0.0));
    }

    #[test]
    fn swap_examples() {
        let s = psi(1, 1, 0);
        assert_eq!(s.swap_photons(), s.scaled(c(-1.0, 0.0)));
        let s = psi(4, 0, 0);
        assert_eq!(s.swap_photons(), s);
        let a = TwoPhotonState::from_terms([oam(1, 3, 1.0)]);
        assert_eq!(a.swap_photons(), TwoPhotonState::from_terms([oam(3, 1, 1.0)]));
    }

    #[test]
    fn swap_keeps_slot_paths() {
        let a = SingleModeLabel::new(Path::A, Pol::H, 1);
        let b = SingleModeLabel::new(Path::B, Pol::V, 3);
        let s = TwoPhotonState::from_terms([((a, b), c(1.0, 0.0))]);
        let swapped = s.swap_photons();
        let (k, _) = swapped.iter().next().unwrap();
        assert_eq!(k.0, SingleModeLabel::new(Path::A, Pol::V, 3));
        assert_eq!(k.1, SingleModeLabel::new(Path::B, Pol::H, 1));
    }

    #[test]
    fn classify_examples() {
        let tol = DEFAULT_SYMMETRY_TOL;
        assert_eq!(psi(2, 1, 1).classify_symmetry(tol), Ok(SymmetryClass::Antisymmetric));
        assert_eq!(psi(3, 0, 1).classify_symmetry(tol), Ok(SymmetryClass::Symmetric));
        assert_eq!(TwoPhotonState::new().classify_symmetry(tol), Err(Error::ZeroNorm));
    }

    #[test]
    fn project_pair_examples() {
        let s = FRAC_1_SQRT_2;
        let plus = SinglePhotonState::from_terms([
            (SingleModeLabel::new(Path::C, Pol::H, 1), c(s, 0.0)),
            (SingleModeLabel::new(Path::C, Pol::H, 3), c(s, 0.0)),
        ]);
        let plus_d = plus.on_path(Path::D);
        let singlet = TwoPhotonState::from_terms([oam(1, 3, s), oam(3, 1, -s)]);
        assert!(singlet.project_pair(&plus, &plus_d).norm() < 1e-15);
        let amp = psi(2, 1, 0).project_pair(&ket(1), &ket_d(3));
        // ψ²_{1,0} carries +|1⟩|3⟩ − |3⟩|1⟩
        assert!((amp - c(0.5, 0.0)).norm() < 1e-15);
        assert!((psi(2, 1, 0).project_pair(&ket(3), &ket_d(1)) - c(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(psi(1, 0, 0).project_pair(&ket(2), &ket_d(2)), c(0.0, 0.0));
    }

    #[test]
    fn canonical_form_drops_cancelled_terms() {
        let s = TwoPhotonState::from_terms([oam(1, 3, 1.0), oam(1, 3, -1.0)]);
        assert!(s.is_empty());
    }

    #[test]
    fn checked_label_enforces_bound() {
        assert!(SingleModeLabel::checked(Path::A, Pol::H, 8, DEFAULT_L_MAX).is_ok());
        assert_eq!(
            SingleModeLabel::checked(Path::A, Pol::H, -9, DEFAULT_L_MAX),
            Err(Error::OamOutOfRange { oam: -9, l_max: 8 })
        );
    }

    #[test]
    fn derived_polarization_kets() {
        let r = PolKet::R.components();
        let l = PolKet::L.components();
        // ⟨R|L⟩ = 0
        let ov = r[0].conj() * l[0] + r[1].conj() * l[1];
        assert!(ov.norm() < 1e-16);
        // (R + L)/√2 = H
        let h0 = (r[0] + l[0]) * FRAC_1_SQRT_2;
        let h1 = (r[1] + l[1]) * FRAC_1_SQRT_2;
        assert!((h0 - c(1.0, 0.0)).norm() < 1e-15 && h1.norm() < 1e-15);
    }

    fn arb_state() -> impl Strategy<Value = TwoPhotonState> {
        let term = (
            0usize..4,
            0usize..2,
            -3i32..=3,
            0usize..4,
            0usize..2,
            -3i32..=3,
            -1.0f64..1.0,
            -1.0f64..1.0,
        );
        proptest::collection::vec(term, 1..12).prop_map(|terms| {
            TwoPhotonState::from_terms(terms.into_iter().map(|(p1, q1, l1, p2, q2, l2, re, im)| {
                (
                    (
                        SingleModeLabel::new(Path::ALL[p1], Pol::ALL[q1], l1),
                        SingleModeLabel::new(Path::ALL[p2], Pol::ALL[q2], l2),
                    ),
                    C64::new(re, im),
                )
            }))
        })
    }

    proptest! {
        #[test]
        fn swap_is_an_involution(s in arb_state()) {
            prop_assert_eq!(s.swap_photons().swap_photons(), s);
        }

        #[test]
        fn classification_is_scale_invariant(s in arb_state(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            prop_assume!(s.norm() > 1e-6);
            let alpha = C64::new(re, im);
            prop_assume!(alpha.norm() > 1e-3);
            prop_assert_eq!(
                s.classify_symmetry(DEFAULT_SYMMETRY_TOL).unwrap(),
                s.scaled(alpha).classify_symmetry(DEFAULT_SYMMETRY_TOL).unwrap()
            );
        }

        #[test]
        fn swap_decomposition_is_pythagorean(s in arb_state()) {
            let lhs = s.norm_sqr();
            let rhs = s.symmetric_part().norm_sqr() + s.antisymmetric_part().norm_sqr();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn inner_product_is_conjugate_symmetric(x in arb_state(), y in arb_state()) {
            let xy = inner_product(&x, &y);
            let yx = inner_product(&y, &x);
            prop_assert!((xy - yx.conj()).norm() < 1e-12);
            prop_assert!((inner_product(&x, &x).re - x.norm_sqr()).abs() < 1e-12);
        }
    }
}
