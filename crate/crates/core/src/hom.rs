//! Hong-Ou-Mandel interference: coincidence rates, the Bell-state filter,
//! delay and phase scans, and visibility.
//!
//! Sources are two-photon states with slot 1 on path `a` and slot 2 on path
//! `b`, entering a balanced beam splitter (`a → (d + ic)/√2`,
//! `b → (c + id)/√2`). Detector `u` sits at port `d` and detector `v` at port
//! `c`; both are matched on polarization and OAM only.
//!
//! Each photon carries a Gaussian temporal envelope of width `σ`, centred on
//! its mode-dependent delay. Coincidence amplitudes split into a direct
//! pathway (signal → `d`, idler → `c`) and an exchange pathway (signal → `c`,
//! idler → `d`):
//!
//! ```text
//! direct   ½ c_jk ū_j v̄_k     t_d ~ μ₁(j),  t_c ~ μ₂(k)
//! exchange −½ c_jk v̄_j ū_k    t_c ~ μ₁(j),  t_d ~ μ₂(k)
//! μ₁(j) = δ_s(ℓ_j),  μ₂(k) = τ + δ_i(ℓ_k)
//! ```
//!
//! Integrating `|M(t_c, t_d)|²` gives
//! `Σ_pq ā_p a_q g(c_p − c_q) g(d_p − d_q)` with `g(x) = exp(−x²/4σ²)`. Without
//! per-mode delays this is `|A|² + |B|² + 2 Re(A B̄) G(τ)`,
//! `G(τ) = exp(−τ²/2σ²)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::math::{cis, exp, FRAC_1_SQRT_2};
use crate::modes::{Path, Pol, SingleModeLabel, SinglePhotonState, TwoPhotonState};
use crate::optics::{apply_both, beam_splitter, ModeMap, ModeSpace};
use crate::{Error, Result, C64};

/// Distance from zero delay, in units of `σ`, beyond which a grid point
/// counts toward the visibility baseline.
pub const BASELINE_SIGMAS: f64 = 5.0;

const BASELINE_FLOOR: f64 = 1e-15;

/// Temporal envelope width and per-OAM group delays (picoseconds).
#[derive(Clone, Debug, PartialEq)]
pub struct WavepacketModel {
    sigma_c: f64,
    delay_signal: BTreeMap<i32, f64>,
    delay_idler: BTreeMap<i32, f64>,
}

impl Default for WavepacketModel {
    fn default() -> Self {
        WavepacketModel {
            sigma_c: 1.0,
            delay_signal: BTreeMap::new(),
            delay_idler: BTreeMap::new(),
        }
    }
}

impl WavepacketModel {
    pub fn new(sigma_c: f64) -> Result<Self> {
        if !(sigma_c.is_finite() && sigma_c > 0.0) {
            return Err(Error::InvalidCoherenceWidth(sigma_c));
        }
        Ok(WavepacketModel { sigma_c, ..Self::default() })
    }

    pub fn sigma_c(&self) -> f64 {
        self.sigma_c
    }

    pub fn with_signal_delay(mut self, oam: i32, delay: f64) -> Self {
        self.delay_signal.insert(oam, delay);
        self
    }

    pub fn with_idler_delay(mut self, oam: i32, delay: f64) -> Self {
        self.delay_idler.insert(oam, delay);
        self
    }

    pub fn signal_delay(&self, oam: i32) -> f64 {
        self.delay_signal.get(&oam).copied().unwrap_or(0.0)
    }

    pub fn idler_delay(&self, oam: i32) -> f64 {
        self.delay_idler.get(&oam).copied().unwrap_or(0.0)
    }

    pub fn signal_delays(&self) -> &BTreeMap<i32, f64> {
        &self.delay_signal
    }

    pub fn idler_delays(&self) -> &BTreeMap<i32, f64> {
        &self.delay_idler
    }

    /// Adds `compensation` to the signal delay table.
    pub fn compensated(&self, compensation: &BTreeMap<i32, f64>) -> Self {
        let mut out = self.clone();
        for (&oam, &dt) in compensation {
            *out.delay_signal.entry(oam).or_insert(0.0) += dt;
        }
        out
    }

    /// `G(τ) = exp(−τ²/2σ²)`
    pub fn envelope(&self, tau: f64) -> f64 {
        exp(-tau * tau / (2.0 * self.sigma_c * self.sigma_c))
    }

    fn overlap(&self, dx: f64) -> f64 {
        exp(-dx * dx / (4.0 * self.sigma_c * self.sigma_c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoincidenceResult {
    pub rate: f64,
    pub pathway_direct: C64,
    pub pathway_exchange: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRecord {
    pub x: f64,
    pub rate: f64,
}

fn check_source_ports(state: &TwoPhotonState) -> Result<()> {
    if state.iter().all(|((a, b), _)| a.path == Path::A && b.path == Path::B) {
        Ok(())
    } else {
        Err(Error::WrongPorts)
    }
}

fn detector_amp(det: &SinglePhotonState, label: &SingleModeLabel) -> C64 {
    det.internal_amplitude(label.pol, label.oam).conj()
}

/// Coincidence rate between detector `u` at port `d` and `v` at port `c`.
pub fn coincidence_rate(
    state: &TwoPhotonState,
    u: &SinglePhotonState,
    v: &SinglePhotonState,
    tau: f64,
    model: &WavepacketModel,
) -> Result<CoincidenceResult> {
    check_source_ports(state)?;
    if u.norm() == 0.0 || v.norm() == 0.0 {
        return Err(Error::ZeroNorm);
    }
    // Amplitudes keyed by the (t_c, t_d) envelope centres.
    let mut terms: BTreeMap<(u64, u64), (f64, f64, C64)> = BTreeMap::new();
    let mut push = |tc: f64, td: f64, a: C64| {
        terms
            .entry((tc.to_bits(), td.to_bits()))
            .or_insert((tc, td, C64::new(0.0, 0.0)))
            .2 += a;
    };
    let mut direct = C64::new(0.0, 0.0);
    let mut exchange = C64::new(0.0, 0.0);
    for ((j, k), c) in state.iter() {
        let mu1 = model.signal_delay(j.oam);
        let mu2 = tau + model.idler_delay(k.oam);
        let a = c * detector_amp(u, j) * detector_amp(v, k) * 0.5;
        let b = -c * detector_amp(v, j) * detector_amp(u, k) * 0.5;
        direct += a;
        exchange += b;
        push(mu2, mu1, a);
        push(mu1, mu2, b);
    }
    let terms: Vec<_> = terms.into_values().filter(|t| t.2 != C64::new(0.0, 0.0)).collect();
    let mut rate = 0.0;
    for (cp, dp, ap) in &terms {
        for (cq, dq, aq) in &terms {
            rate += (ap.conj() * aq).re * model.overlap(cp - cq) * model.overlap(dp - dq);
        }
    }
    Ok(CoincidenceResult {
        rate: rate.max(0.0),
        pathway_direct: direct,
        pathway_exchange: exchange,
    })
}

/// A convex mixture of two-photon source states.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    components: Vec<(f64, TwoPhotonState)>,
}

impl MixedState {
    pub fn pure(state: TwoPhotonState) -> Self {
        MixedState { components: alloc::vec![(1.0, state)] }
    }

    pub fn new(components: Vec<(f64, TwoPhotonState)>) -> Self {
        MixedState { components }
    }

    /// `p |ψ⟩⟨ψ| + (1 − p)/N Σ |j⟩⟨j|_a ⊗ |k⟩⟨k|_b`, with `j, k` running over
    /// the `√N` internal modes (polarization, OAM) present in either slot.
    pub fn white_noise(state: &TwoPhotonState, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidNoiseWeight(p));
        }
        let modes: BTreeSet<(Pol, i32)> = state
            .iter()
            .flat_map(|((a, b), _)| [a.internal(), b.internal()])
            .collect();
        let n = (modes.len() * modes.len()) as f64;
        let mut components = alloc::vec![(p, state.clone())];
        if p < 1.0 {
            for &(pj, lj) in &modes {
                for &(pk, lk) in &modes {
                    let s = TwoPhotonState::from_terms([(
                        (
                            SingleModeLabel::new(Path::A, pj, lj),
                            SingleModeLabel::new(Path::B, pk, lk),
                        ),
                        C64::new(1.0, 0.0),
                    )]);
                    components.push(((1.0 - p) / n, s));
                }
            }
        }
        Ok(MixedState { components })
    }

    pub fn components(&self) -> &[(f64, TwoPhotonState)] {
        &self.components
    }
}

/// Anything a coincidence rate can be computed for.
pub trait CoincidenceSource {
    fn rate(&self, u: &SinglePhotonState, v: &SinglePhotonState, tau: f64, model: &WavepacketModel) -> Result<f64>;
}

impl CoincidenceSource for TwoPhotonState {
    fn rate(&self, u: &SinglePhotonState, v: &SinglePhotonState, tau: f64, model: &WavepacketModel) -> Result<f64> {
        coincidence_rate(self, u, v, tau, model).map(|r| r.rate)
    }
}

impl CoincidenceSource for MixedState {
    fn rate(&self, u: &SinglePhotonState, v: &SinglePhotonState, tau: f64, model: &WavepacketModel) -> Result<f64> {
        let mut total = 0.0;
        for (w, s) in &self.components {
            total += w * coincidence_rate(s, u, v, tau, model)?.rate;
        }
        Ok(total)
    }
}

/// Result of coincidence post-selection behind the beam splitter.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterOutput {
    /// Renormalized state, slot 1 at port `c`, slot 2 at port `d`.
    pub state: TwoPhotonState,
    pub success_prob: f64,
}

fn split_output(state: &TwoPhotonState) -> Result<TwoPhotonState> {
    check_source_ports(state)?;
    let space = ModeSpace::new(max_abs_oam(state));
    let bs = if space == ModeSpace::default() { beam_splitter() } else { space.beam_splitter() };
    apply_both(state, &bs)
}

fn max_abs_oam(state: &TwoPhotonState) -> i32 {
    state
        .iter()
        .flat_map(|((a, b), _)| [a.oam.abs(), b.oam.abs()])
        .max()
        .unwrap_or(0)
        .max(crate::modes::DEFAULT_L_MAX)
}

/// Beam splitter plus anti-bunched coincidence post-selection.
///
/// The output amplitude for one photon at `c` with internal mode `x` and one
/// at `d` with `y` is `A(cx, dy) + A(dy, cx)`, which equals `−anti(ψ)(x, y)`.
pub fn bell_filter(state: &TwoPhotonState) -> Result<FilterOutput> {
    let out = split_output(state)?;
    let filtered = out.map_terms(|a, b, c| match (a.path, b.path) {
        (Path::C, Path::D) => Some(((*a, *b), c)),
        (Path::D, Path::C) => Some(((*b, *a), c)),
        _ => None,
    });
    let success_prob = filtered.norm_sqr();
    if filtered.is_empty() {
        return Ok(FilterOutput { state: filtered, success_prob: 0.0 });
    }
    Ok(FilterOutput {
        state: filtered.normalized()?,
        success_prob,
    })
}

/// Probability that both photons leave through the same port.
pub fn bunched_component(state: &TwoPhotonState) -> Result<f64> {
    let out = split_output(state)?;
    let mut total = 0.0;
    for port in [Path::C, Path::D] {
        let same: Vec<_> = out
            .iter()
            .filter(|((a, b), _)| a.path == port && b.path == port)
            .map(|(k, c)| (*k, *c))
            .collect();
        for ((a, b), c) in &same {
            if a == b {
                total += 2.0 * c.norm_sqr();
            } else if a < b {
                let partner = out.amplitude(b, a);
                total += (c + partner).norm_sqr();
            } else if out.amplitude(b, a) == C64::new(0.0, 0.0) {
                total += c.norm_sqr();
            }
        }
    }
    Ok(total)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let up = grid.windows(2).all(|w| w[0] < w[1]);
    let down = grid.windows(2).all(|w| w[0] > w[1]);
    if !(up || down) {
        return Err(Error::NonMonotoneGrid);
    }
    Ok(())
}

/// Coincidence rate at each delay in `tau_grid`.
pub fn scan_delay<S: CoincidenceSource + ?Sized>(
    source: &S,
    u: &SinglePhotonState,
    v: &SinglePhotonState,
    tau_grid: &[f64],
    model: &WavepacketModel,
) -> Result<Vec<ScanRecord>> {
    check_grid(tau_grid)?;
    tau_grid
        .iter()
        .map(|&tau| Ok(ScanRecord { x: tau, rate: source.rate(u, v, tau, model)? }))
        .collect()
}

/// `(|ℓ_a⟩ + e^{iθ}|ℓ_b⟩)/√2` in horizontal polarization at port `c`.
pub fn phase_projector(pair: (i32, i32), theta: f64) -> SinglePhotonState {
    SinglePhotonState::from_terms([
        (SingleModeLabel::new(Path::C, Pol::H, pair.0), C64::new(FRAC_1_SQRT_2, 0.0)),
        (SingleModeLabel::new(Path::C, Pol::H, pair.1), cis(theta) * FRAC_1_SQRT_2),
    ])
}

/// Optics between the filter and the detectors, pulled back onto the
/// detector states so scans can run on the pre-beam-splitter source.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorFrame {
    port_c: Option<ModeMap>,
    port_d: Option<ModeMap>,
}

impl DetectorFrame {
    pub fn bare() -> Self {
        DetectorFrame { port_c: None, port_d: None }
    }

    pub fn new(port_c: Option<ModeMap>, port_d: Option<ModeMap>) -> Self {
        DetectorFrame { port_c, port_d }
    }

    /// Effective `(u, v)` seen by the source: `M_d† u` and `M_c† v`.
    pub fn pull_back(
        &self,
        u: &SinglePhotonState,
        v: &SinglePhotonState,
    ) -> Result<(SinglePhotonState, SinglePhotonState)> {
        let pull = |m: &Option<ModeMap>, s: &SinglePhotonState, port: Path| -> Result<SinglePhotonState> {
            match m {
                Some(m) => m.adjoint().apply_single(&s.on_path(port)),
                None => Ok(s.clone()),
            }
        };
        Ok((pull(&self.port_d, u, Path::D)?, pull(&self.port_c, v, Path::C)?))
    }
}

/// Rate as a function of the phase `θ` of `v(θ) = phase_projector(pair, θ)`.
pub fn scan_phase<S: CoincidenceSource + ?Sized>(
    source: &S,
    u_fixed: &SinglePhotonState,
    pair: (i32, i32),
    theta_grid: &[f64],
    model: &WavepacketModel,
    tau: f64,
    frame: &DetectorFrame,
) -> Result<Vec<ScanRecord>> {
    check_grid(theta_grid)?;
    theta_grid
        .iter()
        .map(|&theta| {
            let (u, v) = frame.pull_back(u_fixed, &phase_projector(pair, theta))?;
            Ok(ScanRecord { x: theta, rate: source.rate(&u, &v, tau, model)? })
        })
        .collect()
}

/// `V = |1 − C(0)/C_∞|`, with `C_∞` the mean over `|τ| ≥ 5σ`.
pub fn visibility(scan: &[ScanRecord], sigma_c: f64) -> Result<f64> {
    let c0 = scan
        .iter()
        .find(|r| r.x == 0.0)
        .ok_or(Error::MissingZeroDelay)?
        .rate;
    let wings: Vec<f64> = scan
        .iter()
        .filter(|r| r.x.abs() >= BASELINE_SIGMAS * sigma_c)
        .map(|r| r.rate)
        .collect();
    if wings.is_empty() {
        return Err(Error::MissingBaseline);
    }
    let baseline = wings.iter().sum::<f64>() / wings.len() as f64;
    if baseline < BASELINE_FLOOR {
        return Err(Error::UndefinedVisibility(baseline));
    }
    Ok((1.0 - c0 / baseline).abs())
}

/// [`scan_delay`] with `compensation` added to the signal delay table.
pub fn compensated_scan<S: CoincidenceSource + ?Sized>(
    source: &S,
    u: &SinglePhotonState,
    v: &SinglePhotonState,
    tau_grid: &[f64],
    model: &WavepacketModel,
    compensation: &BTreeMap<i32, f64>,
) -> Result<Vec<ScanRecord>> {
    scan_delay(source, u, v, tau_grid, &model.compensated(compensation))
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(Error::EmptyGrid),
        1 => Ok(alloc::vec![min]),
        _ => {
            let h = (max - min) / (steps - 1) as f64;
            Ok((0..steps).map(|i| if i + 1 == steps { max } else { min + h * i as f64 }).collect())
        }
    }
}

/// A delay grid resolving the interference core on `[−3σ, 3σ]` with
/// `2·half_steps + 1` points (zero included exactly), plus baseline points at
/// `±8σ, ±10σ, ±12σ` where the envelope is below `1e-13`.
pub fn visibility_grid(sigma_c: f64, half_steps: usize) -> Vec<f64> {
    let h = 3.0 * sigma_c / half_steps.max(1) as f64;
    let mut grid: Vec<f64> = [-12.0, -10.0, -8.0].iter().map(|k| k * sigma_c).collect();
    let n = half_steps.max(1) as i64;
    grid.extend((-n..=n).map(|i| if i == 0 { 0.0 } else { h * i as f64 }));
    grid.extend([8.0, 10.0, 12.0].iter().map(|k| k * sigma_c));
    grid
}
