use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::Write;

use bellweaver_core::bell::BellId;
use bellweaver_core::hom::{linspace, scan_delay, scan_phase, visibility, DetectorFrame, MixedState, WavepacketModel};
use bellweaver_core::modes::{Path, TwoPhotonState};
use bellweaver_core::pipeline::{detector_frame, precursor, recipe_for};
use serde::{Deserialize, Serialize};

use super::{read_state, require, say, Context};
use crate::cli::ScanArgs;
use crate::config::Meta;
use crate::error::{CliError, CliResult};
use crate::expr::parse_projector;
use crate::output::{emit, scan_csv};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanConfig {
    state: Option<String>,
    proj_u: Option<String>,
    proj_v: Option<String>,
    tau_min: f64,
    tau_max: f64,
    steps: usize,
    sigma: f64,
    noise_white: Option<f64>,
    phase_pair: Option<Vec<i32>>,
    theta_min: f64,
    theta_max: f64,
    tau: f64,
    delay_signal: BTreeMap<i32, f64>,
    delay_idler: BTreeMap<i32, f64>,
    compensate: BTreeMap<i32, f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            state: None,
            proj_u: None,
            proj_v: None,
            tau_min: -5.0,
            tau_max: 5.0,
            steps: 101,
            sigma: 1.0,
            noise_white: None,
            phase_pair: None,
            theta_min: 0.0,
            theta_max: TAU,
            tau: 0.0,
            delay_signal: BTreeMap::new(),
            delay_idler: BTreeMap::new(),
            compensate: BTreeMap::new(),
        }
    }
}

/// A named target scans its recipe's source through its detector optics; a
/// state file is scanned with bare detectors.
fn source(name: &str) -> CliResult<(TwoPhotonState, DetectorFrame)> {
    match name.parse::<BellId>() {
        Ok(id) => {
            let recipe = recipe_for(id);
            Ok((precursor(&recipe)?, detector_frame(&recipe)?))
        }
        Err(_) => Ok((read_state(name)?, DetectorFrame::bare())),
    }
}

pub(super) fn scan(ctx: &Context, mut args: ScanArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if args.degrees {
        args.theta_min = args.theta_min.map(f64::to_radians);
        args.theta_max = args.theta_max.map(f64::to_radians);
    }
    let cfg: ScanConfig = ctx.resolve(ScanConfig::default(), &args)?;
    let (state, frame) = source(&require(cfg.state.clone(), "state")?)?;
    let mixed = match cfg.noise_white {
        Some(p) => MixedState::white_noise(&state, p)?,
        None => MixedState::pure(state),
    };
    let mut model = WavepacketModel::new(cfg.sigma)?;
    for (&l, &d) in &cfg.delay_signal {
        model = model.with_signal_delay(l, d);
    }
    for (&l, &d) in &cfg.delay_idler {
        model = model.with_idler_delay(l, d);
    }
    let model = model.compensated(&cfg.compensate);
    let u = parse_projector(&require(cfg.proj_u.clone(), "proj-u")?, Path::D)?;

    let (records, summary) = match &cfg.phase_pair {
        Some(pair) => {
            let pair = match pair[..] {
                [a, b] => (a, b),
                _ => return Err(CliError::usage("--phase-pair needs exactly two OAM values")),
            };
            let grid = linspace(cfg.theta_min, cfg.theta_max, cfg.steps)?;
            let records = scan_phase(&mixed, &u, pair, &grid, &model, cfg.tau, &frame)?;
            let (lo, hi) = records
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.rate), hi.max(r.rate)));
            (records, format!("min rate {lo:.6e}, max rate {hi:.6e}"))
        }
        None => {
            let v = parse_projector(&require(cfg.proj_v.clone(), "proj-v")?, Path::C)?;
            let (u, v) = frame.pull_back(&u, &v)?;
            let grid = linspace(cfg.tau_min, cfg.tau_max, cfg.steps)?;
            let records = scan_delay(&mixed, &u, &v, &grid, &model)?;
            let vis = match visibility(&records, cfg.sigma) {
                Ok(v) => format!("{v:.6}"),
                Err(_) => "n/a".into(),
            };
            (records, format!("visibility {vis}"))
        }
    };
    let csv = scan_csv(&Meta::new("hom scan", &cfg), &records);
    emit(args.out.as_deref(), &csv, stdout)?;
    if let Some(out) = &args.out {
        say(stdout, &format!("wrote {} rows to {}; {summary}\n", records.len(), out.display()))?;
    }
    Ok(())
}
