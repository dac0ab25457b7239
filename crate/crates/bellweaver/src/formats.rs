//! JSON file formats for states, counts and density matrices.

use bellweaver_core::modes::{Path, Pol, SingleModeLabel, TwoPhotonState, DEFAULT_L_MAX};
use bellweaver_core::tomography::{CMatrix, CountRecord, CountTable, DensityMatrix};
use bellweaver_core::C64;
use serde::{Deserialize, Serialize};

use crate::config::Meta;
use crate::error::{CliError, CliResult};

pub const STATE_BASIS: &str = "path-pol-oam";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeJson {
    pub path: String,
    pub pol: String,
    pub oam: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub p1: ModeJson,
    pub p2: ModeJson,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub basis: String,
    pub terms: Vec<TermJson>,
}

fn mode_json(l: &SingleModeLabel) -> ModeJson {
    ModeJson { path: l.path.as_str().into(), pol: l.pol.as_str().into(), oam: l.oam }
}

pub fn parse_path(s: &str) -> CliResult<Path> {
    Path::ALL
        .into_iter()
        .find(|p| p.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| CliError::usage(format!("unknown path '{s}' (expected a, b, c or d)")))
}

pub fn parse_pol(s: &str) -> CliResult<Pol> {
    Pol::ALL
        .into_iter()
        .find(|p| p.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| CliError::usage(format!("unknown polarization '{s}' (expected H or V)")))
}

fn mode_label(m: &ModeJson) -> CliResult<SingleModeLabel> {
    Ok(SingleModeLabel::checked(parse_path(&m.path)?, parse_pol(&m.pol)?, m.oam, DEFAULT_L_MAX)?)
}

impl StateFile {
    pub fn from_state(state: &TwoPhotonState, meta: Option<Meta>) -> Self {
        StateFile {
            meta,
            basis: STATE_BASIS.into(),
            terms: state
                .iter()
                .map(|((a, b), c)| TermJson { p1: mode_json(a), p2: mode_json(b), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn to_state(&self) -> CliResult<TwoPhotonState> {
        if self.basis != STATE_BASIS {
            return Err(CliError::usage(format!("unsupported state basis '{}' (expected '{STATE_BASIS}')", self.basis)));
        }
        let mut state = TwoPhotonState::new();
        for t in &self.terms {
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(CliError::usage("state amplitudes must be finite"));
            }
            let term = TwoPhotonState::from_terms([((mode_label(&t.p1)?, mode_label(&t.p2)?), C64::new(t.re, t.im))]);
            state = state.add(&term);
        }
        Ok(state)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub u: usize,
    pub v: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
}

/// Counts per joint setting; `probability` replaces `count` when no shots
/// were taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub d: usize,
    pub labels: Vec<i32>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub records: Vec<RecordJson>,
}

impl CountsFile {
    pub fn from_table(table: &CountTable, meta: Option<Meta>) -> Self {
        let records = table
            .records
            .iter()
            .map(|r| match table.shots {
                Some(_) => RecordJson { u: r.u, v: r.v, count: Some(r.value as u64), probability: None },
                None => RecordJson { u: r.u, v: r.v, count: None, probability: Some(r.value) },
            })
            .collect();
        CountsFile { meta, d: table.labels.len(), labels: table.labels.clone(), shots: table.shots, seed: table.seed, records }
    }

    pub fn to_table(&self) -> CliResult<CountTable> {
        if self.d != self.labels.len() {
            return Err(CliError::usage(format!("d = {} disagrees with {} labels", self.d, self.labels.len())));
        }
        let records = self
            .records
            .iter()
            .map(|r| {
                let value = match (self.shots, r.count, r.probability) {
                    (Some(_), Some(c), None) => c as f64,
                    (None, None, Some(p)) if p.is_finite() && p >= 0.0 => p,
                    _ => {
                        return Err(CliError::usage(format!(
                            "record ({}, {}) must carry 'count' when shots are set and a nonnegative 'probability' otherwise",
                            r.u, r.v
                        )))
                    }
                };
                Ok(CountRecord { u: r.u, v: r.v, value })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(CountTable { labels: self.labels.clone(), shots: self.shots, seed: self.seed, records })
    }
}

/// Row-major complex entries as `[re, im]` over the ordered pair basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub labels: Vec<i32>,
    pub dim: usize,
    pub basis: Vec<[i32; 2]>,
    pub entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverInfo>,
}

/// How a reconstructed density matrix was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverInfo {
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
}

impl DensityFile {
    pub fn from_density(rho: &DensityMatrix, meta: Option<Meta>) -> Self {
        DensityFile {
            meta,
            labels: rho.labels().to_vec(),
            dim: rho.dim(),
            basis: rho.basis().into_iter().map(|(a, b)| [a, b]).collect(),
            entries: rho.matrix().data().iter().map(|c| [c.re, c.im]).collect(),
            solver: None,
        }
    }

    pub fn to_density(&self) -> CliResult<DensityMatrix> {
        if self.labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::usage("density matrix labels must be strictly increasing"));
        }
        let d = self.labels.len();
        if self.dim != d * d || self.entries.len() != self.dim * self.dim {
            return Err(CliError::usage(format!(
                "density matrix with {d} labels needs dim {} and {} entries",
                d * d,
                d * d * d * d
            )));
        }
        let expected: Vec<[i32; 2]> =
            self.labels.iter().flat_map(|&a| self.labels.iter().map(move |&b| [a, b])).collect();
        if self.basis != expected {
            return Err(CliError::usage("density matrix basis must list label pairs in row-major order"));
        }
        let data = self.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let m = CMatrix::from_row_major(data).ok_or_else(|| CliError::usage("density matrix is not square"))?;
        Ok(DensityMatrix::new(&self.labels, m)?)
    }
}
