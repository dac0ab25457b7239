//! Command-line definitions. Every parameter flag is optional so that values
//! can also come from `--config`; flags win over the file.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "bellweaver", version, about = "Two-photon OAM Bell-state simulator")]
pub struct Cli {
    /// JSON file with parameter values (a previous output's embedded config also works).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// RNG seed; falls back to the config file, then $BELLWEAVER_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bell basis construction and symmetry classification.
    #[command(subcommand)]
    Bell(BellCmd),
    /// Two-photon interference scans.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Preparation recipes.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
    /// Simulated state tomography.
    #[command(subcommand)]
    Tomo(TomoCmd),
    /// Single optical elements.
    #[command(subcommand)]
    Optics(OpticsCmd),
}

#[derive(Debug, Subcommand)]
pub enum BellCmd {
    /// Write one basis state, or all sixteen with --all, as JSON.
    Basis(BasisArgs),
    /// Print the symmetry ledger as TSV.
    Classify(ClassifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum HomCmd {
    /// Delay scan, or phase scan with --phase-pair.
    Scan(ScanArgs),
}

#[derive(Debug, Subcommand)]
pub enum PipelineCmd {
    /// Run the recipe for a target state.
    Run(PipelineArgs),
}

#[derive(Debug, Subcommand)]
pub enum TomoCmd {
    /// Simulate counts for every joint projector setting.
    Simulate(SimulateArgs),
    /// Reconstruct a density matrix from counts.
    Reconstruct(ReconstructArgs),
    /// Fidelity of a reconstructed density matrix to a target.
    Fidelity(FidelityArgs),
    /// Certified entanglement dimension for a fidelity.
    Witness(WitnessArgs),
    /// Full simulate, reconstruct and fidelity loop over several targets.
    Run(TomoRunArgs),
}

#[derive(Debug, Subcommand)]
pub enum OpticsCmd {
    /// Apply one element to one or both photons of a state.
    Apply(ApplyArgs),
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// `ℓ:delay` pairs such as `1:0.2335,3:0.2335`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DelayTable(pub BTreeMap<i32, f64>);

impl FromStr for DelayTable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut map = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, d) = part.split_once(':').ok_or_else(|| format!("expected l:delay, got '{part}'"))?;
            let l: i32 = l.trim().parse().map_err(|_| format!("bad OAM index '{l}'"))?;
            let d: f64 = d.trim().parse().map_err(|_| format!("bad delay '{d}'"))?;
            if !d.is_finite() {
                return Err(format!("delay for {l} must be finite"));
            }
            map.insert(l, d);
        }
        Ok(DelayTable(map))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct BasisArgs {
    /// Family 1 to 4.
    #[arg(long)]
    pub family: Option<u8>,
    /// First phase index, 0 or 1.
    #[arg(long)]
    pub m: Option<u8>,
    /// Second phase index, 0 or 1.
    #[arg(long)]
    pub n: Option<u8>,
    /// Write all sixteen states.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub all: bool,
    /// Mode labels l1,l2,l3,l4.
    #[arg(long = "l", value_delimiter = ',', allow_hyphen_values = true)]
    pub labels: Option<Vec<i32>>,
    /// Output JSON file (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    /// Classify all sixteen basis states.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub all: bool,
    /// Classify the state in this JSON file instead.
    #[arg(long)]
    pub state: Option<String>,
    /// Mode labels l1,l2,l3,l4.
    #[arg(long = "l", value_delimiter = ',', allow_hyphen_values = true)]
    pub labels: Option<Vec<i32>>,
    /// Symmetry tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output TSV file (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Target name such as psi2_10 (its recipe's source and detector optics) or a state JSON file on paths a, b.
    #[arg(long)]
    pub state: Option<String>,
    /// Detector at port d, e.g. "|-3>+|-1>+|1>-|3>".
    #[arg(long, allow_hyphen_values = true)]
    pub proj_u: Option<String>,
    /// Detector at port c (delay scans only).
    #[arg(long, allow_hyphen_values = true)]
    pub proj_v: Option<String>,
    /// First delay of the scan in ps.
    #[arg(long, allow_hyphen_values = true)]
    pub tau_min: Option<f64>,
    /// Last delay of the scan in ps.
    #[arg(long, allow_hyphen_values = true)]
    pub tau_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Coherence width in ps.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Mix the source with white noise of weight 1 - p.
    #[arg(long)]
    pub noise_white: Option<f64>,
    /// Scan the phase of (|a> + e^{iθ}|b>)/√2 at port c instead of the delay.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phase_pair: Option<Vec<i32>>,
    /// First phase of a phase scan (radians unless --degrees).
    #[arg(long, allow_hyphen_values = true)]
    pub theta_min: Option<f64>,
    /// Last phase of a phase scan.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_max: Option<f64>,
    /// Fixed delay for phase scans.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// Per-OAM signal delays, e.g. 1:0.2335,3:0.2335.
    #[arg(long, allow_hyphen_values = true)]
    pub delay_signal: Option<DelayTable>,
    /// Per-OAM idler delays.
    #[arg(long, allow_hyphen_values = true)]
    pub delay_idler: Option<DelayTable>,
    /// Compensation added to the signal delays.
    #[arg(long, allow_hyphen_values = true)]
    pub compensate: Option<DelayTable>,
    /// Read theta bounds in degrees.
    #[arg(long)]
    #[serde(skip)]
    pub degrees: bool,
    /// Output CSV file (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineArgs {
    /// Target name such as psi2_10.
    #[arg(long)]
    pub target: Option<String>,
    /// Override the recipe's Dove angle.
    #[arg(long, allow_hyphen_values = true)]
    pub dove_alpha: Option<f64>,
    /// Override the recipe's OAM flip.
    #[arg(long)]
    pub flip_oam: Option<bool>,
    /// Read --dove-alpha in degrees.
    #[arg(long)]
    #[serde(skip)]
    pub degrees: bool,
    /// Final state JSON.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Report JSON with throughput, symmetry and fidelity.
    #[arg(long)]
    #[serde(skip)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Target name such as psi1_10.
    #[arg(long)]
    pub target: Option<String>,
    /// State JSON file instead of a target name.
    #[arg(long)]
    pub state: Option<String>,
    /// OAM labels of the measured subspace.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub labels: Option<Vec<i32>>,
    /// Weight p of the ideal state in p rho + (1 - p) I/d^2.
    #[arg(long)]
    pub noise_white: Option<f64>,
    /// Poisson-sample this many shots per setting; omit for exact probabilities.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(skip)]
    pub seed: Option<u64>,
    /// Output counts JSON (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReconstructArgs {
    /// Counts JSON file.
    #[arg(long)]
    pub counts: Option<String>,
    /// Iteration cap for the solver.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Stop once the objective changes by less than this.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output density matrix JSON (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct FidelityArgs {
    /// Reconstructed density matrix JSON.
    #[arg(long)]
    pub rho: Option<String>,
    /// Target name such as psi1_10.
    #[arg(long)]
    pub target: Option<String>,
    /// Target state JSON file.
    #[arg(long)]
    pub target_state: Option<String>,
    /// Target density matrix JSON file.
    #[arg(long)]
    pub target_rho: Option<String>,
    /// Output report JSON (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    /// Fidelity to a maximally entangled target.
    #[arg(long)]
    pub fidelity: Option<f64>,
    /// Local dimension d.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct TomoRunArgs {
    /// Comma-separated target names; defaults to the eight family 1 and 2 states.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    /// OAM labels of the measured subspace.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub labels: Option<Vec<i32>>,
    /// Weight p of the ideal state in p rho + (1 - p) I/d^2.
    #[arg(long)]
    pub noise_white: Option<f64>,
    /// Poisson-sample this many shots per setting; omit for exact probabilities.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Iteration cap for the solver.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Stop once the objective changes by less than this.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(skip)]
    pub seed: Option<u64>,
    /// Directory for counts, density matrices, overlap matrix and summary.
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ApplyArgs {
    /// Input state JSON file.
    #[arg(long)]
    pub state: Option<String>,
    /// signal, idler or both.
    #[arg(long)]
    pub arm: Option<String>,
    /// soc, spp, dove, flip, hwp, qwp, polarizer, bs or identity.
    #[arg(long)]
    #[serde(skip)]
    pub element: Option<String>,
    /// Element as JSON, e.g. {"element":"dove","alpha_rad":0.785}.
    #[arg(long)]
    #[serde(skip)]
    pub element_json: Option<String>,
    /// 2q of a spin-orbit coupler.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip)]
    pub two_q: Option<i32>,
    /// OAM shift of a spiral phase plate.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip)]
    pub dl: Option<i32>,
    /// Dove prism or wave plate angle.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip)]
    pub angle: Option<f64>,
    /// Polarizer axis: H, V, D, A, R, L or erasure.
    #[arg(long)]
    #[serde(skip)]
    pub axis: Option<String>,
    /// Read --angle in degrees.
    #[arg(long)]
    #[serde(skip)]
    pub degrees: bool,
    /// Output state JSON (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn delay_tables_parse() {
        let t: DelayTable = "1:0.5, -3:-0.25".parse().unwrap();
        assert_eq!(t.0.get(&-3), Some(&-0.25));
        assert!("1=0.5".parse::<DelayTable>().is_err());
        assert!("x:1".parse::<DelayTable>().is_err());
    }

    #[test]
    fn negative_label_lists_parse() {
        let cli = Cli::try_parse_from(["bellweaver", "bell", "basis", "--family", "1", "--m", "1", "--n", "0", "--l", "-3,3,-1,1"])
            .unwrap();
        match cli.command {
            Command::Bell(BellCmd::Basis(a)) => assert_eq!(a.labels, Some(vec![-3, 3, -1, 1])),
            _ => panic!(),
        }
    }
}
