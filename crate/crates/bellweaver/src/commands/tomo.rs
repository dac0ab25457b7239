use std::fs;
use std::io::Write;
use std::path::Path;

use bellweaver_core::bell::{eq1_state, BellBasisConfig, BellId};
use bellweaver_core::modes::TwoPhotonState;
use bellweaver_core::tomography::{
    build_projector_set, dimension_witness, fidelity as state_fidelity, overlap_matrix, reconstruct as pgd,
    simulate_counts, DensityMatrix, NoiseModel, Reconstruction, SolverOptions,
};
use serde::{Deserialize, Serialize};

use super::{parse_id, read_state, require, say, Context};
use crate::cli::{FidelityArgs, ReconstructArgs, SimulateArgs, TomoRunArgs, WitnessArgs};
use crate::config::Meta;
use crate::error::{CliError, CliResult};
use crate::formats::{CountsFile, DensityFile, SolverInfo};
use crate::output::{emit, json_text, read_json};

const DEFAULT_LABELS: [i32; 4] = [-3, -1, 1, 3];

fn default_targets() -> Vec<String> {
    BellId::all().filter(|id| id.family() <= 2).map(|id| id.to_string()).collect()
}

fn target_state(name: &str) -> CliResult<TwoPhotonState> {
    Ok(eq1_state(parse_id(name)?, &BellBasisConfig::default()))
}

fn solver_options(max_iter: usize, tol: f64) -> CliResult<SolverOptions> {
    if max_iter == 0 || !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::usage("--max-iter must be at least 1 and --tol positive"));
    }
    Ok(SolverOptions { max_iterations: max_iter, tolerance: tol, record_history: false })
}

fn noise_model(p: f64, shots: Option<u64>, seed: u64) -> NoiseModel {
    NoiseModel { white_noise_p: p, shots_per_setting: shots, rng_seed: seed }
}

fn solver_info(r: &Reconstruction) -> SolverInfo {
    SolverInfo { iterations: r.iterations, converged: r.converged, objective: r.objective }
}

fn not_converged(what: &str, r: &Reconstruction) -> CliError {
    CliError::Numerical(format!(
        "{what}: reconstruction did not converge after {} iterations (objective {:e})",
        r.iterations, r.objective
    ))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateConfig {
    target: Option<String>,
    state: Option<String>,
    labels: Vec<i32>,
    noise_white: f64,
    shots: Option<u64>,
    seed: u64,
}

pub(super) fn simulate(ctx: &Context, mut args: SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    args.seed = ctx.seed_flag;
    let defaults = SimulateConfig {
        target: None,
        state: None,
        labels: DEFAULT_LABELS.to_vec(),
        noise_white: 1.0,
        shots: None,
        seed: ctx.default_seed(),
    };
    let cfg: SimulateConfig = ctx.resolve(defaults, &args)?;
    let state = match (&cfg.target, &cfg.state) {
        (Some(name), None) => target_state(name)?,
        (None, Some(path)) => read_state(path)?,
        _ => return Err(CliError::usage("give exactly one of --target or --state")),
    };
    let set = build_projector_set(&cfg.labels)?;
    let rho = DensityMatrix::from_pure(&state.normalized()?, &cfg.labels)?;
    let table = simulate_counts(&rho, &set, &noise_model(cfg.noise_white, cfg.shots, cfg.seed))?;
    let text = json_text(&CountsFile::from_table(&table, Some(Meta::new("tomo simulate", &cfg))));
    emit(args.out.as_deref(), &text, stdout)?;
    if let Some(out) = &args.out {
        say(stdout, &format!("wrote {} settings to {}\n", table.records.len(), out.display()))?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReconstructConfig {
    counts: Option<String>,
    max_iter: usize,
    tol: f64,
}

pub(super) fn reconstruct(ctx: &Context, args: ReconstructArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let defaults = SolverOptions::default();
    let defaults = ReconstructConfig { counts: None, max_iter: defaults.max_iterations, tol: defaults.tolerance };
    let cfg: ReconstructConfig = ctx.resolve(defaults, &args)?;
    let path = require(cfg.counts.clone(), "counts")?;
    let counts = read_json::<CountsFile>(Path::new(&path))?.to_table()?;
    let set = build_projector_set(&counts.labels)?;
    let r = pgd(&counts, &set, &solver_options(cfg.max_iter, cfg.tol)?)?;
    let mut file = DensityFile::from_density(&r.rho, Some(Meta::new("tomo reconstruct", &cfg)));
    file.solver = Some(solver_info(&r));
    emit(args.out.as_deref(), &json_text(&file), stdout)?;
    if !r.converged {
        return Err(not_converged(&path, &r));
    }
    if args.out.is_some() {
        say(stdout, &format!("converged after {} iterations, objective {:e}\n", r.iterations, r.objective))?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FidelityConfig {
    rho: Option<String>,
    target: Option<String>,
    target_state: Option<String>,
    target_rho: Option<String>,
}

#[derive(Serialize)]
struct FidelityReport {
    meta: Meta,
    fidelity: f64,
    dim: usize,
    witness: usize,
}

fn read_density(path: &str) -> CliResult<DensityMatrix> {
    read_json::<DensityFile>(Path::new(path))?.to_density()
}

pub(super) fn fidelity(ctx: &Context, args: FidelityArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let defaults = FidelityConfig { rho: None, target: None, target_state: None, target_rho: None };
    let cfg: FidelityConfig = ctx.resolve(defaults, &args)?;
    let rho = read_density(&require(cfg.rho.clone(), "rho")?)?;
    let target = match (&cfg.target, &cfg.target_state, &cfg.target_rho) {
        (Some(name), None, None) => DensityMatrix::from_pure(&target_state(name)?, rho.labels())?,
        (None, Some(path), None) => DensityMatrix::from_pure(&read_state(path)?.normalized()?, rho.labels())?,
        (None, None, Some(path)) => read_density(path)?,
        _ => return Err(CliError::usage("give exactly one of --target, --target-state or --target-rho")),
    };
    let f = state_fidelity(&rho, &target)?;
    let d = rho.labels().len();
    let report = FidelityReport { meta: Meta::new("tomo fidelity", &cfg), fidelity: f, dim: d, witness: dimension_witness(f, d) };
    emit(args.out.as_deref(), &json_text(&report), stdout)?;
    if args.out.is_some() {
        say(stdout, &format!("fidelity {f:.6}, certified dimension {}\n", report.witness))?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessConfig {
    fidelity: Option<f64>,
    dim: Option<usize>,
}

pub(super) fn witness(ctx: &Context, args: WitnessArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg: WitnessConfig = ctx.resolve(WitnessConfig { fidelity: None, dim: None }, &args)?;
    let f = require(cfg.fidelity, "fidelity")?;
    let d = require(cfg.dim, "dim")?;
    if !(0.0..=1.0).contains(&f) {
        return Err(bellweaver_core::Error::InvalidFidelity(f).into());
    }
    if d == 0 {
        return Err(CliError::usage("--dim must be at least 1"));
    }
    say(stdout, &format!("{}\n", dimension_witness(f, d)))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TomoRunConfig {
    targets: Vec<String>,
    labels: Vec<i32>,
    noise_white: f64,
    shots: Option<u64>,
    max_iter: usize,
    tol: f64,
    seed: u64,
}

#[derive(Serialize)]
struct OverlapFile {
    meta: Meta,
    targets: Vec<String>,
    /// `matrix[i][j]`: reconstruction `i` against target `j`.
    matrix: Vec<Vec<f64>>,
}

struct Row {
    name: String,
    fidelity: f64,
    witness: usize,
    iterations: usize,
    converged: bool,
}

pub(super) fn run(ctx: &Context, mut args: TomoRunArgs, stdout: &mut dyn Write) -> CliResult<()> {
    args.seed = ctx.seed_flag;
    let solver = SolverOptions::default();
    let defaults = TomoRunConfig {
        targets: default_targets(),
        labels: DEFAULT_LABELS.to_vec(),
        noise_white: 1.0,
        shots: None,
        max_iter: solver.max_iterations,
        tol: solver.tolerance,
        seed: ctx.default_seed(),
    };
    let cfg: TomoRunConfig = ctx.resolve(defaults, &args)?;
    if cfg.targets.is_empty() {
        return Err(CliError::usage("--targets is empty"));
    }
    let opts = solver_options(cfg.max_iter, cfg.tol)?;
    let meta = Meta::new("tomo run", &cfg);
    let set = build_projector_set(&cfg.labels)?;
    let d = cfg.labels.len();
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    }

    let mut states = Vec::new();
    let mut rhos = Vec::new();
    let mut rows = Vec::new();
    for (k, name) in cfg.targets.iter().enumerate() {
        let state = target_state(name)?;
        let target = DensityMatrix::from_pure(&state, &cfg.labels)?;
        let noise = noise_model(cfg.noise_white, cfg.shots, cfg.seed.wrapping_add(k as u64));
        let counts = simulate_counts(&target, &set, &noise)?;
        let r = pgd(&counts, &set, &opts)?;
        let f = state_fidelity(&r.rho, &target)?;
        if let Some(dir) = &args.out_dir {
            let counts_file = CountsFile::from_table(&counts, Some(meta.clone()));
            write_file(&dir.join(format!("{name}_counts.json")), &json_text(&counts_file))?;
            let mut rho_file = DensityFile::from_density(&r.rho, Some(meta.clone()));
            rho_file.solver = Some(solver_info(&r));
            write_file(&dir.join(format!("{name}_rho.json")), &json_text(&rho_file))?;
        }
        rows.push(Row {
            name: name.clone(),
            fidelity: f,
            witness: dimension_witness(f, d),
            iterations: r.iterations,
            converged: r.converged,
        });
        states.push(state);
        rhos.push(r.rho);
    }

    let mut table = meta.comment_line();
    table.push_str("\nstate\tfidelity\twitness\titerations\tconverged\n");
    for r in &rows {
        table.push_str(&format!("{}\t{:.6}\t{}\t{}\t{}\n", r.name, r.fidelity, r.witness, r.iterations, r.converged));
    }
    let mean = rows.iter().map(|r| r.fidelity).sum::<f64>() / rows.len() as f64;
    table.push_str(&format!("mean\t{mean:.6}\n"));

    if let Some(dir) = &args.out_dir {
        let overlap = OverlapFile { meta: meta.clone(), targets: cfg.targets.clone(), matrix: overlap_matrix(&rhos, &states)? };
        write_file(&dir.join("overlap.json"), &json_text(&overlap))?;
        write_file(&dir.join("summary.tsv"), &table)?;
    }
    say(stdout, &table)?;

    let failed: Vec<&str> = rows.iter().filter(|r| !r.converged).map(|r| r.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(CliError::Numerical(format!("reconstruction did not converge for {}", failed.join(", "))));
    }
    Ok(())
}
