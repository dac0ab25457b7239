use std::io::Write;

use bellweaver_core::bell::{eq1_state, BellBasisConfig, BellId};
use bellweaver_core::modes::{SymmetryClass, DEFAULT_SYMMETRY_TOL};
use serde::{Deserialize, Serialize};

use super::{read_state, require, say, Context};
use crate::cli::{BasisArgs, ClassifyArgs};
use crate::config::Meta;
use crate::error::{CliError, CliResult};
use crate::formats::{StateFile, TermJson};
use crate::output::{emit, json_text};

const DEFAULT_LABELS: [i32; 4] = [-3, 3, -1, 1];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisConfig {
    family: Option<u8>,
    m: Option<u8>,
    n: Option<u8>,
    all: bool,
    labels: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyConfig {
    all: bool,
    state: Option<String>,
    labels: Vec<i32>,
    tol: f64,
}

#[derive(Serialize)]
struct BasisEntry {
    id: String,
    symmetry: String,
    terms: Vec<TermJson>,
}

#[derive(Serialize)]
struct BasisSet {
    meta: Meta,
    labels: Vec<i32>,
    states: Vec<BasisEntry>,
}

fn basis_config(labels: &[i32]) -> CliResult<BellBasisConfig> {
    match *labels {
        [a, b, c, d] => Ok(BellBasisConfig::new(a, b, c, d)?),
        _ => Err(CliError::usage(format!("--l needs exactly four OAM values, got {}", labels.len()))),
    }
}

fn class_of(id: BellId, cfg: &BellBasisConfig, tol: f64) -> CliResult<SymmetryClass> {
    Ok(eq1_state(id, cfg).classify_symmetry(tol)?)
}

pub(super) fn basis(ctx: &Context, args: BasisArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let defaults = BasisConfig { family: None, m: None, n: None, all: false, labels: DEFAULT_LABELS.to_vec() };
    let cfg: BasisConfig = ctx.resolve(defaults, &args)?;
    let basis = basis_config(&cfg.labels)?;
    let meta = Meta::new("bell basis", &cfg);
    let text = if cfg.all {
        let states = BellId::all()
            .map(|id| {
                Ok(BasisEntry {
                    id: id.to_string(),
                    symmetry: class_of(id, &basis, DEFAULT_SYMMETRY_TOL)?.to_string(),
                    terms: StateFile::from_state(&eq1_state(id, &basis), None).terms,
                })
            })
            .collect::<CliResult<_>>()?;
        json_text(&BasisSet { meta, labels: cfg.labels.clone(), states })
    } else {
        let id = BellId::new(require(cfg.family, "family")?, require(cfg.m, "m")?, require(cfg.n, "n")?)?;
        json_text(&StateFile::from_state(&eq1_state(id, &basis), Some(meta)))
    };
    emit(args.out.as_deref(), &text, stdout)
}

pub(super) fn classify(ctx: &Context, args: ClassifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let defaults = ClassifyConfig { all: false, state: None, labels: DEFAULT_LABELS.to_vec(), tol: DEFAULT_SYMMETRY_TOL };
    let cfg: ClassifyConfig = ctx.resolve(defaults, &args)?;
    if !(cfg.tol.is_finite() && cfg.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let meta = Meta::new("bell classify", &cfg);
    let mut text = meta.comment_line();
    text.push('\n');
    match (cfg.all, &cfg.state) {
        (true, None) => {
            let basis = basis_config(&cfg.labels)?;
            text.push_str("state\tfamily\tm\tn\tsymmetry\n");
            for id in BellId::all() {
                let class = class_of(id, &basis, cfg.tol)?;
                text.push_str(&format!("{id}\t{}\t{}\t{}\t{class}\n", id.family(), id.m(), id.n()));
            }
        }
        (false, Some(path)) => {
            let class = read_state(path)?.classify_symmetry(cfg.tol)?;
            text.push_str(&format!("state\tsymmetry\n{path}\t{class}\n"));
        }
        _ => return Err(CliError::usage("give exactly one of --all or --state")),
    }
    emit(args.out.as_deref(), &text, stdout)?;
    if args.out.is_some() {
        say(stdout, "wrote symmetry ledger\n")?;
    }
    Ok(())
}
