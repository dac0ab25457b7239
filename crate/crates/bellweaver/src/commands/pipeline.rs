use std::io::Write;

use bellweaver_core::bell::{eq1_state, BellBasisConfig};
use bellweaver_core::modes::DEFAULT_SYMMETRY_TOL;
use bellweaver_core::pipeline::{recipe_for, run_recipe, state_fidelity, Recipe};
use serde::{Deserialize, Serialize};

use super::{parse_id, require, say, Context};
use crate::cli::PipelineArgs;
use crate::config::Meta;
use crate::error::CliResult;
use crate::formats::StateFile;
use crate::output::{emit, json_text};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineConfig {
    target: Option<String>,
    dove_alpha: Option<f64>,
    flip_oam: Option<bool>,
}

#[derive(Serialize)]
struct RecipeJson {
    pol_state: String,
    qplate_signal: i32,
    qplate_idler: i32,
    spp_signal: Option<i32>,
    spp_idler: Option<i32>,
    dove_alpha_rad: f64,
    flip_oam: bool,
}

impl From<&Recipe> for RecipeJson {
    fn from(r: &Recipe) -> Self {
        RecipeJson {
            pol_state: r.pol_state.to_string(),
            qplate_signal: r.qplate_signal,
            qplate_idler: r.qplate_idler,
            spp_signal: r.spp_signal,
            spp_idler: r.spp_idler,
            dove_alpha_rad: r.dove_alpha,
            flip_oam: r.flip_oam,
        }
    }
}

#[derive(Serialize)]
struct Report {
    meta: Meta,
    target: String,
    recipe: RecipeJson,
    throughput: f64,
    /// `None` when nothing survives post-selection.
    symmetry: Option<String>,
    fidelity: f64,
}

pub(super) fn run(ctx: &Context, mut args: PipelineArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if args.degrees {
        args.dove_alpha = args.dove_alpha.map(f64::to_radians);
    }
    let cfg: PipelineConfig = ctx.resolve(PipelineConfig { target: None, dove_alpha: None, flip_oam: None }, &args)?;
    let id = parse_id(&require(cfg.target.clone(), "target")?)?;
    let mut recipe = recipe_for(id);
    if let Some(alpha) = cfg.dove_alpha {
        recipe.dove_alpha = alpha;
    }
    if let Some(flip) = cfg.flip_oam {
        recipe.flip_oam = flip;
    }
    let result = run_recipe(&recipe)?;
    let symmetry = if result.final_state.is_empty() {
        None
    } else {
        Some(result.final_state.classify_symmetry(DEFAULT_SYMMETRY_TOL)?.to_string())
    };
    let fidelity = state_fidelity(&eq1_state(id, &BellBasisConfig::default()), &result.final_state);
    let meta = Meta::new("pipeline run", &cfg);
    let report = Report {
        meta: meta.clone(),
        target: id.to_string(),
        recipe: RecipeJson::from(&recipe),
        throughput: result.throughput,
        symmetry,
        fidelity,
    };
    if let Some(out) = &args.out {
        emit(Some(out), &json_text(&StateFile::from_state(&result.final_state, Some(meta))), stdout)?;
    }
    let report_text = json_text(&report);
    emit(args.report.as_deref(), &report_text, stdout)?;
    if args.report.is_some() {
        say(
            stdout,
            &format!("{id}: throughput {:.6}, fidelity {:.12}\n", report.throughput, report.fidelity),
        )?;
    }
    Ok(())
}
