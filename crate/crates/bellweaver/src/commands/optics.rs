use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use bellweaver_core::optics::{self as el, apply as apply_map, apply_both, erasure_axis, Arm, ModeMap};
use bellweaver_core::C64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{read_state, require, Context};
use crate::cli::ApplyArgs;
use crate::config::Meta;
use crate::error::{CliError, CliResult};
use crate::formats::StateFile;
use crate::output::{emit, json_text};

/// One optical element; angles are in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "element", rename_all = "lowercase", deny_unknown_fields)]
pub enum ElementSpec {
    Soc { two_q: i32 },
    Spp { dl: i32 },
    Dove { alpha_rad: f64 },
    Flip,
    Hwp { theta_rad: f64 },
    Qwp { theta_rad: f64 },
    Polarizer { axis: String },
    Bs,
    Identity,
}

fn axis(name: &str) -> CliResult<[C64; 2]> {
    let h = FRAC_1_SQRT_2;
    let c = |re, im| C64::new(re, im);
    Ok(match name {
        "H" => [c(1.0, 0.0), c(0.0, 0.0)],
        "V" => [c(0.0, 0.0), c(1.0, 0.0)],
        "D" => [c(h, 0.0), c(h, 0.0)],
        "A" => [c(h, 0.0), c(-h, 0.0)],
        "R" => [c(h, 0.0), c(0.0, -h)],
        "L" => [c(h, 0.0), c(0.0, h)],
        "erasure" => erasure_axis(),
        _ => return Err(CliError::usage(format!("unknown polarizer axis '{name}' (expected H, V, D, A, R, L or erasure)"))),
    })
}

impl ElementSpec {
    pub fn mode_map(&self) -> CliResult<ModeMap> {
        Ok(match self {
            ElementSpec::Soc { two_q } => el::spin_orbit_coupler(*two_q),
            ElementSpec::Spp { dl } => el::spiral_phase_plate(*dl),
            ElementSpec::Dove { alpha_rad } => el::dove_prism(*alpha_rad),
            ElementSpec::Flip => el::oam_flip(),
            ElementSpec::Hwp { theta_rad } => el::half_wave_plate(*theta_rad),
            ElementSpec::Qwp { theta_rad } => el::quarter_wave_plate(*theta_rad),
            ElementSpec::Polarizer { axis: a } => el::polarizer(axis(a)?)?,
            ElementSpec::Bs => el::beam_splitter(),
            ElementSpec::Identity => el::identity(),
        })
    }

    fn from_flags(args: &ApplyArgs) -> CliResult<Option<Self>> {
        let angle = |name: &str| -> CliResult<f64> {
            let a = require(args.angle, "angle").map_err(|_| CliError::usage(format!("{name} needs --angle")))?;
            Ok(if args.degrees { a.to_radians() } else { a })
        };
        let spec = match (&args.element, &args.element_json) {
            (None, None) => return Ok(None),
            (Some(_), Some(_)) => return Err(CliError::usage("give only one of --element and --element-json")),
            (None, Some(json)) => serde_json::from_str(json)
                .map_err(|e| CliError::usage(format!("invalid --element-json: {e}")))?,
            (Some(kind), None) => match kind.as_str() {
                "soc" => ElementSpec::Soc { two_q: require(args.two_q, "two-q")? },
                "spp" => ElementSpec::Spp { dl: require(args.dl, "dl")? },
                "dove" => ElementSpec::Dove { alpha_rad: angle("dove")? },
                "flip" => ElementSpec::Flip,
                "hwp" => ElementSpec::Hwp { theta_rad: angle("hwp")? },
                "qwp" => ElementSpec::Qwp { theta_rad: angle("qwp")? },
                "polarizer" => ElementSpec::Polarizer { axis: require(args.axis.clone(), "axis")? },
                "bs" => ElementSpec::Bs,
                "identity" => ElementSpec::Identity,
                other => return Err(CliError::usage(format!("unknown element '{other}'"))),
            },
        };
        Ok(Some(spec))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApplyConfig {
    state: Option<String>,
    arm: String,
    element: Option<ElementSpec>,
}

pub(super) fn apply(ctx: &Context, args: ApplyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut flags = serde_json::to_value(&args).expect("flags serialize");
    if let (Some(spec), Value::Object(map)) = (ElementSpec::from_flags(&args)?, &mut flags) {
        map.insert("element".into(), serde_json::to_value(spec).expect("elements serialize"));
    }
    let defaults = ApplyConfig { state: None, arm: "both".into(), element: None };
    let cfg: ApplyConfig = ctx.resolve(defaults, &flags)?;
    let state = read_state(&require(cfg.state.clone(), "state")?)?;
    let map = require(cfg.element.clone(), "element")?.mode_map()?;
    let out = match cfg.arm.as_str() {
        "signal" => apply_map(&state, Arm::Signal, &map)?,
        "idler" => apply_map(&state, Arm::Idler, &map)?,
        "both" => apply_both(&state, &map)?,
        other => return Err(CliError::usage(format!("unknown arm '{other}' (expected signal, idler or both)"))),
    };
    let text = json_text(&StateFile::from_state(&out, Some(Meta::new("optics apply", &cfg))));
    emit(args.out.as_deref(), &text, stdout)
}
