mod bell;
mod hom;
mod optics;
mod pipeline;
mod tomo;

use std::io::Write;
use std::path::Path;

use bellweaver_core::bell::BellId;
use bellweaver_core::modes::TwoPhotonState;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::cli::{BellCmd, Cli, Command, HomCmd, OpticsCmd, PipelineCmd, TomoCmd};
use crate::config::{env_seed, load_config_file, resolve};
use crate::error::{CliError, CliResult};
use crate::formats::StateFile;
use crate::output::read_json;

/// Shared inputs: the config file contents and the seed fallbacks.
pub(crate) struct Context {
    file: Option<Value>,
    seed_flag: Option<u64>,
    env_seed: Option<u64>,
}

impl Context {
    fn resolve<T, A>(&self, defaults: T, flags: &A) -> CliResult<T>
    where
        T: Serialize + DeserializeOwned,
        A: Serialize,
    {
        let flags = serde_json::to_value(flags).expect("flags serialize");
        resolve(&defaults, self.file.as_ref(), &flags)
    }

    fn default_seed(&self) -> u64 {
        self.env_seed.unwrap_or(0)
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let file = cli.config.as_deref().map(load_config_file).transpose()?;
    let ctx = Context { file, seed_flag: cli.seed, env_seed: env_seed()? };
    match cli.command {
        Command::Bell(BellCmd::Basis(a)) => bell::basis(&ctx, a, stdout),
        Command::Bell(BellCmd::Classify(a)) => bell::classify(&ctx, a, stdout),
        Command::Hom(HomCmd::Scan(a)) => hom::scan(&ctx, a, stdout),
        Command::Pipeline(PipelineCmd::Run(a)) => pipeline::run(&ctx, a, stdout),
        Command::Tomo(TomoCmd::Simulate(a)) => tomo::simulate(&ctx, a, stdout),
        Command::Tomo(TomoCmd::Reconstruct(a)) => tomo::reconstruct(&ctx, a, stdout),
        Command::Tomo(TomoCmd::Fidelity(a)) => tomo::fidelity(&ctx, a, stdout),
        Command::Tomo(TomoCmd::Witness(a)) => tomo::witness(&ctx, a, stdout),
        Command::Tomo(TomoCmd::Run(a)) => tomo::run(&ctx, a, stdout),
        Command::Optics(OpticsCmd::Apply(a)) => optics::apply(&ctx, a, stdout),
    }
}

fn parse_id(name: &str) -> CliResult<BellId> {
    name.parse()
        .map_err(|_| CliError::usage(format!("unknown state name '{name}' (expected psi<family>_<m><n>, e.g. psi2_10)")))
}

fn read_state(path: &str) -> CliResult<TwoPhotonState> {
    read_json::<StateFile>(Path::new(path))?.to_state()
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::usage(format!("missing required parameter --{flag}")))
}

fn say(stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    crate::output::emit(None, text, stdout)
}
