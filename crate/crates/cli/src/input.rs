use std::fmt::Debug;
use std::path::Path;

use tnc_core::galois::Field;
use tnc_core::io::{parse_problem, InputError, Problem};
use tnc_core::netmodel::{random_leks, random_network, Channel, LekMode, RandomNetParams, TransferResult};

/// Anything that stops a subcommand before it reaches a verdict.
#[derive(Debug)]
pub enum CliError {
    Input(String),
}

/// `Variant: message` for error enums whose variant name users grep for.
pub fn describe<E: Debug + std::fmt::Display>(e: &E) -> String {
    let debug = format!("{e:?}");
    let kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    format!("{kind}: {e}")
}

pub fn input_error<E: Debug + std::fmt::Display>(e: E) -> CliError {
    CliError::Input(describe(&e))
}

pub fn load(path: Option<&Path>, random: bool, seed: u64) -> Result<Problem, CliError> {
    match (path, random) {
        (Some(_), true) => Err(CliError::Input("give an input file or --random-net, not both".into())),
        (None, false) => Err(CliError::Input("no input file".into())),
        (None, true) => Ok(random_problem(seed)),
        (Some(p), false) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            parse_problem(&text).map_err(|e| match e {
                InputError::Parse { .. } => CliError::Input(format!("ParseError: {}: {e}", p.display())),
                InputError::Schema(_) => CliError::Input(format!("SchemaError: {}: {e}", p.display())),
            })
        }
    }
}

fn random_problem(seed: u64) -> Problem {
    let field = Field::new(2, 4, None).expect("GF(16) exists");
    let net = random_network(&RandomNetParams::default(), seed);
    let leks = random_leks(&net, &field, seed, LekMode::Invariant);
    let demands = tnc_core::feasibility::demands_of(&net);
    Problem {
        field,
        network: Some(net),
        leks: Some(leks),
        transfer: None,
        demands,
        n: None,
        alpha: None,
        symbols: Default::default(),
    }
}

pub fn channel(p: &Problem) -> Result<Channel, CliError> {
    let net = p
        .network
        .as_ref()
        .ok_or_else(|| CliError::Input("the file has no network".into()))?;
    net.validate().map_err(input_error)?;
    let leks = p
        .leks
        .as_ref()
        .ok_or_else(|| CliError::Input("the file has no kernels (`leks`)".into()))?;
    Channel::new(net, &p.field, leks).map_err(input_error)
}

/// From the file's `transfer` section, or computed from its network.
pub fn transfer(p: &Problem) -> Result<TransferResult, CliError> {
    if let Some(tr) = &p.transfer {
        return Ok(tr.clone());
    }
    channel(p)?.transfer().map_err(input_error)
}
