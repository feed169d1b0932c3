use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lefschetz_core::corpus::{fixture, parse_input, Input};
use lefschetz_core::suite::{self, Identity, Property, RunConfig, SuiteError};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "lefschetz", version, about = "Generic Artinian reductions of lattice polytopes over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Field characteristic: 2, 3 or 5.
    #[arg(long = "char", default_value_t = 2)]
    characteristic: u64,
    /// Extension size in bits for characteristic 2 (32, 64, 128).
    #[arg(long, default_value_t = 64)]
    field_bits: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Base points per input (identities) or random elements per seed (trial properties).
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Independent specializations per input for property checks.
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Succeed only if every checked instance fails.
    #[arg(long)]
    expect_fail: bool,
    /// Built-in fixture to use as input; repeatable.
    #[arg(long = "fixture")]
    fixtures: Vec<String>,
    /// Polytope or complex JSON files.
    inputs: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, h*, IDP/reflexive certificates and the inequality ladder.
    Analyze(Common),
    /// Ehrhart counts, polynomial, h*-vector and a-polynomial.
    Hstar(Common),
    /// The normalized volume map on the top degree.
    Volume(Common),
    /// Verify one identity on the given inputs (default: its built-in corpus).
    Verify {
        #[arg(long)]
        identity: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check one Lefschetz-type property on the given inputs.
    Check {
        #[arg(long)]
        property: String,
        #[command(flatten)]
        common: Common,
    },
    /// List the built-in fixtures.
    Fixtures,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            characteristic: self.characteristic,
            field_bits: self.field_bits,
            seed: self.seed,
            trials: self.trials,
            seeds: self.seeds,
            expect_fail: self.expect_fail,
        }
    }

    fn load(&self, defaults: &[&str]) -> Result<Vec<Input>, SuiteError> {
        let mut out = Vec::new();
        for path in &self.inputs {
            let text = std::fs::read_to_string(path)
                .map_err(|e| SuiteError::Usage(format!("cannot read {}: {e}", path.display())))?;
            out.push(parse_input(&text).map_err(|e| SuiteError::Usage(format!("{}: {e}", path.display())))?);
        }
        for name in &self.fixtures {
            out.push(fixture(name)?);
        }
        if out.is_empty() {
            if defaults.is_empty() {
                return Err(SuiteError::Usage("no input given (pass a file or --fixture NAME)".into()));
            }
            out = suite::load_fixtures(defaults)?;
        }
        Ok(out)
    }

    fn single(&self) -> Result<Input, SuiteError> {
        let mut inputs = self.load(&[])?;
        if inputs.len() != 1 {
            return Err(SuiteError::Usage(format!("expected one input, got {}", inputs.len())));
        }
        Ok(inputs.remove(0))
    }

    fn emit<T: Serialize>(&self, report: &suite::Report<T>) -> Result<bool, SuiteError> {
        let json = report.to_json();
        if let Some(path) = &self.json_out {
            std::fs::write(path, &json).map_err(|e| SuiteError::Usage(format!("cannot write {}: {e}", path.display())))?;
        }
        print!("{json}");
        Ok(report.pass)
    }
}

fn run(cli: Cli) -> Result<bool, SuiteError> {
    match cli.command {
        Command::Analyze(c) => c.emit(&suite::run_analyze(&c.single()?, &c.config())?),
        Command::Hstar(c) => c.emit(&suite::run_hstar(&c.single()?, &c.config())?),
        Command::Volume(c) => c.emit(&suite::run_volume(&c.single()?, &c.config())?),
        Command::Verify { identity, common } => {
            let identity: Identity = identity.parse()?;
            let inputs = common.load(identity.default_inputs())?;
            common.emit(&suite::run_verify(identity, &inputs, &common.config())?)
        }
        Command::Check { property, common } => {
            let property: Property = property.parse()?;
            let inputs = common.load(property.default_inputs())?;
            common.emit(&suite::run_check(property, &inputs, &common.config())?)
        }
        Command::Fixtures => {
            for name in lefschetz_core::corpus::fixture_names() {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::*;

    #[test]
    fn command_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_reach_the_config() {
        let cli = Cli::parse_from(["lefschetz", "check", "--property", "level", "--char", "3", "--seeds", "4", "--expect-fail"]);
        let Command::Check { property, common } = cli.command else { panic!("not a check") };
        assert_eq!(property, "level");
        let cfg = common.config();
        assert_eq!((cfg.characteristic, cfg.seeds, cfg.trials, cfg.expect_fail), (3, 4, 20, true));
    }
}
