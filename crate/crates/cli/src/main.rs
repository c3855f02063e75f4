use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;
mod scenario;

use scenario::{InputError, ScenarioArgs, SimArgs, SweepArgs};

/// Bargaining over the rate region of a two-user Gaussian interference channel.
#[derive(Parser)]
#[command(name = "icbargain", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rate region, disagreement point and individually rational frontier.
    Region {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Run both coordination phases and report the NBS and/or equilibrium.
    Bargain {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Play the alternating-offer game with equilibrium strategies.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Tabulate the equilibrium offers over a grid of breakdown probabilities.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Compare the outcomes under H-K and TDM.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
}

fn run(command: Command) -> anyhow::Result<u8> {
    let none_sweep = SweepArgs::default();
    let none_sim = SimArgs::default();
    match command {
        Command::Region { scenario } => commands::region(&scenario::resolve(&scenario, &none_sweep, &none_sim)?),
        Command::Bargain { scenario } => commands::bargain(&scenario::resolve(&scenario, &none_sweep, &none_sim)?),
        Command::Simulate { scenario, sim } => commands::simulate(&scenario::resolve(&scenario, &none_sweep, &sim)?),
        Command::Sweep { scenario, sweep } => commands::sweep_cmd(&scenario::resolve(&scenario, &sweep, &none_sim)?),
        Command::Compare { scenario } => commands::compare(&scenario::resolve(&scenario, &none_sweep, &none_sim)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
