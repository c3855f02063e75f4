//! Scenario files and flag merging.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use icbargain::bargaining::{BreakdownProbs, Player, Scheme};
use icbargain::coordination::Solution;
use icbargain::rate_region::ChannelParams;
use serde::Deserialize;

/// Bad user input. Maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Hk,
    Tdm,
}

impl SchemeArg {
    pub fn name(self) -> &'static str {
        match self {
            SchemeArg::Hk => "hk",
            SchemeArg::Tdm => "tdm",
        }
    }
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Hk => Scheme::Hk,
            SchemeArg::Tdm => Scheme::Tdm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoverArg {
    U1,
    U2,
}

impl From<MoverArg> for Player {
    fn from(m: MoverArg) -> Self {
        match m {
            MoverArg::U1 => Player::User1,
            MoverArg::U2 => Player::User2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionArg {
    Spe,
    Nbs,
    Both,
}

impl SolutionArg {
    pub fn name(self) -> &'static str {
        match self {
            SolutionArg::Spe => "spe",
            SolutionArg::Nbs => "nbs",
            SolutionArg::Both => "both",
        }
    }
}

impl From<SolutionArg> for Solution {
    fn from(s: SolutionArg) -> Self {
        match s {
            SolutionArg::Spe => Solution::Spe,
            SolutionArg::Nbs => Solution::Nbs,
            SolutionArg::Both => Solution::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    /// Vary p1 with p2 fixed.
    P1,
    /// Vary p1 = p2 together.
    Joint,
}

/// Scenario flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// TOML scenario file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,
    /// Cross gain at receiver 1.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Cross gain at receiver 2.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// SNR of user 1 in dB.
    #[arg(long = "snr1-db", value_name = "DB", allow_negative_numbers = true)]
    pub snr1_db: Option<f64>,
    /// SNR of user 2 in dB.
    #[arg(long = "snr2-db", value_name = "DB", allow_negative_numbers = true)]
    pub snr2_db: Option<f64>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Breakdown probability after user 1's offer is rejected.
    #[arg(long, allow_negative_numbers = true)]
    pub p1: Option<f64>,
    /// Breakdown probability after user 2's offer is rejected.
    #[arg(long, allow_negative_numbers = true)]
    pub p2: Option<f64>,
    #[arg(long = "first-mover", value_enum)]
    pub first_mover: Option<MoverArg>,
    #[arg(long, value_enum)]
    pub solution: Option<SolutionArg>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Also write an SVG plot.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub variable: Option<SweepVariable>,
    #[arg(long = "p1-from", allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long = "p1-to", allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long = "p1-step", allow_negative_numbers = true)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Offers and thresholds per axis in the deviation search.
    #[arg(long = "grid-size")]
    pub grid_size: Option<usize>,
    #[arg(long = "max-rounds")]
    pub max_rounds: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    a: Option<f64>,
    b: Option<f64>,
    snr1_db: Option<f64>,
    snr2_db: Option<f64>,
    scheme: Option<SchemeArg>,
    p1: Option<f64>,
    p2: Option<f64>,
    first_mover: Option<MoverArg>,
    solution: Option<SolutionArg>,
    sweep: Option<SweepBlock>,
    sim: Option<SimBlock>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepBlock {
    variable: Option<SweepVariable>,
    from: Option<f64>,
    to: Option<f64>,
    step: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimBlock {
    trials: Option<u64>,
    seed: Option<u64>,
    grid_size: Option<usize>,
    max_rounds: Option<u64>,
}

fn load(path: &Path) -> anyhow::Result<ScenarioFile> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy)]
pub struct SweepSettings {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SimSettings {
    pub trials: u64,
    pub seed: u64,
    pub grid_size: usize,
    pub max_rounds: u64,
}

/// Fully validated inputs.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub a: f64,
    pub b: f64,
    pub snr1_db: f64,
    pub snr2_db: f64,
    pub params: ChannelParams,
    pub scheme: SchemeArg,
    pub probs: BreakdownProbs,
    pub first_mover: MoverArg,
    pub solution: SolutionArg,
    pub sweep: SweepSettings,
    pub sim: SimSettings,
    pub out: PathBuf,
    pub svg: bool,
}

fn finite(key: &str, v: Option<f64>) -> anyhow::Result<Option<f64>> {
    match v {
        Some(x) if !x.is_finite() => Err(invalid(format!("`{key}` must be finite, got {x}"))),
        v => Ok(v),
    }
}

fn required(key: &str, flag: &str, v: Option<f64>) -> anyhow::Result<f64> {
    finite(key, v)?.ok_or_else(|| invalid(format!("missing `{key}` (set {flag} or `{key}` in the scenario file)")))
}

pub fn resolve(args: &ScenarioArgs, sweep: &SweepArgs, sim: &SimArgs) -> anyhow::Result<Resolved> {
    let file = match &args.scenario {
        Some(path) => load(path)?,
        None => ScenarioFile::default(),
    };
    let sweep_file = file.sweep.unwrap_or_default();
    let sim_file = file.sim.unwrap_or_default();

    let a = required("a", "--a", args.a.or(file.a))?;
    let b = required("b", "--b", args.b.or(file.b))?;
    let snr1_db = required("snr1_db", "--snr1-db", args.snr1_db.or(file.snr1_db))?;
    let snr2_db = required("snr2_db", "--snr2-db", args.snr2_db.or(file.snr2_db))?;
    let params = ChannelParams::from_db(a, b, snr1_db, snr2_db).map_err(|e| invalid(format!("channel: {e}")))?;

    let p1 = finite("p1", args.p1.or(file.p1))?.unwrap_or(0.5);
    let p2 = finite("p2", args.p2.or(file.p2))?.unwrap_or(0.5);
    let probs = BreakdownProbs::new(p1, p2).map_err(|e| invalid(format!("`p1`/`p2`: {e}")))?;

    let sweep = SweepSettings {
        variable: sweep.variable.or(sweep_file.variable).unwrap_or(SweepVariable::P1),
        from: finite("sweep.from", sweep.from.or(sweep_file.from))?.unwrap_or(0.05),
        to: finite("sweep.to", sweep.to.or(sweep_file.to))?.unwrap_or(0.95),
        step: finite("sweep.step", sweep.step.or(sweep_file.step))?.unwrap_or(0.05),
    };
    if sweep.step <= 0.0 || sweep.to < sweep.from {
        return Err(invalid(format!("sweep range: need step > 0 and to >= from, got {sweep:?}")));
    }

    let sim = SimSettings {
        trials: sim.trials.or(sim_file.trials).unwrap_or(10_000),
        seed: sim.seed.or(sim_file.seed).unwrap_or(0),
        grid_size: sim.grid_size.or(sim_file.grid_size).unwrap_or(201),
        max_rounds: sim.max_rounds.or(sim_file.max_rounds).unwrap_or(icbargain::game_sim::DEFAULT_MAX_ROUNDS),
    };
    if sim.trials == 0 {
        return Err(invalid("`sim.trials` must be at least 1"));
    }
    if sim.grid_size < 3 {
        return Err(invalid("`sim.grid_size` must be at least 3"));
    }
    if sim.max_rounds == 0 {
        return Err(invalid("`sim.max_rounds` must be at least 1"));
    }

    Ok(Resolved {
        a,
        b,
        snr1_db,
        snr2_db,
        params,
        scheme: args.scheme.or(file.scheme).unwrap_or(SchemeArg::Hk),
        probs,
        first_mover: args.first_mover.or(file.first_mover).unwrap_or(MoverArg::U1),
        solution: args.solution.or(file.solution).unwrap_or(SolutionArg::Both),
        sweep,
        sim,
        out: args.out.clone(),
        svg: args.svg,
    })
}
