use anyhow::Context;
use icbargain::bargaining::Player;
use icbargain::coordination::{
    agreed_problem, compare_schemes, linear_grid, negotiate, sweep, CoordinationOutcome, Phase1, Scenario, Solution,
    SweepAxis, SweepRow, Verdict,
};
use icbargain::game_sim::{
    deviation_gain, expected_payoffs, monte_carlo, play, strategies_from_offers, Ending, GameSpec,
};
use icbargain::rate_region::{
    classify_interference, default_power_split, disagreement_point, hk_bounds, hk_polytope, ir_frontier, tdm_region,
    ChannelParams, RateRegion, Regime,
};
use icbargain::Error;
use serde_json::{json, Value};

use crate::output::{num, opt_pair, outcome_json, pair, phase1_label, player, rate, spe_json, Artifacts, Plot};
use crate::scenario::{InputError, Resolved, SchemeArg, SolutionArg, SweepVariable};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUSED: u8 = 3;

const OUTLINE_SAMPLES: usize = 200;

fn scenario(r: &Resolved, solution: Solution) -> Scenario {
    Scenario {
        params: r.params,
        scheme: r.scheme.into(),
        probs: r.probs,
        first_mover: r.first_mover.into(),
        solution,
    }
}

fn inputs_json(r: &Resolved) -> Value {
    json!({
        "a": num(r.a),
        "b": num(r.b),
        "snr1_db": num(r.snr1_db),
        "snr2_db": num(r.snr2_db),
        "power1": num(r.params.p1()),
        "power2": num(r.params.p2()),
        "scheme": r.scheme.name(),
        "p1": num(r.probs.p1()),
        "p2": num(r.probs.p2()),
        "first_mover": player(r.first_mover.into()),
        "solution": r.solution.name(),
    })
}

fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::Strong => "strong",
        Regime::Weak => "weak",
        Regime::Mixed => "mixed",
    }
}

/// The region of `scheme` at its default operating split.
fn scheme_region(params: &ChannelParams, scheme: SchemeArg) -> RateRegion {
    match scheme {
        SchemeArg::Hk => hk_polytope(params, &default_power_split(params)),
        SchemeArg::Tdm => tdm_region(params),
    }
}

fn outcome_region(params: &ChannelParams, outcome: &CoordinationOutcome, scheme: SchemeArg) -> RateRegion {
    match outcome.phase1 {
        Phase1::Agreed(agreement) => match agreed_problem(params, &agreement) {
            Ok(problem) => problem.region().clone(),
            Err(_) => scheme_region(params, scheme),
        },
        Phase1::Disagreed(_) => scheme_region(params, scheme),
    }
}

fn outcome_markers(plot: &mut Plot, o: &CoordinationOutcome) {
    plot.marker("disagreement R0", "gray", Some(o.disagreement));
    plot.marker("NBS", "blue", o.nbs);
    plot.marker("user 1 offer", "red", o.spe.map(|s| s.r_bar));
    plot.marker("user 2 offer", "green", o.spe.map(|s| s.r_tilde));
}

fn note_refusal(o: &CoordinationOutcome, solution: SolutionArg) -> u8 {
    match &o.refusal {
        Some(Error::NonRegular) if solution == SolutionArg::Spe => {
            eprintln!("refused: {}; the equilibrium need not be unique", Error::NonRegular);
            EXIT_REFUSED
        }
        Some(e) => {
            eprintln!("note: no equilibrium reported: {e}");
            EXIT_OK
        }
        None => EXIT_OK,
    }
}

pub fn region(r: &Resolved) -> anyhow::Result<u8> {
    let params = &r.params;
    let d = disagreement_point(params);
    let region = scheme_region(params, r.scheme);
    let frontier = ir_frontier(&region, d);
    let outline = region.outline(OUTLINE_SAMPLES);

    let mut out = Artifacts::new(&r.out)?;
    let rows: Vec<Vec<String>> = outline.iter().map(|p| vec![rate(Some(p.r1)), rate(Some(p.r2))]).collect();
    out.csv("region.csv", &["r1", "r2"], &rows)?;
    let frontier_points = frontier.as_ref().map(|f| f.polyline(OUTLINE_SAMPLES)).unwrap_or_default();
    let rows: Vec<Vec<String>> = frontier_points.iter().map(|p| vec![rate(Some(p.r1)), rate(Some(p.r2))]).collect();
    out.csv("frontier.csv", &["r1", "r2"], &rows)?;
    if r.svg {
        let mut plot = Plot::default();
        plot.curve(format!("{} region", r.scheme.name().to_uppercase()), "black", outline);
        if !frontier_points.is_empty() {
            plot.curve("IR frontier", "orange", frontier_points);
        }
        plot.marker("disagreement R0", "gray", Some(d));
        out.text("region.svg", &plot.render())?;
    }

    let split = default_power_split(params);
    let hk = match r.scheme {
        SchemeArg::Hk => {
            let h = hk_bounds(params, &split);
            json!({
                "alpha": num(split.alpha()),
                "beta": num(split.beta()),
                "phi1": num(h.phi1), "phi2": num(h.phi2), "phi3": num(h.phi3),
                "phi4": num(h.phi4), "phi5": num(h.phi5),
                "phi6": h.phi6.map_or(Value::Null, num),
            })
        }
        SchemeArg::Tdm => Value::Null,
    };
    let report = json!({
        "command": "region",
        "inputs": inputs_json(r),
        "regime": regime_name(classify_interference(params)),
        "hk": hk,
        "vertices": region.vertices().iter().map(|v| pair(*v)).collect::<Vec<_>>(),
        "disagreement": pair(d),
        "essential": frontier.is_ok(),
        "regular": frontier.as_ref().is_ok_and(|f| f.is_strictly_monotone()),
        "frontier_error": frontier.as_ref().err().map_or(Value::Null, |e| Value::String(e.to_string())),
    });
    let path = out.report("region.json", report, 0)?;
    println!("region written; report: {}", path.display());
    Ok(EXIT_OK)
}

fn outcome_row(label: &str, o: &CoordinationOutcome) -> Vec<String> {
    let spe = o.spe;
    vec![
        label.to_string(),
        phase1_label(&o.phase1).to_string(),
        o.regular.to_string(),
        rate(Some(o.disagreement.r1)),
        rate(Some(o.disagreement.r2)),
        rate(o.operating_point.map(|p| p.r1)),
        rate(o.operating_point.map(|p| p.r2)),
        rate(spe.map(|s| s.r_bar.r1)),
        rate(spe.map(|s| s.r_bar.r2)),
        rate(spe.map(|s| s.r_tilde.r1)),
        rate(spe.map(|s| s.r_tilde.r2)),
        rate(o.nbs.map(|p| p.r1)),
        rate(o.nbs.map(|p| p.r2)),
    ]
}

const OUTCOME_HEADER: [&str; 13] = [
    "scheme", "phase1", "regular", "r0_r1", "r0_r2", "operating_r1", "operating_r2", "rbar_r1", "rbar_r2",
    "rtilde_r1", "rtilde_r2", "nbs_r1", "nbs_r2",
];

pub fn bargain(r: &Resolved) -> anyhow::Result<u8> {
    let outcome = negotiate(&scenario(r, r.solution.into()));
    let code = note_refusal(&outcome, r.solution);

    let mut out = Artifacts::new(&r.out)?;
    out.csv("bargain.csv", &OUTCOME_HEADER, &[outcome_row(r.scheme.name(), &outcome)])?;
    if r.svg {
        let mut plot = Plot::default();
        let region = outcome_region(&r.params, &outcome, r.scheme);
        plot.curve(format!("{} region", r.scheme.name().to_uppercase()), "black", region.outline(OUTLINE_SAMPLES));
        outcome_markers(&mut plot, &outcome);
        out.text("bargain.svg", &plot.render())?;
    }
    let report = json!({
        "command": "bargain",
        "inputs": inputs_json(r),
        "outcome": outcome_json(&outcome),
    });
    let path = out.report("bargain.json", report, code.into())?;
    if let Some(p) = outcome.operating_point {
        println!("operating point ({:.6}, {:.6}); report: {}", p.r1, p.r2, path.display());
    } else {
        println!("no operating point; report: {}", path.display());
    }
    Ok(code)
}

pub fn simulate(r: &Resolved) -> anyhow::Result<u8> {
    let outcome = negotiate(&scenario(r, Solution::Both));
    let mut out = Artifacts::new(&r.out)?;
    let mut report = json!({
        "command": "simulate",
        "inputs": inputs_json(r),
        "sim": {
            "trials": r.sim.trials,
            "seed": r.sim.seed,
            "grid_size": r.sim.grid_size,
            "max_rounds": r.sim.max_rounds,
        },
        "outcome": outcome_json(&outcome),
        "simulation": Value::Null,
    });
    let (Phase1::Agreed(agreement), Some(pair_)) = (outcome.phase1, outcome.spe) else {
        let code = match outcome.phase1 {
            Phase1::Disagreed(_) => {
                println!("phase 1 failed; users stay at the disagreement point");
                EXIT_OK
            }
            Phase1::Agreed(_) => {
                eprintln!("refused: {}", outcome.refusal.as_ref().map_or("no equilibrium".into(), |e| e.to_string()));
                EXIT_REFUSED
            }
        };
        out.report("simulate.json", report, code.into())?;
        return Ok(code);
    };

    let problem = agreed_problem(&r.params, &agreement).context("rebuilding the agreed problem")?;
    let (s1, s2) = strategies_from_offers(pair_.r_bar, pair_.r_tilde);
    let spec = GameSpec::new(problem, r.probs, r.first_mover.into()).with_max_rounds(r.sim.max_rounds);
    let single = play(&spec, &s1, &s2, r.sim.seed)?;
    let expected = expected_payoffs(&spec, &s1, &s2);
    let mc = monte_carlo(&spec, &s1, &s2, r.sim.trials, r.sim.seed)?;
    let dev = deviation_gain(&spec, r.sim.grid_size)?;

    let rows = vec![
        vec!["expected_payoff".into(), rate(Some(expected.r1)), rate(Some(expected.r2))],
        vec!["mc_mean".into(), rate(Some(mc.mean.r1)), rate(Some(mc.mean.r2))],
        vec!["mc_std_err".into(), rate(Some(mc.std_err.r1)), rate(Some(mc.std_err.r2))],
        vec!["deviation_gain".into(), rate(Some(dev.user1)), rate(Some(dev.user2))],
        vec!["rbar".into(), rate(Some(pair_.r_bar.r1)), rate(Some(pair_.r_bar.r2))],
        vec!["rtilde".into(), rate(Some(pair_.r_tilde.r1)), rate(Some(pair_.r_tilde.r2))],
    ];
    out.csv("simulate.csv", &["quantity", "r1", "r2"], &rows)?;
    if r.svg {
        let mut plot = Plot::default();
        plot.curve(format!("{} region", r.scheme.name().to_uppercase()), "black", spec.problem.region().outline(OUTLINE_SAMPLES));
        outcome_markers(&mut plot, &outcome);
        plot.marker("Monte Carlo mean", "purple", Some(mc.mean));
        out.text("simulate.svg", &plot.render())?;
    }

    let ending = match single.ending {
        Ending::Agreement(p) => json!({ "kind": "agreement", "rates": pair(p) }),
        Ending::Breakdown => json!({ "kind": "breakdown" }),
    };
    let rounds: serde_json::Map<String, Value> =
        mc.agreement_rounds.iter().map(|(round, count)| (round.to_string(), json!(count))).collect();
    report["simulation"] = json!({
        "equilibrium": spe_json(&pair_),
        "play": { "ending": ending, "round": single.round, "payoffs": pair(single.payoffs), "truncated": single.truncated },
        "expected_payoffs": pair(expected),
        "monte_carlo": {
            "trials": mc.trials,
            "mean": pair(mc.mean),
            "std_err": pair(mc.std_err),
            "agreement_rounds": rounds,
            "breakdowns": mc.breakdowns,
            "mean_breakdown_round": mc.mean_breakdown_round.map_or(Value::Null, num),
            "truncated": mc.truncated,
        },
        "deviation_gain": { "user1": num(dev.user1), "user2": num(dev.user2) },
    });
    let path = out.report("simulate.json", report, 0)?;
    println!(
        "{} trials, mean ({:.6}, {:.6}), max deviation gain {:.3e}; report: {}",
        mc.trials,
        mc.mean.r1,
        mc.mean.r2,
        dev.max(),
        path.display()
    );
    Ok(EXIT_OK)
}

fn row_status(row: &SweepRow) -> &'static str {
    match &row.outcome {
        Err(_) => "invalid",
        Ok(o) => match (&o.phase1, &o.refusal) {
            (Phase1::Disagreed(_), _) => "disagreed",
            (_, Some(Error::NonRegular)) => "non_regular",
            (_, Some(_)) => "error",
            (_, None) => "ok",
        },
    }
}

pub fn sweep_cmd(r: &Resolved) -> anyhow::Result<u8> {
    let s = r.sweep;
    let grid = linear_grid(s.from, s.to, s.step).map_err(|e| InputError(format!("sweep grid: {e}")))?;
    if let Some(bad) = grid.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(InputError(format!("sweep grid value {bad} outside (0, 1)")).into());
    }
    let axis = match s.variable {
        SweepVariable::P1 => SweepAxis::P1 { grid, p2: r.probs.p2() },
        SweepVariable::Joint => SweepAxis::Joint(grid),
    };
    let rows = sweep(&scenario(r, Solution::Both), &axis);

    let mut out = Artifacts::new(&r.out)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let spe = row.spe();
            vec![
                format!("{:.6}", row.p1),
                format!("{:.6}", row.p2),
                row_status(row).to_string(),
                rate(spe.map(|s| s.r_bar.r1)),
                rate(spe.map(|s| s.r_bar.r2)),
                rate(spe.map(|s| s.r_tilde.r1)),
                rate(spe.map(|s| s.r_tilde.r2)),
                rate(row.nbs_gap),
            ]
        })
        .collect();
    out.csv("sweep.csv", &["p1", "p2", "status", "rbar_r1", "rbar_r2", "rtilde_r1", "rtilde_r2", "nbs_gap"], &table)?;
    if r.svg {
        let mut plot = Plot::default();
        plot.curve(format!("{} region", r.scheme.name().to_uppercase()), "black", scheme_region(&r.params, r.scheme).outline(OUTLINE_SAMPLES));
        plot.curve("user 1 offer", "red", rows.iter().filter_map(|row| row.spe().map(|s| s.r_bar)).collect());
        plot.curve("user 2 offer", "green", rows.iter().filter_map(|row| row.spe().map(|s| s.r_tilde)).collect());
        if let Some(o) = rows.iter().find_map(|row| row.outcome.as_ref().ok()) {
            plot.marker("disagreement R0", "gray", Some(o.disagreement));
            plot.marker("NBS", "blue", o.nbs);
        }
        out.text("sweep.svg", &plot.render())?;
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "p1": num(row.p1),
                "p2": num(row.p2),
                "status": row_status(row),
                "outcome": match &row.outcome {
                    Ok(o) => outcome_json(o),
                    Err(e) => Value::String(e.to_string()),
                },
                "nbs_gap": row.nbs_gap.map_or(Value::Null, num),
            })
        })
        .collect();
    let report = json!({
        "command": "sweep",
        "inputs": inputs_json(r),
        "sweep": {
            "variable": match s.variable { SweepVariable::P1 => "p1", SweepVariable::Joint => "joint" },
            "from": num(s.from),
            "to": num(s.to),
            "step": num(s.step),
        },
        "rows": json_rows,
    });
    let path = out.report("sweep.json", report, 0)?;
    println!("{} rows; report: {}", rows.len(), path.display());
    Ok(EXIT_OK)
}

fn verdict_json(v: Verdict) -> Value {
    match v {
        Verdict::HkDominates => json!({ "kind": "hk_dominates" }),
        Verdict::TdmDominates => json!({ "kind": "tdm_dominates" }),
        Verdict::Mixed { hk_preferred_by } => {
            json!({ "kind": "mixed", "hk_preferred_by": player(hk_preferred_by), "tdm_preferred_by": player(hk_preferred_by.other()) })
        }
        Verdict::Incomparable => json!({ "kind": "incomparable" }),
    }
}

pub fn compare(r: &Resolved) -> anyhow::Result<u8> {
    let c = compare_schemes(&r.params, &r.probs, r.first_mover.into());
    let mut out = Artifacts::new(&r.out)?;
    out.csv("compare.csv", &OUTCOME_HEADER, &[outcome_row("hk", &c.hk), outcome_row("tdm", &c.tdm)])?;
    if r.svg {
        let mut plot = Plot::default();
        plot.curve("HK region", "black", outcome_region(&r.params, &c.hk, SchemeArg::Hk).outline(OUTLINE_SAMPLES));
        plot.curve("TDM region", "orange", outcome_region(&r.params, &c.tdm, SchemeArg::Tdm).outline(OUTLINE_SAMPLES));
        plot.marker("disagreement R0", "gray", Some(c.hk.disagreement));
        plot.marker("HK outcome", "red", c.hk.operating_point);
        plot.marker("TDM outcome", "green", c.tdm.operating_point);
        out.text("compare.svg", &plot.render())?;
    }
    let report = json!({
        "command": "compare",
        "inputs": inputs_json(r),
        "hk": outcome_json(&c.hk),
        "tdm": outcome_json(&c.tdm),
        "operating_points": { "hk": opt_pair(c.hk.operating_point), "tdm": opt_pair(c.tdm.operating_point) },
        "verdict": verdict_json(c.verdict),
    });
    let path = out.report("compare.json", report, 0)?;
    let summary = match c.verdict {
        Verdict::HkDominates => "H-K dominates".to_string(),
        Verdict::TdmDominates => "TDM dominates".to_string(),
        Verdict::Mixed { hk_preferred_by } => {
            let n = if hk_preferred_by == Player::User1 { 1 } else { 2 };
            format!("mixed: user {n} prefers H-K")
        }
        Verdict::Incomparable => "incomparable".to_string(),
    };
    println!("{summary}; report: {}", path.display());
    Ok(EXIT_OK)
}
