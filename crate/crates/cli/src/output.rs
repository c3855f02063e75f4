//! CSV, JSON and SVG emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use icbargain::bargaining::{Agreement, DisagreeReason, Player, SpePair};
use icbargain::coordination::{CoordinationOutcome, Phase1};
use icbargain::rate_region::RatePair;
use serde_json::{json, Value};

/// Full-precision decimal string; parses back to the same `f64`.
pub fn num(x: f64) -> Value {
    Value::String(format!("{x}"))
}

pub fn pair(p: RatePair) -> Value {
    json!({ "r1": num(p.r1), "r2": num(p.r2) })
}

pub fn opt_pair(p: Option<RatePair>) -> Value {
    p.map_or(Value::Null, pair)
}

pub fn player(p: Player) -> &'static str {
    match p {
        Player::User1 => "u1",
        Player::User2 => "u2",
    }
}

pub fn phase1_json(phase1: &Phase1) -> Value {
    match phase1 {
        Phase1::Agreed(Agreement::Hk(split)) => {
            json!({ "status": "agreed", "scheme": "hk", "alpha": num(split.alpha()), "beta": num(split.beta()) })
        }
        Phase1::Agreed(Agreement::Tdm) => json!({ "status": "agreed", "scheme": "tdm" }),
        Phase1::Disagreed(reason) => json!({ "status": "disagreed", "reason": reason_name(*reason) }),
    }
}

pub fn phase1_label(phase1: &Phase1) -> &'static str {
    match phase1 {
        Phase1::Agreed(_) => "agreed",
        Phase1::Disagreed(_) => "disagreed",
    }
}

fn reason_name(r: DisagreeReason) -> &'static str {
    match r {
        DisagreeReason::InterferenceBelowNoise => "interference_below_noise",
        DisagreeReason::NoMutualGain => "no_mutual_gain",
    }
}

pub fn spe_json(s: &SpePair) -> Value {
    json!({
        "r_bar": pair(s.r_bar),
        "r_tilde": pair(s.r_tilde),
        "first_mover": player(s.first_mover),
        "outcome": pair(s.outcome),
    })
}

pub fn outcome_json(o: &CoordinationOutcome) -> Value {
    json!({
        "phase1": phase1_json(&o.phase1),
        "disagreement": pair(o.disagreement),
        "operating_point": opt_pair(o.operating_point),
        "spe": o.spe.as_ref().map_or(Value::Null, spe_json),
        "nbs": opt_pair(o.nbs),
        "regular": o.regular,
        "refusal": o.refusal.as_ref().map_or(Value::Null, |e| Value::String(e.to_string())),
    })
}

/// Rate with six decimals, empty when absent.
pub fn rate(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.6}"))
}

/// Collects the paths of everything written for the run report.
pub struct Artifacts {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn text(&mut self, name: &str, body: &str) -> anyhow::Result<()> {
        let path = self.path(name);
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
    }

    /// Writes the report last, listing every artifact including itself.
    pub fn report(mut self, name: &str, mut report: Value, exit_status: i32) -> anyhow::Result<PathBuf> {
        let path = self.path(name);
        let listed: Vec<Value> = self.written.iter().map(|p| Value::String(p.display().to_string())).collect();
        report["artifacts"] = Value::Array(listed);
        report["exit_status"] = json!(exit_status);
        let mut body = serde_json::to_string_pretty(&report)?;
        body.push('\n');
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub struct Curve {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<RatePair>,
}

pub struct Marker {
    pub label: String,
    pub color: &'static str,
    pub at: RatePair,
}

#[derive(Default)]
pub struct Plot {
    pub curves: Vec<Curve>,
    pub markers: Vec<Marker>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;

impl Plot {
    pub fn curve(&mut self, label: impl Into<String>, color: &'static str, points: Vec<RatePair>) {
        self.curves.push(Curve { label: label.into(), color, points });
    }

    pub fn marker(&mut self, label: impl Into<String>, color: &'static str, at: Option<RatePair>) {
        if let Some(at) = at {
            self.markers.push(Marker { label: label.into(), color, at });
        }
    }

    pub fn render(&self) -> String {
        let all = self.curves.iter().flat_map(|c| c.points.iter()).chain(self.markers.iter().map(|m| &m.at));
        let (mut xmax, mut ymax) = (0.0f64, 0.0f64);
        for p in all {
            xmax = xmax.max(p.r1);
            ymax = ymax.max(p.r2);
        }
        let xmax = if xmax > 0.0 { xmax * 1.05 } else { 1.0 };
        let ymax = if ymax > 0.0 { ymax * 1.05 } else { 1.0 };
        let sx = |x: f64| MARGIN + x / xmax * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - y / ymax * (HEIGHT - 2.0 * MARGIN);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let (x0, y0) = (sx(0.0), sy(0.0));
        let _ = writeln!(
            s,
            r#"<path d="M{x0:.2},{:.2} L{x0:.2},{y0:.2} L{:.2},{y0:.2}" stroke="black" fill="none"/>"#,
            sy(ymax),
            sx(xmax)
        );
        for k in 0..=5 {
            let (vx, vy) = (xmax * k as f64 / 5.0, ymax * k as f64 / 5.0);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{vx:.2}</text>"#, sx(vx), y0 + 18.0);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{vy:.2}</text>"#, x0 - 6.0, sy(vy) + 4.0);
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">R1 (bits/use)</text>"#, WIDTH / 2.0, HEIGHT - 20.0);
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">R2 (bits/use)</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0
        );
        for c in &self.curves {
            let pts: Vec<String> = c.points.iter().map(|p| format!("{:.2},{:.2}", sx(p.r1), sy(p.r2))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" stroke="{}" stroke-width="2" fill="none"/>"#, pts.join(" "), c.color);
        }
        for m in &self.markers {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="5" fill="{}"/>"#, sx(m.at.r1), sy(m.at.r2), m.color);
        }
        let legend = self.curves.iter().map(|c| (&c.label, c.color)).chain(self.markers.iter().map(|m| (&m.label, m.color)));
        for (i, (label, color)) in legend.enumerate() {
            let y = MARGIN + 18.0 * i as f64;
            let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#, WIDTH - 200.0, y - 9.0);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, WIDTH - 184.0, escape(label));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
