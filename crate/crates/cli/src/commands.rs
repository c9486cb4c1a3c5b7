use std::path::Path;

use anyhow::{bail, Context};
use boxwave::bounds;
use boxwave::moments::{self, BoundKind, WindowRule};
use boxwave::output::{fmt_real, Record};
use boxwave::statespec::StateSpec;
use boxwave::{BoundResult, GridDensity, Numerics, State, WaveFunction};
use rayon::prelude::*;

use crate::sink;
use crate::WindowArg;

pub fn load_spec(path: &Path) -> anyhow::Result<StateSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    StateSpec::parse(&text).with_context(|| format!("in state document {}", path.display()))
}

fn window_rule(state: &State, arg: WindowArg) -> WindowRule {
    match arg {
        WindowArg::Auto if state.as_bloch_sine().is_some() => WindowRule::MovingNode,
        WindowArg::Auto | WindowArg::Base => WindowRule::Base,
        WindowArg::MovingNode => WindowRule::MovingNode,
        WindowArg::MinCut => WindowRule::MinCut,
    }
}

/// The five prescriptions at time `t`, cut bound at `cut_x`.
fn all_bounds(state: &State, t: f64, cut_x: f64, numerics: &Numerics) -> anyhow::Result<Vec<BoundResult>> {
    Ok(vec![
        bounds::cut_bound(state, t, cut_x, numerics).context("cut bound")?,
        bounds::min_density_cut(state, t, numerics).context("min-density bound")?,
        bounds::maxmin_bound(state, numerics).context("max-min bound")?,
        bounds::judge_bound(state, t, numerics).context("Judge bound")?,
        bounds::trig_relation(state, t, numerics).context("trigonometric relation")?,
    ])
}

pub fn report(
    spec_path: &Path,
    t: f64,
    window: WindowArg,
    cut: Option<f64>,
    numerics: &Numerics,
    out: Option<&Path>,
    csv_path: Option<&Path>,
) -> anyhow::Result<()> {
    let spec = load_spec(spec_path)?;
    let state = spec.build(numerics).context("building state")?;
    let rule = window_rule(&state, window);
    let report = moments::uncertainty_report(&state, t, rule, BoundKind::MinDensity, numerics)?;
    let rows = all_bounds(&state, t, cut.unwrap_or(report.window.start), numerics)?;
    let judge = bounds::judge_minimize(&state, t, numerics)?;

    let mut doc = toml::Table::new();
    doc.insert("state".into(), toml::Value::try_from(&spec)?);
    doc.insert("report".into(), toml::Value::Table(report.table()));
    doc.insert("judge".into(), toml::Value::Table(judge.table()));
    doc.insert(
        "bounds".into(),
        toml::Value::Array(rows.iter().map(|r| toml::Value::Table(r.table())).collect()),
    );
    if let Some(b) = state.as_bloch_sine() {
        doc.insert("boundary_force".into(), toml::Value::Float(moments::boundary_force(b, t)));
    }
    let mut w = sink::open(out)?;
    w.write_all(toml::to_string(&doc)?.as_bytes())?;
    w.flush()?;

    if let Some(p) = csv_path {
        let mut c = sink::csv_writer(Some(p))?;
        c.write_record(BoundResult::header())?;
        for r in &rows {
            c.write_record(r.fields())?;
        }
        c.flush()?;
    }
    Ok(())
}

pub struct ScanPlan {
    pub axis: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub t: f64,
    pub window: WindowArg,
    pub maxmin: bool,
}

pub const SCAN_COLUMNS: [&str; 20] = [
    "index",
    "value",
    "t",
    "window_start",
    "mean_x",
    "dx",
    "mean_p",
    "dp",
    "product",
    "cut_bound",
    "min_density_bound",
    "min_density_x",
    "l_min_density",
    "judge_bound",
    "judge_gamma",
    "judge_product",
    "trig_bound",
    "maxmin_bound",
    "boundary_force",
    "all_satisfied",
];

fn scan_point(spec: &StateSpec, plan: &ScanPlan, index: usize, value: f64, numerics: &Numerics) -> anyhow::Result<Vec<String>> {
    let mut spec = spec.clone();
    let t = if plan.axis == "t" {
        value
    } else {
        let v = if matches!(plan.axis.as_str(), "k" | "K") { value.round() } else { value };
        spec.set_axis(&plan.axis, v)?;
        plan.t
    };
    let state = spec.build(numerics)?;
    let rule = window_rule(&state, plan.window);
    let r = moments::uncertainty_report(&state, t, rule, BoundKind::MinDensity, numerics)?;
    let cut = bounds::cut_bound(&state, t, r.window.start, numerics)?;
    let min = bounds::min_density_cut(&state, t, numerics)?;
    let judge = bounds::judge_minimize(&state, t, numerics)?;
    let trig = bounds::trig_relation(&state, t, numerics)?;
    let maxmin = if plan.maxmin { Some(bounds::maxmin_bound(&state, numerics)?) } else { None };
    let force = state.as_bloch_sine().map(|b| moments::boundary_force(b, t));
    let satisfied = r.satisfied
        && cut.satisfied
        && min.satisfied
        && trig.satisfied
        && judge.product >= judge.bound - bounds::SATISFACTION_SLACK
        && maxmin.as_ref().map_or(true, |m| m.satisfied);
    let opt = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
    Ok(vec![
        index.to_string(),
        fmt_real(value),
        fmt_real(t),
        fmt_real(r.window.start),
        fmt_real(r.mean_x),
        fmt_real(r.dx),
        fmt_real(r.mean_p),
        fmt_real(r.dp),
        fmt_real(r.product),
        fmt_real(cut.value),
        fmt_real(min.value),
        opt(min.witness.value()),
        fmt_real(bounds::scaled_min_density(&state, t, numerics)),
        fmt_real(judge.bound),
        fmt_real(judge.gamma),
        fmt_real(judge.product),
        fmt_real(trig.value),
        opt(maxmin.map(|m| m.value)),
        opt(force),
        satisfied.to_string(),
    ])
}

pub fn scan(spec_path: &Path, plan: &ScanPlan, numerics: &Numerics, out: Option<&Path>) -> anyhow::Result<()> {
    if !matches!(plan.axis.as_str(), "L" | "b" | "k" | "t" | "K") {
        bail!("unknown axis `{}` (expected one of L, b, k, t, K)", plan.axis);
    }
    if plan.steps < 2 {
        bail!("--steps must be at least 2, got {}", plan.steps);
    }
    if !plan.from.is_finite() || !plan.to.is_finite() {
        bail!("sweep range must be finite");
    }
    let spec = load_spec(spec_path)?;
    let n = plan.steps;
    let rows: Vec<anyhow::Result<Vec<String>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let value = plan.from + (plan.to - plan.from) * i as f64 / (n - 1) as f64;
            scan_point(&spec, plan, i, value, numerics)
                .with_context(|| format!("sweep point {i} ({} = {value})", plan.axis))
        })
        .collect();
    let mut w = sink::csv_writer(out)?;
    w.write_record(SCAN_COLUMNS)?;
    for row in rows {
        w.write_record(row?)?;
    }
    w.flush()?;
    Ok(())
}

pub fn evolve(
    spec_path: &Path,
    frames: usize,
    grid: usize,
    t_end: Option<f64>,
    numerics: &Numerics,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    if frames == 0 {
        bail!("--frames must be at least 1");
    }
    if grid == 0 {
        bail!("--grid must be at least 1");
    }
    let spec = load_spec(spec_path)?;
    let state = spec.build(numerics)?;
    let span = t_end.unwrap_or_else(|| state.recurrence_period());
    if !span.is_finite() {
        bail!("--t-end must be finite");
    }
    let dt = span / frames as f64;
    let mut w = sink::csv_writer(out)?;
    w.write_record(["t", "x", "density"])?;
    for f in 0..frames {
        let t = dt * f as f64;
        let g = GridDensity::sample(&state, t, grid)?;
        for (i, rho) in g.samples.iter().enumerate() {
            w.write_record([fmt_real(t), fmt_real(g.x(i)), fmt_real(*rho)])?;
        }
    }
    w.flush()?;
    Ok(())
}
