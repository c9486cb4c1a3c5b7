use std::f64::consts::PI;
use std::path::Path;

use boxwave::bounds;
use boxwave::catalog::{self, ElementaryParams, ThreeWavePacketParams};
use boxwave::moments::{self, BoundKind, WindowRule};
use boxwave::output::fmt_real;
use boxwave::state::Constants;
use boxwave::{BlochSineState, BoxDomain, Complex, Numerics};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sink;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    /// Spectral sums and closed forms: 1e-8.
    Analytic,
    /// Quadrature, grids or finite differences: 1e-6.
    Quadrature,
}

struct Row {
    id: &'static str,
    what: &'static str,
    closed: f64,
    computed: f64,
    class: Class,
}

impl Row {
    fn tolerance(&self) -> f64 {
        match self.class {
            Class::Analytic => 1e-8,
            Class::Quadrature => 1e-6,
        }
    }

    fn diff(&self) -> f64 {
        (self.closed - self.computed).abs()
    }

    fn pass(&self) -> bool {
        self.diff() <= self.tolerance()
    }
}

fn rows(numerics: &Numerics, seed: u64) -> anyhow::Result<Vec<Row>> {
    use Class::*;
    let c = Constants::default();
    let l = 2.0 * PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut row = |id, what, closed, computed, class| {
        out.push(Row {
            id,
            what,
            closed,
            computed,
            class,
        })
    };

    // three-wave packet, b = 1/2, n = 1, L = 2π
    let pp = ThreeWavePacketParams::new(1, 0.5, l);
    let packet = catalog::three_wave_packet(&pp, &c)?;
    let dp_closed = catalog::packet_momentum_spread(&pp, &c);
    let period = packet.recurrence_period();
    let mut dp_worst = moments::momentum_spread(&packet, 0.0, numerics)?;
    for _ in 0..32 {
        let d = moments::momentum_spread(&packet, rng.gen_range(0.0..period), numerics)?;
        if (d - dp_closed).abs() > (dp_worst - dp_closed).abs() {
            dp_worst = d;
        }
    }
    row("packet-dp", "three-wave packet Δp, worst of 32 random t", dp_closed, dp_worst, Analytic);
    row(
        "packet-cut-midpoint",
        "cut bound at L/2, t = 0",
        0.5 * c.hbar,
        bounds::cut_bound(&packet, 0.0, l / 2.0, numerics)?.value,
        Analytic,
    );
    let t_half = catalog::time_for_alpha(l, 0.5, &c);
    row(
        "packet-min-density",
        "L·min density at α = 1/2",
        catalog::packet_min_and_maxmin(&pp, Some(t_half), &c)?.l_min_density.unwrap_or(f64::NAN),
        bounds::scaled_min_density(&packet, t_half, numerics),
        Quadrature,
    );
    let extrema = catalog::packet_min_and_maxmin(&pp, None, &c)?;
    let maxmin = bounds::maxmin_bound(&packet, numerics)?;
    row(
        "packet-maxmin",
        "max over t of L·min density",
        extrema.maxmin,
        1.0 - 2.0 * maxmin.value / c.hbar,
        Quadrature,
    );
    row("packet-maxmin-bound", "time-independent bound ħ/6", c.hbar / 6.0, maxmin.value, Quadrature);

    // plane wave and sine state
    let pw = catalog::plane_wave(2, l, &c)?;
    row("planewave-dp", "plane wave Δp", 0.0, moments::momentum_spread(&pw, 0.0, numerics)?, Analytic);
    let base = moments::select_window(&pw, 0.0, WindowRule::Base, numerics)?;
    let (m1, m2) = moments::x_moments(&pw, 0.0, &base, numerics)?;
    row("planewave-dx", "plane wave Δx = L/√12", l / 12f64.sqrt(), (m2 - m1 * m1).sqrt(), Quadrature);
    let sine = catalog::sine_test(l, &c)?;
    row(
        "sine-dp",
        "√(2/L)sin(2πx/L): Δp = 2πħ/L",
        2.0 * PI * c.hbar / l,
        moments::momentum_spread(&sine, 0.0, numerics)?,
        Analytic,
    );
    row(
        "sine-trig-spread",
        "Δ((L/2)sin(2πx/L)) = √3L/4",
        3f64.sqrt() * l / 4.0,
        bounds::trig_moments(&sine, 0.0, numerics)?.spread,
        Quadrature,
    );

    // elementary Bloch-sine states, n = 4
    for (k, id_dp, id_dx, id_prod) in [
        (1u32, "elementary-dp-k1", "elementary-dx-k1", "elementary-product-k1"),
        (2, "elementary-dp-k2", "elementary-dx-k2", "elementary-product-k2"),
    ] {
        let p = ElementaryParams::new(4, k, l);
        let s = catalog::half_box_state(&p, &c)?;
        let closed = catalog::elementary_closed_forms(&p, &c)?;
        let r = moments::uncertainty_report(&s, 1.0, WindowRule::MovingNode, BoundKind::MinDensity, numerics)?;
        row(id_dp, "elementary Δp = kπħ/L", closed.dp, r.dp, Analytic);
        row(id_dx, "elementary Δx on the moving window", closed.dx, r.dx, Quadrature);
        row(id_prod, "elementary Δx·Δp", closed.product, r.product, Quadrature);
        if k == 1 {
            row("elementary-mean-x", "⟨x⟩ = L/2 + (p_n/m)t at t = 1", l / 2.0 + closed.mean_p, r.mean_x, Quadrature);
            row("elementary-kennard", "min-density bound ħ/2 at t = 1", 0.5 * c.hbar, r.bound_value, Analytic);
        }
    }

    // wall force on a two-mode envelope against a finite difference of ⟨p⟩_φ
    let env = BlochSineState::normalized(
        BoxDomain::with_length(l)?,
        c,
        1.0,
        vec![(1, Complex::new(1.0, 0.0)), (2, Complex::new(0.3, 0.6))],
    )?;
    let h = 1e-3;
    let t0 = 0.4;
    let p = |t: f64| env.envelope_mean_momentum(t, numerics);
    let fd = (p(t0 - 2.0 * h) - 8.0 * p(t0 - h) + 8.0 * p(t0 + h) - p(t0 + 2.0 * h)) / (12.0 * h);
    row("boundary-force", "wall force vs d⟨p⟩_φ/dt", moments::boundary_force(&env, t0), fd, Quadrature);
    Ok(out)
}

/// Prints the table and optionally writes it as CSV; `Ok(false)` when a row fails.
pub fn run(numerics: &Numerics, seed: u64, out: Option<&Path>) -> anyhow::Result<bool> {
    let rows = rows(numerics, seed)?;
    println!(
        "{:<22} {:>24} {:>24} {:>10} {:>6}  {}",
        "id", "closed", "computed", "abs diff", "pass", "quantity"
    );
    for r in &rows {
        println!(
            "{:<22} {:>24.16e} {:>24.16e} {:>10.2e} {:>6}  {}",
            r.id,
            r.closed,
            r.computed,
            r.diff(),
            if r.pass() { "pass" } else { "FAIL" },
            r.what
        );
    }
    if let Some(path) = out {
        let mut w = sink::csv_writer(Some(path))?;
        w.write_record(["id", "closed", "computed", "abs_diff", "tolerance", "pass", "quantity"])?;
        for r in &rows {
            w.write_record([
                r.id.to_string(),
                fmt_real(r.closed),
                fmt_real(r.computed),
                fmt_real(r.diff()),
                fmt_real(r.tolerance()),
                r.pass().to_string(),
                r.what.to_string(),
            ])?;
        }
        w.flush()?;
    }
    let failed = rows.iter().filter(|r| !r.pass()).count();
    println!("{} rows, {} failed", rows.len(), failed);
    Ok(failed == 0)
}
