//! Lower bounds on `Δp·Δx` for states on a circle.
//!
//! * [`cut_bound`]: cutting the circle at `x_c` turns `[p, X]` into
//!   `(ħ/i)(1 − Lδ(x − x_c))`, which gives `(ħ/2)|1 − L|ψ(x_c)|²|`.
//! * [`min_density_cut`]: the cut at the density minimum,
//!   `(ħ/2)(1 − L·min_x|ψ|²)`, with `Δx` evaluated on `[x₀, x₀ + L]`.
//! * [`maxmin_bound`]: the same with `min_x|ψ|²` maximized over one
//!   recurrence period, a time-independent bound.
//! * [`judge_minimize`]: the shift `γ` minimizing `∫ x²|ψ(x + γ)|² dx` over
//!   `[−L/2, L/2]`, with bound `(ħ/2)(1 − L|ψ(L/2 + γ)|²)`.
//! * [`trig_relation`]: `Δp·Δ((L/2)sin(2πx/L)) ≥ (ħ/2)π|⟨cos(2πx/L)⟩|`.
//!
//! Locations are found by a coarse grid scan followed by golden-section
//! refinement and, where the slope is available, a bisection polish.

use rayon::prelude::*;

use crate::config::Numerics;
use crate::error::Result;
use crate::moments::{self, Window};
use crate::quadrature::Composite;
use crate::scalar::Real;
use crate::search::{golden_section, periodic_grid_argmin, refine_minimum};
use crate::state::{Frame, WaveFunction};

/// Slack used for every `lhs ≥ bound` comparison.
pub const SATISFACTION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prescription {
    Cut,
    MinDensity,
    MaxMin,
    Judge,
    Trig,
}

impl Prescription {
    pub fn name(&self) -> &'static str {
        match self {
            Prescription::Cut => "cut",
            Prescription::MinDensity => "min_density",
            Prescription::MaxMin => "maxmin",
            Prescription::Judge => "judge",
            Prescription::Trig => "trig",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness<T> {
    CutX(T),
    Gamma(T),
    Time(T),
    None,
}

impl<T: Real> Witness<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Witness::CutX(_) => "cut_x",
            Witness::Gamma(_) => "gamma",
            Witness::Time(_) => "t",
            Witness::None => "none",
        }
    }

    pub fn value(&self) -> Option<T> {
        match *self {
            Witness::CutX(v) | Witness::Gamma(v) | Witness::Time(v) => Some(v),
            Witness::None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult<T> {
    pub kind: Prescription,
    pub value: T,
    pub witness: Witness<T>,
    pub lhs_product: T,
    pub satisfied: bool,
    /// Several locations tie for the optimum; the smallest one is reported.
    pub degenerate: bool,
}

impl<T: Real> BoundResult<T> {
    fn new(kind: Prescription, value: T, witness: Witness<T>, lhs_product: T, degenerate: bool) -> Self {
        Self {
            kind,
            value,
            witness,
            lhs_product,
            satisfied: lhs_product >= value - T::lit(SATISFACTION_SLACK),
            degenerate,
        }
    }
}

fn half_hbar<T: Real, S: WaveFunction<T> + ?Sized>(state: &S) -> T {
    state.constants().hbar / T::lit(2.0)
}

fn product_on_window<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    start: T,
    numerics: &Numerics,
) -> Result<(T, T, T)> {
    let window = Window::new(start, state.domain().length)?;
    let dx = moments::position_moments(state, t, &window, numerics)?.variance.sqrt();
    let dp = moments::momentum_spread(state, t, numerics)?;
    Ok((dx * dp, dx, dp))
}

/// `(ħ/2)|1 − L|ψ(cut_x, t)|²|`, with `Δx` on `[cut_x, cut_x + L]`.
pub fn cut_bound<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    cut_x: T,
    numerics: &Numerics,
) -> Result<BoundResult<T>> {
    let rho = crate::state::density(state, cut_x, t)?;
    let value = half_hbar(state) * (T::one() - state.domain().length * rho).abs();
    let (lhs, _, _) = product_on_window(state, t, cut_x, numerics)?;
    Ok(BoundResult::new(Prescription::Cut, value, Witness::CutX(cut_x), lhs, false))
}

/// Location and value of the density minimum on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMinimum<T> {
    pub x: T,
    pub density: T,
    pub degenerate: bool,
}

fn minimum_of_frame<T: Real>(frame: &Frame<T>, start: T, circumference: T, length: T, numerics: &Numerics) -> DensityMinimum<T> {
    let per_length = (circumference / length).round().to_usize().unwrap_or(1).max(1);
    let n = numerics.x_grid * per_length;
    let step = circumference / T::from_usize_lossy(n);
    let samples = frame.sample_density(start, step, n);
    let peak = samples.iter().copied().fold(T::zero(), T::max);
    let tie = T::tol(1e-13) * peak.max(length.recip());
    let grid = periodic_grid_argmin(&samples, tie);
    let center = start + step * T::from_usize_lossy(grid.index);
    let x = if grid.flat {
        center
    } else {
        refine_minimum(
            |x| frame.density(x),
            Some(|x| frame.density_dx(x)),
            center,
            step,
            T::tol(1e-13) * length,
        )
    };
    // wrap into [start, start + C); a point within round-off below start stays at start
    let mut offset = (x - start) % circumference;
    if offset < T::zero() {
        offset = offset + circumference;
    }
    if circumference - offset <= T::tol(1e-12) * circumference {
        offset = T::zero();
    }
    let x = start + offset;
    DensityMinimum {
        x,
        density: frame.density(x),
        degenerate: grid.degenerate,
    }
}

/// Minimum of `|ψ(·, t)|²` on the state's circle.
///
/// Ties (within round-off of the peak density) break toward the smallest
/// offset from [`circle_start`](WaveFunction::circle_start).
pub fn density_minimum<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    numerics: &Numerics,
) -> Result<DensityMinimum<T>> {
    if !t.is_finite() {
        return Err(crate::Error::Domain(format!("t = {t}")));
    }
    Ok(minimum_of_frame(
        &state.frame(t),
        state.circle_start(t),
        state.circumference(),
        state.domain().length,
        numerics,
    ))
}

/// `(ħ/2)(1 − L·min_x|ψ(x, t)|²)` with `Δx` on `[x₀, x₀ + L]`.
pub fn min_density_cut<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    numerics: &Numerics,
) -> Result<BoundResult<T>> {
    let min = density_minimum(state, t, numerics)?;
    let value = half_hbar(state) * (T::one() - state.domain().length * min.density).max(T::zero());
    let (lhs, _, _) = product_on_window(state, t, min.x, numerics)?;
    Ok(BoundResult::new(Prescription::MinDensity, value, Witness::CutX(min.x), lhs, min.degenerate))
}

/// `L·min_x|ψ(x, t)|²`.
pub fn scaled_min_density<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, t: T, numerics: &Numerics) -> T {
    let m = minimum_of_frame(
        &state.frame(t),
        state.circle_start(t),
        state.circumference(),
        state.domain().length,
        numerics,
    );
    state.domain().length * m.density
}

/// `(ħ/2)(1 − L·max_t min_x|ψ|²)` over one recurrence period.
pub fn maxmin_bound<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, numerics: &Numerics) -> Result<BoundResult<T>> {
    let period = state.recurrence_period();
    let n = numerics.time_samples.max(2);
    let dt = period / T::from_usize_lossy(n);
    let samples: Vec<T> = (0..n)
        .into_par_iter()
        .map(|i| scaled_min_density(state, dt * T::from_usize_lossy(i), numerics))
        .collect();
    let negated: Vec<T> = samples.iter().map(|v| -*v).collect();
    let grid = periodic_grid_argmin(&negated, T::tol(1e-13));
    let t_grid = dt * T::from_usize_lossy(grid.index);
    let (t_star, g_star) = if grid.flat {
        (t_grid, samples[grid.index])
    } else {
        let (t, neg) = golden_section(
            |t| -scaled_min_density(state, t, numerics),
            t_grid - dt,
            t_grid + dt,
            T::tol(1e-12) * period,
            200,
        );
        if -neg >= samples[grid.index] {
            (t, -neg)
        } else {
            (t_grid, samples[grid.index])
        }
    };
    let value = half_hbar(state) * (T::one() - g_star).max(T::zero());
    let cut = density_minimum(state, t_star, numerics)?;
    let (lhs, _, _) = product_on_window(state, t_star, cut.x, numerics)?;
    Ok(BoundResult::new(Prescription::MaxMin, value, Witness::Time(t_star), lhs, grid.degenerate))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JudgeResult<T> {
    /// Center of the minimizing window `[γ − L/2, γ + L/2]`.
    pub gamma: T,
    /// `√(Δx)²_γ`.
    pub dx_gamma: T,
    /// `∫ x|ψ(x + γ*)|² dx` over `[−L/2, L/2]`; zero at a stationary shift of a periodic density.
    pub mean_x: T,
    /// `1 − L|ψ(L/2 + γ*)|²`, half the second derivative of `(Δx)²_γ`.
    pub curvature: T,
    pub curvature_ok: bool,
    /// `(ħ/2)(1 − L|ψ(L/2 + γ*)|²)`.
    pub bound: T,
    pub dp: T,
    /// `Δp·(Δx)_γ`.
    pub product: T,
    pub degenerate: bool,
}

struct ShiftedMoments<'a, T> {
    frame: &'a Frame<T>,
    rule: Composite<T>,
    half: T,
}

impl<T: Real> ShiftedMoments<'_, T> {
    fn first(&self, gamma: T) -> T {
        self.rule
            .integrate(-self.half, self.half, |x| x * self.frame.density(x + gamma))
    }

    fn second(&self, gamma: T) -> T {
        self.rule
            .integrate(-self.half, self.half, |x| x * x * self.frame.density(x + gamma))
    }

    fn slope(&self, gamma: T) -> T {
        let h2 = self.half * self.half;
        h2 * (self.frame.density(gamma + self.half) - self.frame.density(gamma - self.half))
            - T::lit(2.0) * self.first(gamma)
    }
}

/// Minimizes `(Δx)²_γ = ∫_{−L/2}^{L/2} x²|ψ(x + γ, t)|² dx` over shifts on the circle.
pub fn judge_minimize<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    numerics: &Numerics,
) -> Result<JudgeResult<T>> {
    if !t.is_finite() {
        return Err(crate::Error::Domain(format!("t = {t}")));
    }
    let l = state.domain().length;
    let circumference = state.circumference();
    let start = state.circle_start(t);
    let frame = state.frame(t);

    // coarse scan: periodic trapezoid sums on a shared grid
    let per_box = numerics.gamma_grid.max(4) & !1;
    let copies = (circumference / l).round().to_usize().unwrap_or(1).max(1);
    let n = per_box * copies;
    let h = l / T::from_usize_lossy(per_box);
    let rho = frame.sample_density(start, h, n);
    let half_pts = per_box / 2;
    let weights: Vec<(isize, T)> = (-(half_pts as isize)..=half_pts as isize)
        .map(|i| {
            let x = h * T::from_i64_lossy(i as i64);
            let w = if i.unsigned_abs() == half_pts { T::lit(0.5) } else { T::one() };
            (i, w * x * x * h)
        })
        .collect();
    let scan: Vec<T> = (0..n)
        .map(|j| {
            weights
                .iter()
                .map(|&(i, w)| w * rho[(j as isize + i).rem_euclid(n as isize) as usize])
                .sum()
        })
        .collect();
    let peak = scan.iter().copied().fold(T::zero(), T::max);
    let grid = periodic_grid_argmin(&scan, T::tol(1e-13) * peak);

    let moments = ShiftedMoments {
        frame: &frame,
        rule: numerics.quadrature_for_modes::<T>(
            state.as_bloch_sine().map(|s| s.max_mode() as usize).unwrap_or(0),
        ),
        half: l / T::lit(2.0),
    };
    let center = start + h * T::from_usize_lossy(grid.index);
    let gamma = if grid.flat {
        center
    } else {
        refine_minimum(
            |g| moments.second(g),
            Some(|g| moments.slope(g)),
            center,
            h,
            T::tol(1e-13) * l,
        )
    };
    let mut offset = (gamma - start) % circumference;
    if offset < T::zero() {
        offset = offset + circumference;
    }
    if circumference - offset <= T::tol(1e-12) * circumference {
        offset = T::zero();
    }
    let gamma = start + offset;

    let v = moments.second(gamma).max(T::zero());
    let mean_x = moments.first(gamma);
    let edge = l * frame.density(gamma + l / T::lit(2.0));
    let curvature = T::one() - edge;
    let bound = half_hbar(state) * curvature;
    let dp = moments::momentum_spread(state, t, numerics)?;
    let dx_gamma = v.sqrt();
    Ok(JudgeResult {
        gamma,
        dx_gamma,
        mean_x,
        curvature,
        curvature_ok: curvature >= T::lit(-1e-8),
        bound,
        dp,
        product: dp * dx_gamma,
        degenerate: grid.degenerate,
    })
}

/// [`judge_minimize`] packaged as a [`BoundResult`].
pub fn judge_bound<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    numerics: &Numerics,
) -> Result<BoundResult<T>> {
    let j = judge_minimize(state, t, numerics)?;
    Ok(BoundResult::new(Prescription::Judge, j.bound, Witness::Gamma(j.gamma), j.product, j.degenerate))
}

/// Both sides of the two inequalities relating the min-cut and Judge prescriptions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck<T> {
    /// `(ħ/2)(1 − L·min|ψ|²)`.
    pub lhs_bounds: T,
    /// `(ħ/2)(1 − L|ψ(L/2 + γ*)|²)`.
    pub rhs_bounds: T,
    /// `Δp·Δx` on the min-cut window.
    pub lhs_products: T,
    /// `Δp·(Δx)_γ`.
    pub rhs_products: T,
    pub ok: bool,
}

pub fn chain_check<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    numerics: &Numerics,
) -> Result<ChainCheck<T>> {
    let min = density_minimum(state, t, numerics)?;
    let lhs_bounds = half_hbar(state) * (T::one() - state.domain().length * min.density);
    let (lhs_products, _, _) = product_on_window(state, t, min.x, numerics)?;
    let judge = judge_minimize(state, t, numerics)?;
    let slack = T::lit(SATISFACTION_SLACK);
    Ok(ChainCheck {
        lhs_bounds,
        rhs_bounds: judge.bound,
        lhs_products,
        rhs_products: judge.product,
        ok: lhs_bounds >= judge.bound - slack && lhs_products >= judge.product - slack,
    })
}

/// Expectations of `sin(2πx/L)`, `sin²(2πx/L)` and `cos(2πx/L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMoments<T> {
    pub mean_sin: T,
    pub mean_sin2: T,
    pub mean_cos: T,
    /// `Δ((L/2) sin(2πx/L))`.
    pub spread: T,
}

/// Trig moments over the state's natural window: the base window for
/// plane-wave states, the moving window for Bloch-sine states.
pub fn trig_moments<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, t: T, numerics: &Numerics) -> Result<TrigMoments<T>> {
    if !t.is_finite() {
        return Err(crate::Error::Domain(format!("t = {t}")));
    }
    let l = state.domain().length;
    let start = match state.as_bloch_sine() {
        Some(b) => b.wall(t),
        None => state.domain().origin,
    };
    let frame = state.frame(t);
    let k = T::lit(2.0) * T::PI() / l;
    let rule = numerics
        .quadrature_for_modes::<T>(state.as_bloch_sine().map(|s| s.max_mode() as usize).unwrap_or(0))
        .refined();
    let (mut s1, mut s2, mut c1) = (T::zero(), T::zero(), T::zero());
    for (x, w) in rule.points(start, start + l) {
        let r = frame.density(x) * w;
        let (s, c) = (k * x).sin_cos();
        s1 = s1 + r * s;
        s2 = s2 + r * s * s;
        c1 = c1 + r * c;
    }
    let spread = l / T::lit(2.0) * (s2 - s1 * s1).max(T::zero()).sqrt();
    Ok(TrigMoments {
        mean_sin: s1,
        mean_sin2: s2,
        mean_cos: c1,
        spread,
    })
}

/// `Δp·Δ((L/2)sin(2πx/L)) ≥ (ħ/2)π|⟨cos(2πx/L)⟩|`.
pub fn trig_relation<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    numerics: &Numerics,
) -> Result<BoundResult<T>> {
    let m = trig_moments(state, t, numerics)?;
    let dp = moments::momentum_spread(state, t, numerics)?;
    let value = half_hbar(state) * T::PI() * m.mean_cos.abs();
    Ok(BoundResult::new(Prescription::Trig, value, Witness::None, dp * m.spread, false))
}
