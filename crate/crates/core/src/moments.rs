//! Position and momentum moments over a window of one box length.
//!
//! Momentum moments of plane-wave states come straight from the coefficient
//! weights. For Bloch-sine states they split into the Bloch momentum plus the
//! envelope moments, `⟨p⟩ = p̄ + ⟨p⟩_φ(t)` and
//! `⟨p²⟩ = p̄² + 2p̄⟨p⟩_φ(t) + ⟨p²⟩_φ`, so `Δp` is that of the envelope.
//! Position moments are Gauss–Legendre integrals of `x|ψ|²` and `x²|ψ|²` over
//! the window, checked against a run with twice as many panels.

use crate::bounds;
use crate::config::Numerics;
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use crate::state::{BlochSineState, WaveFunction};

/// Integration window `[start, start + width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window<T> {
    pub start: T,
    pub width: T,
}

impl<T: Real> Window<T> {
    pub fn new(start: T, width: T) -> Result<Self> {
        if !start.is_finite() || !(width > T::zero() && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "window needs finite start and positive width, got [{start}, +{width}]"
            )));
        }
        Ok(Self { start, width })
    }

    pub fn end(&self) -> T {
        self.start + self.width
    }

    pub fn center(&self) -> T {
        self.start + self.width / T::lit(2.0)
    }
}

/// How the window is placed for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowRule {
    /// `[x_lo, x_lo + L]`.
    Base,
    /// `[x_lo + (p̄/m)t, x_lo + L + (p̄/m)t]`; Bloch-sine states only.
    MovingNode,
    /// `[x₀, x₀ + L]` with `x₀` the density minimum on the circle.
    MinCut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    None,
    Cut,
    MinDensity,
    MaxMin,
    Judge,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::None => "none",
            BoundKind::Cut => "cut",
            BoundKind::MinDensity => "min_density",
            BoundKind::MaxMin => "maxmin",
            BoundKind::Judge => "judge",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport<T> {
    pub window: Window<T>,
    pub t: T,
    pub mean_x: T,
    pub mean_x2: T,
    pub mean_p: T,
    pub mean_p2: T,
    pub dx: T,
    pub dp: T,
    pub product: T,
    pub bound_kind: BoundKind,
    pub bound_value: T,
    /// `product ≥ bound_value − 1e-9`.
    pub satisfied: bool,
}

/// Position moments; the variance is accumulated about the window center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionMoments<T> {
    pub norm: T,
    pub mean_x: T,
    pub mean_x2: T,
    pub variance: T,
}

/// `(⟨p⟩, ⟨p²⟩)` at time `t`.
pub fn p_moments<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, t: T, numerics: &Numerics) -> Result<(T, T)> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("t = {t}")));
    }
    Ok(state.momentum_moments(t, numerics))
}

/// `Δp` from `p_moments`, clamped at zero against round-off.
pub fn momentum_spread<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, t: T, numerics: &Numerics) -> Result<T> {
    let (m1, m2) = p_moments(state, t, numerics)?;
    Ok((m2 - m1 * m1).max(T::zero()).sqrt())
}

fn integrate_position<T: Real>(
    density: impl Fn(T) -> T,
    window: &Window<T>,
    rule: &crate::quadrature::Composite<T>,
) -> (T, T, T, T) {
    let c = window.center();
    let mut acc = (T::zero(), T::zero(), T::zero());
    for (x, w) in rule.points(window.start, window.end()) {
        let r = density(x) * w;
        let d = x - c;
        acc = (acc.0 + r, acc.1 + r * d, acc.2 + r * d * d);
    }
    let (norm, m1c, m2c) = acc;
    let mean_x = c + m1c;
    let mean_x2 = m2c + T::lit(2.0) * c * m1c + c * c * norm;
    let variance = m2c - m1c * m1c;
    (norm, mean_x, mean_x2, variance)
}

fn close<T: Real>(a: T, b: T, rel: f64) -> bool {
    (a - b).abs() <= T::lit(rel) * T::one().max(a.abs()).max(b.abs())
}

/// Moments over `window` with convergence and normalization checks.
///
/// Fails with [`Error::Quadrature`] when doubling the panel count moves a
/// moment by more than `numerics.refinement_delta`, and with
/// [`Error::Precondition`] when the window does not hold unit probability or
/// is not one box length wide.
pub fn position_moments<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    window: &Window<T>,
    numerics: &Numerics,
) -> Result<PositionMoments<T>> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("t = {t}")));
    }
    let l = state.domain().length;
    if !close(window.width, l, 1e-12) {
        return Err(Error::Precondition(format!(
            "window width {} must equal the box length {l}",
            window.width
        )));
    }
    let frame = state.frame(t);
    let kmax = state.as_bloch_sine().map(|s| s.max_mode() as usize).unwrap_or(0);
    let rule = numerics.quadrature_for_modes::<T>(kmax);
    let coarse = integrate_position(|x| frame.density(x), window, &rule);
    let fine = integrate_position(|x| frame.density(x), window, &rule.refined());
    let delta = ((coarse.1 - fine.1).abs() / T::one().max(fine.1.abs()))
        .max((coarse.2 - fine.2).abs() / T::one().max(fine.2.abs()));
    // the requested delta cannot go below what the scalar type resolves
    if delta > T::tol(numerics.refinement_delta).max(T::epsilon() * T::lit(1024.0)) {
        return Err(Error::Quadrature { delta: delta.as_f64() });
    }
    let (norm, mean_x, mean_x2, variance) = fine;
    if (norm - T::one()).abs() > T::tol(1e-8).max(T::epsilon() * T::lit(1024.0)) {
        return Err(Error::Precondition(format!(
            "window [{}, {}] holds probability {norm}, not 1",
            window.start,
            window.end()
        )));
    }
    if let Some(bloch) = state.as_bloch_sine() {
        let wall = bloch.wall(t);
        if close(window.start, wall, 1e-12) {
            check_envelope_decomposition(bloch, t, mean_x, mean_x2, numerics)?;
        }
    }
    Ok(PositionMoments {
        norm,
        mean_x,
        mean_x2,
        variance: variance.max(T::zero()),
    })
}

/// `(⟨x⟩, ⟨x²⟩)` over `window`.
pub fn x_moments<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    window: &Window<T>,
    numerics: &Numerics,
) -> Result<(T, T)> {
    position_moments(state, t, window, numerics).map(|m| (m.mean_x, m.mean_x2))
}

/// Envelope moments `⟨x⟩_φ`, `⟨x²⟩_φ` over `[0, L]`.
pub fn envelope_x_moments<T: Real>(state: &BlochSineState<T>, t: T, numerics: &Numerics) -> (T, T) {
    let frame = state.frame(t);
    let wall = state.wall(t);
    let rule = numerics.quadrature_for_modes::<T>(state.max_mode() as usize);
    let l = state.domain().length;
    let (_, m1, m2, _) = integrate_position(|y| frame.density(y + wall), &Window { start: T::zero(), width: l }, &rule);
    (m1, m2)
}

// ⟨x⟩ = vt + ⟨x⟩_φ and ⟨x²⟩ = (vt)² + 2vt⟨x⟩_φ + ⟨x²⟩_φ on the moving window.
fn check_envelope_decomposition<T: Real>(
    state: &BlochSineState<T>,
    t: T,
    mean_x: T,
    mean_x2: T,
    numerics: &Numerics,
) -> Result<()> {
    let (m1, m2) = envelope_x_moments(state, t, numerics);
    let shift = state.wall(t);
    let expect1 = shift + m1;
    let expect2 = shift * shift + T::lit(2.0) * shift * m1 + m2;
    let d1 = (mean_x - expect1).abs() / T::one().max(mean_x.abs());
    let d2 = (mean_x2 - expect2).abs() / T::one().max(mean_x2.abs());
    let delta = d1.max(d2);
    if delta > T::lit(1e-8) {
        return Err(Error::Quadrature { delta: delta.as_f64() });
    }
    Ok(())
}

/// Window selected by `rule` at time `t`.
pub fn select_window<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    rule: WindowRule,
    numerics: &Numerics,
) -> Result<Window<T>> {
    let dom = state.domain();
    match rule {
        WindowRule::Base => Window::new(dom.origin, dom.length),
        WindowRule::MovingNode => {
            let bloch = state.as_bloch_sine().ok_or_else(|| {
                Error::Precondition("the moving-node window is defined for Bloch-sine states only".into())
            })?;
            Window::new(bloch.wall(t), dom.length)
        }
        WindowRule::MinCut => {
            let cut = bounds::density_minimum(state, t, numerics)?;
            Window::new(cut.x, dom.length)
        }
    }
}

/// Moments, deviations, product, and the requested lower bound at time `t`.
pub fn uncertainty_report<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    rule: WindowRule,
    bound_kind: BoundKind,
    numerics: &Numerics,
) -> Result<UncertaintyReport<T>> {
    let window = select_window(state, t, rule, numerics)?;
    let pos = position_moments(state, t, &window, numerics)?;
    let (mean_p, mean_p2) = p_moments(state, t, numerics)?;
    let dx = pos.variance.sqrt();
    let dp = (mean_p2 - mean_p * mean_p).max(T::zero()).sqrt();
    let product = dx * dp;
    let bound_value = match bound_kind {
        BoundKind::None => T::zero(),
        BoundKind::Cut => bounds::cut_bound(state, t, window.start, numerics)?.value,
        BoundKind::MinDensity => bounds::min_density_cut(state, t, numerics)?.value,
        BoundKind::MaxMin => bounds::maxmin_bound(state, numerics)?.value,
        BoundKind::Judge => bounds::judge_minimize(state, t, numerics)?.bound,
    };
    Ok(UncertaintyReport {
        window,
        t,
        mean_x: pos.mean_x,
        mean_x2: pos.mean_x2,
        mean_p,
        mean_p2,
        dx,
        dp,
        product,
        bound_kind,
        bound_value,
        satisfied: product >= bound_value - T::lit(bounds::SATISFACTION_SLACK),
    })
}

/// `d⟨p⟩_φ/dt` from the wall derivatives of the envelope:
/// `(1/(mL))·(|Σ c_k p_k e^{−iω_k t}|² − |Σ (−1)^k c_k p_k e^{−iω_k t}|²)`.
pub fn boundary_force<T: Real>(state: &BlochSineState<T>, t: T) -> T {
    let zero = Complex::new(T::zero(), T::zero());
    let (left, right) = state
        .envelope_amplitudes(t)
        .into_iter()
        .fold((zero, zero), |(l, r), (k, a)| {
            let term = a * state.mode_momentum(k);
            let signed = if k % 2 == 0 { term } else { -term };
            (l + term, r + signed)
        });
    let consts = state.constants();
    (left.norm_sqr() - right.norm_sqr()) / (consts.mass * state.domain().length)
}

/// Partial sums of `Σ|c_k p_k|` and `Σ|c_k p_k|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceNorm<T> {
    pub sum_abs: T,
    pub sum_sq: T,
    /// `(K, Σ_{k≤K} |c_k p_k|)` at `K = 1, 2, 4, …` and at the largest mode.
    pub partial_sums: Vec<(u32, T)>,
    pub cap: T,
    /// `sum_abs > cap`.
    pub violated: bool,
}

impl<T: Real> ConvergenceNorm<T> {
    /// Ratio of the last two doubling increments of the partial sums.
    ///
    /// About 1/2 or less for a convergent tail, about 1 for logarithmic growth,
    /// about 2 for linear growth.
    pub fn doubling_ratio(&self) -> Option<T> {
        let pow2: Vec<_> = self
            .partial_sums
            .iter()
            .filter(|(k, _)| k.is_power_of_two())
            .collect();
        if pow2.len() < 3 {
            return None;
        }
        let n = pow2.len();
        let last = pow2[n - 1].1 - pow2[n - 2].1;
        let prev = pow2[n - 2].1 - pow2[n - 3].1;
        if prev == T::zero() {
            return None;
        }
        Some(last / prev)
    }
}

pub fn convergence_norm<T: Real>(state: &BlochSineState<T>, cap: T) -> ConvergenceNorm<T> {
    let kmax = state.max_mode();
    let mut sum_abs = T::zero();
    let mut sum_sq = T::zero();
    let mut partial_sums = Vec::new();
    let mut next_mark = 1u32;
    let mut coeffs = state.coeffs().iter().peekable();
    for k in 1..=kmax {
        if let Some(&&(kk, c)) = coeffs.peek() {
            if kk == k {
                let v = c.norm() * state.mode_momentum(k);
                sum_abs = sum_abs + v;
                sum_sq = sum_sq + v * v;
                coeffs.next();
            }
        }
        if k == next_mark {
            partial_sums.push((k, sum_abs));
            next_mark = next_mark.saturating_mul(2);
        }
    }
    if partial_sums.last().map(|p| p.0) != Some(kmax) {
        partial_sums.push((kmax, sum_abs));
    }
    ConvergenceNorm {
        sum_abs,
        sum_sq,
        partial_sums,
        cap,
        violated: sum_abs > cap,
    }
}

/// Mean position over the window that co-moves with the state.
///
/// The window is `[x_lo + v t, x_lo + L + v t]` with `v` the state's
/// [`window_velocity`](WaveFunction::window_velocity): `p̄/m` for Bloch-sine
/// states, `⟨p⟩/m` for plane-wave states.
pub fn comoving_mean_x<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, t: T, numerics: &Numerics) -> Result<T> {
    let dom = state.domain();
    let window = Window::new(dom.origin + state.window_velocity() * t, dom.length)?;
    Ok(position_moments(state, t, &window, numerics)?.mean_x)
}

/// Default step for [`ehrenfest_residual`]: one thousandth of the recurrence period.
pub fn ehrenfest_step<T: Real, S: WaveFunction<T> + ?Sized>(state: &S) -> T {
    state.recurrence_period() / T::lit(1000.0)
}

/// `|d⟨x⟩/dt − ⟨p⟩/m|` with `d⟨x⟩/dt` from a five-point central difference on co-moving windows.
pub fn ehrenfest_residual<T: Real, S: WaveFunction<T> + ?Sized>(
    state: &S,
    t: T,
    dt: T,
    numerics: &Numerics,
) -> Result<T> {
    if !(dt > T::zero() && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let x = |s: T| comoving_mean_x(state, s, numerics);
    let two = T::lit(2.0);
    let velocity = (x(t - two * dt)? - x(t - dt)? * T::lit(8.0) + x(t + dt)? * T::lit(8.0) - x(t + two * dt)?)
        / (T::lit(12.0) * dt);
    let (mean_p, _) = p_moments(state, t, numerics)?;
    Ok((velocity - mean_p / state.constants().mass).abs())
}
