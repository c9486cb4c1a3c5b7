//! Localized initial profiles: mean momentum and expansion in the moving sine basis.
//!
//! A profile `ψ(x, 0)` on `[x_lo, x_lo + L]` that vanishes at both ends is
//! written as `e^{ip̄x/ħ} Σ c_k √(2/L) sin(kπ(x - x_lo)/L)`: the plane-wave
//! factor is stripped first, then the remainder is projected onto the
//! orthonormal sine basis. Note this differs from expanding `ψ` itself in
//! sines; the stripped form is what evolves as a moving well.

use crate::config::Numerics;
use crate::error::{Error, Result};
use crate::scalar::{cis, Complex, Real};
use crate::state::{BlochSineState, BoxDomain, Constants};

const EDGE_TOLERANCE: f64 = 1e-8;
const NORM_TOLERANCE: f64 = 1e-8;

fn check_edges<T: Real, F: Fn(T) -> Complex<T>>(profile: &F, domain: &BoxDomain<T>) -> Result<()> {
    let left = profile(domain.origin).norm();
    let right = profile(domain.end()).norm();
    let tol = T::lit(EDGE_TOLERANCE);
    if !(left <= tol && right <= tol) {
        return Err(Error::Precondition(format!(
            "profile must vanish at both ends of the box: |ψ| = {left:e} and {right:e}"
        )));
    }
    Ok(())
}

fn profile_norm<T: Real, F: Fn(T) -> Complex<T>>(profile: &F, domain: &BoxDomain<T>, numerics: &Numerics) -> T {
    numerics
        .quadrature::<T>()
        .integrate(domain.origin, domain.end(), |x| profile(x).norm_sqr())
}

/// Fourth-order finite-difference derivative that stays inside `[lo, hi]`.
fn derivative<T: Real, F: Fn(T) -> Complex<T>>(f: &F, x: T, h: T, lo: T, hi: T) -> Complex<T> {
    let twelve_h = T::lit(12.0) * h;
    let at = |m: f64| f(x + h * T::lit(m));
    if x - h * T::lit(2.0) >= lo && x + h * T::lit(2.0) <= hi {
        (at(-2.0) - at(-1.0) * T::lit(8.0) + at(1.0) * T::lit(8.0) - at(2.0)) / twelve_h
    } else if x - h * T::lit(2.0) < lo {
        (at(0.0) * T::lit(-25.0) + at(1.0) * T::lit(48.0) - at(2.0) * T::lit(36.0) + at(3.0) * T::lit(16.0)
            - at(4.0) * T::lit(3.0))
            / twelve_h
    } else {
        (at(0.0) * T::lit(25.0) - at(-1.0) * T::lit(48.0) + at(-2.0) * T::lit(36.0) - at(-3.0) * T::lit(16.0)
            + at(-4.0) * T::lit(3.0))
            / twelve_h
    }
}

/// `∫ (ħ/2i)[ψ*∂ψ − (∂ψ)*ψ] dx` over the box, derivative by finite differences.
///
/// The profile must be normalized and vanish at both ends (within `1e-8`).
pub fn mean_momentum<T, F>(profile: F, domain: &BoxDomain<T>, consts: &Constants<T>, numerics: &Numerics) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let norm = profile_norm(&profile, domain, numerics);
    if (norm - T::one()).abs() > T::lit(NORM_TOLERANCE) {
        return Err(Error::NotNormalized { norm: norm.as_f64() });
    }
    check_edges(&profile, domain)?;
    let h = domain.length / T::from_usize_lossy(numerics.fd_points);
    let (lo, hi) = (domain.origin, domain.end());
    let current = numerics.quadrature::<T>().integrate(lo, hi, |x| {
        let psi = profile(x);
        let dpsi = derivative(&profile, x, h, lo, hi);
        (psi.conj() * dpsi).im
    });
    Ok(consts.hbar * current)
}

/// Same functional evaluated spectrally for a state given as a sine expansion.
pub fn mean_momentum_spectral<T: Real>(state: &BlochSineState<T>, numerics: &Numerics) -> T {
    state.bloch_momentum() + state.envelope_mean_momentum(T::zero(), numerics)
}

/// Bloch momentum used when stripping the plane-wave factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlochMomentum<T> {
    Given(T),
    /// Use [`mean_momentum`] of the profile.
    Auto,
}

#[derive(Debug, Clone)]
pub struct Projection<T> {
    /// Renormalized state.
    pub state: BlochSineState<T>,
    /// `1 − Σ|c_k|²/‖ψ‖²` before renormalization.
    pub residual: T,
    /// Coefficients before renormalization.
    pub raw_coeffs: Vec<(u32, Complex<T>)>,
}

/// Expands `profile` as `e^{ip̄x/ħ} Σ_{k=1..modes} c_k √(2/L) sin(kπ(x − x_lo)/L)`.
pub fn project_to_sine<T, F>(
    profile: F,
    bloch_momentum: BlochMomentum<T>,
    modes: usize,
    domain: &BoxDomain<T>,
    consts: &Constants<T>,
    numerics: &Numerics,
) -> Result<Projection<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    if modes == 0 {
        return Err(Error::InvalidParameter("at least one sine mode is required".into()));
    }
    check_edges(&profile, domain)?;
    let pbar = match bloch_momentum {
        BlochMomentum::Given(p) => p,
        BlochMomentum::Auto => mean_momentum(&profile, domain, consts, numerics)?,
    };
    let rule = numerics.quadrature_for_modes::<T>(modes);
    let points = rule.points(domain.origin, domain.end());
    let stripped: Vec<(T, T, Complex<T>)> = points
        .iter()
        .map(|&(x, w)| (x - domain.origin, w, profile(x) * cis(-pbar * x / consts.hbar)))
        .collect();
    let norm: T = stripped.iter().map(|(_, w, g)| *w * g.norm_sqr()).sum();
    if !(norm > T::zero()) {
        return Err(Error::EmptyState);
    }
    let scale = (T::lit(2.0) / domain.length).sqrt();
    let step = T::PI() / domain.length;
    let raw_coeffs: Vec<(u32, Complex<T>)> = (1..=modes as u32)
        .map(|k| {
            let kk = T::from_usize_lossy(k as usize) * step;
            let c = stripped
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &(y, w, g)| acc + g * (w * (kk * y).sin()));
            (k, c * scale)
        })
        .collect();
    let captured: T = raw_coeffs.iter().map(|(_, c)| c.norm_sqr()).sum();
    let residual = T::one() - captured / norm;
    let threshold = T::lit(numerics.residual_threshold);
    if residual > threshold {
        return Err(Error::Truncation {
            residual: residual.as_f64(),
            threshold: threshold.as_f64(),
        });
    }
    let state = BlochSineState::normalized(*domain, *consts, pbar, raw_coeffs.clone())?;
    Ok(Projection {
        state,
        residual,
        raw_coeffs,
    })
}

/// Profiles addressable by name from a state document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedProfile<T> {
    /// `√(2/L) sin(kπy/L)`.
    Sine { k: u32 },
    /// `∝ min(y, L − y)`.
    Triangle,
    /// `∝ exp(−(x − center)²/(4 width²))`; must be negligible at the walls.
    Gaussian { center: T, width: T },
    /// `∝ tanh(y/left)·tanh((L − y)/right)`: flat bulk with fixed-width edge layers.
    BoundaryLayer { left: T, right: T },
}

impl<T: Real> NamedProfile<T> {
    fn shape(&self, domain: &BoxDomain<T>, x: T) -> T {
        let l = domain.length;
        let y = x - domain.origin;
        match *self {
            NamedProfile::Sine { k } => (T::from_usize_lossy(k as usize) * T::PI() * y / l).sin(),
            NamedProfile::Triangle => y.min(l - y).max(T::zero()),
            NamedProfile::Gaussian { center, width } => {
                let d = x - center;
                (-(d * d) / (T::lit(4.0) * width * width)).exp()
            }
            NamedProfile::BoundaryLayer { left, right } => (y / left).tanh() * ((l - y) / right).tanh(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("profile parameter {what} must be positive")));
        match *self {
            NamedProfile::Sine { k } if k == 0 => bad("k"),
            NamedProfile::Gaussian { width, .. } if !(width > T::zero()) => bad("width"),
            NamedProfile::BoundaryLayer { left, right } if !(left > T::zero() && right > T::zero()) => {
                bad("layer width")
            }
            _ => Ok(()),
        }
    }

    /// Normalized profile on `domain`, multiplied by `e^{ip₀x/ħ}`.
    pub fn build(
        &self,
        domain: &BoxDomain<T>,
        consts: &Constants<T>,
        momentum: T,
        numerics: &Numerics,
    ) -> Result<impl Fn(T) -> Complex<T>> {
        self.validate()?;
        let this = *self;
        let dom = *domain;
        let norm = numerics
            .quadrature_for_modes::<T>(match this {
                NamedProfile::Sine { k } => k as usize,
                _ => 0,
            })
            .integrate(dom.origin, dom.end(), |x| {
                let v = this.shape(&dom, x);
                v * v
            });
        if !(norm > T::zero()) {
            return Err(Error::EmptyState);
        }
        let amp = norm.sqrt().recip();
        let hbar = consts.hbar;
        Ok(move |x: T| cis(momentum * x / hbar) * (this.shape(&dom, x) * amp))
    }
}
