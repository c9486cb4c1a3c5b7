//! Free-particle states on a box and their exact time evolution.
//!
//! Two representations are supported:
//!
//! * [`PlaneWaveState`]: a finite superposition of periodic plane waves
//!   `e^{i2πnx/L}/√L` on a circle of circumference `L`.
//! * [`BlochSineState`]: a Bloch phase `e^{ip̄x/ħ}` times a sine-series
//!   envelope `φ(y) = Σ c_k √(2/L) sin(kπy/L)` whose walls move with
//!   velocity `p̄/m`. The envelope is odd about `y = 0`, so the state lives on
//!   a circle of circumference `2L` with `ψ(x + 2L) = e^{i2p̄L/ħ} ψ(x)`.
//!
//! Evolution is analytic: every mode only picks up its energy phase. Bulk
//! evaluation at a fixed time goes through a [`Frame`], which caches the
//! time-dependent amplitudes.

use std::sync::OnceLock;

use crate::config::{MatrixElements, Numerics};
use crate::error::{Error, Result};
use crate::scalar::{cis, Complex, Real};

/// Physical constants; `ħ = m = 1` by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants<T> {
    pub hbar: T,
    pub mass: T,
}

impl<T: Real> Constants<T> {
    pub fn new(hbar: T, mass: T) -> Result<Self> {
        if !(hbar > T::zero() && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass > T::zero() && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { hbar, mass })
    }
}

impl<T: Real> Default for Constants<T> {
    fn default() -> Self {
        Self {
            hbar: T::one(),
            mass: T::one(),
        }
    }
}

/// Base interval `[origin, origin + length]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxDomain<T> {
    pub length: T,
    pub origin: T,
}

impl<T: Real> BoxDomain<T> {
    pub fn new(length: T, origin: T) -> Result<Self> {
        if !(length > T::zero() && length.is_finite()) {
            return Err(Error::InvalidParameter(format!("box length must be positive, got {length}")));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidParameter("box origin must be finite".into()));
        }
        Ok(Self { length, origin })
    }

    pub fn with_length(length: T) -> Result<Self> {
        Self::new(length, T::zero())
    }

    pub fn end(&self) -> T {
        self.origin + self.length
    }
}

fn norm_tolerance<T: Real>() -> T {
    T::tol(1e-12)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of pairwise differences of squared indices; 1 for a single index.
fn squared_index_gcd(indices: impl Iterator<Item = i64>) -> u128 {
    let squares: Vec<i128> = indices.map(|n| (n as i128) * (n as i128)).collect();
    let Some(&first) = squares.first() else {
        return 1;
    };
    let g = squares
        .iter()
        .fold(0u128, |g, &s| gcd(g, (s - first).unsigned_abs()));
    if g == 0 {
        1
    } else {
        g
    }
}

/// Superposition of periodic plane waves on a circle of circumference `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveState<T> {
    domain: BoxDomain<T>,
    consts: Constants<T>,
    modes: Vec<(i64, Complex<T>)>,
}

impl<T: Real> PlaneWaveState<T> {
    /// Builds a state from `(n, c_n)` pairs; requires `Σ|c_n|² = 1`.
    ///
    /// Modes with exactly zero amplitude are dropped.
    pub fn new(domain: BoxDomain<T>, consts: Constants<T>, modes: Vec<(i64, Complex<T>)>) -> Result<Self> {
        let modes: Vec<_> = modes
            .into_iter()
            .filter(|(_, c)| *c != Complex::new(T::zero(), T::zero()))
            .collect();
        if modes.is_empty() {
            return Err(Error::EmptyState);
        }
        let mut seen: Vec<i64> = modes.iter().map(|m| m.0).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("plane-wave mode indices must be distinct".into()));
        }
        if modes.iter().any(|(_, c)| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("mode amplitudes must be finite".into()));
        }
        let norm: T = modes.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm - T::one()).abs() > norm_tolerance::<T>() {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        Ok(Self { domain, consts, modes })
    }

    /// Same as [`new`](Self::new) but rescales the amplitudes to unit norm first.
    pub fn normalized(domain: BoxDomain<T>, consts: Constants<T>, modes: Vec<(i64, Complex<T>)>) -> Result<Self> {
        let norm: T = modes.iter().map(|(_, c)| c.norm_sqr()).sum();
        if !(norm > T::zero()) {
            return Err(Error::EmptyState);
        }
        let s = norm.sqrt();
        Self::new(domain, consts, modes.into_iter().map(|(n, c)| (n, c / s)).collect())
    }

    pub fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }

    pub fn constants(&self) -> &Constants<T> {
        &self.consts
    }

    pub fn modes(&self) -> &[(i64, Complex<T>)] {
        &self.modes
    }

    pub fn wavenumber(&self, n: i64) -> T {
        T::lit(2.0) * T::PI() * T::from_i64_lossy(n) / self.domain.length
    }

    /// `p_n = 2πħn/L`.
    pub fn momentum(&self, n: i64) -> T {
        self.consts.hbar * self.wavenumber(n)
    }

    fn angular_frequency(&self, n: i64) -> T {
        let k = self.wavenumber(n);
        self.consts.hbar * k * k / (T::lit(2.0) * self.consts.mass)
    }

    /// `⟨p⟩` and `⟨p²⟩` from the coefficient weights; exact and time independent.
    pub fn momentum_moments(&self) -> (T, T) {
        self.modes.iter().fold((T::zero(), T::zero()), |(m1, m2), &(n, c)| {
            let w = c.norm_sqr();
            let p = self.momentum(n);
            (m1 + w * p, m2 + w * p * p)
        })
    }

    pub fn frame(&self, t: T) -> Frame<T> {
        let inv_sqrt_l = self.domain.length.sqrt().recip();
        Frame::Modes {
            terms: self
                .modes
                .iter()
                .map(|&(n, c)| {
                    let amp = c * cis(-self.angular_frequency(n) * t) * inv_sqrt_l;
                    (self.wavenumber(n), amp)
                })
                .collect(),
        }
    }

    /// `mL²/(πħ)/g`, with `g` the gcd of differences of squared mode indices.
    pub fn recurrence_period(&self) -> T {
        let base = self.consts.mass * self.domain.length * self.domain.length / (T::PI() * self.consts.hbar);
        let g = squared_index_gcd(self.modes.iter().map(|m| m.0));
        base / T::lit(g as f64)
    }
}

/// Cached sine-mode matrix elements `R_jk = ∫₀ᴸ (2/L) sin(jπy/L) (kπ/L) cos(kπy/L) dy`.
#[derive(Debug, Clone)]
struct MomentumMatrix<T> {
    panels: usize,
    values: Vec<T>,
}

/// Bloch phase times a moving sine-series envelope.
#[derive(Debug, Clone)]
pub struct BlochSineState<T> {
    domain: BoxDomain<T>,
    consts: Constants<T>,
    bloch_momentum: T,
    coeffs: Vec<(u32, Complex<T>)>,
    matrix: OnceLock<MomentumMatrix<T>>,
}

impl<T: Real> PartialEq for BlochSineState<T> {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.consts == other.consts
            && self.bloch_momentum == other.bloch_momentum
            && self.coeffs == other.coeffs
    }
}

impl<T: Real> BlochSineState<T> {
    /// Builds a state from `(k, c_k)` pairs (`k ≥ 1`, distinct); requires `Σ|c_k|² = 1`.
    pub fn new(
        domain: BoxDomain<T>,
        consts: Constants<T>,
        bloch_momentum: T,
        coeffs: Vec<(u32, Complex<T>)>,
    ) -> Result<Self> {
        if !bloch_momentum.is_finite() {
            return Err(Error::InvalidParameter("Bloch momentum must be finite".into()));
        }
        let mut coeffs: Vec<_> = coeffs
            .into_iter()
            .filter(|(_, c)| *c != Complex::new(T::zero(), T::zero()))
            .collect();
        if coeffs.is_empty() {
            return Err(Error::EmptyState);
        }
        if coeffs.iter().any(|(k, _)| *k == 0) {
            return Err(Error::InvalidParameter("sine mode index k must be positive".into()));
        }
        coeffs.sort_by_key(|c| c.0);
        if coeffs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("sine mode indices must be distinct".into()));
        }
        if coeffs.iter().any(|(_, c)| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("mode amplitudes must be finite".into()));
        }
        let norm: T = coeffs.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm - T::one()).abs() > norm_tolerance::<T>() {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        Ok(Self {
            domain,
            consts,
            bloch_momentum,
            coeffs,
            matrix: OnceLock::new(),
        })
    }

    pub fn normalized(
        domain: BoxDomain<T>,
        consts: Constants<T>,
        bloch_momentum: T,
        coeffs: Vec<(u32, Complex<T>)>,
    ) -> Result<Self> {
        let norm: T = coeffs.iter().map(|(_, c)| c.norm_sqr()).sum();
        if !(norm > T::zero()) {
            return Err(Error::EmptyState);
        }
        let s = norm.sqrt();
        Self::new(
            domain,
            consts,
            bloch_momentum,
            coeffs.into_iter().map(|(k, c)| (k, c / s)).collect(),
        )
    }

    pub fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }

    pub fn constants(&self) -> &Constants<T> {
        &self.consts
    }

    pub fn bloch_momentum(&self) -> T {
        self.bloch_momentum
    }

    pub fn coeffs(&self) -> &[(u32, Complex<T>)] {
        &self.coeffs
    }

    pub fn max_mode(&self) -> u32 {
        self.coeffs.last().map(|c| c.0).unwrap_or(0)
    }

    /// Velocity `p̄/m` of the moving walls.
    pub fn drift_velocity(&self) -> T {
        self.bloch_momentum / self.consts.mass
    }

    /// Left wall of the envelope at time `t`.
    pub fn wall(&self, t: T) -> T {
        self.domain.origin + self.drift_velocity() * t
    }

    /// `p_k = kπħ/L`.
    pub fn mode_momentum(&self, k: u32) -> T {
        T::from_usize_lossy(k as usize) * T::PI() * self.consts.hbar / self.domain.length
    }

    fn mode_frequency(&self, k: u32) -> T {
        let p = self.mode_momentum(k);
        p * p / (T::lit(2.0) * self.consts.mass * self.consts.hbar)
    }

    /// Envelope amplitudes `c_k e^{-ip_k²t/(2mħ)}` at time `t`.
    pub fn envelope_amplitudes(&self, t: T) -> Vec<(u32, Complex<T>)> {
        self.coeffs
            .iter()
            .map(|&(k, c)| (k, c * cis(-self.mode_frequency(k) * t)))
            .collect()
    }

    pub fn frame(&self, t: T) -> Frame<T> {
        let scale = (T::lit(2.0) / self.domain.length).sqrt();
        let pbar = self.bloch_momentum;
        let phase = cis(-pbar * pbar * t / (T::lit(2.0) * self.consts.mass * self.consts.hbar));
        Frame::Bloch {
            bloch_wavenumber: pbar / self.consts.hbar,
            phase,
            wall: self.wall(t),
            mode_step: T::PI() / self.domain.length,
            terms: self
                .envelope_amplitudes(t)
                .into_iter()
                .map(|(k, a)| (T::from_usize_lossy(k as usize), a * scale))
                .collect(),
        }
    }

    /// `4mL²/(πħ)/g` with `g` the gcd of differences of `k²`: period of the envelope density.
    pub fn recurrence_period(&self) -> T {
        let base = T::lit(4.0) * self.consts.mass * self.domain.length * self.domain.length
            / (T::PI() * self.consts.hbar);
        let g = squared_index_gcd(self.coeffs.iter().map(|c| c.0 as i64));
        base / T::lit(g as f64)
    }

    fn quadrature_matrix(&self, numerics: &Numerics) -> Vec<T> {
        let kmax = self.max_mode() as usize;
        let rule = numerics.quadrature_for_modes::<T>(kmax);
        let l = self.domain.length;
        let step = T::PI() / l;
        let points = rule.points(T::zero(), l);
        let ks: Vec<u32> = self.coeffs.iter().map(|c| c.0).collect();
        let sines: Vec<Vec<T>> = ks
            .iter()
            .map(|&k| {
                let kk = T::from_usize_lossy(k as usize) * step;
                points.iter().map(|&(y, w)| w * (kk * y).sin()).collect()
            })
            .collect();
        let cosines: Vec<Vec<T>> = ks
            .iter()
            .map(|&k| {
                let kk = T::from_usize_lossy(k as usize) * step;
                points.iter().map(|&(y, _)| kk * (kk * y).cos()).collect()
            })
            .collect();
        let norm = T::lit(2.0) / l;
        let m = ks.len();
        let mut values = vec![T::zero(); m * m];
        for j in 0..m {
            for k in 0..m {
                let s: T = sines[j].iter().zip(&cosines[k]).map(|(a, b)| *a * *b).sum();
                values[j * m + k] = norm * s;
            }
        }
        values
    }

    fn selection_rule_matrix(&self) -> Vec<T> {
        let l = self.domain.length;
        let m = self.coeffs.len();
        let mut values = vec![T::zero(); m * m];
        for (a, &(j, _)) in self.coeffs.iter().enumerate() {
            for (b, &(k, _)) in self.coeffs.iter().enumerate() {
                if (j + k) % 2 == 1 {
                    let (jf, kf) = (T::from_usize_lossy(j as usize), T::from_usize_lossy(k as usize));
                    values[a * m + b] = T::lit(4.0) * jf * kf / (l * (jf * jf - kf * kf));
                }
            }
        }
        values
    }

    /// Matrix `R_jk` in the order of [`coeffs`](Self::coeffs), row-major.
    pub fn momentum_matrix(&self, numerics: &Numerics) -> Vec<T> {
        match numerics.matrix_elements {
            MatrixElements::SelectionRule => self.selection_rule_matrix(),
            MatrixElements::Quadrature => {
                let panels = numerics.panels.max(self.max_mode() as usize);
                if let Some(cached) = self.matrix.get() {
                    if cached.panels == panels {
                        return cached.values.clone();
                    }
                }
                let values = self.quadrature_matrix(numerics);
                let _ = self.matrix.set(MomentumMatrix {
                    panels,
                    values: values.clone(),
                });
                values
            }
        }
    }

    /// Envelope mean momentum `⟨p⟩_φ(t) = ∫₀ᴸ φ* (ħ/i) ∂φ dy`.
    pub fn envelope_mean_momentum(&self, t: T, numerics: &Numerics) -> T {
        let r = self.momentum_matrix(numerics);
        let a = self.envelope_amplitudes(t);
        let m = a.len();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (j, (_, aj)) in a.iter().enumerate() {
            for (k, (_, ak)) in a.iter().enumerate() {
                let rjk = r[j * m + k];
                if rjk != T::zero() {
                    acc = acc + aj.conj() * *ak * rjk;
                }
            }
        }
        // (ħ/i)·acc; the imaginary part vanishes for a Hermitian form
        (acc * Complex::new(T::zero(), -self.consts.hbar)).re
    }

    /// `⟨p²⟩_φ = Σ|c_k|² p_k²`, time independent.
    pub fn envelope_mean_momentum_sq(&self) -> T {
        self.coeffs
            .iter()
            .map(|&(k, c)| {
                let p = self.mode_momentum(k);
                c.norm_sqr() * p * p
            })
            .sum()
    }
}

/// Amplitudes of a state frozen at one time.
#[derive(Debug, Clone)]
pub enum Frame<T> {
    /// `ψ(x) = Σ A_j e^{iκ_j x}`.
    Modes { terms: Vec<(T, Complex<T>)> },
    /// `ψ(x) = phase · e^{iκ₀x} · Σ a_k sin(k·step·(x - wall))`.
    Bloch {
        bloch_wavenumber: T,
        phase: Complex<T>,
        wall: T,
        mode_step: T,
        terms: Vec<(T, Complex<T>)>,
    },
}

impl<T: Real> Frame<T> {
    pub fn amplitude(&self, x: T) -> Complex<T> {
        match self {
            Frame::Modes { terms } => terms
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &(kappa, a)| acc + a * cis(kappa * x)),
            Frame::Bloch {
                bloch_wavenumber,
                phase,
                ..
            } => *phase * cis(*bloch_wavenumber * x) * self.envelope(x),
        }
    }

    /// `∂ψ/∂x`.
    pub fn amplitude_dx(&self, x: T) -> Complex<T> {
        match self {
            Frame::Modes { terms } => terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &(kappa, a)| {
                acc + a * cis(kappa * x) * Complex::new(T::zero(), kappa)
            }),
            Frame::Bloch {
                bloch_wavenumber,
                phase,
                ..
            } => {
                let outer = *phase * cis(*bloch_wavenumber * x);
                let env = self.envelope(x);
                let denv = self.envelope_dx(x);
                outer * (denv + env * Complex::new(T::zero(), *bloch_wavenumber))
            }
        }
    }

    /// Envelope value at `x` (Bloch frames); the full amplitude otherwise.
    fn envelope(&self, x: T) -> Complex<T> {
        match self {
            Frame::Modes { .. } => self.amplitude(x),
            Frame::Bloch {
                wall, mode_step, terms, ..
            } => {
                let y = x - *wall;
                terms
                    .iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, &(k, a)| acc + a * (k * *mode_step * y).sin())
            }
        }
    }

    fn envelope_dx(&self, x: T) -> Complex<T> {
        match self {
            Frame::Modes { .. } => self.amplitude_dx(x),
            Frame::Bloch {
                wall, mode_step, terms, ..
            } => {
                let y = x - *wall;
                terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &(k, a)| {
                    let kk = k * *mode_step;
                    acc + a * (kk * (kk * y).cos())
                })
            }
        }
    }

    pub fn density(&self, x: T) -> T {
        match self {
            Frame::Modes { .. } => self.amplitude(x).norm_sqr(),
            Frame::Bloch { .. } => self.envelope(x).norm_sqr(),
        }
    }

    /// `∂|ψ|²/∂x = 2 Re(ψ* ∂ψ)`.
    pub fn density_dx(&self, x: T) -> T {
        let (v, d) = match self {
            Frame::Modes { .. } => (self.amplitude(x), self.amplitude_dx(x)),
            Frame::Bloch { .. } => (self.envelope(x), self.envelope_dx(x)),
        };
        T::lit(2.0) * (v.conj() * d).re
    }

    /// Density at `start + i·step`, `i = 0..n`, using phase recurrences.
    pub fn sample_density(&self, start: T, step: T, n: usize) -> Vec<T> {
        const RESEED: usize = 128;
        let mut out = Vec::with_capacity(n);
        match self {
            Frame::Modes { terms } => {
                let rot: Vec<Complex<T>> = terms.iter().map(|&(kappa, _)| cis(kappa * step)).collect();
                let mut cur: Vec<Complex<T>> = Vec::new();
                for i in 0..n {
                    if i % RESEED == 0 {
                        let x = start + step * T::from_usize_lossy(i);
                        cur = terms.iter().map(|&(kappa, a)| a * cis(kappa * x)).collect();
                    }
                    let psi = cur.iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + *z);
                    out.push(psi.norm_sqr());
                    for (z, r) in cur.iter_mut().zip(&rot) {
                        *z = *z * *r;
                    }
                }
            }
            Frame::Bloch {
                wall, mode_step, terms, ..
            } => {
                let rot: Vec<Complex<T>> = terms.iter().map(|&(k, _)| cis(k * *mode_step * step)).collect();
                let mut cur: Vec<Complex<T>> = Vec::new();
                for i in 0..n {
                    if i % RESEED == 0 {
                        let y = start + step * T::from_usize_lossy(i) - *wall;
                        cur = terms.iter().map(|&(k, _)| cis(k * *mode_step * y)).collect();
                    }
                    let env = terms
                        .iter()
                        .zip(&cur)
                        .fold(Complex::new(T::zero(), T::zero()), |acc, (&(_, a), z)| acc + a * z.im);
                    out.push(env.norm_sqr());
                    for (z, r) in cur.iter_mut().zip(&rot) {
                        *z = *z * *r;
                    }
                }
            }
        }
        out
    }
}

/// Closed set of state representations, for code that handles either.
#[derive(Debug, Clone)]
pub enum State<T> {
    PlaneWaves(PlaneWaveState<T>),
    BlochSine(BlochSineState<T>),
}

impl<T: Real> PartialEq for State<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (State::PlaneWaves(a), State::PlaneWaves(b)) => a == b,
            (State::BlochSine(a), State::BlochSine(b)) => a == b,
            _ => false,
        }
    }
}

impl<T> From<PlaneWaveState<T>> for State<T> {
    fn from(s: PlaneWaveState<T>) -> Self {
        State::PlaneWaves(s)
    }
}

impl<T> From<BlochSineState<T>> for State<T> {
    fn from(s: BlochSineState<T>) -> Self {
        State::BlochSine(s)
    }
}

/// Common interface of the state representations.
pub trait WaveFunction<T: Real>: Sync {
    fn domain(&self) -> &BoxDomain<T>;
    fn constants(&self) -> &Constants<T>;
    fn frame(&self, t: T) -> Frame<T>;

    /// Circumference of the circle the density lives on (`L` or `2L`).
    fn circumference(&self) -> T;

    /// Start of the circle parametrization at time `t`; for Bloch-sine states the moving wall.
    fn circle_start(&self, t: T) -> T;

    /// Velocity of the window that co-moves with the state.
    fn window_velocity(&self) -> T;

    /// `(⟨p⟩, ⟨p²⟩)` at time `t`.
    fn momentum_moments(&self, t: T, numerics: &Numerics) -> (T, T);

    /// Period of the (envelope) density in time.
    fn recurrence_period(&self) -> T;

    fn as_bloch_sine(&self) -> Option<&BlochSineState<T>> {
        None
    }

    fn density(&self, x: T, t: T) -> T {
        self.frame(t).density(x)
    }
}

impl<T: Real> WaveFunction<T> for PlaneWaveState<T> {
    fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }
    fn constants(&self) -> &Constants<T> {
        &self.consts
    }
    fn frame(&self, t: T) -> Frame<T> {
        PlaneWaveState::frame(self, t)
    }
    fn circumference(&self) -> T {
        self.domain.length
    }
    fn circle_start(&self, _t: T) -> T {
        self.domain.origin
    }
    fn window_velocity(&self) -> T {
        self.momentum_moments().0 / self.consts.mass
    }
    fn momentum_moments(&self, _t: T, _numerics: &Numerics) -> (T, T) {
        PlaneWaveState::momentum_moments(self)
    }
    fn recurrence_period(&self) -> T {
        PlaneWaveState::recurrence_period(self)
    }
}

impl<T: Real> WaveFunction<T> for BlochSineState<T> {
    fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }
    fn constants(&self) -> &Constants<T> {
        &self.consts
    }
    fn frame(&self, t: T) -> Frame<T> {
        BlochSineState::frame(self, t)
    }
    fn circumference(&self) -> T {
        T::lit(2.0) * self.domain.length
    }
    fn circle_start(&self, t: T) -> T {
        self.wall(t)
    }
    fn window_velocity(&self) -> T {
        self.drift_velocity()
    }
    fn momentum_moments(&self, t: T, numerics: &Numerics) -> (T, T) {
        let pbar = self.bloch_momentum;
        let p_env = self.envelope_mean_momentum(t, numerics);
        let p2_env = self.envelope_mean_momentum_sq();
        (pbar + p_env, pbar * pbar + T::lit(2.0) * pbar * p_env + p2_env)
    }
    fn recurrence_period(&self) -> T {
        BlochSineState::recurrence_period(self)
    }
    fn as_bloch_sine(&self) -> Option<&BlochSineState<T>> {
        Some(self)
    }
}

impl<T: Real> WaveFunction<T> for State<T> {
    fn domain(&self) -> &BoxDomain<T> {
        match self {
            State::PlaneWaves(s) => WaveFunction::domain(s),
            State::BlochSine(s) => WaveFunction::domain(s),
        }
    }
    fn constants(&self) -> &Constants<T> {
        match self {
            State::PlaneWaves(s) => WaveFunction::constants(s),
            State::BlochSine(s) => WaveFunction::constants(s),
        }
    }
    fn frame(&self, t: T) -> Frame<T> {
        match self {
            State::PlaneWaves(s) => s.frame(t),
            State::BlochSine(s) => s.frame(t),
        }
    }
    fn circumference(&self) -> T {
        match self {
            State::PlaneWaves(s) => s.circumference(),
            State::BlochSine(s) => s.circumference(),
        }
    }
    fn circle_start(&self, t: T) -> T {
        match self {
            State::PlaneWaves(s) => s.circle_start(t),
            State::BlochSine(s) => s.circle_start(t),
        }
    }
    fn window_velocity(&self) -> T {
        match self {
            State::PlaneWaves(s) => s.window_velocity(),
            State::BlochSine(s) => s.window_velocity(),
        }
    }
    fn momentum_moments(&self, t: T, numerics: &Numerics) -> (T, T) {
        match self {
            State::PlaneWaves(s) => WaveFunction::momentum_moments(s, t, numerics),
            State::BlochSine(s) => WaveFunction::momentum_moments(s, t, numerics),
        }
    }
    fn recurrence_period(&self) -> T {
        match self {
            State::PlaneWaves(s) => s.recurrence_period(),
            State::BlochSine(s) => s.recurrence_period(),
        }
    }
    fn as_bloch_sine(&self) -> Option<&BlochSineState<T>> {
        match self {
            State::PlaneWaves(_) => None,
            State::BlochSine(s) => Some(s),
        }
    }
}

/// `ψ(x, t)`; rejects non-finite arguments.
pub fn evaluate<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, x: T, t: T) -> Result<Complex<T>> {
    if !x.is_finite() || !t.is_finite() {
        return Err(Error::Domain(format!("x = {x}, t = {t}")));
    }
    Ok(state.frame(t).amplitude(x))
}

/// `|ψ(x, t)|²`; rejects non-finite arguments.
pub fn density<T: Real, S: WaveFunction<T> + ?Sized>(state: &S, x: T, t: T) -> Result<T> {
    evaluate(state, x, t).map(|z| z.norm_sqr())
}

/// Uniformly sampled density on the state's circle at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity<T> {
    pub start: T,
    pub width: T,
    pub t: T,
    /// Probability density per unit length, normalized over `[start, start + width)`.
    pub samples: Vec<T>,
}

impl<T: Real> GridDensity<T> {
    /// Samples the fixed circle `[origin, origin + C)` at `n` points.
    ///
    /// For Bloch-sine states the circle has circumference `2L` and carries
    /// unit norm on each half, so samples are scaled by `L/C`.
    pub fn sample<S: WaveFunction<T> + ?Sized>(state: &S, t: T, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("grid must have at least one point".into()));
        }
        if !t.is_finite() {
            return Err(Error::Domain(format!("t = {t}")));
        }
        let start = state.domain().origin;
        let width = state.circumference();
        let scale = state.domain().length / width;
        let step = width / T::from_usize_lossy(n);
        let samples = state
            .frame(t)
            .sample_density(start, step, n)
            .into_iter()
            .map(|v| v * scale)
            .collect();
        Ok(Self {
            start,
            width,
            t,
            samples,
        })
    }

    pub fn step(&self) -> T {
        self.width / T::from_usize_lossy(self.samples.len())
    }

    pub fn x(&self, i: usize) -> T {
        self.start + self.step() * T::from_usize_lossy(i)
    }

    /// Periodic trapezoid rule over the window.
    pub fn integral(&self) -> T {
        self.samples.iter().copied().sum::<T>() * self.step()
    }
}
