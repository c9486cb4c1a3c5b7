//! Named states and their closed-form moments and bounds.
//!
//! These serve as oracles for the generic machinery in [`moments`](crate::moments)
//! and [`bounds`](crate::bounds).

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use crate::state::{BlochSineState, BoxDomain, Constants, PlaneWaveState};

/// `ψ ∝ b e^{i2π(n−1)x/L} + e^{i2πnx/L} + b e^{i2π(n+1)x/L}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeWavePacketParams<T> {
    pub n: i64,
    pub b: T,
    pub length: T,
}

impl<T: Real> ThreeWavePacketParams<T> {
    pub fn new(n: i64, b: T, length: T) -> Self {
        Self { n, b, length }
    }

    fn check(&self, positive_b: bool) -> Result<()> {
        if !(self.length > T::zero()) || !self.length.is_finite() {
            return Err(Error::InvalidParameter(format!("L = {} must be positive", self.length)));
        }
        let ok = if positive_b { self.b > T::zero() } else { self.b >= T::zero() };
        if !ok || !self.b.is_finite() {
            return Err(Error::InvalidParameter(format!("b = {} out of range", self.b)));
        }
        Ok(())
    }
}

/// Phase variable of the three-wave packet: `πα = (2π/L)²ħt/(2m)`.
pub fn alpha<T: Real>(length: T, t: T, consts: &Constants<T>) -> T {
    T::lit(2.0) * T::PI() * consts.hbar * t / (consts.mass * length * length)
}

/// Inverse of [`alpha`].
pub fn time_for_alpha<T: Real>(length: T, alpha: T, consts: &Constants<T>) -> T {
    alpha * consts.mass * length * length / (T::lit(2.0) * T::PI() * consts.hbar)
}

pub fn three_wave_packet<T: Real>(params: &ThreeWavePacketParams<T>, consts: &Constants<T>) -> Result<PlaneWaveState<T>> {
    params.check(false)?;
    let s = (T::one() + T::lit(2.0) * params.b * params.b).sqrt();
    let b = Complex::new(params.b / s, T::zero());
    let one = Complex::new(s.recip(), T::zero());
    PlaneWaveState::new(
        BoxDomain::with_length(params.length)?,
        *consts,
        vec![(params.n - 1, b), (params.n, one), (params.n + 1, b)],
    )
}

/// `|ψ(x, t)|²` of the three-wave packet in closed form; requires `b > 0`.
pub fn packet_density_closed_form<T: Real>(
    params: &ThreeWavePacketParams<T>,
    x: T,
    t: T,
    consts: &Constants<T>,
) -> Result<T> {
    params.check(true)?;
    let (b, l) = (params.b, params.length);
    let a = alpha(l, t, consts);
    let two = T::lit(2.0);
    let c = (T::PI() * a).cos();
    let theta = two * T::PI() * (x / l - T::from_i64_lossy(params.n) * a);
    let inner = theta.cos() + c / (two * b);
    Ok((two * two * b * b * inner * inner + T::one() - c * c) / ((T::one() + two * b * b) * l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketBranch {
    /// `|cos πα| ≤ 2b`: the density reaches `(1 − cos²πα)/((1+2b²)L)`.
    Interior,
    /// `|cos πα| ≥ 2b`: the minimum sits where `cos θ = −sign(cos πα)`.
    Edge,
}

/// `L·min_x|ψ|²` of the three-wave packet as a function of `α`.
pub fn packet_min_at_alpha<T: Real>(b: T, alpha: T) -> Result<(T, PacketBranch)> {
    if !(b > T::zero()) {
        return Err(Error::InvalidParameter(format!("b = {b} must be positive")));
    }
    let two = T::lit(2.0);
    let c = (T::PI() * alpha).cos();
    let r = c.abs() / (two * b);
    let norm = T::one() + two * b * b;
    let base = T::one() - c * c;
    if r <= T::one() {
        Ok((base / norm, PacketBranch::Interior))
    } else {
        let d = T::one() - r;
        Ok(((two * two * b * b * d * d + base) / norm, PacketBranch::Edge))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketExtrema<T> {
    /// `L·min_x|ψ(x, t)|²`, present when a time was given.
    pub l_min_density: Option<T>,
    pub branch: Option<PacketBranch>,
    /// `max_t L·min_x|ψ|² = 1/(1+2b²)`.
    pub maxmin: T,
    /// `(ħ/2)(1 − 1/(1+2b²))`.
    pub bound: T,
}

pub fn packet_min_and_maxmin<T: Real>(
    params: &ThreeWavePacketParams<T>,
    t: Option<T>,
    consts: &Constants<T>,
) -> Result<PacketExtrema<T>> {
    params.check(true)?;
    let (l_min_density, branch) = match t {
        Some(t) => {
            let (v, br) = packet_min_at_alpha(params.b, alpha(params.length, t, consts))?;
            (Some(v), Some(br))
        }
        None => (None, None),
    };
    let maxmin = (T::one() + T::lit(2.0) * params.b * params.b).recip();
    Ok(PacketExtrema {
        l_min_density,
        branch,
        maxmin,
        bound: consts.hbar / T::lit(2.0) * (T::one() - maxmin),
    })
}

/// `Δp = √(2b²/(1+2b²))·2πħ/L`.
pub fn packet_momentum_spread<T: Real>(params: &ThreeWavePacketParams<T>, consts: &Constants<T>) -> T {
    let b2 = params.b * params.b;
    let two = T::lit(2.0);
    (two * b2 / (T::one() + two * b2)).sqrt() * two * T::PI() * consts.hbar / params.length
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    None,
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            "none" => Ok(Sign::None),
            other => Err(Error::InvalidParameter(format!("sign `{other}` (expected plus, minus or none)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryParams<T> {
    pub n: i64,
    pub k: u32,
    pub sign: Sign,
    pub length: T,
}

impl<T: Real> ElementaryParams<T> {
    pub fn new(n: i64, k: u32, length: T) -> Self {
        Self {
            n,
            k,
            sign: Sign::None,
            length,
        }
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }
}

/// `(e^{i2π(n+k)x/L} ± e^{i2π(n−k)x/L})/√(2L)`: a plane wave times a cosine or sine envelope.
pub fn bloch_pair_state<T: Real>(params: &ElementaryParams<T>, consts: &Constants<T>) -> Result<PlaneWaveState<T>> {
    let dom = BoxDomain::with_length(params.length)?;
    let k = params.k as i64;
    let h = Complex::new(T::lit(0.5).sqrt(), T::zero());
    match (k, params.sign) {
        (0, Sign::Minus) => Err(Error::EmptyState),
        (0, _) => PlaneWaveState::new(dom, *consts, vec![(params.n, Complex::new(T::one(), T::zero()))]),
        (_, Sign::None) => Err(Error::InvalidParameter("sign `none` requires k = 0".into())),
        (_, Sign::Plus) => PlaneWaveState::new(dom, *consts, vec![(params.n + k, h), (params.n - k, h)]),
        (_, Sign::Minus) => PlaneWaveState::new(dom, *consts, vec![(params.n + k, h), (params.n - k, -h)]),
    }
}

/// Elementary Bloch-sine state with `c_k = 1` and `p̄ = πħn/L`.
pub fn half_box_state<T: Real>(params: &ElementaryParams<T>, consts: &Constants<T>) -> Result<BlochSineState<T>> {
    if params.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let dom = BoxDomain::with_length(params.length)?;
    let pbar = T::PI() * consts.hbar * T::from_i64_lossy(params.n) / params.length;
    BlochSineState::new(dom, *consts, pbar, vec![(params.k, Complex::new(T::one(), T::zero()))])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryClosedForms<T> {
    pub mean_p: T,
    pub dp: T,
    pub dx: T,
    pub product: T,
}

/// Moments of [`half_box_state`]: `Δp = kπħ/L`, `Δx = (L/(2√3))√(1 − 24/(2πk)²)`.
pub fn elementary_closed_forms<T: Real>(params: &ElementaryParams<T>, consts: &Constants<T>) -> Result<ElementaryClosedForms<T>> {
    if params.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let l = params.length;
    let k = T::from_usize_lossy(params.k as usize);
    let two_pi_k = T::lit(2.0) * T::PI() * k;
    let dp = k * T::PI() * consts.hbar / l;
    let dx = l / (T::lit(2.0) * T::lit(3.0).sqrt()) * (T::one() - T::lit(24.0) / (two_pi_k * two_pi_k)).sqrt();
    Ok(ElementaryClosedForms {
        mean_p: T::PI() * consts.hbar * T::from_i64_lossy(params.n) / l,
        dp,
        dx,
        product: dp * dx,
    })
}

/// `√(2/L) sin(2πx/L)` on `[0, L)`.
pub fn sine_test<T: Real>(length: T, consts: &Constants<T>) -> Result<PlaneWaveState<T>> {
    let a = Complex::new(T::zero(), -T::lit(0.5).sqrt());
    PlaneWaveState::new(BoxDomain::with_length(length)?, *consts, vec![(1, a), (-1, -a)])
}

/// `e^{i2πnx/L}/√L`.
pub fn plane_wave<T: Real>(n: i64, length: T, consts: &Constants<T>) -> Result<PlaneWaveState<T>> {
    PlaneWaveState::new(BoxDomain::with_length(length)?, *consts, vec![(n, Complex::new(T::one(), T::zero()))])
}
