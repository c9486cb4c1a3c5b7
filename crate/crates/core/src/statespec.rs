//! Flat TOML documents describing a state.
//!
//! ```toml
//! kind = "three_wave_packet"   # required
//! L = 6.283185307179586        # box length, default 1
//! hbar = 1.0                   # default 1
//! mass = 1.0                   # default 1
//! n = 1
//! b = 0.5
//! ```
//!
//! Keys by kind (besides `kind`, `L`, `hbar`, `mass`):
//!
//! | kind                | keys                                                              |
//! |---------------------|-------------------------------------------------------------------|
//! | `plane_waves`       | `origin`, `modes = [[n, re, im], ...]`, `normalize`               |
//! | `bloch_sine`        | `origin`, `coeffs = [[k, re, im], ...]`, `p_bar`, `normalize`     |
//! | `three_wave_packet` | `n`, `b`                                                          |
//! | `half_box`          | `n`, `k` (`p̄ = πħn/L`, single sine mode `k`)                       |
//! | `elementary`        | same as `half_box`                                                |
//! | `bloch_pair`        | `n`, `k`, `sign` (`"plus"`, `"minus"`, `"none"`)                  |
//! | `plane_wave`        | `n`                                                               |
//! | `sine_test`         | none                                                              |
//! | `profile`           | `origin`, `profile`, `k`, `center`, `width`, `left`, `right`,      |
//! |                     | `momentum`, `p_bar` (number or `"auto"`), `truncation`            |
//!
//! Profiles: `sine` (`k`), `triangle`, `gaussian` (`center` defaults to the box
//! middle, `width`), `boundary_layer` (`left`, `right`). `momentum` multiplies the
//! profile by `e^{i·momentum·x/ħ}` before it is projected onto sine modes.
//!
//! Unknown keys, and keys that do not apply to the kind, are rejected.
//! Units are whatever `hbar` and `mass` make them; both default to 1.

use serde::{Deserialize, Serialize};

use crate::catalog::{self, ElementaryParams, Sign, ThreeWavePacketParams};
use crate::config::Numerics;
use crate::error::{Error, Result};
use crate::profile::{project_to_sine, BlochMomentum, NamedProfile};
use crate::scalar::Complex;
use crate::state::{BlochSineState, BoxDomain, Constants, PlaneWaveState, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    PlaneWaves,
    BlochSine,
    ThreeWavePacket,
    Elementary,
    HalfBox,
    BlochPair,
    PlaneWave,
    SineTest,
    Profile,
}

impl Kind {
    fn allowed(&self) -> &'static [&'static str] {
        match self {
            Kind::PlaneWaves => &["origin", "modes", "normalize"],
            Kind::BlochSine => &["origin", "coeffs", "p_bar", "normalize"],
            Kind::ThreeWavePacket => &["n", "b"],
            Kind::Elementary | Kind::HalfBox => &["n", "k"],
            Kind::BlochPair => &["n", "k", "sign"],
            Kind::PlaneWave => &["n"],
            Kind::SineTest => &[],
            Kind::Profile => &[
                "origin", "profile", "k", "center", "width", "left", "right", "momentum", "p_bar", "truncation",
            ],
        }
    }
}

/// `p_bar = 1.5` or `p_bar = "auto"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PBar {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub kind: Kind,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<(i64, f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<(u32, f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_bar: Option<PBar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::StateSpec(msg.into())
}

impl StateSpec {
    pub fn new(kind: Kind) -> Self {
        Self {
            kind,
            length: None,
            hbar: None,
            mass: None,
            origin: None,
            modes: None,
            coeffs: None,
            normalize: None,
            b: None,
            n: None,
            k: None,
            sign: None,
            p_bar: None,
            profile: None,
            center: None,
            width: None,
            left: None,
            right: None,
            momentum: None,
            truncation: None,
        }
    }

    /// Parses and validates a document.
    pub fn parse(text: &str) -> Result<Self> {
        let spec: StateSpec = toml::from_str(text).map_err(|e| spec_err(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("state documents always serialize")
    }

    fn present_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |on: bool, k: &'static str| {
            if on {
                keys.push(k)
            }
        };
        mark(self.origin.is_some(), "origin");
        mark(self.modes.is_some(), "modes");
        mark(self.coeffs.is_some(), "coeffs");
        mark(self.normalize.is_some(), "normalize");
        mark(self.b.is_some(), "b");
        mark(self.n.is_some(), "n");
        mark(self.k.is_some(), "k");
        mark(self.sign.is_some(), "sign");
        mark(self.p_bar.is_some(), "p_bar");
        mark(self.profile.is_some(), "profile");
        mark(self.center.is_some(), "center");
        mark(self.width.is_some(), "width");
        mark(self.left.is_some(), "left");
        mark(self.right.is_some(), "right");
        mark(self.momentum.is_some(), "momentum");
        mark(self.truncation.is_some(), "truncation");
        keys
    }

    /// Rejects keys that do not apply to the kind and missing required keys.
    pub fn validate(&self) -> Result<()> {
        let allowed = self.kind.allowed();
        if let Some(k) = self.present_keys().into_iter().find(|k| !allowed.contains(k)) {
            return Err(spec_err(format!("key `{k}` does not apply to kind {:?}", self.kind)));
        }
        let need = |on: bool, key: &str| {
            if on {
                Ok(())
            } else {
                Err(spec_err(format!("kind {:?} requires key `{key}`", self.kind)))
            }
        };
        match self.kind {
            Kind::PlaneWaves => need(self.modes.is_some(), "modes")?,
            Kind::BlochSine => need(self.coeffs.is_some(), "coeffs")?,
            Kind::ThreeWavePacket => need(self.b.is_some(), "b")?,
            Kind::Elementary | Kind::HalfBox | Kind::BlochPair => need(self.k.is_some(), "k")?,
            Kind::Profile => need(self.profile.is_some(), "profile")?,
            Kind::PlaneWave | Kind::SineTest => {}
        }
        if let Some(PBar::Keyword(w)) = &self.p_bar {
            if w != "auto" || self.kind == Kind::BlochSine {
                return Err(spec_err(format!("p_bar = \"{w}\" (only profiles accept \"auto\")")));
            }
        }
        Ok(())
    }

    pub fn constants(&self) -> Result<Constants<f64>> {
        Constants::new(self.hbar.unwrap_or(1.0), self.mass.unwrap_or(1.0))
    }

    pub fn domain(&self) -> Result<BoxDomain<f64>> {
        BoxDomain::new(self.length.unwrap_or(1.0), self.origin.unwrap_or(0.0))
    }

    /// Overrides one scan axis: `L`, `b`, `k` or `K` (truncation).
    pub fn set_axis(&mut self, axis: &str, value: f64) -> Result<()> {
        match axis {
            "L" => self.length = Some(value),
            "b" if self.kind == Kind::ThreeWavePacket => self.b = Some(value),
            "k" if self.kind.allowed().contains(&"k") => {
                if !(value >= 0.0) || value.fract() != 0.0 {
                    return Err(spec_err(format!("k = {value} must be a non-negative integer")));
                }
                self.k = Some(value as u32)
            }
            "K" if self.kind == Kind::Profile => {
                if !(value >= 1.0) || value.fract() != 0.0 {
                    return Err(spec_err(format!("K = {value} must be a positive integer")));
                }
                self.truncation = Some(value as usize)
            }
            other => return Err(spec_err(format!("axis `{other}` does not apply to kind {:?}", self.kind))),
        }
        Ok(())
    }

    pub fn build(&self, numerics: &Numerics) -> Result<State<f64>> {
        self.validate()?;
        let consts = self.constants()?;
        let length = self.length.unwrap_or(1.0);
        let n = self.n.unwrap_or(0);
        let normalize = self.normalize.unwrap_or(false);
        let state: State<f64> = match self.kind {
            Kind::PlaneWaves => {
                let modes: Vec<_> = self
                    .modes
                    .iter()
                    .flatten()
                    .map(|&(n, re, im)| (n, Complex::new(re, im)))
                    .collect();
                if normalize {
                    PlaneWaveState::normalized(self.domain()?, consts, modes)?.into()
                } else {
                    PlaneWaveState::new(self.domain()?, consts, modes)?.into()
                }
            }
            Kind::BlochSine => {
                let coeffs: Vec<_> = self
                    .coeffs
                    .iter()
                    .flatten()
                    .map(|&(k, re, im)| (k, Complex::new(re, im)))
                    .collect();
                let pbar = match self.p_bar {
                    Some(PBar::Value(v)) => v,
                    _ => 0.0,
                };
                if normalize {
                    BlochSineState::normalized(self.domain()?, consts, pbar, coeffs)?.into()
                } else {
                    BlochSineState::new(self.domain()?, consts, pbar, coeffs)?.into()
                }
            }
            Kind::ThreeWavePacket => {
                let b = self.b.unwrap_or(0.0);
                catalog::three_wave_packet(&ThreeWavePacketParams::new(n, b, length), &consts)?.into()
            }
            Kind::Elementary | Kind::HalfBox => {
                catalog::half_box_state(&ElementaryParams::new(n, self.k.unwrap_or(1), length), &consts)?.into()
            }
            Kind::BlochPair => {
                let k = self.k.unwrap_or(0);
                let sign = match &self.sign {
                    Some(s) => s.parse::<Sign>()?,
                    None if k == 0 => Sign::None,
                    None => Sign::Plus,
                };
                catalog::bloch_pair_state(&ElementaryParams::new(n, k, length).with_sign(sign), &consts)?.into()
            }
            Kind::PlaneWave => catalog::plane_wave(n, length, &consts)?.into(),
            Kind::SineTest => catalog::sine_test(length, &consts)?.into(),
            Kind::Profile => self.build_profile(&consts, numerics)?.into(),
        };
        Ok(state)
    }

    fn build_profile(&self, consts: &Constants<f64>, numerics: &Numerics) -> Result<BlochSineState<f64>> {
        let domain = self.domain()?;
        let name = self.profile.as_deref().unwrap_or_default();
        let shape = match name {
            "sine" => NamedProfile::Sine { k: self.k.unwrap_or(1) },
            "triangle" => NamedProfile::Triangle,
            "gaussian" => NamedProfile::Gaussian {
                center: self.center.unwrap_or(domain.origin + domain.length / 2.0),
                width: self.width.ok_or_else(|| spec_err("profile gaussian requires `width`"))?,
            },
            "boundary_layer" => NamedProfile::BoundaryLayer {
                left: self.left.ok_or_else(|| spec_err("profile boundary_layer requires `left`"))?,
                right: self.right.ok_or_else(|| spec_err("profile boundary_layer requires `right`"))?,
            },
            other => {
                return Err(spec_err(format!(
                    "unknown profile `{other}` (expected sine, triangle, gaussian or boundary_layer)"
                )))
            }
        };
        let f = shape.build(&domain, consts, self.momentum.unwrap_or(0.0), numerics)?;
        let pbar = match self.p_bar {
            Some(PBar::Value(v)) => BlochMomentum::Given(v),
            _ => BlochMomentum::Auto,
        };
        let modes = self.truncation.unwrap_or(numerics.truncation);
        Ok(project_to_sine(f, pbar, modes, &domain, consts, numerics)?.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::WaveFunction;

    #[test]
    fn parses_packet() {
        let s = StateSpec::parse("kind = \"three_wave_packet\"\nL = 2.0\nn = 1\nb = 0.5\n").unwrap();
        let st = s.build(&Numerics::default()).unwrap();
        assert_eq!(st.domain().length, 2.0);
    }

    #[test]
    fn rejects_unknown_and_irrelevant_keys() {
        let e = StateSpec::parse("kind = \"plane_wave\"\nfoo = 1\n").unwrap_err();
        assert!(e.to_string().contains("foo"), "{e}");
        let e = StateSpec::parse("kind = \"plane_wave\"\nb = 1\n").unwrap_err();
        assert!(e.to_string().contains("`b`"), "{e}");
        assert!(StateSpec::parse("kind = \"three_wave_packet\"\n").is_err());
    }

    #[test]
    fn explicit_modes() {
        let s = StateSpec::parse("kind = \"plane_waves\"\nmodes = [[0, 1, 0], [2, 1, 0]]\nnormalize = true\n").unwrap();
        assert!(s.build(&Numerics::default()).is_ok());
        let s = StateSpec::parse("kind = \"bloch_sine\"\ncoeffs = [[1, 1.0, 0.0]]\np_bar = 2.5\n").unwrap();
        match s.build(&Numerics::default()).unwrap() {
            State::BlochSine(b) => assert_eq!(b.bloch_momentum(), 2.5),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn round_trip() {
        let mut s = StateSpec::new(Kind::BlochPair);
        s.n = Some(2);
        s.k = Some(1);
        s.sign = Some("minus".into());
        let back = StateSpec::parse(&s.to_toml()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn axis_override() {
        let mut s = StateSpec::parse("kind = \"three_wave_packet\"\nb = 0.5\n").unwrap();
        s.set_axis("b", 2.0).unwrap();
        assert_eq!(s.b, Some(2.0));
        assert!(s.set_axis("K", 8.0).is_err());
    }

    #[test]
    fn profile_projection() {
        let s = StateSpec::parse("kind = \"profile\"\nprofile = \"sine\"\nk = 2\ntruncation = 8\np_bar = 0.0\n").unwrap();
        match s.build(&Numerics::default()).unwrap() {
            State::BlochSine(b) => {
                let c2 = b.coeffs().iter().find(|c| c.0 == 2).unwrap().1;
                assert!((c2.norm() - 1.0).abs() < 1e-10);
            }
            _ => panic!("wrong kind"),
        }
    }
}
