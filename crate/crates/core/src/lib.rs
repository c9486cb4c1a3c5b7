//! Free-particle states on a periodic box, exact spectral evolution, and the
//! uncertainty relations that survive the box normalization.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`, which is what the CLI and the
//! acceptance suite use.

pub mod bounds;
pub mod catalog;
pub mod config;
pub mod error;
pub mod moments;
pub mod output;
pub mod profile;
pub mod quadrature;
pub mod scalar;
pub mod search;
pub mod state;
pub mod statespec;

pub use config::{MatrixElements, Numerics};
pub use error::{Error, Result};
pub use scalar::{Complex, Real};
pub use state::WaveFunction;

pub type Constants = state::Constants<f64>;
pub type BoxDomain = state::BoxDomain<f64>;
pub type PlaneWaveState = state::PlaneWaveState<f64>;
pub type BlochSineState = state::BlochSineState<f64>;
pub type State = state::State<f64>;
pub type GridDensity = state::GridDensity<f64>;
pub type Window = moments::Window<f64>;
pub type UncertaintyReport = moments::UncertaintyReport<f64>;
pub type BoundResult = bounds::BoundResult<f64>;
pub type JudgeResult = bounds::JudgeResult<f64>;

pub type PlaneWaveStateF32 = state::PlaneWaveState<f32>;
pub type BlochSineStateF32 = state::BlochSineState<f32>;
