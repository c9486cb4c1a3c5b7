//! Numerical knobs shared by the moment and bound routines.

use crate::quadrature::{Composite, DEFAULT_ORDER, DEFAULT_PANELS};
use crate::scalar::Real;

/// How sine-mode momentum matrix elements are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixElements {
    /// Gauss–Legendre quadrature of `sin(jπy/L)·cos(kπy/L)`.
    #[default]
    Quadrature,
    /// Closed form; only `j + k` odd pairs are non-zero.
    SelectionRule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Numerics {
    /// Gauss–Legendre panels for window integrals (16 nodes each).
    pub panels: usize,
    /// Coarse grid for the cut-point scan.
    pub x_grid: usize,
    /// Coarse grid for the Judge shift scan, per box length.
    pub gamma_grid: usize,
    /// Time samples across one recurrence period.
    pub time_samples: usize,
    /// Grid used for finite-difference derivatives of sampled profiles.
    pub fd_points: usize,
    /// Sine modes kept by projections.
    pub truncation: usize,
    /// Largest tolerated `1 - Σ|c_k|²` before renormalization.
    pub residual_threshold: f64,
    /// Largest accepted change of a moment under panel doubling (relative to max(1, |value|)).
    pub refinement_delta: f64,
    /// Cap on `Σ|c_k p_k|` beyond which the series is flagged as divergent.
    pub convergence_cap: f64,
    pub matrix_elements: MatrixElements,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            panels: DEFAULT_PANELS,
            x_grid: 4096,
            gamma_grid: 1024,
            time_samples: 2048,
            fd_points: 4096,
            truncation: 256,
            residual_threshold: 1e-6,
            refinement_delta: 1e-9,
            convergence_cap: 1e3,
            matrix_elements: MatrixElements::Quadrature,
        }
    }
}

impl Numerics {
    pub fn quadrature<T: Real>(&self) -> Composite<T> {
        Composite::new(DEFAULT_ORDER, self.panels)
    }

    /// Rule with enough panels to resolve sine modes up to `k_max`.
    pub fn quadrature_for_modes<T: Real>(&self, k_max: usize) -> Composite<T> {
        Composite::new(DEFAULT_ORDER, self.panels.max(k_max))
    }
}
