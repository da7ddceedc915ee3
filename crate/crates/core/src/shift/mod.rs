//! Half-space scattering and the spectral shift function.
//!
//! Freezing the tangential momentum ξ′ turns the elasticity operator on the
//! half-space `{z > 0}` into a system of ODEs on the half-line. Its
//! continuous spectrum `[μ|ξ′|², ∞)` has two thresholds; between and above
//! them the generalised eigenfunctions define unitary scattering matrices.
//! The phase of `det S`, corrected at each threshold by the number of bounded
//! threshold solutions, gives the spectral shift function, whose integral
//! over ξ′ is the second Weyl coefficient.
//!
//! Everything is computed at `|ξ′| = 1`; other momenta follow by the
//! rescaling `shift(Λ; ξ′) = shift(Λ/|ξ′|²; ξ′/|ξ′|)`. Each problem splits
//! into the 2×2 block acting on span(ξ′, normal) (`Block::P`) and `d − 2`
//! scalar copies acting on the remaining tangential directions
//! (`Block::Perp`).

mod phase;
mod threshold;
mod waves;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elastic::{MaterialError, MaterialParameters};
use crate::quadrature::QuadratureError;

pub use phase::{
    closed_form_component_shift, closed_form_shift, closed_form_spectral_shift,
    integrate_to_second_coefficient, phase_samples, phase_shift_curve, spectral_shift,
    Component, IntegrationMethod, PhaseSample, PiecewiseConstantFunction, ShiftProfile,
};
pub use threshold::{
    classify_threshold, point_spectrum_scan, threshold_counts, ThresholdClass, ThresholdCounts,
    ThresholdKind,
};
pub use waves::{block_scattering, boundary_system, scattering_matrix, BoundarySystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("tangential momentum must be positive, got {0}")]
    ZeroMomentum(f64),
    #[error("spectral value {lambda} coincides with a threshold")]
    ThresholdHit { lambda: f64 },
    #[error("spectral value {lambda} lies in zone {actual:?}, expected {expected:?}")]
    WrongZone {
        lambda: f64,
        expected: SpectralZone,
        actual: SpectralZone,
    },
    #[error("singular outgoing boundary matrix at lambda = {lambda} (spurious resonance)")]
    SingularOutgoing { lambda: f64 },
    #[error("scattering matrix at lambda = {lambda} is not unitary (defect {defect:e})")]
    NonUnitary { lambda: f64, defect: f64 },
    #[error("threshold {which}: j* = {j_star} is strictly between 0 and multiplicity {multiplicity}")]
    AnomalousThreshold {
        which: u8,
        j_star: usize,
        multiplicity: usize,
    },
    #[error("threshold index must be 1 or 2, got {0}")]
    ThresholdIndex(u8),
    #[error("the normally polarised block has no second threshold")]
    NoSecondThreshold,
    #[error("phase unwrapping between {from} and {to} is ambiguous; refine the grid")]
    RefineGrid { from: f64, to: f64 },
    #[error("grid point {lambda} is not strictly increasing or is within 1e-6 (relative) of a threshold")]
    BadGrid { lambda: f64 },
    #[error("one-dimensional point spectrum below the continuous spectrum makes the shift integral diverge")]
    DivergentIntegral,
    #[error("scan cutoff {lambda_max} must exceed the second threshold {threshold}")]
    ScanRange { lambda_max: f64, threshold: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// The two thresholds `μ|ξ′|² < (λ+2μ)|ξ′|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub lambda_star_1: f64,
    pub lambda_star_2: f64,
}

impl Thresholds {
    pub fn get(&self, which: u8) -> Result<f64, ShiftError> {
        match which {
            1 => Ok(self.lambda_star_1),
            2 => Ok(self.lambda_star_2),
            other => Err(ShiftError::ThresholdIndex(other)),
        }
    }

    /// Zone of `lambda`; exact thresholds are rejected.
    pub fn zone(&self, lambda: f64) -> Result<SpectralZone, ShiftError> {
        if lambda == self.lambda_star_1 || lambda == self.lambda_star_2 {
            Err(ShiftError::ThresholdHit { lambda })
        } else if lambda < self.lambda_star_1 {
            Ok(SpectralZone::BelowSpectrum)
        } else if lambda < self.lambda_star_2 {
            Ok(SpectralZone::I1)
        } else {
            Ok(SpectralZone::I2)
        }
    }
}

pub fn thresholds(p: &MaterialParameters, xi_norm: f64, d: u32) -> Result<Thresholds, ShiftError> {
    p.ensure_dimension(d)?;
    if !(xi_norm > 0.0 && xi_norm.is_finite()) {
        return Err(ShiftError::ZeroMomentum(xi_norm));
    }
    let xi2 = xi_norm * xi_norm;
    Ok(Thresholds {
        lambda_star_1: p.mu() * xi2,
        lambda_star_2: p.longitudinal() * xi2,
    })
}

pub(crate) fn unit_thresholds(p: &MaterialParameters) -> Thresholds {
    Thresholds {
        lambda_star_1: p.mu(),
        lambda_star_2: p.longitudinal(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectralZone {
    BelowSpectrum,
    I1,
    I2,
}

impl SpectralZone {
    pub fn label(self) -> &'static str {
        match self {
            SpectralZone::BelowSpectrum => "below",
            SpectralZone::I1 => "I1",
            SpectralZone::I2 => "I2",
        }
    }
}

/// The two invariant subspaces of the one-dimensional problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    /// span(ξ′, normal), a 2×2 system.
    P,
    /// One tangential direction orthogonal to ξ′, a scalar problem.
    Perp,
}

/// Scattering matrix at a normalised spectral value.
///
/// Amplitudes are ordered P block first (shear, then longitudinal in `I2`),
/// followed by the `d − 2` normally polarised amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    pub lambda: f64,
    pub zone: SpectralZone,
    pub entries: nalgebra::DMatrix<Complex64>,
}

impl ScatteringMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// `‖S S† − I‖_∞` (maximum absolute row sum).
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.size();
        let prod = &self.entries * self.entries.adjoint();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let id = if i == j { 1.0 } else { 0.0 };
                        (prod[(i, j)] - Complex64::new(id, 0.0)).norm()
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex64 {
        if self.size() == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            self.entries.determinant()
        }
    }
}
