//! Lamé parameters, mixed boundary conditions and the closed-form Weyl
//! coefficients for the isotropic elasticity operator
//! `L u = -μ Δu - (λ + μ) ∇(div u)`.
//!
//! All quantities are dimensionless. The spectral parameter Λ carries units
//! of (Lamé parameter)·(length)^{-2}; no unit conversion is performed.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::gamma_half;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaterialError {
    #[error("non-convex material: {inequality} violated (lambda = {lambda}, mu = {mu}, d = {dim})")]
    NonConvex {
        inequality: &'static str,
        lambda: f64,
        mu: f64,
        dim: u32,
    },
    #[error("Lamé parameters must be finite (lambda = {lambda}, mu = {mu})")]
    NonFinite { lambda: f64, mu: f64 },
    #[error("dimension must be at least 2, got {0}")]
    Dimension(u32),
    #[error("geometry dimension {geometry} does not match requested dimension {requested}")]
    DimensionMismatch { geometry: u32, requested: u32 },
    #[error("invalid geometry: {0}")]
    Geometry(&'static str),
}

/// Lamé pair (λ, μ).
///
/// Strong convexity depends on the dimension (`dλ + 2μ > 0`), so the pair is
/// validated against a dimension at construction and re-checked by every
/// function that uses it in another dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParameters {
    lambda: f64,
    mu: f64,
}

impl MaterialParameters {
    pub fn new(lambda: f64, mu: f64, dim: u32) -> Result<Self, MaterialError> {
        validate_material(lambda, mu, dim)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Shear modulus μ.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// λ + 2μ, the stiffness of longitudinal waves.
    pub fn longitudinal(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    /// Re-checks strong convexity in dimension `dim`.
    pub fn ensure_dimension(&self, dim: u32) -> Result<(), MaterialError> {
        validate_material(self.lambda, self.mu, dim).map(|_| ())
    }

    /// Multiplies both parameters by `t > 0`; convexity is preserved.
    pub fn scaled(&self, t: f64) -> Self {
        assert!(t > 0.0, "scale factor must be positive");
        Self {
            lambda: self.lambda * t,
            mu: self.mu * t,
        }
    }
}

/// Succeeds iff `mu > 0` and `dim * lambda + 2 * mu > 0`.
pub fn validate_material(lambda: f64, mu: f64, dim: u32) -> Result<MaterialParameters, MaterialError> {
    if dim < 2 {
        return Err(MaterialError::Dimension(dim));
    }
    if !lambda.is_finite() || !mu.is_finite() {
        return Err(MaterialError::NonFinite { lambda, mu });
    }
    if mu <= 0.0 {
        return Err(MaterialError::NonConvex {
            inequality: "mu > 0",
            lambda,
            mu,
            dim,
        });
    }
    if f64::from(dim) * lambda + 2.0 * mu <= 0.0 {
        return Err(MaterialError::NonConvex {
            inequality: "d*lambda + 2*mu > 0",
            lambda,
            mu,
            dim,
        });
    }
    Ok(MaterialParameters { lambda, mu })
}

/// The two mixed boundary conditions.
///
/// * `DF` (Dirichlet–free): tangential displacement vanishes, normal traction vanishes.
/// * `FD` (free–Dirichlet): tangential traction vanishes, normal displacement vanishes.
///
/// The pure Dirichlet (`u = 0`) and free (`Tu = 0`) problems are not
/// represented; their second coefficients are not computed by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCondition {
    #[serde(rename = "df")]
    DF,
    #[serde(rename = "fd")]
    FD,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 2] = [BoundaryCondition::DF, BoundaryCondition::FD];

    /// Sign of the boundary Weyl constant: −1 for DF, +1 for FD.
    pub fn sign(self) -> f64 {
        match self {
            BoundaryCondition::DF => -1.0,
            BoundaryCondition::FD => 1.0,
        }
    }

    pub fn other(self) -> Self {
        match self {
            BoundaryCondition::DF => BoundaryCondition::FD,
            BoundaryCondition::FD => BoundaryCondition::DF,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BoundaryCondition::DF => "df",
            BoundaryCondition::FD => "fd",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "df" => Ok(BoundaryCondition::DF),
            "fd" => Ok(BoundaryCondition::FD),
            other => Err(format!("unknown boundary condition '{other}' (expected df or fd)")),
        }
    }
}

/// Dimension, volume and boundary volume of a domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainGeometry {
    dimension: u32,
    volume: f64,
    boundary_volume: f64,
}

impl DomainGeometry {
    pub fn new(dimension: u32, volume: f64, boundary_volume: f64) -> Result<Self, MaterialError> {
        if dimension < 2 {
            return Err(MaterialError::Dimension(dimension));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(MaterialError::Geometry("volume must be positive"));
        }
        if !(boundary_volume > 0.0 && boundary_volume.is_finite()) {
            return Err(MaterialError::Geometry("boundary volume must be positive"));
        }
        Ok(Self {
            dimension,
            volume,
            boundary_volume,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn boundary_volume(&self) -> f64 {
        self.boundary_volume
    }
}

/// First two Weyl coefficients of a concrete domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylCoefficients {
    pub dimension: u32,
    pub bc: BoundaryCondition,
    /// Bulk Weyl constant `a`.
    pub a: f64,
    /// Boundary density `b`.
    pub b: f64,
    /// Coefficient of `Λ^{d/2}` in the counting function, `a · Vol_d`.
    pub leading: f64,
    /// Coefficient of `Λ^{(d-1)/2}` in the counting function, `b · Vol_{d-1}`.
    pub second: f64,
    /// Heat-trace normalised second coefficient `c_{d-2} = (d-1)/2 · second`.
    pub heat_second: f64,
}

/// `a = ((d-1)/μ^{d/2} + 1/(λ+2μ)^{d/2}) / ((4π)^{d/2} Γ(1 + d/2))`.
pub fn bulk_weyl_constant(p: &MaterialParameters, dim: u32) -> Result<f64, MaterialError> {
    p.ensure_dimension(dim)?;
    let half_d = f64::from(dim) / 2.0;
    let prefactor = 1.0 / ((4.0 * PI).powf(half_d) * gamma_half(dim + 2));
    let bracket = f64::from(dim - 1) / p.mu().powf(half_d) + 1.0 / p.longitudinal().powf(half_d);
    Ok(prefactor * bracket)
}

/// Boundary Weyl constant
/// `b = ∓ ((d-3)/μ^{(d-1)/2} + 1/(λ+2μ)^{(d-1)/2}) / (2^{d+1} π^{(d-1)/2} Γ((d+1)/2))`,
/// with − for DF and + for FD.
pub fn boundary_weyl_constant(
    p: &MaterialParameters,
    dim: u32,
    bc: BoundaryCondition,
) -> Result<f64, MaterialError> {
    p.ensure_dimension(dim)?;
    let half = f64::from(dim - 1) / 2.0;
    let prefactor = 1.0 / (2f64.powi(dim as i32 + 1) * PI.powf(half) * gamma_half(dim + 1));
    let bracket = (f64::from(dim) - 3.0) / p.mu().powf(half) + 1.0 / p.longitudinal().powf(half);
    Ok(bc.sign() * prefactor * bracket)
}

pub fn assemble_coefficients(
    p: &MaterialParameters,
    dim: u32,
    bc: BoundaryCondition,
    geom: &DomainGeometry,
) -> Result<WeylCoefficients, MaterialError> {
    if geom.dimension() != dim {
        return Err(MaterialError::DimensionMismatch {
            geometry: geom.dimension(),
            requested: dim,
        });
    }
    let a = bulk_weyl_constant(p, dim)?;
    let b = boundary_weyl_constant(p, dim, bc)?;
    let second = b * geom.boundary_volume();
    Ok(WeylCoefficients {
        dimension: dim,
        bc,
        a,
        b,
        leading: a * geom.volume(),
        second,
        heat_second: f64::from(dim - 1) / 2.0 * second,
    })
}
