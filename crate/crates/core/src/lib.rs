//! Two-term Weyl asymptotics for isotropic linear elasticity with mixed
//! boundary conditions.
//!
//! * [`elastic`]: Lamé parameters and the closed-form Weyl coefficients.
//! * [`shift`]: the half-space scattering problem, spectral shift function
//!   and its integral, which reproduces the second coefficient numerically.
//! * [`cylinder`], [`disk`]: exact spectra of model domains.
//! * [`asymptotics`]: comparison of counting data with the two-term law.

pub mod arith;
pub mod asymptotics;
pub mod bessel;
pub mod cylinder;
pub mod disk;
pub mod elastic;
pub mod quadrature;
pub mod shift;
pub mod special;

pub use elastic::{
    assemble_coefficients, boundary_weyl_constant, bulk_weyl_constant, validate_material,
    BoundaryCondition, DomainGeometry, MaterialError, MaterialParameters, WeylCoefficients,
};
