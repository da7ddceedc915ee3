use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use elastic_weyl::BoundaryCondition;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "weyl", version, about = "Weyl asymptotics of the elastic Laplacian with mixed boundary conditions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bulk and boundary Weyl coefficients for both boundary conditions
    Coeffs(CoeffsArgs),
    /// Half-space spectral shift profile at unit tangential momentum
    Shift(ShiftArgs),
    /// Counting function of the flat cylinder [0, h] × S¹
    Cylinder2d(CylinderArgs),
    /// Counting function of the flat cylinder [0, h] × T²
    Cylinder3d(CylinderArgs),
    /// Counting function of the unit disk
    Disk(DiskArgs),
    /// Run the invariant suite and print a pass/fail summary
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Material {
    /// First Lamé parameter λ
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Shear modulus μ
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct Sampling {
    /// Largest spectral value
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_max: Option<f64>,
    /// Smallest sampled value (default 1.1 × the smallest eigenvalue)
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_min: Option<f64>,
    /// Number of sample points; 1 samples lambda-max only
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub material: Material,
    #[arg(long, default_value_t = 2)]
    pub dim: u32,
    /// Vol_d of the domain
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub volume: f64,
    /// Vol_{d-1} of its boundary
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub boundary_volume: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ShiftArgs {
    #[command(flatten)]
    pub material: Material,
    #[arg(long, default_value_t = 2)]
    pub dim: u32,
    #[arg(long, default_value = "df")]
    pub bc: BoundaryCondition,
    /// Largest normalised spectral value (default 3(λ+2μ))
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Vol_{d-1} used for the integrated second coefficient
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub boundary_volume: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CylinderArgs {
    #[command(flatten)]
    pub material: Material,
    #[arg(long, default_value = "df")]
    pub bc: BoundaryCondition,
    /// Length of the interval factor
    #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
    pub h: f64,
    #[command(flatten)]
    pub sampling: Sampling,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DiskArgs {
    #[command(flatten)]
    pub material: Material,
    #[arg(long, default_value = "df")]
    pub bc: BoundaryCondition,
    #[command(flatten)]
    pub sampling: Sampling,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub material: Material,
}
