//! Plane-wave solutions of the one-dimensional problem and the boundary
//! systems they produce.
//!
//! In the P block a displacement is written as (tangential, normal)
//! components with respect to (ξ′/|ξ′|, e_z). The symbol at
//! `ξ = (1, ζ)` has eigenvectors `s(ζ) = (−ζ, 1)` (shear, eigenvalue
//! `μ(1+ζ²)`) and `p(ζ) = (1, ζ)` (longitudinal, eigenvalue
//! `(λ+2μ)(1+ζ²)`). A wave is `pol · e^{iζz}`: outgoing for real `ζ > 0`,
//! incoming for `ζ < 0`, decaying for `ζ = iκ`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{unit_thresholds, Block, ScatteringMatrix, ShiftError, SpectralZone};
use crate::elastic::{BoundaryCondition, MaterialParameters};

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const UNITARITY_TOL: f64 = 1e-10;
const SINGULAR_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Wave {
    /// (tangential, normal) for P; (amplitude, 0) for P⊥.
    pub pol: [C; 2],
    pub zeta: C,
}

impl Wave {
    fn new(pol: [C; 2], zeta: C, scale: f64) -> Self {
        Self {
            pol: [pol[0] * scale, pol[1] * scale],
            zeta,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct WaveSet {
    pub outgoing: Vec<Wave>,
    pub incoming: Vec<Wave>,
    pub decaying: Vec<Wave>,
}

pub(crate) fn shear_pol(zeta: C) -> [C; 2] {
    [-zeta, C::new(1.0, 0.0)]
}

pub(crate) fn longitudinal_pol(zeta: C) -> [C; 2] {
    [C::new(1.0, 0.0), zeta]
}

/// Flux normalisation `1/(√(4πΛ) |ζ|^{1/2})` for unnormalised P polarisations.
fn p_weight(lambda: f64, zeta: f64) -> f64 {
    1.0 / ((4.0 * PI * lambda).sqrt() * zeta.abs().sqrt())
}

fn perp_weight(mu: f64, zeta: f64) -> f64 {
    1.0 / ((4.0 * PI * mu).sqrt() * zeta.abs().sqrt())
}

/// Waves at normalised spectral value `lambda` (with `|ξ′| = 1`).
pub(crate) fn wave_set(p: &MaterialParameters, block: Block, zone: SpectralZone, lambda: f64) -> WaveSet {
    let mu = p.mu();
    let stiff = p.longitudinal();
    let real = |x: f64| C::new(x, 0.0);
    let zeta1 = (lambda / mu - 1.0).sqrt();
    match (block, zone) {
        (_, SpectralZone::BelowSpectrum) => WaveSet::default(),
        (Block::P, SpectralZone::I1) => {
            let kappa = (1.0 - lambda / stiff).sqrt();
            let w = p_weight(lambda, zeta1);
            WaveSet {
                outgoing: vec![Wave::new(shear_pol(real(zeta1)), real(zeta1), w)],
                incoming: vec![Wave::new(shear_pol(real(-zeta1)), real(-zeta1), w)],
                decaying: vec![Wave::new(longitudinal_pol(I * kappa), I * kappa, 1.0)],
            }
        }
        (Block::P, SpectralZone::I2) => {
            let zeta2 = (lambda / stiff - 1.0).sqrt();
            let w1 = p_weight(lambda, zeta1);
            let w2 = p_weight(lambda, zeta2);
            WaveSet {
                outgoing: vec![
                    Wave::new(shear_pol(real(zeta1)), real(zeta1), w1),
                    Wave::new(longitudinal_pol(real(zeta2)), real(zeta2), w2),
                ],
                incoming: vec![
                    Wave::new(shear_pol(real(-zeta1)), real(-zeta1), w1),
                    Wave::new(longitudinal_pol(real(-zeta2)), real(-zeta2), w2),
                ],
                decaying: Vec::new(),
            }
        }
        (Block::Perp, _) => {
            let w = perp_weight(mu, zeta1);
            let unit = [real(1.0), real(0.0)];
            WaveSet {
                outgoing: vec![Wave::new(unit, real(zeta1), w)],
                incoming: vec![Wave::new(unit, real(-zeta1), w)],
                decaying: Vec::new(),
            }
        }
    }
}

/// Boundary functionals at `z = 0` applied to one wave.
///
/// P block, DF: `u_t` and the normal traction divided by `λ+2μ`.
/// P block, FD: `u_n` and the tangential traction divided by `μ`.
/// P⊥ block: `u` (DF) or `u'` (FD).
pub(crate) fn boundary_rows(p: &MaterialParameters, bc: BoundaryCondition, block: Block, w: &Wave) -> Vec<C> {
    let [ut, un] = w.pol;
    let d_ut = I * w.zeta * ut;
    let d_un = I * w.zeta * un;
    match (block, bc) {
        (Block::P, BoundaryCondition::DF) => {
            vec![ut, d_un + I * (p.lambda() / p.longitudinal()) * ut]
        }
        (Block::P, BoundaryCondition::FD) => vec![un, d_ut + I * un],
        (Block::Perp, BoundaryCondition::DF) => vec![ut],
        (Block::Perp, BoundaryCondition::FD) => vec![d_ut],
    }
}

pub(crate) fn rows_block(p: &MaterialParameters, bc: BoundaryCondition, block: Block, waves: &[Wave]) -> DMatrix<C> {
    let rows = match block {
        Block::P => 2,
        Block::Perp => 1,
    };
    let mut m = DMatrix::zeros(rows, waves.len());
    for (j, w) in waves.iter().enumerate() {
        for (i, v) in boundary_rows(p, bc, block, w).into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    m
}

/// Linear maps with `M_out c⁺ = M_in c⁻`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySystem {
    pub m_out: DMatrix<C>,
    pub m_in: DMatrix<C>,
}

/// Eliminates the decaying amplitudes by Gaussian elimination with partial
/// pivoting on their columns. Also returns the elimination data needed to
/// recover them.
fn reduce(b_out: &DMatrix<C>, b_in: &DMatrix<C>, b_ev: &DMatrix<C>) -> (BoundarySystem, DMatrix<C>) {
    let rows = b_out.nrows();
    let (n, e) = (b_out.ncols(), b_ev.ncols());
    let mut aug = DMatrix::zeros(rows, e + 2 * n);
    aug.view_mut((0, 0), (rows, e)).copy_from(b_ev);
    aug.view_mut((0, e), (rows, n)).copy_from(b_out);
    aug.view_mut((0, e + n), (rows, n)).copy_from(b_in);
    for c in 0..e {
        let pivot = (c..rows)
            .max_by(|&a, &b| aug[(a, c)].norm().total_cmp(&aug[(b, c)].norm()))
            .expect("more rows than decaying modes");
        aug.swap_rows(c, pivot);
        let head = aug[(c, c)];
        for r in c + 1..rows {
            let factor = aug[(r, c)] / head;
            for k in c..aug.ncols() {
                let v = aug[(c, k)];
                aug[(r, k)] -= factor * v;
            }
        }
    }
    let m_out = aug.view((e, e), (rows - e, n)).into_owned();
    let m_in = -aug.view((e, e + n), (rows - e, n)).into_owned();
    (BoundarySystem { m_out, m_in }, aug)
}

// `waves` and `decaying` are read by the full-dimensional check in the tests.
#[allow(dead_code)]
pub(crate) struct BlockSolution {
    pub waves: WaveSet,
    pub s: DMatrix<C>,
    /// Row `j`: decaying amplitudes when the incoming amplitudes are `e_j`.
    pub decaying: DMatrix<C>,
}

fn block_zone_check(p: &MaterialParameters, lambda: f64, zone: SpectralZone) -> Result<(), ShiftError> {
    let actual = unit_thresholds(p).zone(lambda)?;
    if actual != zone {
        return Err(ShiftError::WrongZone {
            lambda,
            expected: zone,
            actual,
        });
    }
    if zone == SpectralZone::BelowSpectrum {
        return Err(ShiftError::WrongZone {
            lambda,
            expected: SpectralZone::I1,
            actual,
        });
    }
    Ok(())
}

pub(crate) fn block_system(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    block: Block,
    zone: SpectralZone,
    lambda: f64,
) -> Result<(BoundarySystem, WaveSet, DMatrix<C>), ShiftError> {
    block_zone_check(p, lambda, zone)?;
    let waves = wave_set(p, block, zone, lambda);
    let b_out = rows_block(p, bc, block, &waves.outgoing);
    let b_in = rows_block(p, bc, block, &waves.incoming);
    let b_ev = rows_block(p, bc, block, &waves.decaying);
    let (sys, aug) = reduce(&b_out, &b_in, &b_ev);
    Ok((sys, waves, aug))
}

fn solve_outgoing(sys: &BoundarySystem, lambda: f64) -> Result<DMatrix<C>, ShiftError> {
    let sv = sys.m_out.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if !(max > 0.0) || min < SINGULAR_RATIO * max {
        return Err(ShiftError::SingularOutgoing { lambda });
    }
    sys.m_out
        .clone()
        .lu()
        .solve(&sys.m_in)
        .ok_or(ShiftError::SingularOutgoing { lambda })
}

pub(crate) fn solve_block(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    block: Block,
    zone: SpectralZone,
    lambda: f64,
) -> Result<BlockSolution, ShiftError> {
    let (sys, waves, aug) = block_system(p, bc, block, zone, lambda)?;
    let s = solve_outgoing(&sys, lambda)?;
    let n = s.ncols();
    let e = waves.decaying.len();
    // back-substitute the eliminated rows: for incoming e_j the outgoing
    // amplitudes are column j of S.
    let mut decaying = DMatrix::zeros(n, e);
    for j in 0..n {
        for c in (0..e).rev() {
            let mut acc = C::new(0.0, 0.0);
            for k in 0..n {
                acc += aug[(c, e + k)] * s[(k, j)];
            }
            acc += aug[(c, e + n + j)];
            for k in c + 1..e {
                acc += aug[(c, k)] * decaying[(j, k)];
            }
            decaying[(j, c)] = -acc / aug[(c, c)];
        }
    }
    Ok(BlockSolution { waves, s, decaying })
}

/// Scattering matrix of a single block at normalised `lambda`.
pub fn block_scattering(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    block: Block,
    lambda: f64,
) -> Result<ScatteringMatrix, ShiftError> {
    let zone = unit_thresholds(p).zone(lambda)?;
    let sol = solve_block(p, bc, block, zone, lambda)?;
    let s = ScatteringMatrix {
        lambda,
        zone,
        entries: sol.s,
    };
    let defect = s.unitarity_defect();
    if defect > UNITARITY_TOL {
        return Err(ShiftError::NonUnitary { lambda, defect });
    }
    Ok(s)
}

fn block_diagonal(blocks: &[DMatrix<C>]) -> DMatrix<C> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = DMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        m.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    m
}

/// Full boundary system at normalised `lambda` in `zone`, assembled block
/// diagonally: P block, then `d − 2` copies of the P⊥ block.
pub fn boundary_system(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    zone: SpectralZone,
    lambda: f64,
    d: u32,
) -> Result<BoundarySystem, ShiftError> {
    p.ensure_dimension(d)?;
    let (sp, _, _) = block_system(p, bc, Block::P, zone, lambda)?;
    let mut outs = vec![sp.m_out];
    let mut ins = vec![sp.m_in];
    if d > 2 {
        let (sq, _, _) = block_system(p, bc, Block::Perp, zone, lambda)?;
        for _ in 2..d {
            outs.push(sq.m_out.clone());
            ins.push(sq.m_in.clone());
        }
    }
    Ok(BoundarySystem {
        m_out: block_diagonal(&outs),
        m_in: block_diagonal(&ins),
    })
}

/// `S = M_out⁻¹ M_in` of size `d − 1` in `I1` and `d` in `I2`.
pub fn scattering_matrix(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    lambda: f64,
    d: u32,
) -> Result<ScatteringMatrix, ShiftError> {
    p.ensure_dimension(d)?;
    let zone = unit_thresholds(p).zone(lambda)?;
    let sys = boundary_system(p, bc, zone, lambda, d)?;
    let entries = solve_outgoing(&sys, lambda)?;
    let s = ScatteringMatrix { lambda, zone, entries };
    let defect = s.unitarity_defect();
    if defect > UNITARITY_TOL {
        return Err(ShiftError::NonUnitary { lambda, defect });
    }
    Ok(s)
}
