//! Phase shift, spectral shift function and its integral over ξ′.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::threshold::{point_spectrum_scan, threshold_counts};
use super::waves::block_scattering;
use super::{thresholds, unit_thresholds, Block, ShiftError, SpectralZone, Thresholds};
use crate::elastic::{BoundaryCondition, MaterialParameters};
use crate::quadrature;
use crate::special::unit_ball_volume;

const ANCHOR: f64 = 1e-9;
const GRID_MARGIN: f64 = 1e-6;
const MAX_UNWRAP_DEPTH: u32 = 30;
const MERGE_TOL: f64 = 1e-9;

/// Step function given by ascending breakpoints and one more value than
/// breakpoints. Its value at a breakpoint is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstantFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Option<Self> {
        let ascending = breakpoints.windows(2).all(|w| w[0] < w[1]);
        if !ascending || values.len() != breakpoints.len() + 1 {
            return None;
        }
        Some(Self { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `None` exactly at a breakpoint.
    pub fn eval(&self, x: f64) -> Option<f64> {
        match self.breakpoints.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(_) => None,
            Err(i) => Some(self.values[i]),
        }
    }

    /// Value of the piece to the right of `x` (equals `eval` off breakpoints).
    pub fn eval_right(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= x);
        self.values[i]
    }

    /// Pointwise sum; breakpoints are merged.
    pub fn add(&self, other: &Self) -> Self {
        let mut bps: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        let mut values = Vec::with_capacity(bps.len() + 1);
        for i in 0..=bps.len() {
            let x = if bps.is_empty() {
                0.0
            } else if i == 0 {
                bps[0] - 1.0
            } else if i == bps.len() {
                bps[i - 1] + 1.0
            } else {
                0.5 * (bps[i - 1] + bps[i])
            };
            values.push(self.eval_right(x) + other.eval_right(x));
        }
        Self {
            breakpoints: bps,
            values,
        }
    }
}

/// Which part of the one-dimensional problem a phase or shift refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    Full,
    P,
    /// All `d − 2` normally polarised copies together.
    Perp,
}

/// One grid point of the phase-shift computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample {
    pub lambda: f64,
    pub zone: SpectralZone,
    /// Phase shift φ (radians); 0 below the spectrum.
    pub phase: f64,
    /// `det S`; NaN below the spectrum.
    pub det_s: Complex64,
}

struct ComponentData {
    perp_copies: u32,
    with_p: bool,
    jump1: f64,
    jump2: f64,
}

fn component_data(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    component: Component,
) -> Result<ComponentData, ShiftError> {
    let copies = d - 2;
    let (with_p, perp_copies) = match component {
        Component::Full => (true, copies),
        Component::P => (true, 0),
        Component::Perp => (false, copies),
    };
    let full1 = threshold_counts(p, bc, 1, d)?;
    let full2 = threshold_counts(p, bc, 2, d)?;
    let p1 = threshold_counts(p, bc, 1, 2)?;
    let (j1, m1, j2, m2) = match component {
        Component::Full => (full1.j_star, full1.multiplicity, full2.j_star, full2.multiplicity),
        Component::P => (p1.j_star, p1.multiplicity, full2.j_star, full2.multiplicity),
        Component::Perp => (
            full1.j_star - p1.j_star,
            full1.multiplicity - p1.multiplicity,
            0,
            0,
        ),
    };
    let jump = |j: usize, m: usize| PI * (j as f64 - m as f64 / 2.0);
    Ok(ComponentData {
        perp_copies,
        with_p,
        jump1: jump(j1, m1),
        jump2: jump(j2, m2),
    })
}

fn det_s(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    data: &ComponentData,
    lambda: f64,
) -> Result<Complex64, ShiftError> {
    let mut det = Complex64::new(1.0, 0.0);
    if data.with_p {
        det *= block_scattering(p, bc, Block::P, lambda)?.det();
    }
    if data.perp_copies > 0 {
        let q = block_scattering(p, bc, Block::Perp, lambda)?.det();
        det *= q.powu(data.perp_copies);
    }
    Ok(det)
}

/// Continues the phase of `det S` from `a` to `b`, bisecting while the
/// principal increment exceeds π/2.
fn continue_phase(
    det: &dyn Fn(f64) -> Result<Complex64, ShiftError>,
    a: f64,
    phase_a: f64,
    det_a: Complex64,
    b: f64,
    det_b: Complex64,
    depth: u32,
) -> Result<f64, ShiftError> {
    let step = (det_b / det_a).arg();
    if step.abs() <= PI / 2.0 {
        return Ok(phase_a + step);
    }
    if depth == 0 {
        return Err(ShiftError::RefineGrid { from: a, to: b });
    }
    let mid = 0.5 * (a + b);
    let det_mid = det(mid)?;
    let phase_mid = continue_phase(det, a, phase_a, det_a, mid, det_mid, depth - 1)?;
    continue_phase(det, mid, phase_mid, det_mid, b, det_b, depth - 1)
}

fn check_grid(t: &Thresholds, grid: &[f64]) -> Result<(), ShiftError> {
    let mut prev = f64::NEG_INFINITY;
    for &x in grid {
        let near = |s: f64| (x - s).abs() < GRID_MARGIN * s;
        if !(x > prev) || !x.is_finite() || near(t.lambda_star_1) || near(t.lambda_star_2) {
            return Err(ShiftError::BadGrid { lambda: x });
        }
        prev = x;
    }
    Ok(())
}

/// Phase shift of `component` at each point of an ascending grid of
/// normalised spectral values.
///
/// Within a zone the phase is the continuous branch of `arg det S`; across
/// threshold `k` it jumps by `π (j*_k − m_k/2)`. The zone values at the
/// anchors `Λ*_k (1 ± 1e−9)` are returned alongside the samples.
fn phase_run(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    component: Component,
    grid: &[f64],
) -> Result<(Vec<PhaseSample>, [f64; 2]), ShiftError> {
    p.ensure_dimension(d)?;
    let t = unit_thresholds(p);
    check_grid(&t, grid)?;
    let data = component_data(p, bc, d, component)?;
    let det = |x: f64| det_s(p, bc, &data, x);

    let a1 = t.lambda_star_1 * (1.0 + ANCHOR);
    let mut cur = (a1, data.jump1, det(a1)?);
    let zone1_value = cur.1;
    let mut samples = Vec::with_capacity(grid.len());
    let mut zone2_value = None;

    for &x in grid {
        let zone = t.zone(x)?;
        if zone == SpectralZone::BelowSpectrum {
            samples.push(PhaseSample {
                lambda: x,
                zone,
                phase: 0.0,
                det_s: Complex64::new(f64::NAN, f64::NAN),
            });
            continue;
        }
        if zone == SpectralZone::I2 && zone2_value.is_none() {
            cur = cross_second(&det, &t, cur, data.jump2)?;
            zone2_value = Some(cur.1);
        }
        let dx = det(x)?;
        let phase = continue_phase(&det, cur.0, cur.1, cur.2, x, dx, MAX_UNWRAP_DEPTH)?;
        cur = (x, phase, dx);
        samples.push(PhaseSample {
            lambda: x,
            zone,
            phase,
            det_s: dx,
        });
    }
    let zone2_value = match zone2_value {
        Some(v) => v,
        None => cross_second(&det, &t, cur, data.jump2)?.1,
    };
    Ok((samples, [zone1_value, zone2_value]))
}

fn cross_second(
    det: &dyn Fn(f64) -> Result<Complex64, ShiftError>,
    t: &Thresholds,
    cur: (f64, f64, Complex64),
    jump: f64,
) -> Result<(f64, f64, Complex64), ShiftError> {
    let below = t.lambda_star_2 * (1.0 - ANCHOR);
    let det_below = det(below)?;
    let phase_below = continue_phase(det, cur.0, cur.1, cur.2, below, det_below, MAX_UNWRAP_DEPTH)?;
    let above = t.lambda_star_2 * (1.0 + ANCHOR);
    Ok((above, phase_below + jump, det(above)?))
}

fn compress(t: &Thresholds, samples: &[PhaseSample], zone_values: [f64; 2], scale: f64) -> PiecewiseConstantFunction {
    let mut breakpoints = vec![t.lambda_star_1];
    let mut values = vec![0.0, zone_values[0] * scale];
    let mut last_lambda = t.lambda_star_1;
    let mut crossed = false;
    for s in samples.iter().filter(|s| s.zone != SpectralZone::BelowSpectrum) {
        if s.zone == SpectralZone::I2 && !crossed {
            breakpoints.push(t.lambda_star_2);
            values.push(zone_values[1] * scale);
            last_lambda = t.lambda_star_2;
            crossed = true;
        }
        let v = s.phase * scale;
        if (v - values[values.len() - 1]).abs() > MERGE_TOL {
            breakpoints.push(0.5 * (last_lambda + s.lambda));
            values.push(v);
        }
        last_lambda = s.lambda;
    }
    if !crossed {
        breakpoints.push(t.lambda_star_2);
        values.push(zone_values[1] * scale);
    }
    PiecewiseConstantFunction { breakpoints, values }
}

/// Phase samples of the full problem, for reporting.
pub fn phase_samples(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    grid: &[f64],
) -> Result<Vec<PhaseSample>, ShiftError> {
    Ok(phase_run(p, bc, d, Component::Full, grid)?.0)
}

/// Phase shift φ of the full problem as a step function of the normalised
/// spectral value.
pub fn phase_shift_curve(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    grid: &[f64],
) -> Result<PiecewiseConstantFunction, ShiftError> {
    let (samples, zones) = phase_run(p, bc, d, Component::Full, grid)?;
    Ok(compress(&unit_thresholds(p), &samples, zones, 1.0))
}

fn default_grid(t: &Thresholds) -> Vec<f64> {
    let (t1, t2) = (t.lambda_star_1, t.lambda_star_2);
    let mut grid: Vec<f64> = (1..8).map(|i| t1 * f64::from(i) / 8.0).collect();
    grid.extend((1..8).map(|i| t1 * (t2 / t1).powf(f64::from(i) / 8.0)));
    grid.extend((1..=8).map(|i| t2 * 100f64.powf(f64::from(i) / 8.0)));
    grid
}

/// Spectral shift function `φ/(2π) + N_1D` at `|ξ′| = 1`, computed by the
/// numerical pipeline and stored as a step function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftProfile {
    pub dimension: u32,
    pub bc: BoundaryCondition,
    pub thresholds: Thresholds,
    pub shift: PiecewiseConstantFunction,
    pub point_spectrum: Vec<f64>,
}

impl ShiftProfile {
    pub fn compute(
        p: &MaterialParameters,
        bc: BoundaryCondition,
        d: u32,
        component: Component,
    ) -> Result<Self, ShiftError> {
        p.ensure_dimension(d)?;
        let t = unit_thresholds(p);
        let grid = default_grid(&t);
        let (samples, zones) = phase_run(p, bc, d, component, &grid)?;
        let phase = compress(&t, &samples, zones, 1.0 / (2.0 * PI));
        let point_spectrum = point_spectrum_scan(p, bc, d, 100.0 * t.lambda_star_2)?;
        let shift = if point_spectrum.is_empty() {
            phase
        } else {
            let counts = PiecewiseConstantFunction {
                breakpoints: point_spectrum.clone(),
                values: (0..=point_spectrum.len()).map(|i| i as f64).collect(),
            };
            phase.add(&counts)
        };
        Ok(Self {
            dimension: d,
            bc,
            thresholds: t,
            shift,
            point_spectrum,
        })
    }

    /// `shift(Λ; ξ′)` through `shift(Λ/|ξ′|²; 1)`.
    pub fn eval(&self, lambda: f64, xi_norm: f64) -> Result<f64, ShiftError> {
        if !(xi_norm > 0.0 && xi_norm.is_finite()) {
            return Err(ShiftError::ZeroMomentum(xi_norm));
        }
        let x = lambda / (xi_norm * xi_norm);
        self.shift.eval(x).ok_or(ShiftError::ThresholdHit { lambda: x })
    }

    /// Value on a zone (taken at an interior point of the zone).
    pub fn zone_value(&self, zone: SpectralZone) -> f64 {
        let t = &self.thresholds;
        let x = match zone {
            SpectralZone::BelowSpectrum => 0.5 * t.lambda_star_1,
            SpectralZone::I1 => 0.5 * (t.lambda_star_1 + t.lambda_star_2),
            SpectralZone::I2 => 2.0 * t.lambda_star_2,
        };
        self.shift.eval_right(x)
    }
}

/// Spectral shift function of the full problem at `(Λ, |ξ′|)`.
pub fn spectral_shift(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    lambda: f64,
    xi_norm: f64,
) -> Result<f64, ShiftError> {
    thresholds(p, xi_norm, d)?;
    ShiftProfile::compute(p, bc, d, Component::Full)?.eval(lambda, xi_norm)
}

/// `∓{0, (d−3)/4, (d−2)/4}` on the three zones, − for DF and + for FD.
pub fn closed_form_shift(bc: BoundaryCondition, d: u32, zone: SpectralZone) -> f64 {
    let d = f64::from(d);
    let magnitude = match zone {
        SpectralZone::BelowSpectrum => 0.0,
        SpectralZone::I1 => (d - 3.0) / 4.0,
        SpectralZone::I2 => (d - 2.0) / 4.0,
    };
    bc.sign() * magnitude
}

/// Closed-form value of one component; P and the `d − 2` normally polarised
/// copies add up to [`closed_form_shift`].
pub fn closed_form_component_shift(bc: BoundaryCondition, d: u32, component: Component, zone: SpectralZone) -> f64 {
    let p_part = match zone {
        SpectralZone::I1 => -bc.sign() / 4.0,
        _ => 0.0,
    };
    let perp_part = match zone {
        SpectralZone::BelowSpectrum => 0.0,
        _ => bc.sign() * f64::from(d - 2) / 4.0,
    };
    match component {
        Component::Full => p_part + perp_part,
        Component::P => p_part,
        Component::Perp => perp_part,
    }
}

pub fn closed_form_spectral_shift(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    lambda: f64,
    xi_norm: f64,
) -> Result<f64, ShiftError> {
    let t = thresholds(p, xi_norm, d)?;
    Ok(closed_form_shift(bc, d, t.zone(lambda)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegrationMethod {
    /// Piecewise-constant radial profile integrated against ball volumes.
    Exact,
    /// Adaptive Gauss–Kronrod in the radial variable.
    Quadrature,
}

/// `c_{d−2} = ((d−1)/2) · Vol_{d−1}/(2π)^{d−1} · ∫_{R^{d−1}} shift(1; ξ′) dξ′`.
///
/// With `r = |ξ′|`, `shift(1; ξ′) = shift(1/r²; 1)`: the value on the second
/// zone for `r < 1/√(λ+2μ)`, on the first zone up to `r = 1/√μ`, and zero
/// beyond.
pub fn integrate_to_second_coefficient(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    boundary_volume: f64,
    method: IntegrationMethod,
) -> Result<f64, ShiftError> {
    let profile = ShiftProfile::compute(p, bc, d, Component::Full)?;
    if profile.zone_value(SpectralZone::BelowSpectrum) != 0.0 || !profile.point_spectrum.is_empty() {
        return Err(ShiftError::DivergentIntegral);
    }
    let n = d - 1;
    let r1 = 1.0 / p.mu().sqrt();
    let r2 = 1.0 / p.longitudinal().sqrt();
    let integral = match method {
        IntegrationMethod::Exact => {
            let v1 = profile.zone_value(SpectralZone::I1);
            let v2 = profile.zone_value(SpectralZone::I2);
            let nf = n as i32;
            unit_ball_volume(n) * (v2 * r2.powi(nf) + v1 * (r1.powi(nf) - r2.powi(nf)))
        }
        IntegrationMethod::Quadrature => {
            // |S^{n-1}| ∫_0^∞ shift(1/r²) r^{n-1} dr; the integrand vanishes past r1.
            let sphere = f64::from(n) * unit_ball_volume(n);
            let integrand = |r: f64| {
                if r == 0.0 {
                    return if n == 1 { profile.zone_value(SpectralZone::I2) } else { 0.0 };
                }
                profile.shift.eval_right(1.0 / (r * r)) * r.powi(n as i32 - 1)
            };
            let q = quadrature::integrate(integrand, 0.0, 2.0 * r1, 1e-12, 1e-11, 20_000)?;
            sphere * q.value
        }
    };
    let n = f64::from(n);
    Ok(0.5 * n * boundary_volume / (2.0 * PI).powf(n) * integral)
}
