//! The unit disk.
//!
//! Displacements are written as `grad ψ₁ + curl(ψ₂ ẑ)` with
//! `ψ₁ = A J_k(a r) e^{ikθ}`, `ψ₂ = B J_k(b r) e^{ikθ}`,
//! `a = √(Λ/(λ+2μ))`, `b = √(Λ/μ)`. Imposing two of the four Cauchy data at
//! `r = 1` gives a 2×2 system per angular order `k`; eigenvalues are the
//! values of `Λ` where it is singular.
//!
//! Each column depends on one Bessel argument only, so columns are built from
//! the unit direction of `(J_k, J_{k+1})` instead of the raw values. This
//! rescales the determinant by a positive factor and keeps high orders
//! representable.

use serde::Serialize;
use thiserror::Error;

use crate::bessel::{bessel_j, bessel_pair_direction, BesselError, MAX_ORDER};
use crate::elastic::{BoundaryCondition, MaterialError, MaterialParameters};

/// Scan step in `b = √(Λ/μ)`.
pub const DEFAULT_STEP: f64 = 0.05;
/// `|det|` below this after the deepest zoom without a sign change is
/// reported as an unresolved double root.
const SUSPECT: f64 = 1e-6;
/// Relative smallest singular value accepted as a genuine null vector.
const RANK_TOL: f64 = 1e-6;
/// Empty orders in a row after which the scan over `k` stops.
const EMPTY_ORDERS_TO_STOP: u32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiskError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error("spectral value must be positive and finite, got {0}")]
    Lambda(f64),
    #[error("unresolved near-double root for k = {k} near Λ = {lambda} (|det| = {residual:e})")]
    DoubleRoot { k: u32, lambda: f64, residual: f64 },
    #[error("angular order scan reached the Bessel order limit before Λ = {0}")]
    OrderLimit(f64),
}

/// Roots of the secular equation for one angular order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskModeRoots {
    pub k: u32,
    pub roots: Vec<f64>,
    /// 1 for `k = 0`, 2 otherwise (`e^{±ikθ}`).
    pub multiplicity: u64,
    /// Determinant zeros without a nonzero eigenfunction.
    pub rejected: usize,
}

fn multiplicity(k: u32) -> u64 {
    if k == 0 {
        1
    } else {
        2
    }
}

struct Args {
    a: f64,
    b: f64,
}

fn args(p: &MaterialParameters, lambda: f64) -> Args {
    Args {
        a: (lambda / p.longitudinal()).sqrt(),
        b: (lambda / p.mu()).sqrt(),
    }
}

/// Cauchy data at `r = 1` of the two potentials, one column each:
/// rows `u_r`, `u_θ/i`, `σ_rr/μ`, `σ_rθ/(iμ)`, columns `A` and `C = iB`.
/// `(ja, ja1)` and `(jb, jb1)` are `(J_k, J_{k+1})` at `a` and `b`, up to a
/// factor per column.
fn cauchy_columns(k: u32, a: f64, b: f64, (ja, ja1): (f64, f64), (jb, jb1): (f64, f64)) -> [[f64; 2]; 4] {
    let k = f64::from(k);
    // x J_k'(x) = k J_k(x) - x J_{k+1}(x)
    let da = k * ja - a * ja1;
    let db = k * jb - b * jb1;
    [
        [da, k * jb],
        [k * ja, db],
        [2.0 * k * k * ja - 2.0 * da - b * b * ja, 2.0 * k * (db - jb)],
        [2.0 * k * (da - ja), -(2.0 * db + (b * b - 2.0 * k * k) * jb)],
    ]
}

fn rows(bc: BoundaryCondition) -> (usize, usize) {
    match bc {
        // σ_rr = 0, u_θ = 0
        BoundaryCondition::DF => (2, 1),
        // u_r = 0, σ_rθ = 0
        BoundaryCondition::FD => (0, 3),
    }
}

fn check_lambda(lambda: f64) -> Result<(), DiskError> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(DiskError::Lambda(lambda))
    }
}

/// The 2×2 boundary matrix built from actual Bessel values.
pub fn boundary_matrix(
    bc: BoundaryCondition,
    k: u32,
    p: &MaterialParameters,
    lambda: f64,
) -> Result<[[f64; 2]; 2], DiskError> {
    check_lambda(lambda)?;
    let Args { a, b } = args(p, lambda);
    let pa = (bessel_j(k, a)?, bessel_j(k + 1, a)?);
    let pb = (bessel_j(k, b)?, bessel_j(k + 1, b)?);
    let c = cauchy_columns(k, a, b, pa, pb);
    let (r0, r1) = rows(bc);
    Ok([c[r0], c[r1]])
}

fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Secular function for angular order `k`.
///
/// DF: `μkJ_k(b)[b²J_k(a) − 2aJ_{k+1}(a)] + μbJ_{k+1}(b)[2aJ_{k+1}(a) − (2k+b²)J_k(a)]`.
/// FD: determinant of [`boundary_matrix`].
pub fn secular_det(
    bc: BoundaryCondition,
    k: u32,
    p: &MaterialParameters,
    lambda: f64,
) -> Result<f64, DiskError> {
    check_lambda(lambda)?;
    match bc {
        BoundaryCondition::DF => {
            let Args { a, b } = args(p, lambda);
            let (ja, ja1) = (bessel_j(k, a)?, bessel_j(k + 1, a)?);
            let (jb, jb1) = (bessel_j(k, b)?, bessel_j(k + 1, b)?);
            let kf = f64::from(k);
            let mu = p.mu();
            Ok(mu * kf * jb * (b * b * ja - 2.0 * a * ja1)
                + mu * b * jb1 * (2.0 * a * ja1 - (2.0 * kf + b * b) * ja))
        }
        BoundaryCondition::FD => Ok(det2(&boundary_matrix(bc, k, p, lambda)?)),
    }
}

struct Scaled {
    cauchy: [[f64; 2]; 4],
    scale: f64,
}

fn scaled_cauchy(k: u32, p: &MaterialParameters, lambda: f64) -> Result<Scaled, DiskError> {
    let Args { a, b } = args(p, lambda);
    let pa = bessel_pair_direction(k, a)?;
    let pb = bessel_pair_direction(k, b)?;
    let kf = f64::from(k);
    Ok(Scaled {
        cauchy: cauchy_columns(k, a, b, pa, pb),
        scale: (1.0 + b * b + kf * kf).powf(1.5),
    })
}

/// Boundary determinant with each column rescaled by a positive factor and
/// the result divided by `(1 + b² + k²)^{3/2}`. Same sign and zeros as the
/// true determinant, bounded, and finite for every order up to the Bessel
/// limit.
pub fn scaled_secular_det(
    bc: BoundaryCondition,
    k: u32,
    p: &MaterialParameters,
    lambda: f64,
) -> Result<f64, DiskError> {
    check_lambda(lambda)?;
    let s = scaled_cauchy(k, p, lambda)?;
    let (r0, r1) = rows(bc);
    Ok(det2(&[s.cauchy[r0], s.cauchy[r1]]) / s.scale)
}

/// A determinant zero is an eigenvalue when the boundary matrix has a null
/// vector whose full Cauchy data at `r = 1` do not vanish (otherwise the
/// displacement is zero by unique continuation).
fn confirm(bc: BoundaryCondition, k: u32, p: &MaterialParameters, lambda: f64) -> Result<bool, DiskError> {
    let s = scaled_cauchy(k, p, lambda)?;
    let (r0, r1) = rows(bc);
    let m = [s.cauchy[r0], s.cauchy[r1]];
    let frob2: f64 = m.iter().flatten().map(|v| v * v).sum();
    let det = det2(&m);
    // Singular values of a 2×2 matrix from its Frobenius norm and determinant.
    let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
    let smax = ((frob2 + disc) / 2.0).sqrt();
    let smin = if smax > 0.0 { det.abs() / smax } else { 0.0 };
    if smax == 0.0 || smin > RANK_TOL * smax {
        return Ok(smax == 0.0);
    }
    // Null vector: right singular vector of the smaller singular value.
    let row = if m[0][0].hypot(m[0][1]) >= m[1][0].hypot(m[1][1]) { m[0] } else { m[1] };
    let v = [-row[1], row[0]];
    let vnorm = v[0].hypot(v[1]);
    let data: f64 = s
        .cauchy
        .iter()
        .map(|r| (r[0] * v[0] + r[1] * v[1]).powi(2))
        .sum::<f64>()
        .sqrt();
    let column_size = s.cauchy.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(data > 1e-8 * column_size * vnorm)
}

/// All eigenvalues of angular order `k` in `(0, lambda_max)`.
pub fn find_mode_roots(
    bc: BoundaryCondition,
    k: u32,
    p: &MaterialParameters,
    lambda_max: f64,
) -> Result<DiskModeRoots, DiskError> {
    find_mode_roots_with_step(bc, k, p, lambda_max, DEFAULT_STEP)
}

/// [`find_mode_roots`] with an explicit scan step in `b = √(Λ/μ)`.
pub fn find_mode_roots_with_step(
    bc: BoundaryCondition,
    k: u32,
    p: &MaterialParameters,
    lambda_max: f64,
    step: f64,
) -> Result<DiskModeRoots, DiskError> {
    check_lambda(lambda_max)?;
    p.ensure_dimension(2)?;
    let mu = p.mu();
    let f = |b: f64| scaled_secular_det(bc, k, p, mu * b * b);
    let b_max = (lambda_max / mu).sqrt();
    let n = (b_max / step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (1..=n).map(|j| b_max * j as f64 / n as f64).collect();
    let values = grid.iter().map(|&b| f(b)).collect::<Result<Vec<_>, _>>()?;

    let mut candidates = Vec::new();
    for j in 0..grid.len() {
        if j + 1 < grid.len() && sign_change(values[j], values[j + 1]) {
            candidates.push(bisect(&f, grid[j], grid[j + 1], values[j])?);
        }
        let interior = j > 0 && j + 1 < grid.len();
        if interior
            && values[j].abs() <= values[j - 1].abs()
            && values[j].abs() <= values[j + 1].abs()
            && !sign_change(values[j - 1], values[j])
            && !sign_change(values[j], values[j + 1])
        {
            candidates.extend(refine_suspect(&f, k, mu, grid[j - 1], grid[j + 1], 0)?);
        }
    }
    if let Some(&last) = values.last() {
        if last == 0.0 {
            candidates.push(b_max);
        }
    }

    let mut roots = Vec::new();
    let mut rejected = 0;
    for b in candidates {
        let lambda = mu * b * b;
        if lambda >= lambda_max {
            continue;
        }
        if confirm(bc, k, p, lambda)? {
            roots.push(lambda);
        } else {
            rejected += 1;
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    Ok(DiskModeRoots {
        k,
        roots,
        multiplicity: multiplicity(k),
        rejected,
    })
}

fn sign_change(x: f64, y: f64) -> bool {
    (x < 0.0 && y >= 0.0) || (x > 0.0 && y <= 0.0)
}

fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64, DiskError>
where
    F: Fn(f64) -> Result<f64, DiskError>,
{
    if f_lo == 0.0 {
        return Ok(lo);
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if sign_change(f_lo, fm) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Looks for a close pair of roots hiding near a sign-preserving local
/// minimum of `|f|`, zooming in by a factor 10 per level.
fn refine_suspect<F>(f: &F, k: u32, mu: f64, lo: f64, hi: f64, depth: u32) -> Result<Vec<f64>, DiskError>
where
    F: Fn(f64) -> Result<f64, DiskError>,
{
    const FINE: usize = 20;
    const MAX_DEPTH: u32 = 4;
    let pts: Vec<f64> = (0..=FINE).map(|i| lo + (hi - lo) * i as f64 / FINE as f64).collect();
    let vals = pts.iter().map(|&b| f(b)).collect::<Result<Vec<_>, _>>()?;
    let mut found = Vec::new();
    for i in 0..FINE {
        if sign_change(vals[i], vals[i + 1]) {
            found.push(bisect(f, pts[i], pts[i + 1], vals[i])?);
        }
    }
    if !found.is_empty() {
        return Ok(found);
    }
    let i = (1..FINE)
        .min_by(|&x, &y| vals[x].abs().total_cmp(&vals[y].abs()))
        .expect("grid has interior points");
    let dip = vals[i].abs() < vals[i - 1].abs() && vals[i].abs() < vals[i + 1].abs();
    if !dip {
        return Ok(Vec::new());
    }
    if depth < MAX_DEPTH {
        return refine_suspect(f, k, mu, pts[i - 1], pts[i + 1], depth + 1);
    }
    let b = pts[i];
    let residual = vals[i].abs();
    if residual < SUSPECT {
        return Err(DiskError::DoubleRoot {
            k,
            lambda: mu * b * b,
            residual,
        });
    }
    Ok(Vec::new())
}

/// All disk eigenvalues below a cutoff, grouped by angular order.
#[derive(Debug, Clone, Serialize)]
pub struct DiskSpectrum {
    pub bc: BoundaryCondition,
    pub lambda_max: f64,
    pub modes: Vec<DiskModeRoots>,
    /// Eigenvalue-zero modes: the rigid rotation for FD, none for DF.
    pub zero_modes: u64,
    #[serde(skip)]
    sorted: Vec<(f64, u64)>,
}

impl DiskSpectrum {
    /// Scans `k = 0, 1, ...` until three consecutive orders have no roots
    /// below `lambda_max`.
    pub fn compute(bc: BoundaryCondition, p: &MaterialParameters, lambda_max: f64) -> Result<Self, DiskError> {
        Self::compute_with_step(bc, p, lambda_max, DEFAULT_STEP)
    }

    pub fn compute_with_step(
        bc: BoundaryCondition,
        p: &MaterialParameters,
        lambda_max: f64,
        step: f64,
    ) -> Result<Self, DiskError> {
        check_lambda(lambda_max)?;
        let mut modes = Vec::new();
        let mut empty = 0;
        let mut k = 0;
        while empty < EMPTY_ORDERS_TO_STOP {
            if k + 1 > MAX_ORDER {
                return Err(DiskError::OrderLimit(lambda_max));
            }
            let m = find_mode_roots_with_step(bc, k, p, lambda_max, step)?;
            if m.roots.is_empty() {
                empty += 1;
            } else {
                empty = 0;
            }
            modes.push(m);
            k += 1;
        }
        let mut sorted: Vec<(f64, u64)> = modes
            .iter()
            .flat_map(|m| m.roots.iter().map(move |&r| (r, m.multiplicity)))
            .collect();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut acc = 0;
        for entry in &mut sorted {
            acc += entry.1;
            entry.1 = acc;
        }
        Ok(Self {
            bc,
            lambda_max,
            modes,
            zero_modes: match bc {
                BoundaryCondition::DF => 0,
                BoundaryCondition::FD => 1,
            },
            sorted,
        })
    }

    /// `N(Λ)` for `0 < Λ ≤ lambda_max`.
    pub fn count(&self, lambda: f64) -> u64 {
        debug_assert!(lambda <= self.lambda_max);
        let idx = self.sorted.partition_point(|e| e.0 < lambda);
        let positive = if idx == 0 { 0 } else { self.sorted[idx - 1].1 };
        let zero = if lambda > 0.0 { self.zero_modes } else { 0 };
        positive + zero
    }

    /// Smallest positive eigenvalue.
    pub fn smallest_positive(&self) -> Option<f64> {
        self.sorted.first().map(|e| e.0)
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.sorted.iter().map(|e| e.0)
    }

    /// Nudges `lambda` upward until it is more than `1e-11` (relative) from
    /// every computed eigenvalue.
    pub fn perturb_off_spectrum(&self, lambda: f64) -> f64 {
        let near = |l: f64| {
            let idx = self.sorted.partition_point(|e| e.0 < l);
            [idx.checked_sub(1), Some(idx)]
                .into_iter()
                .flatten()
                .filter_map(|i| self.sorted.get(i))
                .any(|e| (e.0 - l).abs() <= 1e-11 * l.abs().max(e.0))
        };
        let mut l = lambda;
        while near(l) {
            l *= 1.0 + 1e-9;
        }
        l
    }
}

/// `N(Λ)`: disk eigenvalues below `lambda`, with multiplicity.
pub fn count_disk(bc: BoundaryCondition, p: &MaterialParameters, lambda: f64) -> Result<u64, DiskError> {
    Ok(DiskSpectrum::compute(bc, p, lambda)?.count(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::{boundary_weyl_constant, bulk_weyl_constant, validate_material};
    use rand::{rngs::StdRng, Rng, SeedableRng};
    use std::f64::consts::PI;

    fn mat(lambda: f64, mu: f64) -> MaterialParameters {
        validate_material(lambda, mu, 2).unwrap()
    }

    fn random_material(rng: &mut StdRng) -> MaterialParameters {
        let mu = rng.random_range(0.5..2.0);
        mat(rng.random_range(-0.9 * mu..3.0), mu)
    }

    /// `J_k` from its power series, good for moderate arguments.
    fn series_j(k: u32, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(k as i32) / (1..=k).map(f64::from).product::<f64>();
        let mut sum = term;
        for m in 1..200 {
            term *= -(x * x / 4.0) / (f64::from(m) * f64::from(m + k));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    }

    fn series_zero(k: u32, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if series_j(k, lo).signum() == series_j(k, mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn torsional_root() {
        let j11 = series_zero(1, 3.0, 4.5);
        assert!((j11 * j11 - 14.6819706).abs() < 1e-6);
        let m = find_mode_roots(BoundaryCondition::DF, 0, &mat(0.0, 1.0), 20.0).unwrap();
        let hit = m.roots.iter().any(|&r| (r - j11 * j11).abs() < 1e-8);
        assert!(hit, "{:?}", m.roots);
        assert_eq!(m.multiplicity, 1);
    }

    #[test]
    fn k0_factorization() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..200 {
            let p = random_material(&mut rng);
            // The series oracle is accurate for arguments up to about 12.
            let lambda = p.mu() * rng.random_range(0.3f64..12.0).powi(2);
            let a = (lambda / p.longitudinal()).sqrt();
            let b = (lambda / p.mu()).sqrt();
            let product = p.mu() * b * series_j(1, b) * (2.0 * a * series_j(1, a) - b * b * series_j(0, a));
            let det = secular_det(BoundaryCondition::DF, 0, &p, lambda).unwrap();
            let scale = p.mu() * b * (2.0 * a + b * b);
            assert!((det - product).abs() <= 1e-12 * scale.max(1.0), "{det} {product}");
        }
    }

    #[test]
    fn df_builder_reproduces_secular_expression() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..500 {
            let p = random_material(&mut rng);
            let k = rng.random_range(0..30);
            let lambda = rng.random_range(0.1..900.0);
            let built = det2(&boundary_matrix(BoundaryCondition::DF, k, &p, lambda).unwrap());
            let explicit = secular_det(BoundaryCondition::DF, k, &p, lambda).unwrap();
            let b = (lambda / p.mu()).sqrt();
            let size = (1.0 + b * b + f64::from(k * k)).powf(1.5)
                * bessel_j(k, b).unwrap().abs().max(bessel_j(k + 1, b).unwrap().abs())
                * p.mu();
            assert!((-p.mu() * built - explicit).abs() <= 1e-10 * size.max(1e-300), "k={k} Λ={lambda}");
        }
    }

    /// Fourth-order central difference.
    fn d4<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
        (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
    }

    /// Displacement and traction from the potentials by finite differences,
    /// independent of the closed-form Cauchy rows.
    #[test]
    fn cauchy_rows_match_finite_differences() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let p = random_material(&mut rng);
            let k = rng.random_range(0..8u32);
            let lambda = rng.random_range(1.0..60.0);
            let (a, b) = ((lambda / p.longitudinal()).sqrt(), (lambda / p.mu()).sqrt());
            let kf = f64::from(k);
            // ψ₁ = A J_k(a r), ψ₂ = B J_k(b r) with B = −iC, angular factor e^{ikθ}:
            // u_r = ∂_r ψ₁ + (ik/r) ψ₂, u_θ = (ik/r) ψ₁ − ∂_r ψ₂.
            for (amp_a, amp_c) in [(1.0, 0.0), (0.0, 1.0)] {
                let ur = |r: f64| {
                    amp_a * d4(|s| series_j(k, a * s), r, 1e-4) + amp_c * kf / r * series_j(k, b * r)
                };
                // u_θ / i
                let ut = |r: f64| {
                    amp_a * kf / r * series_j(k, a * r) + amp_c * d4(|s| series_j(k, b * s), r, 1e-4)
                };
                let dur = d4(ur, 1.0, 2e-3);
                let dut = d4(ut, 1.0, 2e-3);
                let (l, mu) = (p.lambda(), p.mu());
                // ∂_θ u_θ = ik · (i ut) = −k ut
                let srr = ((l + 2.0 * mu) * dur + l * (ur(1.0) - kf * ut(1.0))) / mu;
                // σ_rθ/(iμ) = ∂_r(u_θ/i) − u_θ/i + ∂_θ u_r / i
                let srt = dut - ut(1.0) + kf * ur(1.0);
                let col = usize::from(amp_c == 1.0);
                let c = cauchy_columns(
                    k,
                    a,
                    b,
                    (series_j(k, a), series_j(k + 1, a)),
                    (series_j(k, b), series_j(k + 1, b)),
                );
                let expect = [ur(1.0), ut(1.0), srr, srt];
                for row in 0..4 {
                    assert!(
                        (c[row][col] - expect[row]).abs() < 1e-6 * (1.0 + expect[row].abs()),
                        "k={k} row={row} col={col}: {} vs {}",
                        c[row][col],
                        expect[row]
                    );
                }
            }
        }
    }

    #[test]
    fn sign_change_around_roots() {
        let p = mat(0.0, 1.0);
        let m = find_mode_roots(BoundaryCondition::DF, 1, &p, 300.0).unwrap();
        assert!(!m.roots.is_empty());
        for &r in &m.roots {
            let lo = secular_det(BoundaryCondition::DF, 1, &p, r * (1.0 - 1e-6)).unwrap();
            let hi = secular_det(BoundaryCondition::DF, 1, &p, r * (1.0 + 1e-6)).unwrap();
            assert!(lo * hi < 0.0, "root {r}");
            let at = scaled_secular_det(BoundaryCondition::DF, 1, &p, r).unwrap();
            assert!(at.abs() < 1e-8);
        }
    }

    #[test]
    fn determinants_finite_on_dense_grid() {
        let p = mat(1.0, 1.0);
        for k in (0..=50).step_by(5) {
            for i in 1..=10_000 {
                let lambda = 5000.0 * i as f64 / 10_000.0;
                for bc in BoundaryCondition::ALL {
                    assert!(secular_det(bc, k, &p, lambda).unwrap().is_finite());
                    assert!(scaled_secular_det(bc, k, &p, lambda).unwrap().is_finite());
                }
            }
        }
    }

    #[test]
    fn high_orders_are_empty() {
        let p = mat(0.0, 1.0);
        for bc in BoundaryCondition::ALL {
            for k in [30, 45, 60] {
                // μk² ≥ 4 Λmax: b stays below k/2.
                let m = find_mode_roots(bc, k, &p, 200.0).unwrap();
                assert!(m.roots.is_empty());
            }
        }
    }

    #[test]
    fn counting_basics() {
        let p = mat(0.0, 1.0);
        let df = DiskSpectrum::compute(BoundaryCondition::DF, &p, 400.0).unwrap();
        let ground = df.smallest_positive().unwrap();
        assert_eq!(df.count(0.5 * ground), 0);
        assert_eq!(df.count(ground), 0);
        let mut prev = 0;
        for i in 1..=4000 {
            let n = df.count(i as f64 * 0.1);
            assert!(n >= prev);
            prev = n;
        }
        let fd = DiskSpectrum::compute(BoundaryCondition::FD, &p, 400.0).unwrap();
        assert_eq!(fd.count(1e-9), 1);
        assert!(df.modes.iter().all(|m| m.rejected == 0));
        let nudged = df.perturb_off_spectrum(ground);
        assert!(nudged > ground && nudged < ground * (1.0 + 1e-6));
        assert!(df.count(nudged) > df.count(ground));
        assert_eq!(df.perturb_off_spectrum(0.5 * ground), 0.5 * ground);
    }

    #[test]
    fn stable_under_step_halving() {
        let p = mat(1.0, 1.0);
        for bc in BoundaryCondition::ALL {
            let coarse = DiskSpectrum::compute_with_step(bc, &p, 600.0, DEFAULT_STEP).unwrap();
            let fine = DiskSpectrum::compute_with_step(bc, &p, 600.0, DEFAULT_STEP / 2.0).unwrap();
            let x: Vec<f64> = coarse.eigenvalues().collect();
            let y: Vec<f64> = fine.eigenvalues().collect();
            assert_eq!(x.len(), y.len());
            for (u, v) in x.iter().zip(&y) {
                assert!((u - v).abs() <= 1e-8 * u.max(1.0));
            }
        }
    }

    #[test]
    fn weyl_consistency_at_5000() {
        let p = mat(0.0, 1.0);
        let a = bulk_weyl_constant(&p, 2).unwrap();
        let c1 = boundary_weyl_constant(&p, 2, BoundaryCondition::DF).unwrap() * 2.0 * PI;
        let n = count_disk(BoundaryCondition::DF, &p, 5000.0).unwrap() as f64;
        let pred = a * PI * 5000.0 + c1 * 5000f64.sqrt();
        assert!((a * PI * 5000.0 - 1875.0).abs() < 1.0);
        assert!((n - pred).abs() < 0.1 * pred, "{n} {pred}");
    }
}
