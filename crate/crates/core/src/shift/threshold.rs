//! Threshold classification and the search for one-dimensional eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::waves::{boundary_rows, longitudinal_pol, shear_pol, Wave};
use super::{unit_thresholds, Block, ShiftError};
use crate::elastic::{BoundaryCondition, MaterialParameters};

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const NULL_TOL: f64 = 1e-9;
const SCAN_POINTS: usize = 4000;
const SCAN_SUSPECT: f64 = 1e-6;
const SCAN_ACCEPT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdKind {
    Soft,
    Rigid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdClass {
    pub kind: ThresholdKind,
    pub j_star: usize,
    pub multiplicity: usize,
}

/// Summed threshold data of the full problem; `j_star` may legitimately lie
/// strictly between 0 and `multiplicity` when `d ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCounts {
    pub j_star: usize,
    pub multiplicity: usize,
}

fn real(x: f64) -> C {
    C::new(x, 0.0)
}

/// Bounded non-decaying solutions and decaying solutions at a threshold.
fn threshold_modes(p: &MaterialParameters, block: Block, which: u8) -> Result<(Vec<Wave>, Vec<Wave>), ShiftError> {
    let zero = real(0.0);
    match (block, which) {
        (Block::P, 1) => {
            let kappa = ((p.lambda() + p.mu()) / p.longitudinal()).sqrt();
            Ok((
                vec![Wave {
                    pol: shear_pol(zero),
                    zeta: zero,
                }],
                vec![Wave {
                    pol: longitudinal_pol(I * kappa),
                    zeta: I * kappa,
                }],
            ))
        }
        (Block::P, 2) => Ok((
            vec![Wave {
                pol: longitudinal_pol(zero),
                zeta: zero,
            }],
            Vec::new(),
        )),
        (Block::Perp, 1) => Ok((
            vec![Wave {
                pol: [real(1.0), zero],
                zeta: zero,
            }],
            Vec::new(),
        )),
        (Block::Perp, 2) => Err(ShiftError::NoSecondThreshold),
        (_, other) => Err(ShiftError::ThresholdIndex(other)),
    }
}

/// Boundary values of each wave as a column, scaled by the size of
/// `(u(0), u'(0))` so that columns are comparable.
fn boundary_matrix(p: &MaterialParameters, bc: BoundaryCondition, block: Block, waves: &[Wave]) -> DMatrix<C> {
    let rows = match block {
        Block::P => 2,
        Block::Perp => 1,
    };
    let mut m = DMatrix::zeros(rows, waves.len());
    for (j, w) in waves.iter().enumerate() {
        let pol2: f64 = w.pol.iter().map(|x| x.norm_sqr()).sum();
        let scale = (pol2 * (1.0 + w.zeta.norm_sqr())).sqrt();
        for (i, v) in boundary_rows(p, bc, block, w).into_iter().enumerate() {
            m[(i, j)] = v / scale;
        }
    }
    m
}

fn nullity(m: &DMatrix<C>) -> usize {
    if m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let rank = if max > 0.0 {
        sv.iter().filter(|&&s| s > NULL_TOL * max).count()
    } else {
        0
    };
    m.ncols() - rank
}

fn smallest_singular_value(m: &DMatrix<C>) -> f64 {
    if m.ncols() == 0 {
        return f64::INFINITY;
    }
    let sv = m.clone().svd(false, false).singular_values;
    if m.ncols() > m.nrows() {
        0.0
    } else {
        sv.min()
    }
}

fn block_j_star(p: &MaterialParameters, bc: BoundaryCondition, block: Block, which: u8) -> Result<(usize, usize), ShiftError> {
    let (bounded, decaying) = threshold_modes(p, block, which)?;
    let mut all = decaying.clone();
    all.extend(bounded.iter().copied());
    let j = nullity(&boundary_matrix(p, bc, block, &all)) - nullity(&boundary_matrix(p, bc, block, &decaying));
    Ok((j, bounded.len()))
}

/// Soft/rigid classification of threshold `which` (1 or 2) for one block.
pub fn classify_threshold(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    which: u8,
    block: Block,
) -> Result<ThresholdClass, ShiftError> {
    let (j_star, multiplicity) = block_j_star(p, bc, block, which)?;
    let kind = if j_star == 0 {
        ThresholdKind::Rigid
    } else if j_star == multiplicity {
        ThresholdKind::Soft
    } else {
        return Err(ShiftError::AnomalousThreshold {
            which,
            j_star,
            multiplicity,
        });
    };
    Ok(ThresholdClass {
        kind,
        j_star,
        multiplicity,
    })
}

/// `j*` and the multiplicity `m_k` of threshold `which` for the full
/// d-dimensional problem, summed over the blocks.
pub fn threshold_counts(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    which: u8,
    d: u32,
) -> Result<ThresholdCounts, ShiftError> {
    p.ensure_dimension(d)?;
    let (mut j, mut m) = block_j_star(p, bc, Block::P, which)?;
    if which == 1 && d > 2 {
        let (jq, mq) = block_j_star(p, bc, Block::Perp, 1)?;
        let copies = d as usize - 2;
        j += copies * jq;
        m += copies * mq;
    }
    Ok(ThresholdCounts {
        j_star: j,
        multiplicity: m,
    })
}

/// Decaying solutions strictly below the first threshold.
fn decaying_below(p: &MaterialParameters, block: Block, lambda: f64) -> Vec<Wave> {
    let k1 = (1.0 - lambda / p.mu()).sqrt();
    match block {
        Block::P => {
            let k2 = (1.0 - lambda / p.longitudinal()).sqrt();
            vec![
                Wave {
                    pol: shear_pol(I * k1),
                    zeta: I * k1,
                },
                Wave {
                    pol: longitudinal_pol(I * k2),
                    zeta: I * k2,
                },
            ]
        }
        Block::Perp => vec![Wave {
            pol: [real(1.0), real(0.0)],
            zeta: I * k1,
        }],
    }
}

/// Decaying solutions inside the first zone (embedded candidates).
fn decaying_in_first_zone(p: &MaterialParameters, block: Block, lambda: f64) -> Vec<Wave> {
    match block {
        Block::P => {
            let k2 = (1.0 - lambda / p.longitudinal()).sqrt();
            vec![Wave {
                pol: longitudinal_pol(I * k2),
                zeta: I * k2,
            }]
        }
        Block::Perp => Vec::new(),
    }
}

/// Local minima of `f` on the grid below `SCAN_SUSPECT`, polished by golden
/// section and kept when the minimum is below `SCAN_ACCEPT`.
fn scan_minima(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let h = (hi - lo) / SCAN_POINTS as f64;
    let xs: Vec<f64> = (1..SCAN_POINTS).map(|i| lo + h * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut found = Vec::new();
    for i in 0..ys.len() {
        let left = if i == 0 { f64::INFINITY } else { ys[i - 1] };
        let right = if i + 1 == ys.len() { f64::INFINITY } else { ys[i + 1] };
        if ys[i] <= left && ys[i] <= right && ys[i] < SCAN_SUSPECT {
            let (mut a, mut b) = (xs[i] - h, xs[i] + h);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..200 {
                let c = b - g * (b - a);
                let d = a + g * (b - a);
                if f(c) < f(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let x = 0.5 * (a + b);
            if f(x) < SCAN_ACCEPT {
                found.push(x);
            }
        }
    }
    found
}

/// Eigenvalues of the normalised one-dimensional problem in `(0, lambda_max)`.
///
/// Scans below the continuous spectrum for zeros of the decaying-solution
/// boundary matrix, tests both thresholds for decaying solutions, and tests
/// the first zone for embedded eigenvalues carried by the evanescent wave.
/// Above the second threshold no solution decays, so nothing can be embedded
/// there. The expected result is empty.
pub fn point_spectrum_scan(
    p: &MaterialParameters,
    bc: BoundaryCondition,
    d: u32,
    lambda_max: f64,
) -> Result<Vec<f64>, ShiftError> {
    p.ensure_dimension(d)?;
    let t = unit_thresholds(p);
    if !(lambda_max > t.lambda_star_2) {
        return Err(ShiftError::ScanRange {
            lambda_max,
            threshold: t.lambda_star_2,
        });
    }
    let mut blocks = vec![Block::P];
    if d > 2 {
        blocks.push(Block::Perp);
    }
    let mut found = Vec::new();
    for &block in &blocks {
        let below = |lambda: f64| smallest_singular_value(&boundary_matrix(p, bc, block, &decaying_below(p, block, lambda)));
        found.extend(scan_minima(below, 0.0, t.lambda_star_1));

        let (_, decaying) = threshold_modes(p, block, 1)?;
        if nullity(&boundary_matrix(p, bc, block, &decaying)) > 0 {
            found.push(t.lambda_star_1);
        }
        if block == Block::P {
            let (_, decaying) = threshold_modes(p, block, 2)?;
            if nullity(&boundary_matrix(p, bc, block, &decaying)) > 0 {
                found.push(t.lambda_star_2);
            }
            let embedded = |lambda: f64| {
                smallest_singular_value(&boundary_matrix(p, bc, block, &decaying_in_first_zone(p, block, lambda)))
            };
            found.extend(scan_minima(embedded, t.lambda_star_1, t.lambda_star_2.min(lambda_max)));
        }
    }
    found.sort_by(f64::total_cmp);
    found.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs());
    Ok(found)
}
