//! Counting data against the two-term law `N(Λ) ≈ c₀Λ^{d/2} + c₁Λ^{(d−1)/2}`.

use serde::Serialize;
use thiserror::Error;

/// Fewest samples accepted by [`estimate_second_coefficient`].
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("leading coefficient must be positive, got {0}")]
    Leading(f64),
    #[error("dimension must be at least 1, got {0}")]
    Dimension(u32),
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("samples must have strictly increasing positive Λ")]
    Ordering,
    #[error("samples span less than two dyadic windows ([{lo}, {hi}])")]
    InsufficientSpan { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticModel {
    leading: f64,
    second: f64,
    dimension: u32,
}

impl AsymptoticModel {
    pub fn new(leading: f64, second: f64, dimension: u32) -> Result<Self, AsymptoticsError> {
        if !(leading > 0.0 && leading.is_finite()) {
            return Err(AsymptoticsError::Leading(leading));
        }
        if dimension == 0 {
            return Err(AsymptoticsError::Dimension(dimension));
        }
        Ok(Self {
            leading,
            second,
            dimension,
        })
    }

    pub fn leading(&self) -> f64 {
        self.leading
    }

    pub fn second(&self) -> f64 {
        self.second
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }
}

fn powers(dimension: u32, lambda: f64) -> (f64, f64) {
    let d = f64::from(dimension);
    (lambda.powf(d / 2.0), lambda.powf((d - 1.0) / 2.0))
}

pub fn two_term_prediction(model: &AsymptoticModel, lambda: f64) -> f64 {
    let (lead, sub) = powers(model.dimension, lambda);
    model.leading * lead + model.second * sub
}

/// `(N − c₀Λ^{d/2}) / Λ^{(d−1)/2}`.
pub fn first_residual(leading: f64, dimension: u32, lambda: f64, n: u64) -> f64 {
    let (lead, sub) = powers(dimension, lambda);
    (n as f64 - leading * lead) / sub
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSample {
    pub lambda: f64,
    pub n: u64,
    pub residual1: f64,
    pub residual2: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ResidualSeries {
    pub samples: Vec<ResidualSample>,
}

impl ResidualSeries {
    /// Mean of `residual2` over samples with `lo ≤ Λ ≤ hi`.
    pub fn window_mean_residual2(&self, lo: f64, hi: f64) -> Option<f64> {
        mean(self.samples.iter().filter(|s| s.lambda >= lo && s.lambda <= hi).map(|s| s.residual2))
    }
}

/// Per-sample residuals. Samples are kept in the given order.
pub fn residual_table(samples: &[(f64, u64)], model: &AsymptoticModel) -> ResidualSeries {
    let samples = samples
        .iter()
        .map(|&(lambda, n)| {
            let residual1 = first_residual(model.leading, model.dimension, lambda, n);
            ResidualSample {
                lambda,
                n,
                residual1,
                residual2: residual1 - model.second,
            }
        })
        .collect();
    ResidualSeries { samples }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowMean {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondCoefficientEstimate {
    /// Mean first residual over the top window.
    pub value: f64,
    /// Largest minus smallest window mean.
    pub uncertainty: f64,
    /// Populated windows, top first.
    pub windows: Vec<WindowMean>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Dyadic windows `[Λ_top/2^{j+1}, Λ_top/2^j]`, anchored at the largest sample
/// and going down while they still reach the smallest sample.
pub fn dyadic_windows(lo: f64, top: f64) -> Vec<(f64, f64)> {
    let mut windows = Vec::new();
    let mut hi = top;
    while hi / 2.0 >= lo {
        windows.push((hi / 2.0, hi));
        hi /= 2.0;
    }
    windows
}

/// Averages the first residual over dyadic windows of the sampled range.
///
/// The top window's mean is the estimate. Windows below it only serve to
/// report how much the mean still drifts with `Λ`.
pub fn estimate_second_coefficient(
    samples: &[(f64, u64)],
    leading: f64,
    dimension: u32,
) -> Result<SecondCoefficientEstimate, AsymptoticsError> {
    if !(leading > 0.0 && leading.is_finite()) {
        return Err(AsymptoticsError::Leading(leading));
    }
    if dimension == 0 {
        return Err(AsymptoticsError::Dimension(dimension));
    }
    if samples.len() < MIN_SAMPLES {
        return Err(AsymptoticsError::TooFewSamples(samples.len()));
    }
    if samples[0].0 <= 0.0 || samples.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(AsymptoticsError::Ordering);
    }
    let lo = samples[0].0;
    let top = samples[samples.len() - 1].0;
    let windows = dyadic_windows(lo, top);
    if windows.len() < 2 {
        return Err(AsymptoticsError::InsufficientSpan { lo, hi: top });
    }
    let residuals: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(l, n)| (l, first_residual(leading, dimension, l, n)))
        .collect();
    let windows: Vec<WindowMean> = windows
        .into_iter()
        .filter_map(|(wlo, whi)| {
            let inside = residuals.iter().filter(|(l, _)| *l >= wlo && *l <= whi);
            let count = inside.clone().count();
            mean(inside.map(|(_, r)| *r)).map(|mean| WindowMean {
                lo: wlo,
                hi: whi,
                count,
                mean,
            })
        })
        .collect();
    if windows.len() < 2 || windows[0].hi != top {
        return Err(AsymptoticsError::InsufficientSpan { lo, hi: top });
    }
    let (min, max) = windows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), w| (a.min(w.mean), b.max(w.mean)));
    Ok(SecondCoefficientEstimate {
        value: windows[0].mean,
        uncertainty: max - min,
        windows,
    })
}

/// `count` points from `lo` to `hi`, evenly spaced in `log Λ`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let ratio = (hi / lo).ln() / (count - 1) as f64;
            let mut grid: Vec<f64> = (0..count).map(|i| lo * (ratio * i as f64).exp()).collect();
            grid[count - 1] = hi;
            grid
        }
    }
}
