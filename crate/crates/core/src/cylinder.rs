//! Flat cylinders `T × [0, h]` and `T² × [0, h]` (torus side 2π).
//!
//! The spectra are known in closed form as unions of arithmetic series.
//! [`enumerate_cylinder`] lists them clause by clause, [`CylinderCounter`]
//! evaluates the floor-sum counting formulas, and the two are compared
//! against each other in the tests.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{floor_scaled_sqrt, lattice_points_in_disk, R2Sieve};
use crate::elastic::{BoundaryCondition, DomainGeometry, MaterialError, MaterialParameters};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CylinderError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("cylinder dimension must be 2 or 3, got {0}")]
    Dimension(u32),
    #[error("cylinder height must be positive and finite, got {0}")]
    Height(f64),
    #[error("spectral cutoff must be positive and finite, got {0}")]
    Cutoff(f64),
    #[error("floor-sum input: {0}")]
    FloorSumInput(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderGeometry {
    dimension: u32,
    height: f64,
}

impl CylinderGeometry {
    pub fn new(dimension: u32, height: f64) -> Result<Self, CylinderError> {
        if dimension != 2 && dimension != 3 {
            return Err(CylinderError::Dimension(dimension));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(CylinderError::Height(height));
        }
        Ok(Self { dimension, height })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// `2πh` for d = 2, `4π²h` for d = 3.
    pub fn volume(&self) -> f64 {
        match self.dimension {
            2 => 2.0 * PI * self.height,
            _ => 4.0 * PI * PI * self.height,
        }
    }

    /// Two boundary components: `4π` for d = 2, `8π²` for d = 3.
    pub fn boundary_volume(&self) -> f64 {
        match self.dimension {
            2 => 4.0 * PI,
            _ => 8.0 * PI * PI,
        }
    }

    pub fn domain(&self) -> DomainGeometry {
        DomainGeometry::new(self.dimension, self.volume(), self.boundary_volume())
            .expect("cylinder volumes are positive")
    }

    /// `(π/h)²`, the square of the axial wavenumber step.
    fn axial(&self) -> f64 {
        (PI / self.height).powi(2)
    }
}

/// Eigenvalue series (i)-(v) of the separated spectrum; numbering differs between DF and FD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Clause {
    I,
    II,
    III,
    IV,
    V,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::I => "i",
            Clause::II => "ii",
            Clause::III => "iii",
            Clause::IV => "iv",
            Clause::V => "v",
        }
    }
}

/// Origin of one eigenvalue: clause, transverse index `n` and axial index `k`.
///
/// For d = 2 `n` is `|ξ|`; for d = 3 it is `ξ₁² + ξ₂²`. Unused indices are 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeriesTag {
    pub clause: Clause,
    pub n: u64,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: u64,
    pub tags: Vec<SeriesTag>,
}

/// Eigenvalues up to a cutoff, sorted, with coincident values merged.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumTable {
    entries: Vec<SpectrumEntry>,
    cutoff: f64,
    #[serde(skip)]
    cumulative: Vec<u64>,
}

impl SpectrumTable {
    fn from_raw(mut raw: Vec<(f64, u64, SeriesTag)>, cutoff: f64) -> Self {
        raw.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.2.clause.cmp(&y.2.clause)));
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        for (value, multiplicity, tag) in raw {
            match entries.last_mut() {
                Some(last) if value - last.value <= 1e-12 * value => {
                    last.multiplicity += multiplicity;
                    last.tags.push(tag);
                }
                _ => entries.push(SpectrumEntry {
                    value,
                    multiplicity,
                    tags: vec![tag],
                }),
            }
        }
        let cumulative = entries
            .iter()
            .scan(0, |acc, e| {
                *acc += e.multiplicity;
                Some(*acc)
            })
            .collect();
        Self {
            entries,
            cutoff,
            cumulative,
        }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn smallest(&self) -> Option<f64> {
        self.entries.first().map(|e| e.value)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    /// `N(Λ)`: eigenvalues strictly below `lambda`, with multiplicity.
    pub fn count_below(&self, lambda: f64) -> u64 {
        let idx = self.entries.partition_point(|e| e.value < lambda);
        if idx == 0 {
            0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Whether some eigenvalue lies within `rel · lambda` of `lambda`.
    pub fn is_near_eigenvalue(&self, lambda: f64, rel: f64) -> bool {
        let tol = rel * lambda.abs();
        let idx = self.entries.partition_point(|e| e.value < lambda - tol);
        self.entries
            .get(idx)
            .is_some_and(|e| e.value <= lambda + tol)
    }

    /// Nudges `lambda` upward by 1e−9 relative steps until it is clear of
    /// the spectrum.
    pub fn perturb_off_spectrum(&self, lambda: f64) -> f64 {
        let mut l = lambda;
        while self.is_near_eigenvalue(l, 1e-11) {
            l *= 1.0 + 1e-9;
        }
        l
    }
}

/// Every eigenvalue `≤ lambda_max`, tagged by clause.
pub fn enumerate_cylinder(
    geom: &CylinderGeometry,
    p: &MaterialParameters,
    bc: BoundaryCondition,
    lambda_max: f64,
) -> Result<SpectrumTable, CylinderError> {
    p.ensure_dimension(geom.dimension)?;
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(CylinderError::Cutoff(lambda_max));
    }
    let (mu, long, q) = (p.mu(), p.longitudinal(), geom.axial());
    let mut raw = Vec::new();
    let mut push = |value: f64, multiplicity: u64, clause: Clause, n: u64, k: u64| {
        if value <= lambda_max && multiplicity > 0 {
            raw.push((value, multiplicity, SeriesTag { clause, n, k }));
        }
    };
    let axial = |speed: f64, push: &mut dyn FnMut(f64, u64), base: f64| {
        let mut k = 1u64;
        loop {
            let value = (base + (k * k) as f64 * q) * speed;
            if value > lambda_max {
                break;
            }
            push(value, k);
            k += 1;
        }
    };

    axial(long, &mut |v, k| push(v, 1, Clause::I, 0, k), 0.0);
    match geom.dimension {
        2 => {
            axial(mu, &mut |v, k| push(v, 1, Clause::II, 0, k), 0.0);
            let (transverse_clause, transverse_speed) = match bc {
                BoundaryCondition::DF => (Clause::III, mu),
                BoundaryCondition::FD => (Clause::IV, long),
            };
            let (shear_clause, long_clause) = match bc {
                BoundaryCondition::DF => (Clause::IV, Clause::V),
                BoundaryCondition::FD => (Clause::III, Clause::V),
            };
            let mut n = 1u64;
            while ((n * n) as f64) * mu.min(long) <= lambda_max {
                let n2 = (n * n) as f64;
                push(n2 * transverse_speed, 2, transverse_clause, n, 0);
                axial(mu, &mut |v, k| push(v, 2, shear_clause, n, k), n2);
                axial(long, &mut |v, k| push(v, 2, long_clause, n, k), n2);
                n += 1;
            }
        }
        _ => {
            let n_max = (lambda_max / mu.min(long)).floor() as u64;
            let sieve = R2Sieve::new(n_max);
            for n in 1..=n_max {
                let r = sieve.get(n);
                if r == 0 {
                    continue;
                }
                let nf = n as f64;
                push(nf * mu, r, Clause::II, n, 0);
                axial(mu, &mut |v, k| push(v, 2 * r, Clause::III, n, k), nf);
                match bc {
                    BoundaryCondition::DF => {
                        axial(long, &mut |v, k| push(v, r, Clause::IV, n, k), nf);
                    }
                    BoundaryCondition::FD => {
                        push(nf * long, r, Clause::IV, n, 0);
                        axial(long, &mut |v, k| push(v, r, Clause::V, n, k), nf);
                    }
                }
            }
        }
    }
    Ok(SpectrumTable::from_raw(raw, lambda_max))
}

/// Closed-form floor-sum counting function, with an `r2` table reused
/// across evaluations.
#[derive(Debug, Clone)]
pub struct CylinderCounter {
    geom: CylinderGeometry,
    p: MaterialParameters,
    bc: BoundaryCondition,
    sieve: Option<R2Sieve>,
}

impl CylinderCounter {
    /// Prepares evaluation for all `Λ ≤ lambda_max`.
    pub fn new(
        geom: &CylinderGeometry,
        p: &MaterialParameters,
        bc: BoundaryCondition,
        lambda_max: f64,
    ) -> Result<Self, CylinderError> {
        p.ensure_dimension(geom.dimension)?;
        if !(lambda_max > 0.0 && lambda_max.is_finite()) {
            return Err(CylinderError::Cutoff(lambda_max));
        }
        let sieve = (geom.dimension == 3)
            .then(|| R2Sieve::new((lambda_max / p.mu().min(p.longitudinal())).floor() as u64 + 1));
        Ok(Self {
            geom: *geom,
            p: *p,
            bc,
            sieve,
        })
    }

    /// `N_DF(Λ)` or `N_FD(Λ)`. `lambda` must not be an eigenvalue.
    pub fn count(&self, lambda: f64) -> u64 {
        let df = self.count_df(lambda);
        match self.bc {
            BoundaryCondition::DF => df,
            BoundaryCondition::FD => (df as i64 + self.fd_correction(lambda)) as u64,
        }
    }

    /// `N_FD(Λ) − N_DF(Λ)` as given by the closed forms.
    pub fn fd_correction(&self, lambda: f64) -> i64 {
        let (mu, long) = (self.p.mu(), self.p.longitudinal());
        match self.geom.dimension {
            2 => {
                2 * (floor_scaled_sqrt(1.0, lambda / long) as i64
                    - floor_scaled_sqrt(1.0, lambda / mu) as i64)
            }
            _ => {
                let sieve = self.sieve_for(lambda / long);
                let top = (lambda / long).floor() as u64;
                (1..=top).map(|n| sieve.get(n) as i64).sum()
            }
        }
    }

    /// Whether some eigenvalue lies within `rel · lambda` of `lambda`,
    /// decided from the series formulas without enumerating them.
    pub fn is_near_eigenvalue(&self, lambda: f64, rel: f64) -> bool {
        let (mu, long, q) = (self.p.mu(), self.p.longitudinal(), self.geom.axial());
        let tol = rel * lambda.abs();
        let plain = |c: f64, t: f64| (t * c - lambda).abs() <= tol;
        // (t + k² q) c for k ≥ 1
        let axial = |c: f64, t: f64| {
            let k2 = (lambda / c - t) / q;
            let k = k2.max(0.0).sqrt().round().max(1.0);
            ((t + k * k * q) * c - lambda).abs() <= tol
        };
        if axial(long, 0.0) {
            return true;
        }
        let n_top = (lambda * (1.0 + rel) / mu.min(long)).floor() as u64;
        match self.geom.dimension {
            2 => {
                if axial(mu, 0.0) {
                    return true;
                }
                let transverse = match self.bc {
                    BoundaryCondition::DF => mu,
                    BoundaryCondition::FD => long,
                };
                (1..=crate::arith::isqrt(n_top)).any(|n| {
                    let t = (n * n) as f64;
                    plain(transverse, t) || axial(mu, t) || axial(long, t)
                })
            }
            _ => {
                let sieve = self.sieve.as_ref().expect("three-dimensional counter");
                (1..=n_top.min(sieve.limit())).filter(|&n| sieve.get(n) > 0).any(|n| {
                    let t = n as f64;
                    plain(mu, t)
                        || axial(mu, t)
                        || axial(long, t)
                        || (self.bc == BoundaryCondition::FD && plain(long, t))
                })
            }
        }
    }

    /// Nudges `lambda` upward by 1e−9 relative steps until it is clear of
    /// the spectrum.
    pub fn perturb_off_spectrum(&self, lambda: f64) -> f64 {
        let mut l = lambda;
        while self.is_near_eigenvalue(l, 1e-11) {
            l *= 1.0 + 1e-9;
        }
        l
    }

    fn sieve_for(&self, x: f64) -> &R2Sieve {
        let sieve = self.sieve.as_ref().expect("three-dimensional counter");
        assert!(
            x.floor() as u64 <= sieve.limit(),
            "argument beyond the prepared sieve"
        );
        sieve
    }

    fn count_df(&self, lambda: f64) -> u64 {
        let (mu, long) = (self.p.mu(), self.p.longitudinal());
        let c = self.geom.height / PI;
        let axial = floor_scaled_sqrt(c, lambda / long);
        match self.geom.dimension {
            2 => {
                let shear_top = floor_scaled_sqrt(1.0, lambda / mu);
                let long_top = floor_scaled_sqrt(1.0, lambda / long);
                let shear_sum: u64 = (1..=shear_top)
                    .map(|n| floor_scaled_sqrt(c, lambda / mu - (n * n) as f64))
                    .sum();
                let long_sum: u64 = (1..=long_top)
                    .map(|n| floor_scaled_sqrt(c, lambda / long - (n * n) as f64))
                    .sum();
                axial
                    + floor_scaled_sqrt(c, lambda / mu)
                    + 2 * shear_top
                    + 2 * shear_sum
                    + 2 * long_sum
            }
            _ => {
                let sieve = self.sieve_for(lambda / mu.min(long));
                let shear_top = (lambda / mu).floor() as u64;
                let long_top = (lambda / long).floor() as u64;
                let shear: u64 = (1..=shear_top)
                    .map(|n| {
                        sieve.get(n) * (2 * floor_scaled_sqrt(c, lambda / mu - n as f64) + 1)
                    })
                    .sum();
                let longitudinal: u64 = (1..=long_top)
                    .map(|n| sieve.get(n) * floor_scaled_sqrt(c, lambda / long - n as f64))
                    .sum();
                axial + shear + longitudinal
            }
        }
    }
}

/// One-off evaluation of the closed-form counting function.
pub fn counting_closed_form(
    geom: &CylinderGeometry,
    p: &MaterialParameters,
    bc: BoundaryCondition,
    lambda: f64,
) -> Result<u64, CylinderError> {
    Ok(CylinderCounter::new(geom, p, bc, lambda)?.count(lambda))
}

/// `sin(h√z)` continued to `z < 0` as `sinh(h√−z)` (the factor `i` dropped).
fn axial_factor(h: f64, z: f64) -> f64 {
    if z >= 0.0 {
        (h * z.sqrt()).sin()
    } else {
        (h * (-z).sqrt()).sinh()
    }
}

/// Same factor scaled to be `O(1)`: `sinh` is replaced by `tanh`.
fn axial_factor_normalized(h: f64, z: f64) -> f64 {
    if z >= 0.0 {
        (h * z.sqrt()).sin()
    } else {
        (h * (-z).sqrt()).tanh()
    }
}

struct SecularFactors {
    prefactor: f64,
    shear_poly: Option<f64>,
    long_poly: Option<f64>,
    shear_z: f64,
    long_z: f64,
    shear_power: i32,
}

fn secular_factors(
    geom: &CylinderGeometry,
    p: &MaterialParameters,
    bc: BoundaryCondition,
    xi_index: u64,
    lambda: f64,
) -> SecularFactors {
    let (mu, long) = (p.mu(), p.longitudinal());
    let t = match geom.dimension {
        2 => (xi_index * xi_index) as f64,
        _ => xi_index as f64,
    };
    let shear_z = lambda / mu - t;
    let long_z = lambda / long - t;
    match (geom.dimension, bc) {
        (2, BoundaryCondition::DF) => SecularFactors {
            prefactor: lambda * lambda,
            shear_poly: Some(shear_z),
            long_poly: None,
            shear_z,
            long_z,
            shear_power: 1,
        },
        (2, BoundaryCondition::FD) => SecularFactors {
            prefactor: lambda * lambda,
            shear_poly: None,
            long_poly: Some(long_z),
            shear_z,
            long_z,
            shear_power: 1,
        },
        (_, BoundaryCondition::DF) => SecularFactors {
            prefactor: lambda * lambda * t * t,
            shear_poly: Some(shear_z),
            long_poly: None,
            shear_z,
            long_z,
            shear_power: 2,
        },
        (_, BoundaryCondition::FD) => SecularFactors {
            prefactor: lambda * lambda * t * t,
            shear_poly: Some(shear_z),
            long_poly: Some(long_z),
            shear_z,
            long_z,
            shear_power: 2,
        },
    }
}

/// The secular expression as written, for transverse index `xi_index`
/// (`|ξ|` in d = 2, `ξ₁² + ξ₂²` in d = 3).
pub fn secular_expression(
    geom: &CylinderGeometry,
    p: &MaterialParameters,
    bc: BoundaryCondition,
    xi_index: u64,
    lambda: f64,
) -> f64 {
    let f = secular_factors(geom, p, bc, xi_index, lambda);
    let h = geom.height;
    f.prefactor
        * f.shear_poly.unwrap_or(1.0)
        * f.long_poly.unwrap_or(1.0)
        * axial_factor(h, f.shear_z).powi(f.shear_power)
        * axial_factor(h, f.long_z)
}

/// Scale-free version of [`secular_expression`]: the polynomial prefactor
/// `Λ²` (and `n²` in d = 3) is dropped, each `Λ/c − t` is divided by
/// `Λ/c + t`, and `sinh` factors become `tanh`. Each factor is then bounded
/// by 1, so an eigenvalue shows up as a residual near zero on an absolute
/// scale.
pub fn secular_residual(
    geom: &CylinderGeometry,
    p: &MaterialParameters,
    bc: BoundaryCondition,
    xi_index: u64,
    lambda: f64,
) -> f64 {
    let f = secular_factors(geom, p, bc, xi_index, lambda);
    let h = geom.height;
    let (mu, long) = (p.mu(), p.longitudinal());
    let ratio = |z: f64, c: f64| {
        let plus = lambda / c + (lambda / c - z);
        if plus == 0.0 {
            0.0
        } else {
            z / plus
        }
    };
    f.shear_poly.map_or(1.0, |z| ratio(z, mu))
        * f.long_poly.map_or(1.0, |z| ratio(z, long))
        * axial_factor_normalized(h, f.shear_z).powi(f.shear_power)
        * axial_factor_normalized(h, f.long_z)
}

/// `(leading, second)` of the two-term expansion of the counting function.
pub fn cylinder_two_term(
    geom: &CylinderGeometry,
    p: &MaterialParameters,
    bc: BoundaryCondition,
) -> (f64, f64) {
    let (mu, long, h) = (p.mu(), p.longitudinal(), geom.height);
    match geom.dimension {
        2 => (
            h / 2.0 * (1.0 / mu + 1.0 / long),
            -bc.sign() * (1.0 / mu.sqrt() - 1.0 / long.sqrt()),
        ),
        _ => (
            2.0 * h / 3.0 * (2.0 / mu.powf(1.5) + 1.0 / long.powf(1.5)),
            bc.sign() * PI / (2.0 * long),
        ),
    }
}

/// Exact lattice sums behind the cylinder asymptotics at one `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloorSumRow {
    pub x: f64,
    /// `Σ_{n=1}^{⌊√x⌋} ⌊a√(x − n²)⌋`.
    pub planar_sum: u64,
    /// `(planar_sum − πax/4)/√x`, tends to `−(a+1)/2`.
    pub planar_residual: f64,
    /// `Σ_{n=1}^{⌊x⌋} r2(n)`.
    pub gauss_sum: u64,
    /// `(gauss_sum − πx)/x^{1/3}`, bounded.
    pub gauss_remainder: f64,
    /// `Σ_{n=1}^{⌊x⌋} ⌊a√(x − n)⌋ r2(n)`.
    pub spatial_sum: u64,
    /// `(spatial_sum − (2πa/3)x^{3/2})/x`, tends to `−π/2`.
    pub spatial_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloorSumReport {
    pub a: f64,
    pub planar_limit: f64,
    pub spatial_limit: f64,
    pub rows: Vec<FloorSumRow>,
}

pub fn floor_sum_checks(a: f64, x_list: &[f64]) -> Result<FloorSumReport, CylinderError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(CylinderError::FloorSumInput("a must be positive"));
    }
    if x_list.iter().any(|x| !(x.is_finite() && *x >= 1.0)) {
        return Err(CylinderError::FloorSumInput("x values must be finite and at least 1"));
    }
    if x_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CylinderError::FloorSumInput("x values must be strictly ascending"));
    }
    let top = x_list.last().map_or(0, |x| x.floor() as u64);
    let sieve = R2Sieve::new(top);
    let rows = x_list
        .iter()
        .map(|&x| {
            let floor_x = x.floor() as u64;
            let planar_sum: u64 = (1..=floor_scaled_sqrt(1.0, x))
                .map(|n| floor_scaled_sqrt(a, x - (n * n) as f64))
                .sum();
            let gauss_sum = lattice_points_in_disk(floor_x);
            let spatial_sum: u64 = (1..=floor_x)
                .map(|n| sieve.get(n) * floor_scaled_sqrt(a, x - n as f64))
                .sum();
            FloorSumRow {
                x,
                planar_sum,
                planar_residual: (planar_sum as f64 - PI * a * x / 4.0) / x.sqrt(),
                gauss_sum,
                gauss_remainder: (gauss_sum as f64 - PI * x) / x.cbrt(),
                spatial_sum,
                spatial_residual: (spatial_sum as f64 - 2.0 * PI * a / 3.0 * x.powf(1.5)) / x,
            }
        })
        .collect();
    Ok(FloorSumReport {
        a,
        planar_limit: -(a + 1.0) / 2.0,
        spatial_limit: -PI / 2.0,
        rows,
    })
}
