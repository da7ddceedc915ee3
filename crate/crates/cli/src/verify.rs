//! Invariant suite behind `weyl verify`.

use std::f64::consts::PI;
use std::io::Write;

use elastic_weyl::arith::{r2, r2_brute, R2Sieve};
use elastic_weyl::asymptotics::{estimate_second_coefficient, geometric_grid};
use elastic_weyl::cylinder::{
    counting_closed_form, cylinder_two_term, enumerate_cylinder, floor_sum_checks, CylinderCounter,
    CylinderGeometry,
};
use elastic_weyl::disk::{DiskSpectrum, DEFAULT_STEP};
use elastic_weyl::shift::{
    classify_threshold, closed_form_shift, integrate_to_second_coefficient, point_spectrum_scan, scattering_matrix,
    Block, Component, IntegrationMethod, ShiftProfile, SpectralZone, ThresholdKind,
};
use elastic_weyl::{boundary_weyl_constant, bulk_weyl_constant, validate_material, BoundaryCondition};

use crate::cli::VerifyArgs;
use crate::error::CliError;

type Outcome = Result<String, String>;
type Check = (&'static str, fn(&Suite) -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s<E: ToString>(e: E) -> String {
    e.to_string()
}

struct Suite {
    lambda: f64,
    mu: f64,
}

impl Suite {
    fn coefficients(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        for d in 2..=5 {
            let p = validate_material(self.lambda, self.mu, d).map_err(s)?;
            for bc in BoundaryCondition::ALL {
                let want = f64::from(d - 1) / 2.0 * boundary_weyl_constant(&p, d, bc).map_err(s)?;
                for (method, tol) in [(IntegrationMethod::Exact, 1e-10), (IntegrationMethod::Quadrature, 1e-8)] {
                    let got = integrate_to_second_coefficient(&p, bc, d, 1.0, method).map_err(s)?;
                    let rel = (got - want).abs() / want.abs();
                    worst = worst.max(rel);
                    ensure(rel <= tol, || format!("d={d} {bc} {method:?}: {got} vs {want}"))?;
                }
            }
        }
        Ok(format!("integrated shift matches the boundary constant, max rel. error {worst:.1e}"))
    }

    fn scattering(&self) -> Outcome {
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for d in 2..=4 {
            let p = validate_material(self.lambda, self.mu, d).map_err(s)?;
            let (mu, long) = (p.mu(), p.longitudinal());
            let mut grid: Vec<f64> = (0..50).map(|i| mu + (long - mu) * (i as f64 + 0.5) / 50.0).collect();
            grid.extend(geometric_grid(long * (1.0 + 1e-5), long * 1e3, 50));
            for bc in BoundaryCondition::ALL {
                for &l in &grid {
                    worst = worst.max(scattering_matrix(&p, bc, l, d).map_err(s)?.unitarity_defect());
                    count += 1;
                }
                let profile = ShiftProfile::compute(&p, bc, d, Component::Full).map_err(s)?;
                for z in [SpectralZone::BelowSpectrum, SpectralZone::I1, SpectralZone::I2] {
                    let (got, want) = (profile.zone_value(z), closed_form_shift(bc, d, z));
                    ensure((got - want).abs() <= 1e-12, || format!("d={d} {bc} {}: {got} vs {want}", z.label()))?;
                }
            }
        }
        ensure(worst <= 1e-10, || format!("unitarity defect {worst:e}"))?;
        Ok(format!("{count} scattering matrices unitary to {worst:.1e}; zone values match closed form"))
    }

    fn thresholds(&self) -> Outcome {
        use BoundaryCondition::{DF, FD};
        use ThresholdKind::{Rigid, Soft};
        let p = validate_material(self.lambda, self.mu, 5).map_err(s)?;
        for (bc, which, block, want) in [
            (DF, 1, Block::P, Soft),
            (DF, 2, Block::P, Rigid),
            (FD, 1, Block::P, Rigid),
            (FD, 2, Block::P, Soft),
            (DF, 1, Block::Perp, Rigid),
            (FD, 1, Block::Perp, Soft),
        ] {
            let got = classify_threshold(&p, bc, which, block).map_err(s)?;
            ensure(got.kind == want, || format!("{bc} threshold {which} {block:?}: {:?}", got.kind))?;
        }
        for d in [2, 3] {
            for bc in BoundaryCondition::ALL {
                let scan = point_spectrum_scan(&p, bc, d, 10.0 * p.longitudinal()).map_err(s)?;
                ensure(scan.is_empty(), || format!("d={d} {bc}: point spectrum {scan:?}"))?;
            }
        }
        Ok("soft/rigid table reproduced; no point spectrum".into())
    }

    fn cylinder_counts(&self) -> Outcome {
        for (d, l, bc, want) in [
            (2, 5.5, BoundaryCondition::DF, 15),
            (2, 5.5, BoundaryCondition::FD, 13),
            (3, 4.5, BoundaryCondition::DF, 33),
            (3, 4.5, BoundaryCondition::FD, 41),
        ] {
            let p = validate_material(0.0, 1.0, d).map_err(s)?;
            let g = CylinderGeometry::new(d, PI).map_err(s)?;
            let got = counting_closed_form(&g, &p, bc, l).map_err(s)?;
            let listed = enumerate_cylinder(&g, &p, bc, l).map_err(s)?.total_multiplicity();
            ensure(got == want && listed == want, || format!("d={d} {bc} Λ={l}: {got}/{listed} vs {want}"))?;
        }
        let mut checked = 0;
        for (d, cutoff) in [(2, 2e3), (3, 3e2)] {
            let p = validate_material(self.lambda, self.mu, d).map_err(s)?;
            for h in [1.0, PI] {
                let g = CylinderGeometry::new(d, h).map_err(s)?;
                for bc in BoundaryCondition::ALL {
                    let table = enumerate_cylinder(&g, &p, bc, cutoff).map_err(s)?;
                    let counter = CylinderCounter::new(&g, &p, bc, cutoff).map_err(s)?;
                    for l in geometric_grid(0.1, cutoff * 0.999, 300) {
                        let l = table.perturb_off_spectrum(l);
                        let (a, b) = (table.count_below(l), counter.count(l));
                        ensure(a == b, || format!("d={d} h={h} {bc} Λ={l}: enumerated {a}, closed form {b}"))?;
                        checked += 1;
                    }
                }
            }
        }
        Ok(format!("worked values reproduced; enumeration equals closed form at {checked} points"))
    }

    fn cylinder_recovery(&self) -> Outcome {
        let mut parts = Vec::new();
        for (d, top, samples, tol) in [(2, 1e5, 2000, 0.05), (3, 1e4, 1000, 0.10)] {
            let p = validate_material(self.lambda, self.mu, d).map_err(s)?;
            let g = CylinderGeometry::new(d, PI).map_err(s)?;
            for bc in BoundaryCondition::ALL {
                let counter = CylinderCounter::new(&g, &p, bc, top * 1.001).map_err(s)?;
                let (leading, second) = cylinder_two_term(&g, &p, bc);
                let smallest = enumerate_cylinder(&g, &p, bc, 50.0 * p.longitudinal())
                    .map_err(s)?
                    .smallest()
                    .ok_or("empty spectrum")?;
                let data: Vec<(f64, u64)> = geometric_grid(1.1 * smallest, top, samples)
                    .into_iter()
                    .map(|l| {
                        let l = counter.perturb_off_spectrum(l);
                        (l, counter.count(l))
                    })
                    .collect();
                let est = estimate_second_coefficient(&data, leading, d).map_err(s)?;
                let rel = (est.value - second).abs() / second.abs();
                parts.push(format!("d={d} {bc} {:.4} vs {:.4}", est.value, second));
                ensure(rel <= tol && est.value.signum() == second.signum(), || parts.join("; "))?;
            }
        }
        Ok(parts.join("; "))
    }

    fn floor_sums(&self) -> Outcome {
        let report = floor_sum_checks(1.0, &[1e5, 1e6]).map_err(s)?;
        let (r5, r6) = (&report.rows[0], &report.rows[1]);
        ensure((r6.planar_residual - report.planar_limit).abs() <= 0.05, || {
            format!("planar residual {} at 1e6", r6.planar_residual)
        })?;
        ensure((r5.spatial_residual - report.spatial_limit).abs() <= 0.1, || {
            format!("spatial residual {} at 1e5", r5.spatial_residual)
        })?;
        ensure(report.rows.iter().all(|r| r.gauss_remainder.abs() <= 10.0), || "Gauss remainder".into())?;
        Ok(format!(
            "planar {:.4} (limit {:.4}), spatial {:.4} (limit {:.4})",
            r6.planar_residual, report.planar_limit, r5.spatial_residual, report.spatial_limit
        ))
    }

    fn disk(&self) -> Outcome {
        let p = validate_material(self.lambda, self.mu, 2).map_err(s)?;
        let top = 2000.0 * p.mu();
        let a = bulk_weyl_constant(&p, 2).map_err(s)?;
        let mut parts = Vec::new();
        for bc in BoundaryCondition::ALL {
            let c1 = boundary_weyl_constant(&p, 2, bc).map_err(s)? * 2.0 * PI;
            let coarse = DiskSpectrum::compute(bc, &p, top).map_err(s)?;
            let fine = DiskSpectrum::compute_with_step(bc, &p, top, DEFAULT_STEP / 2.0).map_err(s)?;
            let x: Vec<f64> = coarse.eigenvalues().collect();
            let y: Vec<f64> = fine.eigenvalues().collect();
            ensure(x.len() == y.len(), || format!("{bc}: {} roots vs {} at half step", x.len(), y.len()))?;
            let moved = x.iter().zip(&y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            ensure(moved <= 1e-8 * top, || format!("{bc}: roots moved by {moved:e}"))?;
            let grid: Vec<f64> = (1..=4000).map(|i| top * i as f64 / 4000.0).collect();
            let counts: Vec<u64> = grid.iter().map(|&l| coarse.count(l)).collect();
            ensure(counts.windows(2).all(|w| w[0] <= w[1]), || format!("{bc}: N not monotone"))?;
            let window: Vec<f64> = grid
                .iter()
                .zip(&counts)
                .filter(|(l, _)| **l >= top / 2.0)
                .map(|(&l, &n)| (n as f64 - a * PI * l) / l.sqrt())
                .collect();
            let mean = window.iter().sum::<f64>() / window.len() as f64;
            ensure((mean - c1).abs() <= 0.25 * c1.abs(), || format!("{bc}: window mean {mean:.4} vs {c1:.4}"))?;
            parts.push(format!("{bc}: {} roots, window mean {mean:.4} vs {c1:.4}", x.len()));
        }
        Ok(parts.join("; "))
    }

    fn lattice(&self) -> Outcome {
        let sieve = R2Sieve::new(20_000);
        for n in 0..=20_000 {
            let (fast, slow, table) = (r2(n), r2_brute(n), sieve.get(n));
            ensure(fast == slow && slow == table, || format!("r2({n}): {fast}/{slow}/{table}"))?;
        }
        Ok("r2 factorisation, sieve and enumeration agree up to 20000".into())
    }

    fn estimator(&self) -> Outcome {
        let data: Vec<(f64, u64)> = geometric_grid(1.0, 1e4, 2000)
            .into_iter()
            .map(|l| (l, (0.75 * l + 0.3 * l.sqrt()).floor() as u64))
            .collect();
        let est = estimate_second_coefficient(&data, 0.75, 2).map_err(s)?;
        ensure((0.25..=0.35).contains(&est.value), || format!("estimate {}", est.value))?;
        Ok(format!("synthetic second coefficient 0.3 estimated as {:.4}", est.value))
    }
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let m = args.material;
    for d in [2, 5] {
        validate_material(m.lambda, m.mu, d)?;
    }
    let suite = Suite {
        lambda: m.lambda,
        mu: m.mu,
    };
    let checks: [Check; 9] = [
        ("coefficients", Suite::coefficients),
        ("scattering", Suite::scattering),
        ("thresholds", Suite::thresholds),
        ("cylinder counts", Suite::cylinder_counts),
        ("cylinder recovery", Suite::cylinder_recovery),
        ("floor sums", Suite::floor_sums),
        ("disk", Suite::disk),
        ("lattice", Suite::lattice),
        ("estimator", Suite::estimator),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for (name, check) in checks {
        let line = match check(&suite) {
            Ok(detail) => format!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed.push(name);
                format!("[FAIL] {name}: {detail}")
            }
        };
        writeln!(stdout, "{line}").map_err(|e| CliError::io(None, e))?;
    }
    writeln!(stdout, "{}/{} checks passed", checks.len() - failed.len(), checks.len())
        .map_err(|e| CliError::io(None, e))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("failed checks: {}", failed.join(", "))))
    }
}
