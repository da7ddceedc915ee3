use std::f64::consts::PI;

use elastic_weyl::asymptotics::{
    estimate_second_coefficient, first_residual, geometric_grid, two_term_prediction, AsymptoticModel,
};
use elastic_weyl::bessel::MAX_ARGUMENT;
use elastic_weyl::cylinder::{cylinder_two_term, enumerate_cylinder, CylinderCounter, CylinderGeometry};
use elastic_weyl::disk::DiskSpectrum;
use elastic_weyl::shift::{
    closed_form_shift, integrate_to_second_coefficient, phase_samples, scattering_matrix, thresholds, Component,
    IntegrationMethod, ShiftProfile, SpectralZone,
};
use elastic_weyl::{assemble_coefficients, boundary_weyl_constant, validate_material, DomainGeometry};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cli::{CoeffsArgs, CylinderArgs, DiskArgs, Sampling, ShiftArgs};
use crate::error::CliError;
use crate::output::{emit, json_text, write_text, Cell, Format, Report, Table};

/// Relative margin added to the spectral cutoff so that nudged samples stay covered.
const CUTOFF_MARGIN: f64 = 1e-6;

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Validation(format!("{name} must be positive and finite, got {x}")))
    }
}

fn sample_grid(s: &Sampling, lambda_max: f64, smallest: Option<f64>) -> Result<Vec<f64>, CliError> {
    if s.samples == 0 {
        return Err(CliError::Validation("samples must be at least 1".into()));
    }
    if s.samples == 1 {
        return Ok(vec![lambda_max]);
    }
    let lo = match (s.lambda_min, smallest) {
        (Some(lo), _) => positive("lambda-min", lo)?,
        (None, Some(e)) => 1.1 * e,
        (None, None) => {
            return Err(CliError::Validation(format!(
                "no eigenvalue below lambda-max = {lambda_max}; pass --lambda-min"
            )))
        }
    };
    if lo >= lambda_max {
        return Err(CliError::Validation(format!(
            "lambda-min = {lo} must be below lambda-max = {lambda_max}"
        )));
    }
    Ok(geometric_grid(lo, lambda_max, s.samples))
}

fn estimate_json(data: &[(f64, u64)], leading: f64, dim: u32) -> (Value, Value) {
    match estimate_second_coefficient(data, leading, dim) {
        Ok(est) => (json!(est), Value::Null),
        Err(e) => (Value::Null, Value::from(e.to_string())),
    }
}

pub fn coeffs(args: &CoeffsArgs) -> Result<(), CliError> {
    let CoeffsArgs {
        material,
        dim,
        volume,
        boundary_volume,
        output,
    } = args;
    let p = validate_material(material.lambda, material.mu, *dim)?;
    let geom = DomainGeometry::new(*dim, *volume, *boundary_volume)?;
    let [df, fd] = [elastic_weyl::BoundaryCondition::DF, elastic_weyl::BoundaryCondition::FD]
        .map(|bc| assemble_coefficients(&p, *dim, bc, &geom));
    let (df, fd) = (df?, fd?);
    let out = output.out.as_deref();
    match output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let doc = json!({
                "dimension": dim,
                "lambda": material.lambda,
                "mu": material.mu,
                "volume": volume,
                "boundary_volume": boundary_volume,
                "a": df.a,
                "b_df": df.b,
                "b_fd": fd.b,
                "df": df,
                "fd": fd,
            });
            write_text(out, &json_text(&doc))
        }
        Format::Csv => {
            let mut t = Table::new(&["bc", "a", "b", "leading", "second", "heat_second"]);
            for c in [df, fd] {
                t.push(vec![
                    Cell::Text(c.bc.label().into()),
                    Cell::Float(c.a),
                    Cell::Float(c.b),
                    Cell::Float(c.leading),
                    Cell::Float(c.second),
                    Cell::Float(c.heat_second),
                ]);
            }
            write_text(out, &t.to_csv())
        }
    }
}

/// Moves grid points that sit within `1e-6` (relative) of a threshold just
/// above it.
fn clear_thresholds(grid: &mut [f64], marks: [f64; 2]) {
    for x in grid.iter_mut() {
        for t in marks {
            if (*x - t).abs() <= 1e-6 * t {
                *x = t * (1.0 + 2e-6);
            }
        }
    }
}

pub fn shift(args: &ShiftArgs) -> Result<(), CliError> {
    let (m, d, bc) = (args.material, args.dim, args.bc);
    let p = validate_material(m.lambda, m.mu, d)?;
    let t = thresholds(&p, 1.0, d)?;
    let lambda_max = positive("lambda-max", args.lambda_max.unwrap_or(3.0 * p.longitudinal()))?;
    positive("boundary-volume", args.boundary_volume)?;
    if args.samples == 0 {
        return Err(CliError::Validation("samples must be at least 1".into()));
    }
    let n = args.samples;
    let mut grid: Vec<f64> = (1..=n).map(|i| lambda_max * i as f64 / n as f64).collect();
    clear_thresholds(&mut grid, [t.lambda_star_1, t.lambda_star_2]);
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Validation("grid too dense to keep clear of the thresholds".into()));
    }

    let phase = phase_samples(&p, bc, d, &grid)?;
    let profile = ShiftProfile::compute(&p, bc, d, Component::Full)?;
    let mut table = Table::new(&["xi_zone", "lambda", "shift_value", "det_s_re", "det_s_im"]);
    let mut audited = 0usize;
    let mut worst_defect: f64 = 0.0;
    for s in &phase {
        table.push(vec![
            Cell::Text(s.zone.label().into()),
            Cell::Float(s.lambda),
            Cell::Float(profile.shift.eval_right(s.lambda)),
            Cell::Float(s.det_s.re),
            Cell::Float(s.det_s.im),
        ]);
        if s.zone != SpectralZone::BelowSpectrum {
            worst_defect = worst_defect.max(scattering_matrix(&p, bc, s.lambda, d)?.unitarity_defect());
            audited += 1;
        }
    }

    let zones = [SpectralZone::BelowSpectrum, SpectralZone::I1, SpectralZone::I2];
    let mut worst_zone: f64 = 0.0;
    let comparison: Vec<Value> = zones
        .iter()
        .map(|&z| {
            let (pipe, closed) = (profile.zone_value(z), closed_form_shift(bc, d, z));
            worst_zone = worst_zone.max((pipe - closed).abs());
            json!({"zone": z.label(), "pipeline": pipe, "closed_form": closed})
        })
        .collect();
    let vol = args.boundary_volume;
    let exact = integrate_to_second_coefficient(&p, bc, d, vol, IntegrationMethod::Exact)?;
    let quad = integrate_to_second_coefficient(&p, bc, d, vol, IntegrationMethod::Quadrature)?;
    let closed = f64::from(d - 1) / 2.0 * boundary_weyl_constant(&p, d, bc)? * vol;

    let meta = json!({
        "command": "shift",
        "dimension": d,
        "bc": bc,
        "lambda_lame": m.lambda,
        "mu": m.mu,
        "lambda_max": lambda_max,
        "samples": n,
        "thresholds": [t.lambda_star_1, t.lambda_star_2],
        "point_spectrum": profile.point_spectrum,
        "zones": comparison,
        "scattering_audit": {"matrices": audited, "max_unitarity_defect": worst_defect},
        "heat_second": {"exact": exact, "quadrature": quad, "closed_form": closed},
        "columns": table.header,
    });
    emit(&Report { meta, table, extra: Vec::new() }, args.output.out.as_deref(), args.output.format.unwrap_or(Format::Csv))?;

    let rel = |x: f64| (x - closed).abs() / closed.abs();
    if worst_zone > 1e-12 || rel(exact) > 1e-10 || rel(quad) > 1e-8 {
        return Err(CliError::Numerical(format!(
            "pipeline disagrees with closed form: zone error {worst_zone:e}, c = {exact} / {quad} vs {closed}"
        )));
    }
    Ok(())
}

pub fn cylinder(dim: u32, args: &CylinderArgs) -> Result<(), CliError> {
    let (m, bc) = (args.material, args.bc);
    let p = validate_material(m.lambda, m.mu, dim)?;
    let g = CylinderGeometry::new(dim, args.h)?;
    let default_max = if dim == 2 { 1e4 } else { 1e3 };
    let lambda_max = positive("lambda-max", args.sampling.lambda_max.unwrap_or(default_max))?;
    let cutoff = lambda_max * (1.0 + CUTOFF_MARGIN);
    let spectrum = enumerate_cylinder(&g, &p, bc, cutoff)?;
    let counter = CylinderCounter::new(&g, &p, bc, cutoff)?;
    let grid = sample_grid(&args.sampling, lambda_max, spectrum.smallest())?;
    let (leading, second) = cylinder_two_term(&g, &p, bc);
    let model = AsymptoticModel::new(leading, second, dim).map_err(|e| CliError::Numerical(e.to_string()))?;
    let coeffs = assemble_coefficients(&p, dim, bc, &g.domain())?;

    let rows: Vec<(f64, u64, u64)> = grid
        .par_iter()
        .map(|&l| {
            let l = counter.perturb_off_spectrum(spectrum.perturb_off_spectrum(l));
            (l, spectrum.count_below(l), counter.count(l))
        })
        .collect();
    let mut table = Table::new(&["lambda", "n_exact", "n_closed", "pred_two_term", "residual1"]);
    for &(l, exact, closed) in &rows {
        table.push(vec![
            Cell::Float(l),
            Cell::Int(exact),
            Cell::Int(closed),
            Cell::Float(two_term_prediction(&model, l)),
            Cell::Float(first_residual(leading, dim, l, exact)),
        ]);
    }
    let mismatches = rows.iter().filter(|r| r.1 != r.2).count();
    let data: Vec<(f64, u64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    let (estimate, estimate_error) = estimate_json(&data, leading, dim);
    let meta = json!({
        "command": format!("cylinder{dim}d"),
        "dimension": dim,
        "bc": bc,
        "lambda_lame": m.lambda,
        "mu": m.mu,
        "h": args.h,
        "volume": g.volume(),
        "boundary_volume": g.boundary_volume(),
        "lambda_min": grid.first(),
        "lambda_max": lambda_max,
        "samples": grid.len(),
        "smallest_eigenvalue": spectrum.smallest(),
        "C_leading": coeffs.leading,
        "C_second": coeffs.second,
        "estimate": estimate,
        "estimate_error": estimate_error,
        "mismatches": mismatches,
        "columns": table.header,
    });
    emit(&Report { meta, table, extra: Vec::new() }, args.output.out.as_deref(), args.output.format.unwrap_or(Format::Csv))?;
    if mismatches > 0 {
        return Err(CliError::Numerical(format!(
            "{mismatches} samples where enumeration and closed form disagree"
        )));
    }
    Ok(())
}

pub fn disk(args: &DiskArgs) -> Result<(), CliError> {
    let (m, bc) = (args.material, args.bc);
    let p = validate_material(m.lambda, m.mu, 2)?;
    let lambda_max = positive("lambda-max", args.sampling.lambda_max.unwrap_or(1e3))?;
    let cutoff = lambda_max * (1.0 + CUTOFF_MARGIN);
    if (cutoff / p.mu()).sqrt() > MAX_ARGUMENT {
        return Err(CliError::Validation(format!(
            "lambda-max = {lambda_max} needs Bessel arguments beyond {MAX_ARGUMENT}; the limit is about {:.0}",
            MAX_ARGUMENT * MAX_ARGUMENT * p.mu()
        )));
    }
    let spectrum = DiskSpectrum::compute(bc, &p, cutoff)?;
    let grid = sample_grid(&args.sampling, lambda_max, spectrum.smallest_positive())?;
    let coeffs = assemble_coefficients(&p, 2, bc, &DomainGeometry::new(2, PI, 2.0 * PI)?)?;
    let model =
        AsymptoticModel::new(coeffs.leading, coeffs.second, 2).map_err(|e| CliError::Numerical(e.to_string()))?;

    let rows: Vec<(f64, u64)> = grid
        .par_iter()
        .map(|&l| {
            let l = spectrum.perturb_off_spectrum(l);
            (l, spectrum.count(l))
        })
        .collect();
    let mut table = Table::new(&["lambda", "n", "pred_two_term", "residual1"]);
    for &(l, n) in &rows {
        table.push(vec![
            Cell::Float(l),
            Cell::Int(n),
            Cell::Float(two_term_prediction(&model, l)),
            Cell::Float(first_residual(coeffs.leading, 2, l, n)),
        ]);
    }
    let mut roots = Table::new(&["k", "root", "multiplicity"]);
    for mode in &spectrum.modes {
        for &r in &mode.roots {
            roots.push(vec![Cell::Int(u64::from(mode.k)), Cell::Float(r), Cell::Int(mode.multiplicity)]);
        }
    }
    let (estimate, estimate_error) = estimate_json(&rows, coeffs.leading, 2);
    let meta = json!({
        "command": "disk",
        "dimension": 2,
        "bc": bc,
        "lambda_lame": m.lambda,
        "mu": m.mu,
        "volume": PI,
        "boundary_volume": 2.0 * PI,
        "lambda_min": grid.first(),
        "lambda_max": lambda_max,
        "samples": grid.len(),
        "smallest_eigenvalue": spectrum.smallest_positive(),
        "zero_modes": spectrum.zero_modes,
        "orders_scanned": spectrum.modes.len(),
        "rejected_zeros": spectrum.modes.iter().map(|m| m.rejected).sum::<usize>(),
        "C_leading": coeffs.leading,
        "C_second": coeffs.second,
        "estimate": estimate,
        "estimate_error": estimate_error,
        "columns": table.header,
    });
    let report = Report {
        meta,
        table,
        extra: vec![("roots", roots)],
    };
    emit(&report, args.output.out.as_deref(), args.output.format.unwrap_or(Format::Csv))
}
