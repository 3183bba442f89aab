//! The invariant suite behind `kpolar check`.
//!
//! Each check measures a residual with the library's own machinery and, where
//! the contract has two independent routes (gauge change as matrix action vs
//! direct re-read, closed-form Schmidt weights vs dense SVD), runs both and
//! compares. Tolerances are pinned here, next to the measurement.

use kpolar::algebra::rot_so3;
use kpolar::frames::{gauge_angle, local_frame, GaugeVector};
use kpolar::mfield::{
    gauge_transform, jones_field, regauge_fixed_field, schmidt, stokes_field, MomentumField,
};
use kpolar::synthesis::{divergence_check, energy, evolve, position_field, PhysicalConstants};
use kpolar::Error;
use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::report::CheckResult;

/// Gauges the suite is willing to compare against, before filtering out
/// directions that are singular on the grid or parallel to the file gauge.
fn auxiliary_gauge(field: &MomentumField, file_gauge: &GaugeVector) -> Result<GaugeVector, Error> {
    let candidates = [
        Vector3::x(),
        Vector3::y(),
        Vector3::z(),
        Vector3::new(1.0, 1.0, 1.0).normalize(),
    ];
    let mut best: Option<(f64, GaugeVector)> = None;
    for direction in candidates {
        let gauge = GaugeVector::from_vector(direction)?;
        if gauge.direction().cross(file_gauge.direction()).norm() <= 1e-6 {
            continue;
        }
        let (residual, _) = field.grid().min_gauge_residual(&gauge);
        if residual <= 1e-6 {
            continue;
        }
        if best.map_or(true, |(r, _)| residual > r) {
            best = Some((residual, gauge));
        }
    }
    best.map(|(_, gauge)| gauge).ok_or_else(|| {
        Error::InvalidParameter("no nonsingular auxiliary gauge for this grid".into())
    })
}

/// Runs every check against the field as stored. A field that is not even
/// transverse gets a one-line report: nothing downstream is defined for it.
pub fn run_all(field: &MomentumField, gauge: &GaugeVector) -> Result<Vec<CheckResult>, Error> {
    let mut results = Vec::new();

    let transversality = field.transversality_residual();
    results.push(CheckResult::new("transversality", transversality, 1e-8));
    if transversality > 1e-8 {
        return Ok(results);
    }

    // frame algebra at every sample
    let mut worst_gram: f64 = 0.0;
    let mut worst_projector: f64 = 0.0;
    for k in field.grid().samples() {
        let varpi = local_frame(k, gauge)?.matrix();
        worst_gram = worst_gram.max(varpi.gram_residual());
        worst_projector = worst_projector.max(varpi.projector_residual());
    }
    results.push(CheckResult::new("quasi-unitarity-gram", worst_gram, 1e-12));
    results.push(CheckResult::new(
        "quasi-unitarity-projector",
        worst_projector,
        1e-12,
    ));

    let jf = jones_field(field, gauge)?;
    let scale = field.max_amplitude();

    // two components against three: the round trip must lose nothing
    let reconstructed = jf.reconstruct();
    let mut worst: f64 = 0.0;
    for (a, b) in reconstructed.values().iter().zip(field.values()) {
        worst = worst.max((a - b).norm() / scale);
    }
    results.push(CheckResult::new("jones-round-trip", worst, 1e-12));

    let sf = stokes_field(&jf);
    let mut worst: f64 = 0.0;
    for (s, void) in sf.components().iter().zip(sf.void()) {
        if *void {
            continue;
        }
        worst = worst.max((s[0] * s[0] + s[1] * s[1] + s[2] * s[2] - 1.0).abs());
    }
    results.push(CheckResult::new("stokes-purity", worst, 1e-12));

    let aux = auxiliary_gauge(field, gauge)?;
    let transformed = gauge_transform(&jf, &aux)?;
    let direct = jones_field(field, &aux)?;

    // route one: rotate the Jones components; route two: re-read the field
    let mut worst: f64 = 0.0;
    for i in 0..jf.len() {
        if jf.void()[i] {
            continue;
        }
        let a = transformed.jones()[i].as_vector();
        let b = direct.jones()[i].as_vector();
        worst = worst.max((a - b).norm());
    }
    results.push(CheckResult::new("gauge-two-path", worst, 1e-10));

    let rec_aux = transformed.reconstruct();
    let mut worst: f64 = 0.0;
    for (a, b) in rec_aux.values().iter().zip(reconstructed.values()) {
        worst = worst.max((a - b).norm() / scale);
    }
    results.push(CheckResult::new(
        "reconstruction-gauge-independence",
        worst,
        1e-12,
    ));

    // s3 is the helicity: it cannot depend on the gauge. The full triple
    // transforms as a rotation of the lab-frame polarization vector about w.
    let sf_aux = stokes_field(&direct);
    let mut worst_s3: f64 = 0.0;
    let mut worst_law: f64 = 0.0;
    for i in 0..jf.len() {
        if jf.void()[i] {
            continue;
        }
        worst_s3 = worst_s3.max((sf_aux.components()[i][2] - sf.components()[i][2]).abs());
        let k = &field.grid().samples()[i];
        let phi_back = gauge_angle(k, &aux, gauge)?;
        let expected = rot_so3(&k.unit(), phi_back)?.apply(&sf.lab_vectors()[i]);
        worst_law = worst_law.max((sf_aux.lab_vectors()[i] - expected).norm());
    }
    results.push(CheckResult::new("helicity-invariance", worst_s3, 1e-12));
    results.push(CheckResult::new("stokes-rotation-law", worst_law, 1e-10));

    // fixed Jones components in a new gauge: field turns by phi, Stokes by 2 phi
    let rotated = regauge_fixed_field(&jf, &aux)?;
    let rotated_in_old = stokes_field(&jones_field(&rotated, gauge)?);
    let mut worst_field: f64 = 0.0;
    let mut worst_stokes: f64 = 0.0;
    for i in 0..jf.len() {
        if jf.void()[i] {
            continue;
        }
        let k = &field.grid().samples()[i];
        let phi = gauge_angle(k, gauge, &aux)?;
        let expected = rot_so3(&k.unit(), phi)?.apply_complex(&field.values()[i]);
        worst_field = worst_field.max((rotated.values()[i] - expected).norm() / scale);
        let expected_s = rot_so3(&k.unit(), 2.0 * phi)?.apply(&sf.lab_vectors()[i]);
        worst_stokes =
            worst_stokes.max((rotated_in_old.lab_vectors()[i] - expected_s).norm());
    }
    results.push(CheckResult::new("double-angle-field", worst_field, 1e-10));
    results.push(CheckResult::new(
        "double-angle-polarization",
        worst_stokes,
        1e-10,
    ));

    let constants = PhysicalConstants::natural();
    let mut worst_drift: f64 = 0.0;
    let mut worst_energy: f64 = 0.0;
    let e0 = energy(field, &constants);
    for t in [0.1, 10.0] {
        let evolved = evolve(field, t, &constants);
        for (a, b) in evolved.values().iter().zip(field.values()) {
            worst_drift = worst_drift.max((a.norm() - b.norm()).abs() / scale);
        }
        worst_energy = worst_energy.max((energy(&evolved, &constants) - e0).abs() / e0);
    }
    results.push(CheckResult::new("evolution-unitarity", worst_drift, 1e-14));
    results.push(CheckResult::new(
        "energy-conservation",
        worst_energy,
        1e-12,
    ));

    results.push(CheckResult::new(
        "spectral-divergence",
        divergence_check(field),
        1e-12,
    ));

    // Parseval ties the synthesized field back to the momentum norm
    let pf = position_field(field, &constants)?;
    let dx3 = pf.layout().cell_volume();
    let lhs: f64 = pf.values().iter().map(|e| e.norm_squared() * dx3).sum();
    let rhs: f64 = field
        .values()
        .iter()
        .zip(field.grid().samples())
        .zip(field.grid().weights())
        .map(|((f, k), w)| {
            constants.hbar() * constants.omega(k.magnitude()) / constants.epsilon0()
                * f.norm_squared()
                * w
        })
        .sum();
    results.push(CheckResult::new(
        "parseval",
        (lhs - rhs).abs() / rhs,
        1e-10,
    ));

    // closed-form Schmidt weights against a dense SVD of the coefficient matrix
    let schmidt_report = schmidt(&jf)?;
    let cols: Vec<(Complex64, Complex64)> = (0..jf.len())
        .filter(|&i| !jf.void()[i])
        .map(|i| {
            let scale = jf.grid().weights()[i].sqrt() * jf.amplitudes()[i];
            (jf.jones()[i].a1 * scale, jf.jones()[i].a2 * scale)
        })
        .collect();
    let coeff = DMatrix::from_fn(2, cols.len(), |r, c| if r == 0 { cols[c].0 } else { cols[c].1 });
    let singular = coeff.svd(false, false).singular_values;
    let total: f64 = singular.iter().map(|s| s * s).sum();
    let entropy_oracle: f64 = singular
        .iter()
        .map(|s| {
            let mu = s * s / total;
            if mu > 0.0 {
                -mu * mu.ln()
            } else {
                0.0
            }
        })
        .sum();
    let weights = schmidt_report.weights();
    let weight_gap = (weights[0] + weights[1] - 1.0).abs();
    let entropy_gap = (schmidt_report.entropy() - entropy_oracle).abs();
    results.push(CheckResult::new(
        "schmidt-consistency",
        weight_gap.max(entropy_gap),
        1e-12,
    ));

    Ok(results)
}
