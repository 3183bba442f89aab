//! Schmidt quantification of polarization-momentum entanglement.
//!
//! Stack the amplitude-weighted Jones vectors of a field as the columns of a
//! 2 x N matrix M (polarization index by momentum sample, column j scaled by
//! `sqrt(weight_j) |F_j|`). Its singular values are shared with the 2 x 2
//! Gram matrix `G = M M^dag`, so the decomposition is computed here from the
//! closed-form eigenvalues of G rather than a dense SVD; tests keep the
//! dense SVD as an independent oracle.
//!
//! The entropy `-sum(lambda^2 ln lambda^2)` ranges from 0 (the same
//! polarization at every sample: a product state) to ln 2 (two equally
//! weighted orthogonal polarization components). It is invariant under
//! global unitary mixing of the two Jones components and under sample
//! relabeling, but deliberately *not* under gauge changes: how entangled
//! polarization looks depends on which frames it is read in, and measuring
//! exactly that dependence is what this report is for.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::GaugeVector;

use super::JonesField;

/// Singular-value summary of the polarization-by-momentum amplitude matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtReport {
    singular_values: [f64; 2],
    entropy: f64,
    gauge: GaugeVector,
}

impl SchmidtReport {
    /// Singular values in descending order, normalized so their squares sum
    /// to one.
    pub fn singular_values(&self) -> [f64; 2] {
        self.singular_values
    }

    /// Schmidt weights: squared singular values.
    pub fn weights(&self) -> [f64; 2] {
        [
            self.singular_values[0] * self.singular_values[0],
            self.singular_values[1] * self.singular_values[1],
        ]
    }

    /// Entanglement entropy in nats; between 0 and ln 2.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    /// The gauge the Jones field was read in. The report is only meaningful
    /// together with it.
    pub fn gauge(&self) -> &GaugeVector {
        &self.gauge
    }
}

fn x_ln_x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Computes the Schmidt report of a Jones field.
///
/// Total intensity is normalized away internally, so any overall field scale
/// gives the same report; a field with no intensity at all is rejected.
pub fn schmidt(jf: &JonesField) -> Result<SchmidtReport> {
    let mut g11 = 0.0f64;
    let mut g22 = 0.0f64;
    let mut g12 = Complex64::new(0.0, 0.0);
    for i in 0..jf.len() {
        if jf.void()[i] {
            continue;
        }
        let j = jf.jones()[i];
        let c = jf.grid().weights()[i] * jf.amplitudes()[i] * jf.amplitudes()[i];
        g11 += c * j.a1.norm_sqr();
        g22 += c * j.a2.norm_sqr();
        g12 += j.a1 * j.a2.conj() * c;
    }
    let trace = g11 + g22;
    if !(trace > 0.0) {
        return Err(Error::AllZeroField);
    }

    // eigenvalues of G / trace: mu^2 - mu + det = 0 with det in [0, 1/4];
    // the smaller root is computed product-first to dodge cancellation
    let det = ((g11 / trace) * (g22 / trace) - (g12 / trace).norm_sqr()).clamp(0.0, 0.25);
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    let mu_major = (1.0 + disc) / 2.0;
    let mu_minor = if mu_major > 0.0 { det / mu_major } else { 0.0 };

    // max(0.0) also turns the product state's -0.0 into a plain zero
    let entropy = (-(x_ln_x(mu_major) + x_ln_x(mu_minor))).max(0.0);

    Ok(SchmidtReport {
        singular_values: [mu_major.sqrt(), mu_minor.sqrt()],
        entropy,
        gauge: *jf.gauge(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfield::testutil::{field_from_jones, small_grid};
    use crate::mfield::{jones_field, MomentumGrid};
    use crate::planewave::JonesVector;
    use nalgebra::{DMatrix, Vector3};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::LN_2;

    fn c(re: f64) -> Complex64 {
        Complex64::from(re)
    }

    /// Independent route: dense SVD of the explicit 2 x N matrix.
    fn svd_oracle(jf: &crate::mfield::JonesField) -> (f64, [f64; 2]) {
        let cols: Vec<_> = (0..jf.len())
            .filter(|&i| !jf.void()[i])
            .map(|i| {
                let scale = (jf.grid().weights()[i]).sqrt() * jf.amplitudes()[i];
                (jf.jones()[i].a1 * scale, jf.jones()[i].a2 * scale)
            })
            .collect();
        let m = DMatrix::from_fn(2, cols.len(), |r, col| {
            if r == 0 {
                cols[col].0
            } else {
                cols[col].1
            }
        });
        let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
        sv.resize(2, 0.0);
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let total: f64 = sv.iter().map(|s| s * s).sum();
        let weights: Vec<f64> = sv.iter().map(|s| s * s / total).collect();
        let entropy = -weights
            .iter()
            .map(|&w| if w > 0.0 { w * w.ln() } else { 0.0 })
            .sum::<f64>();
        (
            entropy,
            [
                (weights[0]).sqrt(),
                (weights[1]).sqrt(),
            ],
        )
    }

    #[test]
    fn constant_polarization_is_a_product_state() {
        let grid = small_grid();
        let n = grid.len();
        let jones = vec![JonesVector::new(Complex64::new(0.6, 0.2), Complex64::new(-0.3, 0.7)); n];
        let field = field_from_jones(grid, &GaugeVector::z(), &jones, &vec![1.3; n]);
        let report = schmidt(&jones_field(&field, &GaugeVector::z()).unwrap()).unwrap();
        assert!(report.entropy() <= 1e-12);
        assert!((report.singular_values()[0] - 1.0).abs() <= 1e-12);
        assert!(report.singular_values()[1] <= 1e-7);
    }

    #[test]
    fn balanced_orthogonal_pair_reaches_ln_2() {
        let grid = MomentumGrid::from_samples(
            vec![Vector3::new(1.0, 0.2, 0.1), Vector3::new(0.1, 1.0, 0.3)],
            vec![1.0, 1.0],
        )
        .unwrap();
        let jones = [
            JonesVector::new(c(1.0), c(0.0)),
            JonesVector::new(c(0.0), c(1.0)),
        ];
        let field = field_from_jones(grid, &GaugeVector::z(), &jones, &[1.0, 1.0]);
        let report = schmidt(&jones_field(&field, &GaugeVector::z()).unwrap()).unwrap();
        assert!((report.entropy() - LN_2).abs() <= 1e-14);
        let sv = report.singular_values();
        assert!((sv[0] - sv[1]).abs() <= 1e-14);
    }

    #[test]
    fn squares_sum_to_one_and_order_is_descending() {
        let grid = small_grid();
        let field = crate::mfield::testutil::random_field(grid, 31);
        let field = crate::mfield::project_transverse(&field);
        let report = schmidt(&jones_field(&field, &GaugeVector::z()).unwrap()).unwrap();
        let [a, b] = report.weights();
        assert!((a + b - 1.0).abs() <= 1e-12);
        assert!(report.singular_values()[0] >= report.singular_values()[1]);
        assert!(report.entropy() >= 0.0 && report.entropy() <= LN_2 + 1e-12);
    }

    #[test]
    fn closed_form_matches_the_dense_svd() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for trial in 0..8 {
            let grid = small_grid();
            let n = grid.len();
            let jones: Vec<JonesVector> = (0..n)
                .map(|_| {
                    JonesVector::new(
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    )
                    .normalized()
                    .unwrap()
                })
                .collect();
            let amps: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
            let field = field_from_jones(grid, &GaugeVector::z(), &jones, &amps);
            let jf = jones_field(&field, &GaugeVector::z()).unwrap();

            let report = schmidt(&jf).unwrap();
            let (entropy, sv) = svd_oracle(&jf);
            assert!(
                (report.entropy() - entropy).abs() <= 1e-12,
                "trial {trial}: {} vs {}",
                report.entropy(),
                entropy
            );
            assert!((report.singular_values()[0] - sv[0]).abs() <= 1e-12);
            assert!((report.singular_values()[1] - sv[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn entropy_is_invariant_under_global_mixing_and_relabeling() {
        let grid = small_grid();
        let n = grid.len();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let jones: Vec<JonesVector> = (0..n)
            .map(|_| {
                JonesVector::new(
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                )
                .normalized()
                .unwrap()
            })
            .collect();
        let amps: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();

        let gauge = GaugeVector::z();
        let base = schmidt(&jones_field(&field_from_jones(grid.clone(), &gauge, &jones, &amps), &gauge).unwrap())
            .unwrap();

        // global unitary: a gauge-independent mix of the two components
        let (theta, alpha) = (0.73f64, -1.2f64);
        let u = [
            [
                Complex64::from(theta.cos()) * Complex64::new(0.0, alpha).exp(),
                Complex64::from(theta.sin()),
            ],
            [
                Complex64::from(-theta.sin()),
                Complex64::from(theta.cos()) * Complex64::new(0.0, -alpha).exp(),
            ],
        ];
        let mixed: Vec<JonesVector> = jones
            .iter()
            .map(|j| {
                JonesVector::new(
                    u[0][0] * j.a1 + u[0][1] * j.a2,
                    u[1][0] * j.a1 + u[1][1] * j.a2,
                )
            })
            .collect();
        let report = schmidt(&jones_field(&field_from_jones(grid.clone(), &gauge, &mixed, &amps), &gauge).unwrap())
            .unwrap();
        assert!((report.entropy() - base.entropy()).abs() <= 1e-12);

        // relabeling: same samples in reverse order
        let rev_samples: Vec<_> = grid.samples().iter().rev().map(|k| *k.vector()).collect();
        let rev_grid = MomentumGrid::from_samples(rev_samples, grid.weights().to_vec()).unwrap();
        let rev_jones: Vec<_> = jones.iter().rev().copied().collect();
        let rev_amps: Vec<_> = amps.iter().rev().copied().collect();
        let report = schmidt(
            &jones_field(&field_from_jones(rev_grid, &gauge, &rev_jones, &rev_amps), &gauge).unwrap(),
        )
        .unwrap();
        assert!((report.entropy() - base.entropy()).abs() <= 1e-12);
    }

    #[test]
    fn overall_scale_does_not_matter() {
        let grid = small_grid();
        let n = grid.len();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let jones: Vec<JonesVector> = (0..n)
            .map(|_| {
                JonesVector::new(
                    Complex64::new(rng.random_range(-1.0..1.0), 0.1),
                    Complex64::new(0.2, rng.random_range(-1.0..1.0)),
                )
                .normalized()
                .unwrap()
            })
            .collect();
        let amps: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
        let scaled: Vec<f64> = amps.iter().map(|a| a * 17.0).collect();

        let gauge = GaugeVector::z();
        let a = schmidt(&jones_field(&field_from_jones(grid.clone(), &gauge, &jones, &amps), &gauge).unwrap())
            .unwrap();
        let b = schmidt(&jones_field(&field_from_jones(grid, &gauge, &jones, &scaled), &gauge).unwrap())
            .unwrap();
        assert!((a.entropy() - b.entropy()).abs() <= 1e-12);
        assert!((a.singular_values()[0] - b.singular_values()[0]).abs() <= 1e-12);
    }
}
