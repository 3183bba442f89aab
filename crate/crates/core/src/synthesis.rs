//! Time evolution and position-space synthesis.
//!
//! A free photon mode of wavevector k oscillates at omega = c |k|, so
//! advancing a momentum field in time is a per-sample phase. Synthesis turns
//! the momentum field into the (complex, positive-frequency) electric field
//!
//! ```text
//! E(x, t) = (2 pi)^(-3/2) sum_k sqrt(hbar omega / epsilon0) f(k, t) e^(i k.x) dk^3
//! ```
//!
//! evaluated on the conjugate position grid by FFT. The `(2 pi)^(-3/2)` and
//! `dk^3` factors are applied here explicitly; the transform kernel itself is
//! the bare unnormalized `e^(+i k.x)` sum, so outputs are reproducible
//! against any other DFT implementation term by term.
//!
//! The physical (real) field is `(E + conj E) / sqrt 2`.

use std::f64::consts::{SQRT_2, TAU};
use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::mfield::{CartesianLayout, MomentumField};

/// Unit system for the synthesis weights and the dispersion omega = c |k|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    c: f64,
    hbar: f64,
    epsilon0: f64,
}

impl PhysicalConstants {
    /// Natural units, c = hbar = epsilon0 = 1. The default for desk-scale
    /// work: every check in this crate is unit-agnostic.
    pub fn natural() -> Self {
        PhysicalConstants {
            c: 1.0,
            hbar: 1.0,
            epsilon0: 1.0,
        }
    }

    /// SI values (exact c, 2022 CODATA for the rest).
    pub fn si() -> Self {
        PhysicalConstants {
            c: 299_792_458.0,
            hbar: 1.054_571_817e-34,
            epsilon0: 8.854_187_8188e-12,
        }
    }

    /// Custom constants; each must be finite and strictly positive.
    pub fn new(c: f64, hbar: f64, epsilon0: f64) -> Result<Self> {
        for (name, value) in [("c", c), ("hbar", hbar), ("epsilon0", epsilon0)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        Ok(PhysicalConstants { c, hbar, epsilon0 })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    /// Angular frequency of the mode with wavenumber `k`.
    pub fn omega(&self, k: f64) -> f64 {
        self.c * k
    }
}

/// Complex electric field sampled on a uniform position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionField {
    layout: CartesianLayout,
    values: Vec<Vector3<Complex64>>,
    time: f64,
}

impl PositionField {
    pub fn new(layout: CartesianLayout, values: Vec<Vector3<Complex64>>, time: f64) -> Result<Self> {
        if layout.len() != values.len() {
            return Err(Error::LengthMismatch {
                grid: layout.len(),
                data: values.len(),
            });
        }
        Ok(PositionField {
            layout,
            values,
            time,
        })
    }

    pub fn layout(&self) -> &CartesianLayout {
        &self.layout
    }

    pub fn values(&self) -> &[Vector3<Complex64>] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }
}

/// Advances a momentum field by `t`: each sample picks up
/// `exp(-i omega t)` with omega = c |k|.
///
/// Amplitudes are untouched, so the map is norm-preserving for any `t` and
/// composes additively: evolving by t1 then t2 equals evolving by t1 + t2.
pub fn evolve(field: &MomentumField, t: f64, constants: &PhysicalConstants) -> MomentumField {
    let values = field
        .values()
        .iter()
        .zip(field.grid().samples())
        .map(|(f, k)| f * Complex64::from_polar(1.0, -constants.omega(k.magnitude()) * t))
        .collect();
    MomentumField::new(field.grid().clone(), values, field.time() + t)
        .expect("evolved values match the grid length by construction")
}

/// Field energy `sum hbar omega |f|^2 weight` over the grid.
pub fn energy(field: &MomentumField, constants: &PhysicalConstants) -> f64 {
    field
        .values()
        .iter()
        .zip(field.grid().samples())
        .zip(field.grid().weights())
        .map(|((f, k), w)| constants.hbar() * constants.omega(k.magnitude()) * f.norm_squared() * w)
        .sum()
}

/// Worst-case relative spectral divergence `max |k . f| / (|k| |f|)`.
///
/// This is the momentum-space reading of `div E = 0` for the synthesized
/// field: each plane-wave component contributes `i k . f e^(i k.x)` to the
/// divergence, so the residual bounds it mode by mode. Zero-amplitude
/// samples contribute nothing.
pub fn divergence_check(field: &MomentumField) -> f64 {
    field.transversality_residual()
}

/// In-place unnormalized inverse DFT along one axis of a flat z-fastest
/// 3-d array.
fn fft_lines(data: &mut [Complex64], shape: [usize; 3], axis: usize, fft: &Arc<dyn Fft<f64>>) {
    let n = shape[axis];
    let stride = match axis {
        0 => shape[1] * shape[2],
        1 => shape[2],
        _ => 1,
    };
    let (oa, ob) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for a in 0..shape[oa] {
        for b in 0..shape[ob] {
            let mut idx = [0usize; 3];
            idx[oa] = a;
            idx[ob] = b;
            let base = (idx[0] * shape[1] + idx[1]) * shape[2] + idx[2];
            for m in 0..n {
                line[m] = data[base + m * stride];
            }
            fft.process(&mut line);
            for m in 0..n {
                data[base + m * stride] = line[m];
            }
        }
    }
}

/// Synthesizes the complex electric field on the position grid conjugate to
/// the momentum grid.
///
/// The output grid has `dx_a = 2 pi / (n_a dk_a)` and is centered like the
/// momentum grid: sample j sits at `x = (j - floor(n/2)) dx` per axis. With
/// momentum samples `k_m = k0 + m dk` the sum factors as
///
/// ```text
/// E(x_j) = (2 pi)^(-3/2) dk^3 e^(i k0.x_j) IDFT[ g_m e^(-2 pi i m.o / n) ](j)
/// ```
///
/// where `g = sqrt(hbar omega / epsilon0) f`, `o = floor(n/2)`, and the IDFT
/// is the unnormalized `e^(+2 pi i m.j / n)` sum; the three phase factors
/// and the prefactor appear below exactly in this form.
///
/// Requires a Cartesian grid; generic sample lists have no conjugate grid.
pub fn position_field(
    field: &MomentumField,
    constants: &PhysicalConstants,
) -> Result<PositionField> {
    let layout = *field.grid().layout().ok_or(Error::NonCartesianGrid)?;
    let [nx, ny, nz] = layout.shape;
    let dk = layout.spacing;
    let n_total = layout.len();

    let dx = [
        TAU / (nx as f64 * dk[0]),
        TAU / (ny as f64 * dk[1]),
        TAU / (nz as f64 * dk[2]),
    ];
    let offset = [nx / 2, ny / 2, nz / 2];

    // index phase that re-centers position sample 0 at x = -o dx
    let pre = |n: usize, o: usize| -> Vec<Complex64> {
        (0..n)
            .map(|m| Complex64::from_polar(1.0, -TAU * m as f64 * o as f64 / n as f64))
            .collect()
    };
    let pre_x = pre(nx, offset[0]);
    let pre_y = pre(ny, offset[1]);
    let pre_z = pre(nz, offset[2]);

    // carrier phase e^(i k0 . x_j) of the grid origin, separable per axis
    let post = |n: usize, o: usize, k0: f64, dx: f64| -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::from_polar(1.0, k0 * (j as f64 - o as f64) * dx))
            .collect()
    };
    let post_x = post(nx, offset[0], layout.origin[0], dx[0]);
    let post_y = post(ny, offset[1], layout.origin[1], dx[1]);
    let post_z = post(nz, offset[2], layout.origin[2], dx[2]);

    let scale = dk[0] * dk[1] * dk[2] / TAU.powf(1.5);
    let spectral: Vec<f64> = field
        .grid()
        .samples()
        .iter()
        .map(|k| (constants.hbar() * constants.omega(k.magnitude()) / constants.epsilon0()).sqrt())
        .collect();

    let mut planner = FftPlanner::new();
    let fft_x = planner.plan_fft_inverse(nx);
    let fft_y = planner.plan_fft_inverse(ny);
    let fft_z = planner.plan_fft_inverse(nz);

    let mut values = vec![Vector3::from_element(Complex64::new(0.0, 0.0)); n_total];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n_total];
    for component in 0..3 {
        for (i, slot) in scratch.iter_mut().enumerate() {
            let [ix, iy, iz] = layout.coords(i);
            *slot = field.values()[i][component] * spectral[i] * pre_x[ix] * pre_y[iy] * pre_z[iz];
        }
        fft_lines(&mut scratch, layout.shape, 2, &fft_z);
        fft_lines(&mut scratch, layout.shape, 1, &fft_y);
        fft_lines(&mut scratch, layout.shape, 0, &fft_x);
        for (j, value) in scratch.iter().enumerate() {
            let [jx, jy, jz] = layout.coords(j);
            values[j][component] = value * post_x[jx] * post_y[jy] * post_z[jz] * scale;
        }
    }

    Ok(PositionField {
        layout: CartesianLayout {
            shape: layout.shape,
            spacing: dx,
            origin: [
                -(offset[0] as f64) * dx[0],
                -(offset[1] as f64) * dx[1],
                -(offset[2] as f64) * dx[2],
            ],
        },
        values,
        time: field.time(),
    })
}

/// The real electric field `(E + conj E) / sqrt 2`, componentwise.
///
/// The conjugate pair cancels the imaginary part identically, so the result
/// is real by construction and returned as such.
pub fn real_field(field: &PositionField) -> Vec<Vector3<f64>> {
    field
        .values()
        .iter()
        .map(|e| Vector3::new(e.x.re * SQRT_2, e.y.re * SQRT_2, e.z.re * SQRT_2))
        .collect()
}
