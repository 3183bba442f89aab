//! Sampled momentum-space photon fields.
//!
//! A state is stored as a complex 3-vector amplitude `F(k)` on a quadrature
//! grid. Everything polarization-related factors per sample through the
//! plane-wave algebra: pick a gauge, build the local frame at each `k`, and
//! read off a Jones vector — giving a [`JonesField`], the whole-field analog
//! of a single Jones vector. Gauge transformations, Stokes maps, and the
//! fixed-components regauging observable are then per-sample maps, while the
//! Schmidt decomposition in [`schmidt`] is the one genuinely global
//! operation, quantifying how much the polarization pattern varies across
//! the momentum distribution.
//!
//! Samples whose amplitude is negligible relative to the field maximum carry
//! no direction information (`F/|F|` is undefined at zero) and are flagged
//! void: they hold zero Jones/Stokes data and are skipped in reductions.

mod beam;
mod grid;
mod schmidt;

pub use beam::{make_beam, BeamKind, BeamParams};
pub use grid::{CartesianLayout, MomentumGrid};
pub use schmidt::{schmidt, SchmidtReport};

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::{local_frame, GaugeVector, SINGULAR_GAUGE_TOL};
use crate::planewave::{gauge_rotate_jones, jones_from_evector, stokes, JonesVector, UnitEVector};

/// Relative amplitude below which a sample is treated as void.
pub const VOID_TOL: f64 = 1e-14;

/// Complex 3-vector amplitudes `F(k)` on a momentum grid at a common time.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumField {
    grid: MomentumGrid,
    values: Vec<Vector3<Complex64>>,
    time: f64,
}

impl MomentumField {
    pub fn new(grid: MomentumGrid, values: Vec<Vector3<Complex64>>, time: f64) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch {
                grid: grid.len(),
                data: values.len(),
            });
        }
        Ok(MomentumField { grid, values, time })
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Vector3<Complex64>] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn max_amplitude(&self) -> f64 {
        self.values.iter().map(|f| f.norm()).fold(0.0, f64::max)
    }

    /// Quadrature-weighted squared norm `sum |F|^2 weight`, summed in sample
    /// order so the result is deterministic.
    pub fn norm_squared(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(f, w)| f.norm_squared() * w)
            .sum()
    }

    /// Scales to unit weighted norm.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_squared();
        if n2 <= 0.0 {
            return Err(Error::AllZeroField);
        }
        let scale = Complex64::from(1.0 / n2.sqrt());
        Ok(MomentumField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|f| f * scale).collect(),
            time: self.time,
        })
    }

    /// Worst per-sample `|F . w| / |F|`; zero-amplitude samples are skipped.
    pub fn transversality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (f, k) in self.values.iter().zip(self.grid.samples()) {
            let amp = f.norm();
            if amp == 0.0 {
                continue;
            }
            let w = k.unit();
            let dot = f.x * w.x + f.y * w.y + f.z * w.z;
            worst = worst.max(dot.norm() / amp);
        }
        worst
    }
}

/// Projects every sample onto the plane transverse to its wavevector:
/// `F <- F - w (w . F)`. Idempotent; the output satisfies the
/// transversality constraint to rounding.
pub fn project_transverse(field: &MomentumField) -> MomentumField {
    let values = field
        .values
        .iter()
        .zip(field.grid.samples())
        .map(|(f, k)| {
            let w = k.unit();
            let dot = f.x * w.x + f.y * w.y + f.z * w.z;
            f - w.map(Complex64::from) * dot
        })
        .collect();
    MomentumField {
        grid: field.grid.clone(),
        values,
        time: field.time,
    }
}

/// A field split into per-sample unit directions and real amplitudes,
/// `F(k) = |F(k)| a(k)`.
#[derive(Debug, Clone)]
pub struct UnitVwf {
    grid: MomentumGrid,
    directions: Vec<Vector3<Complex64>>,
    amplitudes: Vec<f64>,
    void: Vec<bool>,
    time: f64,
}

impl UnitVwf {
    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    /// Unit directions; zero vectors at void samples.
    pub fn directions(&self) -> &[Vector3<Complex64>] {
        &self.directions
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn void(&self) -> &[bool] {
        &self.void
    }

    pub fn time(&self) -> f64 {
        self.time
    }
}

/// Splits a field into unit directions and amplitudes. Samples with
/// `|F| <= VOID_TOL * max|F|` are flagged void and keep a zero direction.
pub fn unit_vwf(field: &MomentumField) -> Result<UnitVwf> {
    let max = field.max_amplitude();
    if max == 0.0 {
        return Err(Error::AllZeroField);
    }
    let threshold = VOID_TOL * max;
    let n = field.values.len();
    let mut directions = Vec::with_capacity(n);
    let mut amplitudes = Vec::with_capacity(n);
    let mut void = Vec::with_capacity(n);
    for f in &field.values {
        let amp = f.norm();
        if amp <= threshold {
            directions.push(Vector3::zeros());
            amplitudes.push(amp);
            void.push(true);
        } else {
            directions.push(f / Complex64::from(amp));
            amplitudes.push(amp);
            void.push(false);
        }
    }
    Ok(UnitVwf {
        grid: field.grid.clone(),
        directions,
        amplitudes,
        void,
        time: field.time,
    })
}

fn validate_gauge(grid: &MomentumGrid, gauge: &GaugeVector) -> Result<()> {
    let (residual, sample) = grid.min_gauge_residual(gauge);
    if residual < SINGULAR_GAUGE_TOL {
        return Err(Error::SingularGauge {
            residual,
            tolerance: SINGULAR_GAUGE_TOL,
            sample: Some(sample),
        });
    }
    Ok(())
}

fn at_sample(err: Error, index: usize) -> Error {
    match err {
        Error::SingularGauge {
            residual,
            tolerance,
            ..
        } => Error::SingularGauge {
            residual,
            tolerance,
            sample: Some(index),
        },
        Error::TransversalityViolation {
            residual,
            tolerance,
            ..
        } => Error::TransversalityViolation {
            residual,
            tolerance,
            sample: Some(index),
        },
        other => other,
    }
}

/// Per-sample Jones vectors in a declared gauge, with the amplitudes that
/// scale them back to field values.
#[derive(Debug, Clone)]
pub struct JonesField {
    grid: MomentumGrid,
    jones: Vec<JonesVector>,
    amplitudes: Vec<f64>,
    void: Vec<bool>,
    gauge: GaugeVector,
    time: f64,
}

impl JonesField {
    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    /// Unit Jones vectors; zero at void samples.
    pub fn jones(&self) -> &[JonesVector] {
        &self.jones
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn void(&self) -> &[bool] {
        &self.void
    }

    pub fn gauge(&self) -> &GaugeVector {
        &self.gauge
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.jones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jones.is_empty()
    }

    /// Total quadrature-weighted intensity `sum weight |F|^2`.
    pub fn intensity(&self) -> f64 {
        self.amplitudes
            .iter()
            .zip(self.grid.weights())
            .map(|(a, w)| a * a * w)
            .sum()
    }

    /// Rebuilds the vector field `|F| varpi a~` this representation encodes.
    pub fn reconstruct(&self) -> MomentumField {
        let values = (0..self.len())
            .map(|i| {
                if self.void[i] {
                    return Vector3::zeros();
                }
                let frame = local_frame(&self.grid.samples()[i], &self.gauge)
                    .expect("gauge was validated when the JonesField was built");
                frame.matrix().embed(&self.jones[i].as_vector()) * Complex64::from(self.amplitudes[i])
            })
            .collect();
        MomentumField {
            grid: self.grid.clone(),
            values,
            time: self.time,
        }
    }
}

/// Reads a field's polarization in the gauge `I`: per-sample
/// `a~(k) = varpi^dag(k) a(k)`.
///
/// Fails if the gauge axis comes within tolerance of any sample direction or
/// if any non-void sample is not transverse; both errors carry the offending
/// sample index.
pub fn jones_field(field: &MomentumField, gauge: &GaugeVector) -> Result<JonesField> {
    validate_gauge(&field.grid, gauge)?;
    let unit = unit_vwf(field)?;
    let n = unit.directions.len();
    let mut jones = Vec::with_capacity(n);
    for i in 0..n {
        if unit.void[i] {
            jones.push(JonesVector::new(Complex64::from(0.0), Complex64::from(0.0)));
            continue;
        }
        let frame = local_frame(&field.grid.samples()[i], gauge)
            .expect("gauge residual checked for the whole grid above");
        let direction = UnitEVector::new(unit.directions[i]).map_err(|e| at_sample(e, i))?;
        let j = jones_from_evector(&direction, &frame.matrix()).map_err(|e| at_sample(e, i))?;
        jones.push(j);
    }
    Ok(JonesField {
        grid: field.grid.clone(),
        jones,
        amplitudes: unit.amplitudes,
        void: unit.void,
        gauge: *gauge,
        time: field.time,
    })
}

/// Re-expresses a Jones field in a new gauge: per-sample rotation of the
/// Jones components by the local gauge angle. The physical state is
/// unchanged — reconstructing before and after gives the same field.
pub fn gauge_transform(jf: &JonesField, gauge_new: &GaugeVector) -> Result<JonesField> {
    validate_gauge(&jf.grid, gauge_new)?;
    let jones = (0..jf.len())
        .map(|i| {
            if jf.void[i] {
                return jf.jones[i];
            }
            let phi = crate::frames::gauge_angle(&jf.grid.samples()[i], &jf.gauge, gauge_new)
                .expect("both gauges validated against the grid");
            gauge_rotate_jones(&jf.jones[i], phi)
        })
        .collect();
    Ok(JonesField {
        grid: jf.grid.clone(),
        jones,
        amplitudes: jf.amplitudes.clone(),
        void: jf.void.clone(),
        gauge: *gauge_new,
        time: jf.time,
    })
}

/// Per-sample Stokes components in the field's gauge and the lab-frame
/// polarization vectors they combine into.
#[derive(Debug, Clone)]
pub struct StokesField {
    grid: MomentumGrid,
    components: Vec<[f64; 3]>,
    lab: Vec<Vector3<f64>>,
    void: Vec<bool>,
    gauge: GaugeVector,
}

impl StokesField {
    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    /// `(s1, s2, s3)` per sample; zeros at void samples.
    pub fn components(&self) -> &[[f64; 3]] {
        &self.components
    }

    /// `s1 u + s2 v + s3 w` per sample.
    pub fn lab_vectors(&self) -> &[Vector3<f64>] {
        &self.lab
    }

    pub fn void(&self) -> &[bool] {
        &self.void
    }

    pub fn gauge(&self) -> &GaugeVector {
        &self.gauge
    }
}

/// Evaluates the Stokes map of a Jones field sample by sample.
pub fn stokes_field(jf: &JonesField) -> StokesField {
    let n = jf.len();
    let mut components = Vec::with_capacity(n);
    let mut lab = Vec::with_capacity(n);
    for i in 0..n {
        if jf.void[i] {
            components.push([0.0; 3]);
            lab.push(Vector3::zeros());
            continue;
        }
        let (s1, s2, s3) = stokes(&jf.jones[i]);
        components.push([s1, s2, s3]);
        let frame = local_frame(&jf.grid.samples()[i], &jf.gauge)
            .expect("gauge was validated when the JonesField was built");
        lab.push(frame.u() * s1 + frame.v() * s2 + frame.w() * s3);
    }
    StokesField {
        grid: jf.grid.clone(),
        components,
        lab,
        void: jf.void.clone(),
        gauge: jf.gauge,
    }
}

/// The regauging observable: keep every sample's Jones components, rebuild
/// the field in the frames of `gauge_new`. Unlike [`gauge_transform`] this
/// produces a *different* physical field — each sample rotated about its own
/// wavevector by the local gauge angle.
pub fn regauge_fixed_field(jf: &JonesField, gauge_new: &GaugeVector) -> Result<MomentumField> {
    validate_gauge(&jf.grid, gauge_new)?;
    let values = (0..jf.len())
        .map(|i| {
            if jf.void[i] {
                return Vector3::zeros();
            }
            let frame = local_frame(&jf.grid.samples()[i], gauge_new)
                .expect("new gauge validated against the grid above");
            frame.matrix().embed(&jf.jones[i].as_vector()) * Complex64::from(jf.amplitudes[i])
        })
        .collect();
    Ok(MomentumField {
        grid: jf.grid.clone(),
        values,
        time: jf.time,
    })
}
