//! Gaussian wave-packet constructors: uniform-polarization, radial, and
//! azimuthal beams.
//!
//! All three share a scalar envelope `exp(-|k - kc n|^2 / (2 sigma^2))`
//! centered on the carrier `kc n` along the beam axis `n`. They differ in
//! how polarization is painted onto it:
//!
//! * uniform: the same Jones components in the declared gauge at every
//!   sample — a product of a momentum profile and a fixed polarization;
//! * radial: the local `u` axis of the *axis* gauge (`I = n`) at every
//!   sample, so the field everywhere points "outward" in the meridional
//!   plane of its own wavevector;
//! * azimuthal: the local `v` axis of the axis gauge, the tangential
//!   companion.
//!
//! Radial and azimuthal beams are the cylindrical vector beams: their Jones
//! representation in the axis gauge is the constant `(1, 0)` or `(0, 1)`,
//! while in any fixed transverse gauge the components wind once around the
//! axis — the textbook example of polarization-momentum structure.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::{local_frame, GaugeVector, SINGULAR_GAUGE_TOL};
use crate::planewave::JonesVector;

use super::{MomentumField, MomentumGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamKind {
    /// Gaussian envelope with constant Jones components in the declared gauge.
    UniformGaussian,
    /// Field along the axis gauge's `u(k)` everywhere.
    Radial,
    /// Field along the axis gauge's `v(k)` everywhere.
    Azimuthal,
}

/// Everything needed to build a beam on a centered Cartesian grid.
#[derive(Debug, Clone)]
pub struct BeamParams {
    pub kind: BeamKind,
    /// Beam axis; normalized internally, must be nonzero.
    pub axis: Vector3<f64>,
    /// Carrier wavenumber: the envelope is centered at `center_k * axis`.
    pub center_k: f64,
    /// Gaussian width in wavenumber units.
    pub width: f64,
    /// Grid extents per axis; must be even so no sample lands on a
    /// coordinate plane through the grid center.
    pub shape: [usize; 3],
    pub spacing: [f64; 3],
    /// Gauge recorded for downstream Jones maps; also the construction gauge
    /// for the uniform kind.
    pub gauge: GaugeVector,
    /// Jones components for the uniform kind; ignored by the others.
    pub jones: JonesVector,
    /// Scale to unit weighted norm after construction.
    pub normalize: bool,
}

impl BeamParams {
    /// A beam along `+z` with sensible defaults: unit Jones `(1, 0)`,
    /// normalized output.
    pub fn along_z(kind: BeamKind, center_k: f64, width: f64, shape: [usize; 3], spacing: [f64; 3], gauge: GaugeVector) -> Self {
        BeamParams {
            kind,
            axis: Vector3::z(),
            center_k,
            width,
            shape,
            spacing,
            gauge,
            jones: JonesVector::new(Complex64::from(1.0), Complex64::from(0.0)),
            normalize: true,
        }
    }
}

/// Builds the beam. The output is transverse by construction (every value is
/// a combination of local transverse axes) and normalized when requested.
pub fn make_beam(params: &BeamParams) -> Result<MomentumField> {
    if !(params.width > 0.0 && params.width.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beam width must be positive and finite, got {}",
            params.width
        )));
    }
    if !params.center_k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "carrier wavenumber must be finite, got {}",
            params.center_k
        )));
    }
    for (a, n) in params.shape.iter().enumerate() {
        if n % 2 != 0 || *n == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid extents must be positive and even to keep samples off the axis planes, axis {a} is {n}"
            )));
        }
    }
    let axis = GaugeVector::from_vector(params.axis)?;
    let center = axis.direction() * params.center_k;
    let grid = MomentumGrid::centered(params.shape, params.spacing, center)?;

    // both the construction gauge and the declared gauge must clear the grid
    let construction_gauge = match params.kind {
        BeamKind::UniformGaussian => params.gauge,
        BeamKind::Radial | BeamKind::Azimuthal => axis,
    };
    for gauge in [&construction_gauge, &params.gauge] {
        let (residual, sample) = grid.min_gauge_residual(gauge);
        if residual < SINGULAR_GAUGE_TOL {
            return Err(Error::SingularGauge {
                residual,
                tolerance: SINGULAR_GAUGE_TOL,
                sample: Some(sample),
            });
        }
    }

    let jones = match params.kind {
        BeamKind::UniformGaussian => params
            .jones
            .normalized()
            .map_err(|_| Error::InvalidParameter("uniform beam needs nonzero Jones components".into()))?,
        BeamKind::Radial => JonesVector::new(Complex64::from(1.0), Complex64::from(0.0)),
        BeamKind::Azimuthal => JonesVector::new(Complex64::from(0.0), Complex64::from(1.0)),
    };

    let two_sigma_sq = 2.0 * params.width * params.width;
    let values = grid
        .samples()
        .iter()
        .map(|k| {
            let envelope = (-(k.vector() - center).norm_squared() / two_sigma_sq).exp();
            let frame = local_frame(k, &construction_gauge)
                .expect("construction gauge cleared the grid above");
            frame.matrix().embed(&jones.as_vector()) * Complex64::from(envelope)
        })
        .collect();

    let field = MomentumField::new(grid, values, 0.0)?;
    if params.normalize {
        field.normalized()
    } else {
        Ok(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfield::{jones_field, schmidt, stokes_field};
    use approx::assert_abs_diff_eq;

    fn base(kind: BeamKind) -> BeamParams {
        BeamParams::along_z(kind, 6.0, 1.0, [8, 8, 8], [0.5, 0.5, 0.5], GaugeVector::z())
    }

    #[test]
    fn beams_are_transverse_normalized_and_time_zero() {
        for kind in [BeamKind::UniformGaussian, BeamKind::Radial, BeamKind::Azimuthal] {
            let field = make_beam(&base(kind)).unwrap();
            assert!(field.transversality_residual() <= 1e-12);
            assert!((field.norm_squared() - 1.0).abs() <= 1e-12);
            assert_eq!(field.time(), 0.0);
        }
    }

    #[test]
    fn uniform_beam_has_constant_stokes_components() {
        let mut params = base(BeamKind::UniformGaussian);
        params.jones = JonesVector::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let field = make_beam(&params).unwrap();
        let sf = stokes_field(&jones_field(&field, &params.gauge).unwrap());
        let first = sf.components()[0];
        for s in sf.components() {
            for i in 0..3 {
                assert!((s[i] - first[i]).abs() <= 1e-12);
            }
        }
        // and it is a product state
        let report = schmidt(&jones_field(&field, &params.gauge).unwrap()).unwrap();
        assert!(report.entropy() <= 1e-10);
    }

    #[test]
    fn radial_beam_polarization_follows_u() {
        let field = make_beam(&base(BeamKind::Radial)).unwrap();
        let gauge = GaugeVector::z();
        let sf = stokes_field(&jones_field(&field, &gauge).unwrap());
        for (i, k) in field.grid().samples().iter().enumerate() {
            let u = *local_frame(k, &gauge).unwrap().u();
            assert_abs_diff_eq!(sf.lab_vectors()[i], u, epsilon = 1e-10);
        }
    }

    #[test]
    fn azimuthal_beam_polarization_opposes_u() {
        let field = make_beam(&base(BeamKind::Azimuthal)).unwrap();
        let gauge = GaugeVector::z();
        let sf = stokes_field(&jones_field(&field, &gauge).unwrap());
        for (i, k) in field.grid().samples().iter().enumerate() {
            let u = *local_frame(k, &gauge).unwrap().u();
            assert_abs_diff_eq!(sf.lab_vectors()[i], -u, epsilon = 1e-10);
        }
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let mut params = base(BeamKind::Radial);
        params.width = 0.0;
        assert!(make_beam(&params).is_err());

        let mut params = base(BeamKind::Radial);
        params.shape = [7, 8, 8];
        assert!(make_beam(&params).is_err());

        let mut params = base(BeamKind::UniformGaussian);
        params.jones = JonesVector::new(Complex64::from(0.0), Complex64::from(0.0));
        assert!(make_beam(&params).is_err());

        let mut params = base(BeamKind::Radial);
        params.axis = Vector3::zeros();
        assert!(make_beam(&params).is_err());
    }

    #[test]
    fn beam_off_axis_gauge_works_but_axis_aligned_grid_conflicts_do_not() {
        // declared transverse gauge: fine, the grid avoids both axes
        let mut params = base(BeamKind::Radial);
        params.gauge = GaugeVector::x();
        let field = make_beam(&params).unwrap();
        assert!(jones_field(&field, &GaugeVector::x()).is_ok());
    }
}
