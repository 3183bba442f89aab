//! Local transverse frames attached to wavevectors.
//!
//! The transversality constraint leaves a photon's field with two degrees of
//! freedom per wavevector, but it does not say *which* two axes span the
//! transverse plane: any pair obtained by rotating another about the
//! wavevector works equally well. The choice is fixed here the classical-
//! optics way, with a constant unit vector `I` (the gauge vector):
//!
//! ```text
//! w = k / |k|,   v = (I x k) / |I x k|,   u = v x w
//! ```
//!
//! which fails exactly where `I` is (anti)parallel to `k` — the gauge axis.
//! [`local_frame`] refuses wavevectors within [`SINGULAR_GAUGE_TOL`] of that
//! axis rather than inventing a fallback, because a silent fallback would
//! make gauge-transformation identities untestable.
//!
//! Two gauges are related at each `k` by a rotation about `w`; the angle is
//! computed by [`gauge_angle`] with a fixed branch in `(-pi, pi]`. The sign
//! convention: `gauge_angle(k, I, I')` is the right-handed angle that carries
//! the `I`-frame axes onto the `I'`-frame axes.

use nalgebra::{Matrix3, Matrix3x2, Vector2, Vector3};
use num_complex::Complex64;

use crate::algebra::wrap_angle;
use crate::error::{Error, Result};

/// Minimum allowed value of `|I x k| / (|I| |k|)`, the sine of the angle
/// between gauge vector and wavevector.
pub const SINGULAR_GAUGE_TOL: f64 = 1e-9;

/// The constant unit vector that fixes the transverse axes at every
/// wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeVector {
    direction: Vector3<f64>,
}

impl GaugeVector {
    /// Wraps a vector that is already unit to within 1e-12.
    pub fn new(direction: Vector3<f64>) -> Result<Self> {
        let norm = direction.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotAUnitVector { norm });
        }
        Ok(GaugeVector { direction })
    }

    /// Normalizes an arbitrary nonzero vector into a gauge direction.
    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gauge vector must be nonzero and finite, got norm {norm}"
            )));
        }
        Ok(GaugeVector { direction: v / norm })
    }

    pub fn x() -> Self {
        GaugeVector { direction: Vector3::x() }
    }

    pub fn y() -> Self {
        GaugeVector { direction: Vector3::y() }
    }

    pub fn z() -> Self {
        GaugeVector { direction: Vector3::z() }
    }

    pub fn direction(&self) -> &Vector3<f64> {
        &self.direction
    }
}

/// A nonzero wavevector. Magnitude carries the angular frequency through
/// `omega = c |k|`; the unit vector `w` orients the local frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    k: Vector3<f64>,
}

impl WaveVector {
    pub fn new(k: Vector3<f64>) -> Result<Self> {
        let norm = k.norm();
        if !norm.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "wavevector must be finite, got norm {norm}"
            )));
        }
        if norm == 0.0 {
            return Err(Error::ZeroWaveVector);
        }
        Ok(WaveVector { k })
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.k
    }

    pub fn magnitude(&self) -> f64 {
        self.k.norm()
    }

    /// The unit wavevector `w = k / |k|`.
    pub fn unit(&self) -> Vector3<f64> {
        self.k / self.k.norm()
    }
}

/// Right-handed orthonormal triad `(u, v, w)` with `w` along the wavevector,
/// plus the gauge that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    u: Vector3<f64>,
    v: Vector3<f64>,
    w: Vector3<f64>,
    gauge: GaugeVector,
}

impl LocalFrame {
    /// Builds a frame from explicit transverse axes; `w = u x v`.
    ///
    /// The stored gauge is `-u`: the unique transverse gauge direction whose
    /// cross-product construction regenerates exactly this frame.
    pub fn from_axes(u: Vector3<f64>, v: Vector3<f64>) -> Result<Self> {
        for axis in [&u, &v] {
            let norm = axis.norm();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::NotAUnitVector { norm });
            }
        }
        let dot = u.dot(&v);
        if dot.abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "transverse axes must be orthogonal, got u.v = {dot:e}"
            )));
        }
        let w = u.cross(&v);
        let gauge = GaugeVector::from_vector(-u)?;
        Ok(LocalFrame { u, v, w, gauge })
    }

    pub fn u(&self) -> &Vector3<f64> {
        &self.u
    }

    pub fn v(&self) -> &Vector3<f64> {
        &self.v
    }

    pub fn w(&self) -> &Vector3<f64> {
        &self.w
    }

    pub fn gauge(&self) -> &GaugeVector {
        &self.gauge
    }

    /// The quasi-unitary matrix with columns `u` and `v`.
    pub fn matrix(&self) -> FrameMatrix {
        frame_matrix(self)
    }
}

/// The 3x2 matrix `(u v)`. Entries are real by construction but stored
/// complex so products with complex amplitudes need no promotion.
///
/// It is quasi-unitary: the 2x2 Gram matrix is the identity, while the 3x3
/// product in the other order is the projector onto the transverse plane
/// (a rank-2 matrix, so it can only act as the identity on vectors already
/// orthogonal to `w`).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    varpi: Matrix3x2<Complex64>,
    w: Vector3<f64>,
}

impl FrameMatrix {
    pub fn matrix(&self) -> &Matrix3x2<Complex64> {
        &self.varpi
    }

    pub fn w(&self) -> &Vector3<f64> {
        &self.w
    }

    /// Jones components of a transverse amplitude: `varpi^dag a`.
    pub fn project(&self, a: &Vector3<Complex64>) -> Vector2<Complex64> {
        self.varpi.adjoint() * a
    }

    /// Amplitude of a Jones vector: `varpi a~`.
    pub fn embed(&self, jones: &Vector2<Complex64>) -> Vector3<Complex64> {
        self.varpi * jones
    }

    /// Max-norm of `varpi^dag varpi - I2`.
    pub fn gram_residual(&self) -> f64 {
        let gram = self.varpi.adjoint() * self.varpi;
        let mut r = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                r = r.max((gram[(i, j)] - Complex64::from(expect)).norm());
            }
        }
        r
    }

    /// Max-norm of `varpi varpi^dag - (I3 - w w^T)`.
    pub fn projector_residual(&self) -> f64 {
        let outer = self.varpi * self.varpi.adjoint();
        let projector = Matrix3::identity() - self.w * self.w.transpose();
        let mut r = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                r = r.max((outer[(i, j)] - Complex64::from(projector[(i, j)])).norm());
            }
        }
        r
    }
}

/// Constructs the local frame at `k` in gauge `I`.
///
/// Fails with `SingularGauge` when the gauge axis passes within
/// [`SINGULAR_GAUGE_TOL`] of the wavevector direction; grids are expected to
/// keep their samples off that axis instead of relying on a fallback.
pub fn local_frame(k: &WaveVector, gauge: &GaugeVector) -> Result<LocalFrame> {
    let w = k.unit();
    let cross = gauge.direction().cross(&w);
    let residual = cross.norm();
    if residual < SINGULAR_GAUGE_TOL {
        return Err(Error::SingularGauge {
            residual,
            tolerance: SINGULAR_GAUGE_TOL,
            sample: None,
        });
    }
    let v = cross / residual;
    let u = v.cross(&w);
    Ok(LocalFrame { u, v, w, gauge: *gauge })
}

/// The quasi-unitary matrix of a frame.
pub fn frame_matrix(frame: &LocalFrame) -> FrameMatrix {
    let varpi = Matrix3x2::from_columns(&[
        frame.u.map(Complex64::from),
        frame.v.map(Complex64::from),
    ]);
    FrameMatrix { varpi, w: frame.w }
}

/// The orthogonal projector `I3 - w w^T` onto the plane transverse to `w`.
pub fn transverse_projector(w: &Vector3<f64>) -> Result<Matrix3<f64>> {
    let norm = w.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotAUnitVector { norm });
    }
    Ok(Matrix3::identity() - w * w.transpose())
}

/// The rotation angle about `w = k/|k|` carrying the `gauge_old` frame onto
/// the `gauge_new` frame, in `(-pi, pi]`.
///
/// Satisfies `rot_so3(w, angle) * u_old = u_new` (same for `v`); equal and
/// opposite under swapping the gauges, modulo the branch cut.
pub fn gauge_angle(k: &WaveVector, gauge_old: &GaugeVector, gauge_new: &GaugeVector) -> Result<f64> {
    let old = local_frame(k, gauge_old)?;
    let new = local_frame(k, gauge_new)?;
    let sine = new.u().dot(old.v());
    let cosine = new.u().dot(old.u());
    Ok(wrap_angle(sine.atan2(cosine)))
}
