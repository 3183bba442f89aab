//! Single-mode polarization algebra: Jones vectors, Stokes parameters, the
//! lab-frame polarization vector, and the two distinct gauge operations.
//!
//! A plane wave's complex field direction `a` (a unit 3-vector transverse to
//! the wavevector) and its Jones vector `a~` are two descriptions of the same
//! state, connected by the frame matrix: `a = varpi a~` and `a~ = varpi^dag a`.
//! Everything downstream of the frame choice is gauge-dependent, and the two
//! ways of changing gauge must not be confused:
//!
//! * [`gauge_rotate_jones`] re-expresses the *same* physical state in a frame
//!   rotated by `phi` about `w`. The field vector is untouched; the Stokes
//!   components mix with angle `2 phi`.
//! * [`regauge_fixed_jones`] keeps the Jones components and switches their
//!   frame — a *different* physical state whose field vector is rotated by
//!   `phi` about `w` and whose polarization vector is rotated by `2 phi`.
//!
//! The double angle is the signature of the polarization two-sphere: a
//! quarter-turn of the field about the propagation axis carries horizontal
//! polarization all the way to its antipode on the equator.

use nalgebra::{Vector2, Vector3};
use num_complex::Complex64;

use crate::algebra::{rot_jones, Sign};
use crate::error::{Error, Result};
use crate::frames::{FrameMatrix, LocalFrame};

/// Largest tolerated `|a . w|` before a field vector is rejected as
/// non-transverse.
pub const TRANSVERSALITY_TOL: f64 = 1e-8;

/// Two complex amplitudes on the local transverse axes `(u, v)`.
///
/// Not constrained to unit norm; operations that require normalization say
/// so. `a1` multiplies `u`, `a2` multiplies `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    pub a1: Complex64,
    pub a2: Complex64,
}

impl JonesVector {
    pub fn new(a1: Complex64, a2: Complex64) -> Self {
        JonesVector { a1, a2 }
    }

    pub fn from_vector(v: Vector2<Complex64>) -> Self {
        JonesVector { a1: v.x, a2: v.y }
    }

    pub fn as_vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.a1, self.a2)
    }

    pub fn norm(&self) -> f64 {
        (self.a1.norm_sqr() + self.a2.norm_sqr()).sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::AllZeroField);
        }
        Ok(JonesVector {
            a1: self.a1 / n,
            a2: self.a2 / n,
        })
    }
}

/// A unit complex 3-vector: the direction of a single mode's electric field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitEVector {
    a: Vector3<Complex64>,
}

impl UnitEVector {
    /// Wraps a vector that is unit to within 1e-12. Transversality is a
    /// property relative to a wavevector and is checked where a frame is
    /// supplied, not here.
    pub fn new(a: Vector3<Complex64>) -> Result<Self> {
        let norm = a.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotAUnitVector { norm });
        }
        Ok(UnitEVector { a })
    }

    pub fn vector(&self) -> &Vector3<Complex64> {
        &self.a
    }

    /// `|a . w|`: zero for a field transverse to `w`.
    pub fn transversality_residual(&self, w: &Vector3<f64>) -> f64 {
        let dot: Complex64 = self.a.x * w.x + self.a.y * w.y + self.a.z * w.z;
        dot.norm()
    }
}

/// Stokes parameters of a pure state together with the frame that makes them
/// components of a lab-frame vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    s1: f64,
    s2: f64,
    s3: f64,
    frame: LocalFrame,
}

impl StokesVector {
    pub fn new(jones: &JonesVector, frame: LocalFrame) -> Self {
        let (s1, s2, s3) = stokes(jones);
        StokesVector { s1, s2, s3, frame }
    }

    pub fn components(&self) -> (f64, f64, f64) {
        (self.s1, self.s2, self.s3)
    }

    pub fn frame(&self) -> &LocalFrame {
        &self.frame
    }

    /// `s1 u + s2 v + s3 w`: the polarization vector in the lab frame.
    pub fn lab_vector(&self) -> Vector3<f64> {
        self.frame.u() * self.s1 + self.frame.v() * self.s2 + self.frame.w() * self.s3
    }
}

/// Jones components of a transverse field vector: `varpi^dag a`.
pub fn jones_from_evector(a: &UnitEVector, varpi: &FrameMatrix) -> Result<JonesVector> {
    let residual = a.transversality_residual(varpi.w());
    if residual > TRANSVERSALITY_TOL {
        return Err(Error::TransversalityViolation {
            residual,
            tolerance: TRANSVERSALITY_TOL,
            sample: None,
        });
    }
    Ok(JonesVector::from_vector(varpi.project(a.vector())))
}

/// Field vector of a Jones vector: `varpi a~`. Transverse by construction.
///
/// The input must be normalized for the output to be a unit vector; the map
/// itself is linear and is not re-checked here, so amplitude scaling is the
/// caller's business.
pub fn evector_from_jones(jones: &JonesVector, varpi: &FrameMatrix) -> UnitEVector {
    UnitEVector {
        a: varpi.embed(&jones.as_vector()),
    }
}

/// Stokes parameters `(s1, s2, s3)` of a Jones vector.
///
/// These are the quadratic forms of the three Pauli matrices in Stokes
/// ordering, written out: `s1 = |a1|^2 - |a2|^2`, `s2 = 2 Re(a1* a2)`,
/// `s3 = 2 Im(a1* a2)`. For a unit Jones vector they form a unit 3-vector;
/// for non-unit input they all scale with the intensity.
pub fn stokes(jones: &JonesVector) -> (f64, f64, f64) {
    let s1 = jones.a1.norm_sqr() - jones.a2.norm_sqr();
    let cross = jones.a1.conj() * jones.a2;
    (s1, 2.0 * cross.re, 2.0 * cross.im)
}

/// The lab-frame polarization vector `s1 u + s2 v + s3 w`.
pub fn polarization_vector(jones: &JonesVector, frame: &LocalFrame) -> Vector3<f64> {
    StokesVector::new(jones, *frame).lab_vector()
}

/// Re-expresses a Jones vector in the frame rotated by `phi` about `w`:
/// `exp(i sigma3 phi) a~`. The physical state is unchanged.
pub fn gauge_rotate_jones(jones: &JonesVector, phi: f64) -> JonesVector {
    JonesVector::from_vector(rot_jones(phi, Sign::Plus) * jones.as_vector())
}

/// Keeps the Jones components while the frame underneath them rotates by
/// `phi` — the observable regauging operation.
///
/// Returns the new state's Jones vector expressed back in the *old* frame,
/// `exp(-i sigma3 phi) a~`, together with its Stokes parameters in that
/// frame. Relative to the input state, the field vector is rotated by `phi`
/// about `w` and the polarization vector by `2 phi`.
pub fn regauge_fixed_jones(jones: &JonesVector, phi: f64) -> (JonesVector, (f64, f64, f64)) {
    let regauged = JonesVector::from_vector(rot_jones(phi, Sign::Minus) * jones.as_vector());
    let s = stokes(&regauged);
    (regauged, s)
}
