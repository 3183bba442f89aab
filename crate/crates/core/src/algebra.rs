//! Exact small-matrix algebra: Pauli matrices, SO(3) generators, and the
//! closed-form rotation exponentials the rest of the crate is built on.
//!
//! The Pauli matrices here follow the Stokes-parameter ordering used
//! throughout polarization optics, *not* the (x, y, z) ordering of spin
//! physics:
//!
//! | here     | spin convention |
//! |----------|-----------------|
//! | `sigma1` | sigma_z         |
//! | `sigma2` | sigma_x         |
//! | `sigma3` | sigma_y         |
//!
//! The set is a cyclic permutation of the conventional one, so the
//! commutation relations `[sigma_i, sigma_j] = 2i eps_{ijk} sigma_k` hold
//! unchanged. All exponentials are evaluated in closed form (Rodrigues for
//! SO(3), a cos/sin split for the sigma3 generator); there is no series
//! truncation anywhere.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The three Pauli matrices in Stokes ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSet {
    /// diag(1, -1)
    pub sigma1: Matrix2<Complex64>,
    /// unit real off-diagonal
    pub sigma2: Matrix2<Complex64>,
    /// ((0, -i), (i, 0))
    pub sigma3: Matrix2<Complex64>,
}

impl PauliSet {
    pub fn new() -> Self {
        PauliSet {
            sigma1: Matrix2::new(ONE, ZERO, ZERO, -ONE),
            sigma2: Matrix2::new(ZERO, ONE, ONE, ZERO),
            sigma3: Matrix2::new(ZERO, -I, I, ZERO),
        }
    }
}

impl Default for PauliSet {
    fn default() -> Self {
        Self::new()
    }
}

/// The spin-1 rotation generators, `(Sigma_k)_{ij} = -i eps_{ijk}`.
///
/// Each is Hermitian and purely imaginary; `exp[-i (Sigma . n) theta]` is the
/// real rotation matrix by `theta` about `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct So3Generators {
    pub sigma1: Matrix3<Complex64>,
    pub sigma2: Matrix3<Complex64>,
    pub sigma3: Matrix3<Complex64>,
}

impl So3Generators {
    pub fn new() -> Self {
        let gen = |k: usize| {
            Matrix3::from_fn(|i, j| {
                Complex64::new(0.0, -f64::from(levi_civita(i + 1, j + 1, k)))
            })
        };
        So3Generators {
            sigma1: gen(1),
            sigma2: gen(2),
            sigma3: gen(3),
        }
    }

    /// Contraction `Sigma . n` with a real 3-vector.
    pub fn dot(&self, n: &Vector3<f64>) -> Matrix3<Complex64> {
        self.sigma1 * Complex64::from(n.x)
            + self.sigma2 * Complex64::from(n.y)
            + self.sigma3 * Complex64::from(n.z)
    }
}

impl Default for So3Generators {
    fn default() -> Self {
        Self::new()
    }
}

/// Levi-Civita symbol with 1-based indices. Zero off the permutations.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// One Pauli matrix by 1-based index.
pub fn pauli(index: usize) -> Result<Matrix2<Complex64>> {
    let set = PauliSet::new();
    match index {
        1 => Ok(set.sigma1),
        2 => Ok(set.sigma2),
        3 => Ok(set.sigma3),
        _ => Err(Error::IndexOutOfRange { index }),
    }
}

/// Commutator `sigma_i sigma_j - sigma_j sigma_i`.
///
/// Equals `2i eps_{ijk} sigma_k` entrywise; the identity is exact in f64
/// because every entry is an integer multiple of i.
pub fn commutator(i: usize, j: usize) -> Result<Matrix2<Complex64>> {
    let a = pauli(i)?;
    let b = pauli(j)?;
    Ok(a * b - b * a)
}

/// A proper rotation: orthogonal 3x3 matrix with determinant +1.
///
/// Only constructible through [`rot_so3`] (or composition), so the
/// orthogonality invariant cannot be broken from outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    matrix: Matrix3<f64>,
}

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3 {
            matrix: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    /// Rotate a real vector.
    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * v
    }

    /// Rotate a complex vector (real and imaginary parts independently).
    pub fn apply_complex(&self, v: &Vector3<Complex64>) -> Vector3<Complex64> {
        self.matrix.map(Complex64::from) * v
    }

    /// The inverse rotation, i.e. the transpose.
    pub fn inverse(&self) -> Self {
        Rotation3 {
            matrix: self.matrix.transpose(),
        }
    }

    /// Composition `self * other` (apply `other` first).
    pub fn compose(&self, other: &Rotation3) -> Self {
        Rotation3 {
            matrix: self.matrix * other.matrix,
        }
    }
}

/// Rotation by `angle` about the unit vector `axis`, right-handed:
/// with `axis = e_z`, `e_x` maps to `e_x cos(angle) + e_y sin(angle)`.
///
/// This is the closed form of `exp[-i (Sigma . axis) angle]`, evaluated with
/// the Rodrigues formula. The axis must be unit to within 1e-9.
pub fn rot_so3(axis: &Vector3<f64>, angle: f64) -> Result<Rotation3> {
    let norm = axis.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotAUnitVector { norm });
    }
    let (s, c) = angle.sin_cos();
    let n = axis;
    let cross = Matrix3::new(0.0, -n.z, n.y, n.z, 0.0, -n.x, -n.y, n.x, 0.0);
    let matrix = Matrix3::identity() * c + n * n.transpose() * (1.0 - c) + cross * s;
    Ok(Rotation3 { matrix })
}

/// Sign of the exponent in [`rot_jones`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// The 2x2 unitary `exp(sign * i * sigma3 * angle)`.
///
/// Because `sigma3^2 = I`, the exponential splits exactly:
/// `cos(angle) I + sign * i sin(angle) sigma3`.
pub fn rot_jones(angle: f64, sign: Sign) -> Matrix2<Complex64> {
    let (s, c) = angle.sin_cos();
    let s = sign.factor() * s;
    Matrix2::new(
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(c, 0.0),
    )
}

/// Wrap an angle into the canonical branch (-pi, pi].
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    // rem_euclid can round to exactly TAU for tiny negative inputs
    if a <= -PI {
        a += TAU;
    }
    a
}
