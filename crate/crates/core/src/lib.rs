//! Momentum-space polarization toolkit for free photons.
//!
//! A photon's field in momentum space is a transverse complex 3-vector
//! `f(k, t)`. Picking a constant gauge vector `I` fixes a local frame
//! `(u, v, w)` at every wavevector and reduces `f` to a two-component Jones
//! vector; Stokes parameters, polarization vectors, and entanglement
//! measures are then defined relative to that gauge. This crate implements
//! the frame construction, the maps between the 3-vector and Jones
//! descriptions, gauge changes and their observable double-angle effects,
//! time evolution, position-space synthesis by FFT, and a Schmidt measure
//! of polarization-momentum entanglement, plus file formats for moving
//! sampled fields between runs.
//!
//! ```
//! use kpolar::frames::{self, GaugeVector, WaveVector};
//! use kpolar::planewave::{jones_from_evector, stokes, UnitEVector};
//! use nalgebra::Vector3;
//! use num_complex::Complex64;
//!
//! // x-propagating wave, gauge e_z: the local frame is u = -e_z, v = e_y
//! let k = WaveVector::new(Vector3::new(1.0, 0.0, 0.0))?;
//! let frame = frames::local_frame(&k, &GaugeVector::z())?;
//! let varpi = frames::frame_matrix(&frame);
//!
//! // a field along e_y is the second frame axis: Jones (0, 1), s1 = -1
//! let field = UnitEVector::new(Vector3::new(
//!     Complex64::new(0.0, 0.0),
//!     Complex64::new(1.0, 0.0),
//!     Complex64::new(0.0, 0.0),
//! ))?;
//! let jones = jones_from_evector(&field, &varpi)?;
//! let (s1, s2, s3) = stokes(&jones);
//! assert!((s1 + 1.0).abs() < 1e-15 && s2.abs() < 1e-15 && s3.abs() < 1e-15);
//! # Ok::<(), kpolar::Error>(())
//! ```

pub mod algebra;
pub mod error;
pub mod frames;
pub mod io;
pub mod mfield;
pub mod planewave;
pub mod synthesis;

pub use error::{Error, Result};

/// The guide's code blocks compile and run with the test suite, so the book
/// in `book/` can never drift from the library it documents.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/rotations.md")]
    pub struct Rotations;
    #[doc = include_str!("../../../book/src/frames.md")]
    pub struct Frames;
    #[doc = include_str!("../../../book/src/polarization.md")]
    pub struct Polarization;
    #[doc = include_str!("../../../book/src/gauge-transformations.md")]
    pub struct GaugeTransformations;
    #[doc = include_str!("../../../book/src/fields-and-beams.md")]
    pub struct FieldsAndBeams;
    #[doc = include_str!("../../../book/src/entanglement.md")]
    pub struct Entanglement;
    #[doc = include_str!("../../../book/src/synthesis.md")]
    pub struct Synthesis;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
