//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong while building frames, fields, or files.
#[derive(Debug, Error)]
pub enum Error {
    /// The gauge vector is (anti)parallel to a wavevector, so no transverse
    /// frame exists there. `sample` is set when the failure occurred on a
    /// grid; `residual` is |I x k| / |k|.
    #[error("singular gauge{}: |I x k|/|k| = {residual:.3e} below tolerance {tolerance:.1e}", fmt_sample(.sample))]
    SingularGauge {
        residual: f64,
        tolerance: f64,
        sample: Option<usize>,
    },

    /// A vector supposed to be transverse has a longitudinal component.
    #[error("transversality violation{}: |a . w|/|a| = {residual:.3e} exceeds {tolerance:.1e}", fmt_sample(.sample))]
    TransversalityViolation {
        residual: f64,
        tolerance: f64,
        sample: Option<usize>,
    },

    /// Every sample of a field has negligible amplitude.
    #[error("field has no nonzero samples")]
    AllZeroField,

    /// A wavevector of zero length cannot carry a frame.
    #[error("wavevector must be nonzero")]
    ZeroWaveVector,

    /// A direction that must be a unit vector is not (or cannot be normalized).
    #[error("expected a unit vector, got |v| = {norm:.3e}")]
    NotAUnitVector { norm: f64 },

    /// Pauli / generator index outside 1..=3.
    #[error("matrix index {index} out of range 1..=3")]
    IndexOutOfRange { index: usize },

    /// Beam or grid parameters that do not describe a usable field.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation needs a uniform Cartesian grid and the field has none.
    #[error("operation requires a uniform Cartesian grid")]
    NonCartesianGrid,

    /// Mismatched lengths between a grid and per-sample data.
    #[error("grid has {grid} samples but {data} values were supplied")]
    LengthMismatch { grid: usize, data: usize },

    /// A field file that cannot be parsed.
    #[error("field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_sample(sample: &Option<usize>) -> String {
    match sample {
        Some(i) => format!(" at sample {i}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
