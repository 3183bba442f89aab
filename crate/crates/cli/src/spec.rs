//! Beam specs: the small TOML dialect `kpolar beam` consumes.
//!
//! Unknown keys are rejected so a typo fails loudly instead of silently
//! falling back to a default.

use std::path::Path;

use kpolar::mfield::{BeamKind, BeamParams};
use kpolar::planewave::JonesVector;
use kpolar::{frames::GaugeVector, Error};
use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSpec {
    pub kind: SpecKind,
    pub axis: [f64; 3],
    pub center_k: f64,
    pub width: f64,
    pub shape: [usize; 3],
    pub spacing: [f64; 3],
    pub gauge: [f64; 3],
    /// Jones components as [[re, im], [re, im]]; only uniform-gaussian beams
    /// use it. Defaults to (1, 0).
    #[serde(default)]
    pub jones: Option<[[f64; 2]; 2]>,
    /// Scale the field to unit norm after construction (default true).
    #[serde(default = "default_true")]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecKind {
    UniformGaussian,
    Radial,
    Azimuthal,
}

impl From<SpecKind> for BeamKind {
    fn from(kind: SpecKind) -> Self {
        match kind {
            SpecKind::UniformGaussian => BeamKind::UniformGaussian,
            SpecKind::Radial => BeamKind::Radial,
            SpecKind::Azimuthal => BeamKind::Azimuthal,
        }
    }
}

fn default_true() -> bool {
    true
}

pub fn load(path: &Path) -> Result<BeamSpec, Error> {
    let text = std::fs::read_to_string(path)?;
    // toml errors carry the line and field name; keep them verbatim
    toml::from_str(&text).map_err(|err| Error::Format(err.to_string()))
}

impl BeamSpec {
    pub fn into_params(self) -> Result<BeamParams, Error> {
        let gauge = GaugeVector::from_vector(Vector3::from(self.gauge))?;
        let jones = match self.jones {
            Some([[re1, im1], [re2, im2]]) => {
                JonesVector::new(Complex64::new(re1, im1), Complex64::new(re2, im2))
            }
            None => JonesVector::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        };
        Ok(BeamParams {
            kind: self.kind.into(),
            axis: Vector3::from(self.axis),
            center_k: self.center_k,
            width: self.width,
            shape: self.shape,
            spacing: self.spacing,
            gauge,
            jones,
            normalize: self.normalize,
        })
    }
}
