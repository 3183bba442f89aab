//! Momentum-space sample grids and quadrature weights.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::frames::{GaugeVector, WaveVector};

/// Uniform Cartesian lattice metadata.
///
/// Flat sample order is row-major with the *last* axis fastest:
/// `flat = (ix * ny + iy) * nz + iz`. `origin` is the coordinate of the
/// sample at index `(0, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianLayout {
    pub shape: [usize; 3],
    pub spacing: [f64; 3],
    pub origin: [f64; 3],
}

impl CartesianLayout {
    pub fn len(&self) -> usize {
        self.shape[0] * self.shape[1] * self.shape[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.shape[1] + idx[1]) * self.shape[2] + idx[2]
    }

    pub fn coords(&self, flat: usize) -> [usize; 3] {
        let iz = flat % self.shape[2];
        let rest = flat / self.shape[2];
        [rest / self.shape[1], rest % self.shape[1], iz]
    }

    pub fn point(&self, idx: [usize; 3]) -> Vector3<f64> {
        Vector3::new(
            self.origin[0] + self.spacing[0] * idx[0] as f64,
            self.origin[1] + self.spacing[1] * idx[1] as f64,
            self.origin[2] + self.spacing[2] * idx[2] as f64,
        )
    }

    /// Volume of one cell, the uniform quadrature weight.
    pub fn cell_volume(&self) -> f64 {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }
}

/// A set of momentum samples with positive quadrature weights, so that
/// `sum_i weight_i g(k_i)` approximates the integral of `g` over k-space.
///
/// Uniform Cartesian grids keep their lattice metadata so spectral synthesis
/// can run on them; generic sample lists support custom quadratures but not
/// the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    samples: Vec<WaveVector>,
    weights: Vec<f64>,
    layout: Option<CartesianLayout>,
}

impl MomentumGrid {
    /// Uniform Cartesian grid from explicit lattice metadata, with cell
    /// volume as the weight everywhere.
    pub fn cartesian(layout: CartesianLayout) -> Result<Self> {
        for a in 0..3 {
            if layout.shape[a] == 0 {
                return Err(Error::InvalidParameter(format!(
                    "grid shape must be positive, axis {a} is 0"
                )));
            }
            if !(layout.spacing[a] > 0.0 && layout.spacing[a].is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "grid spacing must be positive and finite, axis {a} is {}",
                    layout.spacing[a]
                )));
            }
            if !layout.origin[a].is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "grid origin must be finite, axis {a} is {}",
                    layout.origin[a]
                )));
            }
        }
        let n = layout.len();
        let mut samples = Vec::with_capacity(n);
        for ix in 0..layout.shape[0] {
            for iy in 0..layout.shape[1] {
                for iz in 0..layout.shape[2] {
                    samples.push(WaveVector::new(layout.point([ix, iy, iz]))?);
                }
            }
        }
        let weights = vec![layout.cell_volume(); n];
        Ok(MomentumGrid {
            samples,
            weights,
            layout: Some(layout),
        })
    }

    /// Cartesian grid symmetric about `center` with samples offset half a
    /// cell from it: coordinate `i` sits at `center + spacing*(i - n/2 + 1/2)`.
    ///
    /// With even extents no sample lies on any coordinate plane through the
    /// center, which keeps grids off gauge axes that pass through it.
    pub fn centered(shape: [usize; 3], spacing: [f64; 3], center: Vector3<f64>) -> Result<Self> {
        let mut origin = [0.0; 3];
        for a in 0..3 {
            origin[a] = center[a] + spacing[a] * (0.5 - shape[a] as f64 / 2.0);
        }
        Self::cartesian(CartesianLayout {
            shape,
            spacing,
            origin,
        })
    }

    /// Arbitrary quadrature: explicit samples and weights.
    pub fn from_samples(samples: Vec<Vector3<f64>>, weights: Vec<f64>) -> Result<Self> {
        if samples.len() != weights.len() {
            return Err(Error::LengthMismatch {
                grid: samples.len(),
                data: weights.len(),
            });
        }
        for (i, w) in weights.iter().enumerate() {
            if !(w > &0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "quadrature weight {i} must be positive and finite, got {w}"
                )));
            }
        }
        let samples = samples
            .into_iter()
            .map(WaveVector::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentumGrid {
            samples,
            weights,
            layout: None,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[WaveVector] {
        &self.samples
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Lattice metadata, present only for Cartesian grids.
    pub fn layout(&self) -> Option<&CartesianLayout> {
        self.layout.as_ref()
    }

    /// Smallest `|I x w|` over the grid and the sample index attaining it:
    /// how close the gauge axis comes to any sample direction.
    pub fn min_gauge_residual(&self, gauge: &GaugeVector) -> (f64, usize) {
        let mut min = f64::INFINITY;
        let mut arg = 0;
        for (i, k) in self.samples.iter().enumerate() {
            let r = gauge.direction().cross(&k.unit()).norm();
            if r < min {
                min = r;
                arg = i;
            }
        }
        (min, arg)
    }
}
