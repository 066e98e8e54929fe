use num_complex::Complex64;

use crate::error::{Result, WfError};

/// Uniform grid on R^d (d = 1 or 2), same spacing and point count per axis.
/// Coordinates along an axis are `origin[a] + k * dx`, k = 0..n.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    n: usize,
    dx: f64,
    origin: Vec<f64>,
}

impl Grid {
    pub fn new(dim: usize, n: usize, dx: f64, origin: Vec<f64>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(WfError::InvalidConfig(format!("dimension {dim} not in {{1,2}}")));
        }
        if origin.len() != dim {
            return Err(WfError::InvalidConfig(format!(
                "origin has {} entries for dimension {dim}",
                origin.len()
            )));
        }
        if !(dx > 0.0) {
            return Err(WfError::InvalidConfig(format!("spacing {dx} must be positive")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(WfError::InvalidConfig(format!(
                "points-per-axis {n} must be a power of two >= 16"
            )));
        }
        Ok(Grid { dim, n, dx, origin })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total point count n^d.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    /// Coordinate along axis `a` at index `k`.
    pub fn coord(&self, a: usize, k: usize) -> f64 {
        self.origin[a] + k as f64 * self.dx
    }

    /// Largest coordinate along axis `a`.
    pub fn max_coord(&self, a: usize) -> f64 {
        self.coord(a, self.n - 1)
    }

    /// Decompose a flat sample index into per-axis indices (row-major, last
    /// axis fastest).
    pub fn unravel(&self, ix: usize) -> [usize; 2] {
        match self.dim {
            1 => [ix, 0],
            _ => [ix / self.n, ix % self.n],
        }
    }

    /// Flat index from per-axis indices.
    pub fn ravel(&self, idx: [usize; 2]) -> usize {
        match self.dim {
            1 => idx[0],
            _ => idx[0] * self.n + idx[1],
        }
    }

    /// Position vector of a flat sample index.
    pub fn point(&self, ix: usize) -> Vec<f64> {
        let idx = self.unravel(ix);
        (0..self.dim).map(|a| self.coord(a, idx[a])).collect()
    }

    /// Grid-node positions whose Euclidean distance to `center` is at most
    /// `radius` (the sampled compact neighbourhood K). Ordered by flat index.
    pub fn ball_nodes(&self, center: &[f64], radius: f64) -> Vec<Vec<f64>> {
        let tol = 1e-12;
        let range = |a: usize| -> (usize, usize) {
            let lo = ((center[a] - radius - self.origin[a]) / self.dx).ceil().max(0.0) as usize;
            let hi = (((center[a] + radius - self.origin[a]) / self.dx).floor() as isize)
                .min(self.n as isize - 1)
                .max(-1);
            (lo, hi.max(lo as isize - 1) as usize)
        };
        let mut out = Vec::new();
        match self.dim {
            1 => {
                let (lo, hi) = range(0);
                for k in lo..=hi.min(self.n - 1) {
                    let t = self.coord(0, k);
                    if (t - center[0]).abs() <= radius + tol {
                        out.push(vec![t]);
                    }
                }
            }
            _ => {
                let (lo0, hi0) = range(0);
                let (lo1, hi1) = range(1);
                for k0 in lo0..=hi0.min(self.n - 1) {
                    let t0 = self.coord(0, k0);
                    for k1 in lo1..=hi1.min(self.n - 1) {
                        let t1 = self.coord(1, k1);
                        let d2 = (t0 - center[0]).powi(2) + (t1 - center[1]).powi(2);
                        if d2 <= (radius + tol) * (radius + tol) {
                            out.push(vec![t0, t1]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// How a non-function distribution was regularized before sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularization {
    pub kind: String,
    pub epsilon: f64,
}

/// Complex samples of a (regularized) distribution on a grid.
#[derive(Debug, Clone)]
pub struct SampledSignal {
    pub grid: Grid,
    pub samples: Vec<Complex64>,
    pub label: String,
    pub regularization: Option<Regularization>,
}

impl SampledSignal {
    pub fn new(
        grid: Grid,
        samples: Vec<Complex64>,
        label: impl Into<String>,
        regularization: Option<Regularization>,
    ) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(WfError::InvalidConfig(format!(
                "sample count {} does not match grid point count {}",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(r) = &regularization {
            if !(r.epsilon > 0.0) {
                return Err(WfError::InvalidConfig("regularization epsilon must be positive".into()));
            }
        }
        Ok(SampledSignal { grid, samples, label: label.into(), regularization })
    }
}
