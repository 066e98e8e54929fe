//! Dyadic frequency shells S_j = { R0 2^j <= |xi| < R0 2^{j+1} } and their
//! intersections with cones on the capped dual grid.

use crate::cone::Cone;
use crate::error::{Result, WfError};
use crate::stft::FreqGrid;

/// Dyadic partition of [R0, R0 2^J) into J shells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellPartition {
    r0: f64,
    count: usize,
}

impl ShellPartition {
    pub fn new(r0: f64, count: usize) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(WfError::InvalidConfig(format!(
                "shell base radius must be positive and finite, got {r0}"
            )));
        }
        if count == 0 {
            return Err(WfError::InvalidConfig("shell count must be at least 1".into()));
        }
        Ok(ShellPartition { r0, count })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn lower(&self, j: usize) -> f64 {
        self.r0 * (2.0f64).powi(j as i32)
    }

    pub fn upper(&self, j: usize) -> f64 {
        self.r0 * (2.0f64).powi(j as i32 + 1)
    }

    /// Fit abscissa R0 * 2^{j + 1/2} (geometric shell midpoint).
    pub fn mid(&self, j: usize) -> f64 {
        self.r0 * (2.0f64).powf(j as f64 + 0.5)
    }

    /// Upper edge R0 * 2^J of the last shell.
    pub fn top(&self) -> f64 {
        self.upper(self.count - 1)
    }

    /// Index of the shell containing radius `r`, if any.
    pub fn shell_of(&self, r: f64) -> Option<usize> {
        if r < self.r0 || r >= self.top() {
            return None;
        }
        let j = (r / self.r0).log2().floor() as usize;
        // guard the exact-edge rounding of log2
        if r < self.lower(j) {
            Some(j - 1)
        } else if r >= self.upper(j) {
            Some(j + 1)
        } else {
            Some(j)
        }
    }

    /// Check the partition against a grid's aliasing cap.
    pub fn validate_cap(&self, cap: f64) -> Result<()> {
        if self.top() > cap {
            return Err(WfError::ShellsExceedCap { top: self.top(), cap });
        }
        Ok(())
    }
}

/// Per-shell lists of capped-dual-grid indices falling in S_j intersect Gamma.
#[derive(Debug, Clone)]
pub struct ShellConeIndices {
    pub partition: ShellPartition,
    pub per_shell: Vec<Vec<usize>>,
}

impl ShellConeIndices {
    /// Shells with at least one grid frequency (the others are flagged empty
    /// and skipped by fits).
    pub fn nonempty(&self) -> usize {
        self.per_shell.iter().filter(|s| !s.is_empty()).count()
    }

    pub fn is_empty_shell(&self, j: usize) -> bool {
        self.per_shell[j].is_empty()
    }
}

/// Classify every kept dual-grid frequency into its shell, keeping only those
/// inside the cone. Errors if the partition exceeds the grid's aliasing cap.
pub fn shell_cone_indices(
    freq: &FreqGrid,
    cone: &Cone,
    partition: &ShellPartition,
) -> Result<ShellConeIndices> {
    partition.validate_cap(freq.cap())?;
    let mut per_shell = vec![Vec::new(); partition.count()];
    for q in 0..freq.len() {
        if let Some(j) = partition.shell_of(freq.norm(q)) {
            if cone.contains(freq.xi(q)) {
                per_shell[j].push(q);
            }
        }
    }
    Ok(ShellConeIndices { partition: *partition, per_shell })
}
