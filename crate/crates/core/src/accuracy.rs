use crate::error::{Error, Result};

/// Tolerance and iteration budgets shared by series, recurrences and quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyControl {
    /// Target relative accuracy.
    pub rel_tol: f64,
    /// Maximum number of terms summed in any series.
    pub max_terms: usize,
    /// Maximum number of interval bisections in adaptive quadrature.
    pub max_subdivisions: usize,
}

impl Default for AccuracyControl {
    fn default() -> Self {
        AccuracyControl {
            rel_tol: 1e-12,
            max_terms: 200,
            max_subdivisions: 10_000,
        }
    }
}

impl AccuracyControl {
    pub fn new(rel_tol: f64, max_terms: usize, max_subdivisions: usize) -> Result<Self> {
        let ctrl = AccuracyControl {
            rel_tol,
            max_terms,
            max_subdivisions,
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    /// Default budgets with a different relative tolerance.
    pub fn with_tol(rel_tol: f64) -> Result<Self> {
        Self::new(rel_tol, 200, 10_000)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::Config(format!(
                "rel_tol must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if self.max_terms < 10 {
            return Err(Error::Config(format!(
                "max_terms must be at least 10, got {}",
                self.max_terms
            )));
        }
        if self.max_subdivisions < 100 {
            return Err(Error::Config(format!(
                "max_subdivisions must be at least 100, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    /// Same budgets, tolerance scaled by `factor` and clamped to the valid range.
    pub fn scaled(&self, factor: f64) -> Self {
        AccuracyControl {
            rel_tol: (self.rel_tol * factor).clamp(f64::EPSILON, 1e-3),
            ..*self
        }
    }
}
