use crate::error::{Error, Result};

/// Numeric thresholds shared by every stage.
///
/// `zero_eps` is relative to the largest coefficient magnitude of the
/// polynomial being trimmed. `root_tol` bounds the final bisection width,
/// relative to `max(1, |root|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub zero_eps: f64,
    pub root_tol: f64,
    pub cluster_tol: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_eps: 1e-12,
            root_tol: 1e-12,
            cluster_tol: 1e-7,
            max_iter: 200,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.zero_eps) {
            return Err(Error::InvalidInput(format!(
                "zero_eps must be positive, got {}",
                self.zero_eps
            )));
        }
        if !positive(self.root_tol) {
            return Err(Error::InvalidInput(format!(
                "root_tol must be positive, got {}",
                self.root_tol
            )));
        }
        if !positive(self.cluster_tol) {
            return Err(Error::InvalidInput(format!(
                "cluster_tol must be positive, got {}",
                self.cluster_tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}
