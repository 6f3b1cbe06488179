use crate::error::CoreError;
use serde::{Deserialize, Serialize};

/// Uniform midpoint grid on [0, β): τ_m = (m + 1/2)·β/M.
///
/// Midpoints keep the antiperiodic seam (where G jumps by the anticommutator)
/// between samples, and the grid is closed under the reflection τ → β - τ
/// used to build G(-τ) = -G(β-τ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauGrid {
    beta: f64,
    len: usize,
}

impl TauGrid {
    /// Requires β > 0 and even M ≥ 4 (transforms need an even length;
    /// powers of two keep the FFT fast).
    pub fn new(beta: f64, len: usize) -> Result<Self, CoreError> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(CoreError::InvalidGrid(format!("beta must be positive, got {beta}")));
        }
        if len < 4 || len % 2 != 0 {
            return Err(CoreError::InvalidGrid(format!(
                "grid length must be even and >= 4, got {len}"
            )));
        }
        Ok(Self { beta, len })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.beta / self.len as f64
    }

    pub fn tau(&self, m: usize) -> f64 {
        (m as f64 + 0.5) * self.spacing()
    }

    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|m| self.tau(m))
    }

    /// Index of the reflected point β - τ_m.
    pub fn reflect(&self, m: usize) -> usize {
        self.len - 1 - m
    }

    /// Fermionic Matsubara frequency ω_n = (2n+1)π/β for signed n.
    pub fn matsubara(&self, n: i64) -> f64 {
        (2 * n + 1) as f64 * std::f64::consts::PI / self.beta
    }

    /// Signed Matsubara index for storage slot k ∈ [0, M): n = k - M/2.
    pub fn index_to_n(&self, k: usize) -> i64 {
        k as i64 - (self.len / 2) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoints_and_reflection() {
        let g = TauGrid::new(2.0, 8).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.tau(0), 0.125);
        let m = 3;
        assert!((g.tau(m) + g.tau(g.reflect(m)) - g.beta()).abs() < 1e-15);
    }

    #[test]
    fn rejects_odd_or_tiny() {
        assert!(TauGrid::new(1.0, 7).is_err());
        assert!(TauGrid::new(1.0, 2).is_err());
        assert!(TauGrid::new(-1.0, 8).is_err());
    }
}
