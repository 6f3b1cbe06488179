use mq_core::CoreError;
use serde::{Deserialize, Serialize};

/// Knobs of the weighted fixed-point iteration and of the real-frequency
/// window. The ω-window defaults ([-4J, 4J], 2¹⁶ points) are recorded in
/// output metadata; they are a choice, not a measured quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// τ-grid length; power of two.
    pub grid_size: usize,
    /// Initial mixing weight w ∈ (0, 1] of the update G ← (1-w)G + w G_new.
    pub mixing_weight: f64,
    /// Convergence tolerance, max-abs on G₊(τ) between successive SD maps.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// iε regulator of the retarded propagator.
    pub epsilon_reg: f64,
    /// Real-frequency window half-width in units of J.
    pub omega_max: f64,
    /// Real-frequency grid length; power of two.
    pub omega_size: usize,
    /// Tolerance of the real-axis iteration (max-abs on Gᴿ(ω)).
    pub tolerance_real: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_size: 1 << 16,
            mixing_weight: 0.5,
            tolerance: 1e-10,
            max_iterations: 4000,
            epsilon_reg: 1e-5,
            // 6J covers the spectral support well enough that the missing
            // 1/ω³ tail weight stays below the 1e-3 sum-rule budget.
            omega_max: 6.0,
            omega_size: 1 << 16,
            tolerance_real: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.mixing_weight > 0.0 && self.mixing_weight <= 1.0) {
            return Err(CoreError::InvalidParams(format!(
                "mixing weight must be in (0, 1], got {}",
                self.mixing_weight
            )));
        }
        if !(self.tolerance > 0.0) || !(self.tolerance_real > 0.0) {
            return Err(CoreError::InvalidParams("tolerances must be positive".into()));
        }
        if !self.grid_size.is_power_of_two() || !self.omega_size.is_power_of_two() {
            return Err(CoreError::InvalidParams("grid sizes must be powers of two".into()));
        }
        Ok(())
    }

    /// Smaller grids for quick scans and tests.
    pub fn fast(grid_size: usize) -> Self {
        Self {
            grid_size,
            omega_size: grid_size.min(1 << 14),
            ..Self::default()
        }
    }
}
