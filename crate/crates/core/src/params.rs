use crate::error::CoreError;
use serde::{Deserialize, Serialize};

/// Physical constants of a run: fermion count per side N, SYK scale J,
/// interaction order q (with Δ = 1/q), two-sided coupling μ and inverse
/// temperature β. Immutable after validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_fermions: usize,
    pub j_coupling: f64,
    pub q_body: u32,
    pub delta: f64,
    pub mu: f64,
    pub beta: f64,
}

impl ModelParams {
    /// Validated constructor. Requires J > 0, β > 0, μ ≥ 0 and even q ≥ 4;
    /// Δ is derived so that Δ·q = 1 exactly.
    pub fn new(
        n_fermions: usize,
        j_coupling: f64,
        q_body: u32,
        mu: f64,
        beta: f64,
    ) -> Result<Self, CoreError> {
        if !(j_coupling > 0.0) || !j_coupling.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "j_coupling must be positive and finite, got {j_coupling}"
            )));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "mu must be non-negative and finite, got {mu}"
            )));
        }
        if q_body < 4 || q_body % 2 != 0 {
            return Err(CoreError::InvalidParams(format!(
                "q_body must be even and >= 4, got {q_body}"
            )));
        }
        Ok(Self {
            n_fermions,
            j_coupling,
            q_body,
            delta: 1.0 / q_body as f64,
            mu,
            beta,
        })
    }

    /// Shorthand for q = 4 runs in units of J = 1.
    pub fn q4(mu: f64, beta: f64) -> Result<Self, CoreError> {
        Self::new(0, 1.0, 4, mu, beta)
    }

    /// Derived scale 𝒥 = J·sqrt(2^{1-1/Δ} / Δ).
    pub fn script_j(&self) -> f64 {
        let d = self.delta;
        self.j_coupling * (2f64.powf(1.0 - 1.0 / d) / d).sqrt()
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..*self }
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        Self { beta, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn q4_script_j_is_j_over_sqrt2() {
        // Δ = 1/4: 2^{1-4}/Δ = (1/8)·4 = 1/2.
        let p = ModelParams::new(16, 2.0, 4, 0.1, 10.0).unwrap();
        assert_relative_eq!(p.script_j(), 2.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(p.delta * p.q_body as f64, 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ModelParams::new(8, 0.0, 4, 0.1, 1.0).is_err());
        assert!(ModelParams::new(8, 1.0, 4, -0.1, 1.0).is_err());
        assert!(ModelParams::new(8, 1.0, 4, 0.1, -1.0).is_err());
        assert!(ModelParams::new(8, 1.0, 3, 0.1, 1.0).is_err());
        assert!(ModelParams::new(8, 1.0, 2, 0.1, 1.0).is_err());
        assert!(ModelParams::new(8, 1.0, 6, 0.1, 1.0).is_ok());
    }
}
