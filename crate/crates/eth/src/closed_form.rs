use crate::error::EthError;
use serde::Serialize;
use std::f64::consts::PI;

/// Low-temperature closed forms of the paired-subspace oscillator, valid
/// deep in the conformal regime (μ/J small). Units of J = 1.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormOscillator {
    pub mu: f64,
    pub q: u32,
    pub delta: f64,
    pub c_delta: f64,
    pub script_j: f64,
    pub alpha_s: f64,
    pub specific_heat: f64,
    pub beta_star: f64,
    pub phi_star: f64,
    pub spring_k: f64,
    pub mass_m: f64,
    pub spring_k_tilde: f64,
    pub mass_m_tilde: f64,
    pub omega: f64,
    /// Set when μ > 0.1 J, outside the regime the forms were derived for.
    pub high_mu_warning: bool,
}

/// Evaluate the conformal-regime oscillator:
///   c_Δ  = (1/2)(1-2Δ)·tan(πΔ)/(πΔ)
///   c    = 4π²α_S/𝒥          (α_S defaults to the q→∞ form 1/4q²)
///   β*   = (μΔ/c · c_Δ (π/𝒥)^{2Δ})^{-1/(2-2Δ)}
///   k    = 4(1-Δ)β*²/c,  m = β*⁴/(2π²c),  ω = 2π√(2(1-Δ))/β*
pub fn low_temp_closed_forms(
    mu: f64,
    q: u32,
    alpha_s: Option<f64>,
) -> Result<ClosedFormOscillator, EthError> {
    if q < 4 || q % 2 != 0 {
        return Err(EthError::Domain(format!("q must be even and >= 4, got {q}")));
    }
    let delta = 1.0 / q as f64;
    if delta >= 0.5 {
        return Err(EthError::Domain(format!("Δ = {delta} must be below 1/2")));
    }
    if !(mu > 0.0) {
        return Err(EthError::Domain(format!("mu must be positive, got {mu}")));
    }
    let c_delta = 0.5 * (1.0 - 2.0 * delta) * (PI * delta).tan() / (PI * delta);
    let script_j = (2f64.powf(1.0 - 1.0 / delta) / delta).sqrt();
    let alpha_s = alpha_s.unwrap_or(1.0 / (4.0 * (q as f64) * (q as f64)));
    let c = 4.0 * PI * PI * alpha_s / script_j;

    // Thermal coefficient of G(β/2) in the {χ,χ} = δ normalization carries
    // an extra 2^{2Δ} relative to c_Δ; verified against the solver tables
    // (G(β/2)·(𝒥β/π)^{2Δ} → 2^{2Δ}c_Δ with O(1/β𝒥) corrections).
    let b_delta = 2f64.powf(2.0 * delta) * c_delta;
    let base = mu * delta / c * b_delta * (PI / script_j).powf(2.0 * delta);
    let beta_star = base.powf(-1.0 / (2.0 - 2.0 * delta));

    let spring_k = 4.0 * (1.0 - delta) * beta_star * beta_star / c;
    let mass_m = beta_star.powi(4) / (2.0 * PI * PI * c);
    let omega = 2.0 * PI * (2.0 * (1.0 - delta)).sqrt() / beta_star;
    let de_dphi = c / (beta_star * beta_star);
    let scale = de_dphi * de_dphi;

    Ok(ClosedFormOscillator {
        mu,
        q,
        delta,
        c_delta,
        script_j,
        alpha_s,
        specific_heat: c,
        beta_star,
        phi_star: beta_star.ln(),
        spring_k,
        mass_m,
        spring_k_tilde: spring_k * scale,
        mass_m_tilde: mass_m * scale,
        omega,
        high_mu_warning: mu > 0.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::minimum_condition;
    use crate::table::tests_support::shared_table;
    use approx::assert_relative_eq;

    #[test]
    fn c_delta_for_q4_is_one_over_pi() {
        let cf = low_temp_closed_forms(0.05, 4, None).unwrap();
        assert_relative_eq!(cf.c_delta, 1.0 / PI, epsilon = 1e-14);
    }

    #[test]
    fn omega_beta_star_product_is_mu_independent() {
        // ω·β* = 2π√(2(1-Δ)) by cancellation
        let expect = 2.0 * PI * (2.0 * 0.75f64).sqrt();
        for mu in [0.001, 0.02, 0.08] {
            let cf = low_temp_closed_forms(mu, 4, None).unwrap();
            assert_relative_eq!(cf.omega * cf.beta_star, expect, epsilon = 1e-12);
            // and √(k/m) equals ω by construction
            assert_relative_eq!((cf.spring_k / cf.mass_m).sqrt(), cf.omega, max_relative = 1e-12);
            assert_relative_eq!(
                (cf.spring_k_tilde / cf.mass_m_tilde).sqrt(),
                cf.omega,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn example_point_delta_quarter_beta_ten() {
        // Δ = 1/4, β* = 10: ω = 2π√1.5/10 ≈ 0.7695
        let cf = low_temp_closed_forms(0.05, 4, None).unwrap();
        let omega_at_10 = cf.omega * cf.beta_star / 10.0;
        assert_relative_eq!(omega_at_10, 2.0 * PI * 1.5f64.sqrt() / 10.0, epsilon = 1e-12);
        assert!((omega_at_10 - 0.7695).abs() < 1e-3);
    }

    #[test]
    fn closed_form_matches_table_at_small_mu() {
        // Cross-method oracle: at μ = 0.02 the conformal forms should land
        // within 10% of the tabulated minimum condition when fed the
        // empirical specific-heat constant.
        let table = shared_table();
        let alpha_s = table.c_fit * (2f64.powf(-3.0) * 4.0).sqrt() / (4.0 * PI * PI);
        let cf = low_temp_closed_forms(0.02, 4, Some(alpha_s)).unwrap();
        let (_, beta_star_tab) = minimum_condition(0.02, table).unwrap();
        assert!(
            (cf.beta_star / beta_star_tab - 1.0).abs() < 0.10,
            "closed-form β* = {} vs tabulated {}",
            cf.beta_star,
            beta_star_tab
        );
        assert!(!cf.high_mu_warning);
        assert!(low_temp_closed_forms(0.2, 4, None).unwrap().high_mu_warning);
    }

    #[test]
    fn rejects_bad_domain() {
        assert!(low_temp_closed_forms(0.05, 2, None).is_err());
        assert!(low_temp_closed_forms(0.05, 5, None).is_err());
        assert!(low_temp_closed_forms(-0.05, 4, None).is_err());
    }
}
