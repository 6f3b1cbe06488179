use crate::error::EthError;
use crate::table::ThermoTable;
use serde::Serialize;

/// Harmonic parameters of the paired-subspace potential at coupling μ, in
/// both the energy-density coordinate and φ = log(βJ).
#[derive(Debug, Clone, Serialize)]
pub struct EthOscillator {
    pub mu: f64,
    pub e_star: f64,
    pub beta_star: f64,
    pub phi_star: f64,
    pub spring_k: f64,
    pub mass_m: f64,
    pub spring_k_tilde: f64,
    pub mass_m_tilde: f64,
    pub omega: f64,
}

/// Locate the minimum of V(e) = 2e - μG(e): the root of 2 = μ ∂_e G, found
/// by monotone bisection in lnβ on the tabulated derivative.
pub fn minimum_condition(mu: f64, table: &ThermoTable) -> Result<(f64, f64), EthError> {
    if !(mu > 0.0) {
        return Err(EthError::Domain(format!("minimum condition needs mu > 0, got {mu}")));
    }
    let f = |b: f64| -> Result<f64, EthError> { Ok(mu * table.dg_de_at(b)? - 2.0) };
    let (mut lo, mut hi) = (table.beta_min(), table.beta_max());
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo > 0.0 {
        return Err(EthError::Range(format!(
            "root below table: extend β-grid below {lo} (f({lo}) = {f_lo:.3e} > 0)"
        )));
    }
    if f_hi < 0.0 {
        return Err(EthError::Range(format!(
            "root above table: extend β-grid above {hi} (f({hi}) = {f_hi:.3e} < 0)"
        )));
    }
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta_star = (lo * hi).sqrt();
    Ok((table.energy_at(beta_star)?, beta_star))
}

/// Oscillator parameters at coupling μ:
///   spring  k = -μ ∂²_e G|_{e*}           (V″ at the minimum)
///   mass    m = 1/(μ |G″_{β*}|)
///   gap     ω = √(k/m)
/// φ-coordinate versions rescale both by (de/dφ)² = (c/β*²)², leaving ω
/// unchanged; m̃ → c/2π² (μ-independent) at low temperature.
pub fn oscillator_at(mu: f64, table: &ThermoTable) -> Result<EthOscillator, EthError> {
    let (e_star, beta_star) = minimum_condition(mu, table)?;
    let d2g = table.d2g_de2_at(beta_star)?;
    let spring_k = -mu * d2g;
    if spring_k <= 0.0 {
        return Err(EthError::Domain(format!(
            "potential not convex at β* = {beta_star} (k = {spring_k:.3e})"
        )));
    }
    let gdd = table.g_ddot_at(beta_star)?;
    let mass_m = 1.0 / (mu * (-gdd));
    if mass_m <= 0.0 {
        return Err(EthError::Domain(format!("non-positive mass at β* = {beta_star}")));
    }
    let omega = (spring_k / mass_m).sqrt();
    let de_dphi = table.specific_heat_at(beta_star)? / (beta_star * beta_star);
    let scale = de_dphi * de_dphi;
    Ok(EthOscillator {
        mu,
        e_star,
        beta_star,
        phi_star: beta_star.ln(),
        spring_k,
        mass_m,
        spring_k_tilde: spring_k * scale,
        mass_m_tilde: mass_m * scale,
        omega,
    })
}

/// Dimensionless self-consistency variance of the paired-subspace ground
/// state, (β*μ)²(1 - Ĝ²_{β*}), with Ĝ = 2·G(β*/2) normalized so the EPR
/// limit is Ĝ = 1. Small at both μ-extremes; O(1) near β*J ≈ 1.
pub fn self_consistency_variance(mu: f64, table: &ThermoTable) -> Result<f64, EthError> {
    let (_, beta_star) = minimum_condition(mu, table)?;
    let g_hat = 2.0 * table.g_half_at(beta_star)?;
    Ok((beta_star * mu).powi(2) * (1.0 - g_hat * g_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::tests_support::shared_table;

    #[test]
    fn beta_star_decreases_with_mu() {
        let table = shared_table();
        let (_, b1) = minimum_condition(0.1, table).unwrap();
        let (_, b2) = minimum_condition(0.2, table).unwrap();
        assert!(b2 < b1, "β*(0.2) = {b2} should be below β*(0.1) = {b1}");
    }

    #[test]
    fn omega_identical_in_both_coordinate_systems() {
        let table = shared_table();
        for mu in [0.05, 0.1, 0.3] {
            let osc = oscillator_at(mu, table).unwrap();
            let omega_phi = (osc.spring_k_tilde / osc.mass_m_tilde).sqrt();
            assert!(
                (omega_phi / osc.omega - 1.0).abs() < 1e-8,
                "mu={mu}: {omega_phi} vs {}",
                osc.omega
            );
        }
    }

    #[test]
    fn tilde_mass_is_mu_independent_at_low_temperature() {
        let table = shared_table();
        // low-T couplings (large β*)
        let m1 = oscillator_at(0.02, table).unwrap().mass_m_tilde;
        let m2 = oscillator_at(0.04, table).unwrap().mass_m_tilde;
        assert!(
            (m1 / m2 - 1.0).abs() < 0.10,
            "m̃ should be μ-independent at low T: {m1} vs {m2}"
        );
        // and close to the closed-form c/2π²
        let c = table.c_fit;
        let expect = c / (2.0 * std::f64::consts::PI * std::f64::consts::PI);
        assert!((m1 / expect - 1.0).abs() < 0.2, "m̃ = {m1}, c/2π² = {expect}");
    }

    #[test]
    fn variance_is_small_at_both_extremes() {
        let table = shared_table();
        let v_small = self_consistency_variance(0.01, table).unwrap();
        let v_large = self_consistency_variance(3.0, table).unwrap();
        let v_mid = self_consistency_variance(0.6, table).unwrap();
        assert!(v_small < v_mid, "low-T variance {v_small} should be below mid {v_mid}");
        assert!(v_large < v_mid, "high-T variance {v_large} should be below mid {v_mid}");
    }
}
