use crate::config::SolverConfig;
use crate::error::SdError;
use crate::imag::solve_imag;
use crate::solution::EquilibriumSolution;
use mq_core::{linear_regression, ModelParams};

/// Single-side energy density E/N = ⟨H_L⟩/N of a converged solution:
///
///   E/N = -(J²/4) ∫₀^β dτ [ G_LL⁴(τ) + G_LR⁴(τ) ]
///
/// The uncoupled limit (G_LR = 0) reduces to the standard SYK expression
/// -(J²/4)∫G⁴. Midpoint quadrature on the solver grid.
pub fn single_side_energy(solution: &EquilibriumSolution) -> Result<f64, SdError> {
    if !(solution.final_residual <= solution.config.tolerance) {
        return Err(SdError::InvalidState(format!(
            "energy requested from unconverged solution (residual {:.3e})",
            solution.final_residual
        )));
    }
    let c = &solution.imag;
    let dtau = c.tau_grid.spacing();
    let mut acc = 0.0;
    for m in 0..c.len() {
        let gll = c.g_ll(m);
        let glr = c.g_lr(m);
        let g2 = gll * gll;
        let l2 = glr * glr;
        acc += g2 * g2 + l2 * l2;
    }
    let j2 = solution.params.j_coupling * solution.params.j_coupling;
    Ok(-0.25 * j2 * acc * dtau)
}

/// Gap to single-fermion ("matter") excitations from the late-τ decay of
/// G_LL: fit log|G_LL| on the window from the 10⁻² crossing of G_LL(0⁺) to
/// τ = β/2 and return the negated slope.
pub fn matter_gap(params: &ModelParams, config: &SolverConfig) -> Result<f64, SdError> {
    let sol = solve_imag(params, config)?;
    matter_gap_of(&sol)
}

pub fn matter_gap_of(solution: &EquilibriumSolution) -> Result<f64, SdError> {
    let c = &solution.imag;
    let beta = solution.params.beta;
    let g0 = c.g_ll_zero();
    let m_half = c.len() / 2; // τ up to β/2
    let start_level = 1e-2 * g0;
    // stay clear of the solver noise floor
    let floor = (100.0 * solution.config.tolerance).max(1e-14);

    let mut start = None;
    let mut end = m_half;
    for m in 0..m_half {
        let v = c.g_ll(m);
        if start.is_none() && v < start_level {
            start = Some(m);
        }
        if v < floor {
            end = m;
            break;
        }
    }
    let Some(start) = start else {
        return Err(SdError::Window(format!(
            "G_LL never drops below 1e-2 of its τ=0 value before β/2; increase beta (currently {beta})"
        )));
    };
    // require ≥ 4 decades of total decay in the fit window
    let decay = c.g_ll(end - 1) / g0;
    if decay > 1e-4 {
        return Err(SdError::Window(format!(
            "G_LL decays only to {decay:.2e} of its τ=0 value by β/2; increase beta (currently {beta})"
        )));
    }

    let fit = |lo: usize, hi: usize| -> Result<f64, SdError> {
        let mut xs = Vec::with_capacity(hi - lo);
        let mut ys = Vec::with_capacity(hi - lo);
        for m in lo..hi {
            let v = c.g_ll(m);
            if v <= 0.0 {
                break;
            }
            xs.push(c.tau_grid.tau(m));
            ys.push(v.ln());
        }
        if xs.len() < 8 {
            return Err(SdError::Window("fewer than 8 usable points in the fit window".into()));
        }
        let (slope, _, _) = linear_regression(&xs, &ys)?;
        Ok(-slope)
    };

    // G_LL is symmetric about β/2, so the decay e^{-Δτ} picks up the rising
    // e^{-Δ(β-τ)} branch near the window end. Fit once to estimate Δ, then
    // trim the window so the reflected branch stays below ~3·10⁻³ and refit.
    let first = fit(start, end)?;
    if !(first > 0.0) {
        return Err(SdError::Window(format!("non-positive decay rate {first:.3e}")));
    }
    let tau_end = 0.5 * (beta - 6.0 / first);
    let end_trim = ((tau_end / c.tau_grid.spacing()) as usize).min(end);
    if end_trim <= start + 8 {
        return Err(SdError::Window(format!(
            "symmetric-branch guard leaves no fit window; increase beta (currently {beta})"
        )));
    }
    fit(start, end_trim)
}

/// G_SYK(β/2) of the uncoupled model at inverse temperature `beta`.
pub fn uncoupled_g_half(beta: f64, config: &SolverConfig) -> Result<f64, SdError> {
    let params = ModelParams::q4(0.0, beta)
        .map_err(SdError::Core)?;
    let sol = solve_imag(&params, config)?;
    Ok(sol.imag.g_ll_half_beta())
}

/// Effective TFD inverse temperature of the coupled ground state at
/// coupling μ: the β′ whose uncoupled G_SYK(β′/2) matches the coupled
/// G_LR(0) computed at the ground-state proxy temperature β = 30/μ.
///
/// Monotone bisection on log β′ (G_SYK(β/2) is strictly decreasing).
pub fn beta_eff_of_mu(mu: f64, config: &SolverConfig) -> Result<f64, SdError> {
    if !(mu > 0.0) {
        return Err(SdError::InvalidState(format!("beta_eff needs mu > 0, got {mu}")));
    }
    let coupled = ModelParams::q4(mu, 30.0 / mu).map_err(SdError::Core)?;
    let target = solve_imag(&coupled, config)?.imag.g_lr_zero();
    beta_eff_from_target(target, config)
}

/// Invert the uncoupled G_SYK(β/2) curve at a given target value.
pub fn beta_eff_from_target(target: f64, config: &SolverConfig) -> Result<f64, SdError> {
    if !(target > 0.0 && target < 0.5) {
        return Err(SdError::RootFind(format!(
            "target two-sided correlator {target} outside (0, 1/2)"
        )));
    }
    // the inner solves never need the full outer grid
    let mut inner = config.clone();
    inner.grid_size = config.grid_size.min(1 << 15);

    let mut lo = 0.25; // g_half(lo) should exceed the target
    let mut hi = 8.0;
    let mut f_lo = uncoupled_g_half(lo, &inner)? - target;
    if f_lo < 0.0 {
        // extremely hot target; bracket downward
        for _ in 0..8 {
            lo *= 0.5;
            f_lo = uncoupled_g_half(lo, &inner)? - target;
            if f_lo >= 0.0 {
                break;
            }
        }
        if f_lo < 0.0 {
            return Err(SdError::RootFind(format!(
                "could not bracket beta_eff from below (target {target}, beta_lo {lo})"
            )));
        }
        hi = 2.0 * lo;
    }
    let mut f_hi = uncoupled_g_half(hi, &inner)? - target;
    let mut grow = 0;
    while f_hi > 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        grow += 1;
        if grow > 12 {
            return Err(SdError::RootFind(format!(
                "could not bracket beta_eff from above (target {target}, beta_hi {hi})"
            )));
        }
        f_hi = uncoupled_g_half(hi, &inner)? - target;
    }
    let _ = f_lo;
    // bisection on log β to ~0.1% relative
    for _ in 0..24 {
        let mid = (lo * hi).sqrt();
        let f_mid = uncoupled_g_half(mid, &inner)? - target;
        if f_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo < 1.0005 {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

/// β_eff(μ) sampled over a μ-grid; used by sweep drivers and scaling fits.
pub fn beta_eff_curve(mus: &[f64], config: &SolverConfig) -> Result<Vec<(f64, f64)>, SdError> {
    mus.iter()
        .map(|&mu| beta_eff_of_mu(mu, config).map(|b| (mu, b)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_vanishes_without_syk_term() {
        let params = ModelParams::new(0, 1e-30, 4, 0.4, 10.0).unwrap();
        let sol = solve_imag(&params, &SolverConfig::fast(1 << 12)).unwrap();
        let e = single_side_energy(&sol).unwrap();
        assert!(e.abs() < 1e-25, "J=0 energy should vanish, got {e:.3e}");
    }

    #[test]
    fn matter_gap_free_limit_equals_mu() {
        // J = 0: G_LL(τ) decays exactly as e^{-μτ}.
        let params = ModelParams::new(0, 1e-30, 4, 0.3, 80.0).unwrap();
        let sol = solve_imag(&params, &SolverConfig::fast(1 << 13)).unwrap();
        let gap = matter_gap_of(&sol).unwrap();
        assert!((gap - 0.3).abs() / 0.3 < 0.01, "gap {gap}");
    }

    #[test]
    fn matter_gap_rejects_short_window() {
        // β too small for four decades of decay.
        let params = ModelParams::new(0, 1e-30, 4, 0.3, 10.0).unwrap();
        let sol = solve_imag(&params, &SolverConfig::fast(1 << 12)).unwrap();
        match matter_gap_of(&sol) {
            Err(SdError::Window(_)) => {}
            other => panic!("expected Window error, got {other:?}"),
        }
    }

    #[test]
    fn energy_requires_convergence() {
        let params = ModelParams::q4(0.1, 10.0).unwrap();
        let mut sol = solve_imag(&params, &SolverConfig::fast(1 << 12)).unwrap();
        sol.final_residual = 1.0;
        assert!(matches!(single_side_energy(&sol), Err(SdError::InvalidState(_))));
    }
}
