use crate::config::SolverConfig;
use crate::error::SdError;
use crate::solution::EquilibriumSolution;
use mq_core::{C64, ImagCorrelator, MatsubaraTransform, ModelParams, TauGrid};

/// One application of the SD map: G₊(τ) → Σ₊(τ) → updated G₊(iω_n).
///
/// Σ₊(τ) = -(J²/4)[3G₊²(τ)G₊(-τ) + G₊³(-τ)] with G₊(-τ) = -G₊(β-τ) from
/// antiperiodicity. On the midpoint grid β-τ_m is the sample at the
/// reflected index.
fn sd_map(
    tf: &MatsubaraTransform,
    params: &ModelParams,
    g_tau: &[C64],
    sigma_tau: &mut [C64],
    ghat_new: &mut [C64],
) -> Result<(), SdError> {
    let grid = tf.grid();
    let j2 = params.j_coupling * params.j_coupling;
    let quarter_j2 = 0.25 * j2;
    for m in 0..g_tau.len() {
        let g = g_tau[m];
        let gr = g_tau[grid.reflect(m)];
        // -(J²/4)[3g²(-gr) + (-gr)³] = (J²/4)[3g²gr + gr³]
        sigma_tau[m] = quarter_j2 * (3.0 * g * g * gr + gr * gr * gr);
    }
    let sigma_hat = tf.forward_seam_corrected(sigma_tau)?;
    for (k, out) in ghat_new.iter_mut().enumerate() {
        let wn = grid.matsubara(grid.index_to_n(k));
        *out = C64::new(1.0, 0.0) / (C64::new(-params.mu, wn) - sigma_hat[k]);
    }
    Ok(())
}

/// Solve the imaginary-time equations at the given parameters, seeded with
/// the free solution G⁰₊(iω_n) = 1/(iω_n - μ).
pub fn solve_imag(params: &ModelParams, config: &SolverConfig) -> Result<EquilibriumSolution, SdError> {
    solve_imag_seeded(params, config, None)
}

/// Same, with an optional Matsubara-space seed (warm start for sweeps).
pub fn solve_imag_seeded(
    params: &ModelParams,
    config: &SolverConfig,
    seed: Option<&[C64]>,
) -> Result<EquilibriumSolution, SdError> {
    config.validate()?;
    if params.q_body != 4 {
        return Err(SdError::UnsupportedModel(params.q_body));
    }
    let grid = TauGrid::new(params.beta, config.grid_size)?;
    let tf = MatsubaraTransform::new(grid.clone());
    let m = grid.len();

    let mut ghat: Vec<C64> = match seed {
        Some(s) if s.len() == m => s.to_vec(),
        _ => (0..m).map(|k| tf.free_matsubara(params.mu, k)).collect(),
    };
    let mut g_tau = tf.inverse_pole_split(&ghat, params.mu)?;
    let mut sigma_tau = vec![C64::new(0.0, 0.0); m];
    let mut ghat_new = vec![C64::new(0.0, 0.0); m];

    let mut w = config.mixing_weight;
    let mut prev_residual = f64::INFINITY;
    let mut history = Vec::new();
    let mut streak = 0usize;

    for iter in 0..config.max_iterations {
        sd_map(&tf, params, &g_tau, &mut sigma_tau, &mut ghat_new)?;
        let g_tau_new = tf.inverse_pole_split(&ghat_new, params.mu)?;
        let residual = g_tau
            .iter()
            .zip(&g_tau_new)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        history.push(residual);

        if residual <= config.tolerance {
            let matsubara = ghat.clone();
            let imag = ImagCorrelator {
                tau_grid: grid,
                g_plus: g_tau,
                sigma_plus: sigma_tau,
                matsubara,
            };
            return Ok(EquilibriumSolution {
                params: *params,
                config: config.clone(),
                imag,
                real: None,
                iterations_used: iter + 1,
                final_residual: residual,
            });
        }

        // halve the weight when the residual grows; creep back up after a
        // sustained run of decreases so an early transient cannot floor it
        // for good
        if residual > prev_residual {
            w = (0.5 * w).max(1.0 / 256.0);
            streak = 0;
        } else {
            streak += 1;
            if streak >= 8 {
                w = (1.25 * w).min(config.mixing_weight);
                streak = 0;
            }
        }
        prev_residual = residual;

        for k in 0..m {
            ghat[k] = (1.0 - w) * ghat[k] + w * ghat_new[k];
        }
        g_tau = tf.inverse_pole_split(&ghat, params.mu)?;
    }

    Err(SdError::Convergence {
        iterations: config.max_iterations,
        last_residual: *history.last().unwrap_or(&f64::NAN),
        residual_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize) -> SolverConfig {
        SolverConfig::fast(m)
    }

    #[test]
    fn free_limit_recovers_free_propagator() {
        // J = 0: Σ = 0, so the fixed point is the free solution exactly.
        let params = ModelParams::new(0, 1e-30, 4, 0.5, 8.0).unwrap();
        let sol = solve_imag(&params, &cfg(1 << 12)).unwrap();
        let tf = MatsubaraTransform::new(sol.imag.tau_grid.clone());
        for k in (0..sol.imag.len()).step_by(37) {
            let exact = tf.free_matsubara(0.5, k);
            assert!((sol.imag.matsubara[k] - exact).norm() < 1e-8);
        }
        assert!((sol.imag.g_lr_zero() - 0.5 * (0.5f64 * 8.0 * 0.5).tanh()).abs() < 1e-5);
    }

    #[test]
    fn decoupled_copies_have_zero_two_sided_correlator() {
        let params = ModelParams::q4(0.0, 10.0).unwrap();
        let sol = solve_imag(&params, &cfg(1 << 13)).unwrap();
        let max_lr = (0..sol.imag.len())
            .map(|m| sol.imag.g_lr(m).abs())
            .fold(0.0, f64::max);
        assert!(max_lr < 1e-12, "g_lr should vanish at mu = 0, got {max_lr:.3e}");
        assert!((sol.imag.g_ll_zero() - 0.5).abs() < 1e-6);
        assert!(sol.final_residual <= 1e-10);
    }

    #[test]
    fn coupled_solution_satisfies_type_invariants() {
        let params = ModelParams::q4(0.2, 40.0).unwrap();
        let sol = solve_imag(&params, &cfg(1 << 13)).unwrap();
        assert!((sol.imag.seam_jump() - 1.0).abs() < 1e-6);
        assert!(sol.imag.max_imag() < 1e-9);
        assert!(sol.imag.g_lr_zero() > 0.0 && sol.imag.g_lr_zero() < 0.5);
    }

    #[test]
    fn rejects_q_other_than_4() {
        let params = ModelParams::new(0, 1.0, 6, 0.1, 10.0).unwrap();
        match solve_imag(&params, &cfg(1 << 10)) {
            Err(SdError::UnsupportedModel(6)) => {}
            other => panic!("expected UnsupportedModel, got {other:?}"),
        }
    }
}
