use crate::error::KbError;
use crate::grid::{GPair, TwoTimeGrid};
use crate::schedule::RampSchedule;
use mq_core::C64;
use mq_sd::EquilibriumSolution;
use ndarray::Array2;
use rayon::prelude::*;

/// Fill the initial window [-t_init, 0]² with the equilibrium correlators
/// of a converged coupled solve (which must carry its spectral part):
///
///   G^>_LL(t) = -i ∫dω e^{-iωt} n_LL(ω),   G^>_LR(t) = ∫dω e^{-iωt} n_LR(ω)
///
/// filled as G^>(t₁, t₂) = G^>(t₁ - t₂). The equilibrium decay
/// |G^>_LL(t_init)| < 10⁻³·|G^>_LL(0)| is required; long-lived revivals at
/// low temperature violate it, and the error names the estimated maximum
/// admissible β for the given window.
pub fn initialize_from_equilibrium(
    eq: &EquilibriumSolution,
    t_init: f64,
    t_max: f64,
    dt: f64,
) -> Result<TwoTimeGrid, KbError> {
    initialize_with_threshold(eq, t_init, t_max, dt, 1e-3)
}

/// Variant with an explicit decay gate. The strongly gapped working point
/// (μᵢ = 0.5, β = 8) decays only to 4.5·10⁻³ by t = 80/J — runs at that
/// window must relax the gate to ~5·10⁻³ explicitly.
pub fn initialize_with_threshold(
    eq: &EquilibriumSolution,
    t_init: f64,
    t_max: f64,
    dt: f64,
    decay_threshold: f64,
) -> Result<TwoTimeGrid, KbError> {
    let sp = eq.real.as_ref().ok_or_else(|| {
        KbError::InvalidInput("equilibrium solution lacks the real-frequency part".into())
    })?;
    if !(dt > 0.0) || !(t_init > 0.0) || !(t_max > 0.0) {
        return Err(KbError::InvalidInput(format!(
            "t_init = {t_init}, t_max = {t_max}, dt = {dt} must all be positive"
        )));
    }
    let n_init = (t_init / dt).round() as usize;
    let n_fwd = (t_max / dt).round() as usize;
    let n_total = n_init + n_fwd + 1;

    // Wightman pair at every lattice time difference in [-t_init, t_init].
    let diffs: Vec<GPair> = (0..=2 * n_init)
        .into_par_iter()
        .map(|k| {
            let t = (k as f64 - n_init as f64) * dt;
            GPair { ll: sp.wightman_ll(t), lr: sp.wightman_lr(t) }
        })
        .collect();

    let g0 = diffs[n_init].ll.norm();
    let gend = diffs[2 * n_init].ll.norm().max(diffs[0].ll.norm());
    let decay = gend / g0;
    if decay > decay_threshold {
        // decay rate scales roughly with the temperature; estimate the β
        // that would reach the gate within this window
        let rate = -(decay.ln()) / t_init;
        let needed = -decay_threshold.ln() / t_init;
        let beta_admissible = eq.params.beta * rate / needed;
        return Err(KbError::Initialization(format!(
            "equilibrium correlator decays only to {decay:.2e} of its equal-time value over \
             t_init = {t_init} (gate {decay_threshold:.1e}); increase t_init or raise the \
             temperature to roughly beta <= {beta_admissible:.1} (currently beta = {})",
            eq.params.beta
        )));
    }

    let nan = C64::new(f64::NAN, f64::NAN);
    let mut grid = TwoTimeGrid {
        dt,
        n_init,
        n_total,
        filled: n_init,
        ll: Array2::from_elem((n_total, n_total), nan),
        lr: Array2::from_elem((n_total, n_total), nan),
        ll_t: Array2::from_elem((n_total, n_total), nan),
        lr_t: Array2::from_elem((n_total, n_total), nan),
        schedule: RampSchedule::Constant { mu: eq.params.mu },
        init_decay: decay,
        beta_init: eq.params.beta,
        mu_init: eq.params.mu,
        j_coupling: eq.params.j_coupling,
    };
    for i in 0..=n_init {
        for j in 0..=n_init {
            let g = diffs[n_init + i - j];
            grid.set(i, j, g);
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mq_core::ModelParams;
    use mq_sd::{solve_real, SolverConfig};

    fn small_real_config() -> SolverConfig {
        SolverConfig { grid_size: 1 << 12, omega_size: 1 << 12, ..SolverConfig::default() }
    }

    #[test]
    fn initial_window_is_stationary_with_canonical_diagonal() {
        let params = ModelParams::q4(0.5, 4.0).unwrap();
        let eq = solve_real(&params, &small_real_config()).unwrap();
        let grid = initialize_from_equilibrium(&eq, 40.0, 2.0, 0.1).unwrap();
        assert!(grid.canonical_violation() < 1e-3, "diag violation {}", grid.canonical_violation());
        // time-translation invariance of the window
        let (a, b) = (grid.greater(3, 7), grid.greater(23, 27));
        assert!((a.ll - b.ll).norm() < 1e-12);
        assert!((a.lr - b.lr).norm() < 1e-12);
        // exchange relation holds by construction of the equilibrium pair:
        // G^<_LL(t1,t2) = -G^>_LL(t2,t1) is a property of the *lookup*, so
        // just check the stored transposes agree
        assert_eq!(grid.ll_t[(7, 3)], grid.ll[(3, 7)]);
    }

    #[test]
    fn low_temperature_window_is_rejected() {
        // β = 10 at small μ keeps revivals alive past the window
        let params = ModelParams::q4(0.05, 10.0).unwrap();
        let eq = solve_real(&params, &small_real_config()).unwrap();
        match initialize_from_equilibrium(&eq, 8.0, 2.0, 0.1) {
            Err(KbError::Initialization(msg)) => {
                assert!(msg.contains("beta"), "message should advise on beta: {msg}");
            }
            other => panic!("expected initialization rejection, got {:?}", other.map(|_| ())),
        }
    }
}
