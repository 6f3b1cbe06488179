use crate::error::KbError;
use crate::grid::TwoTimeGrid;
use crate::init::initialize_from_equilibrium;
use crate::propagate::{i1_diagonal, propagate};
use crate::schedule::RampSchedule;
use mq_core::C64;
use mq_sd::EquilibriumSolution;

/// One sample of a time trace; `truncated` marks times where the clipped
/// history window is estimated to contribute more than 1% of the value.
#[derive(Debug, Clone, Copy)]
pub struct TracePoint {
    pub t: f64,
    pub value: f64,
    pub truncated: bool,
}

/// Single-side energy density E(t)/N = (1/4)·I₁_LL(t,t), with I₁ the
/// dissipative Kadanoff-Baym kernel of the t₁ equation. Evaluated on the
/// filled diagonal for t ≥ 0.
pub fn energy_trace(grid: &TwoTimeGrid) -> Vec<TracePoint> {
    let z = grid.zero_index();
    (z..=grid.filled)
        .map(|i| {
            let i1 = i1_diagonal(grid, i);
            let value = 0.25 * i1.ll.re;
            // crude tail estimate: the integrand magnitude at the clipped
            // edge times the available window length
            let edge = grid.greater(i, 0).ll.norm();
            let j2 = grid.j_coupling * grid.j_coupling;
            let tail = 0.25 * j2 * edge.powi(4) * grid.t_init();
            TracePoint {
                t: grid.time(i),
                value,
                truncated: tail > 0.01 * value.abs().max(1e-12),
            }
        })
        .collect()
}

/// Two-sided correlator trace G_LR(t) (the ⟨-iχ_Lχ_R⟩-normalized component,
/// positive for ground states). Constant on t ≤ 0 by stationarity.
pub fn glr_trace(grid: &TwoTimeGrid) -> Vec<TracePoint> {
    let z = grid.zero_index();
    (z..=grid.filled)
        .map(|i| TracePoint { t: grid.time(i), value: grid.lr[(i, i)].re, truncated: false })
        .collect()
}

/// Full two-sided trace including the initial window (diagnostics).
pub fn glr_trace_full(grid: &TwoTimeGrid) -> Vec<TracePoint> {
    (0..=grid.filled)
        .map(|i| TracePoint { t: grid.time(i), value: grid.lr[(i, i)].re, truncated: false })
        .collect()
}

/// Single-side autocorrelator of the coupled ground state evolved by the
/// *uncoupled* models: a sudden quench μ → 0 at t = 0, reading
/// G^>_LL(t, 0) along the first column of the causal square. Returns
/// (t, G^>_LL(t,0)) samples for t ∈ [0, horizon].
pub fn quench_autocorrelator(
    eq: &EquilibriumSolution,
    t_init: f64,
    horizon: f64,
    dt: f64,
) -> Result<(TwoTimeGrid, Vec<(f64, C64)>), KbError> {
    let mut grid = initialize_from_equilibrium(eq, t_init, horizon, dt)?;
    let schedule = RampSchedule::Sudden { mu_i: eq.params.mu, mu_f: 0.0 };
    propagate(&mut grid, &schedule, 1)?;
    let z = grid.zero_index();
    let trace = (z..=grid.filled)
        .map(|i| (grid.time(i), grid.ll[(i, z)]))
        .collect();
    Ok((grid, trace))
}

/// Work-energy bookkeeping over a propagated run: returns
/// (∫|d⟨H_tot⟩/dt + μ̇·G_LR| dt, |Δ⟨H_tot⟩|) per fermion, with
/// ⟨H_tot⟩/N = 2E/N - μ(t)·G_LR(t). For slow ramps the mismatch should be
/// a small fraction of the total energy change.
pub fn work_energy_mismatch(grid: &TwoTimeGrid) -> (f64, f64) {
    let e = energy_trace(grid);
    let g = glr_trace(grid);
    let z = grid.zero_index();
    let n = e.len();
    let mut h = Vec::with_capacity(n);
    for k in 0..n {
        let mu = grid.schedule.mu(grid.time(z + k));
        h.push(2.0 * e[k].value - mu * g[k].value);
    }
    let dt = grid.dt;
    let mut mismatch = 0.0;
    for k in 1..n - 1 {
        let dh = (h[k + 1] - h[k - 1]) / (2.0 * dt);
        let t = grid.time(z + k);
        let mu_dot = (grid.schedule.mu(t + dt) - grid.schedule.mu(t - dt)) / (2.0 * dt);
        mismatch += (dh + mu_dot * g[k].value).abs() * dt;
    }
    (mismatch, (h[n - 1] - h[0]).abs())
}

/// Columnar text export for a set of named traces sharing a time axis.
pub fn traces_table(names: &[&str], traces: &[&[TracePoint]]) -> String {
    let mut s = String::new();
    s.push_str("t");
    for n in names {
        s.push_str(&format!(",{n},{n}_truncated"));
    }
    s.push('\n');
    if traces.is_empty() {
        return s;
    }
    for k in 0..traces[0].len() {
        s.push_str(&format!("{:.9e}", traces[0][k].t));
        for tr in traces {
            s.push_str(&format!(",{:.9e},{}", tr[k].value, tr[k].truncated as u8));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::initialize_from_equilibrium;
    use mq_core::ModelParams;
    use mq_sd::{single_side_energy, solve_real, SolverConfig};

    fn config() -> SolverConfig {
        SolverConfig { grid_size: 1 << 14, omega_size: 1 << 13, ..SolverConfig::default() }
    }

    #[test]
    fn energy_at_time_zero_matches_imaginary_time_route() {
        // Cross-module oracle: (1/4)·I₁_LL(0,0) from the real-time kernel
        // against -(J²/4)∫(G_LL⁴+G_LR⁴)dτ from the imaginary-time solve.
        let params = ModelParams::q4(0.3, 4.0).unwrap();
        let eq = solve_real(&params, &config()).unwrap();
        let e_imag = single_side_energy(&eq).unwrap();
        let grid = initialize_from_equilibrium(&eq, 35.0, 1.0, 0.05).unwrap();
        let e0 = energy_trace(&grid)[0];
        assert!(
            (e0.value - e_imag).abs() < 1e-3,
            "KB t=0 energy {} vs imaginary-time {}",
            e0.value,
            e_imag
        );
        assert!(!e0.truncated, "t=0 energy should not be truncation-flagged");
    }

    #[test]
    fn glr_is_stationary_on_the_initial_window() {
        let params = ModelParams::q4(0.3, 4.0).unwrap();
        let eq = solve_real(&params, &config()).unwrap();
        let grid = initialize_from_equilibrium(&eq, 35.0, 1.0, 0.05).unwrap();
        let g = glr_trace_full(&grid);
        let spread = g
            .iter()
            .map(|p| (p.value - g[0].value).abs())
            .fold(0.0, f64::max);
        assert!(spread < 1e-12, "initial window G_LR spread {spread:.2e}");
        // equilibrium value agrees with the imaginary-time two-sided correlator
        assert!(
            (g[0].value - eq.imag.g_lr_zero()).abs() < 2e-3,
            "window G_LR {} vs imaginary-time {}",
            g[0].value,
            eq.imag.g_lr_zero()
        );
    }
}
