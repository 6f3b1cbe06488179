use crate::error::KbError;
use crate::init::initialize_with_threshold;
use crate::propagate::propagate;
use crate::schedule::RampSchedule;
use crate::traces::energy_trace;
use mq_core::ModelParams;
use mq_sd::{single_side_energy, solve_imag, solve_real, SolverConfig};
use serde::Serialize;

/// Parameters of the exp-to-zero cooling sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub mu_i: f64,
    pub beta_init: f64,
    pub t_init: f64,
    pub dt: f64,
    /// Geometric grid of ramp time constants T* (ratio 2^{1/4} by default).
    pub t_star_grid: Vec<f64>,
    /// Horizon per run, as a multiple of T*.
    pub horizon_factor: f64,
    /// Initial-window decay gate (see `initialize_with_threshold`).
    pub decay_threshold: f64,
    pub solver: SolverConfig,
}

impl SweepConfig {
    pub fn geometric_t_star(lo: f64, hi: f64) -> Vec<f64> {
        let ratio = 2f64.powf(0.25);
        let mut v = vec![lo];
        while *v.last().unwrap() * ratio <= hi * (1.0 + 1e-12) {
            v.push(v.last().unwrap() * ratio);
        }
        v
    }
}

/// One β-target row of the sweep result.
#[derive(Debug, Clone, Serialize)]
pub struct CoolingPoint {
    pub beta_target: f64,
    pub energy_target: f64,
    /// Minimal time at which any run first reached the target energy;
    /// None marks an unreached target within the swept horizons.
    pub t_reach: Option<f64>,
    /// T* of the run achieving the minimum.
    pub t_star: Option<f64>,
}

/// Sweep the exp-to-zero ramp μ(t) = μᵢ e^{-t/T*} over the T*-grid and, for
/// each target temperature, report the minimal time at which the single-side
/// energy first reaches the uncoupled equilibrium value e(β).
pub fn cooling_time_sweep(
    beta_targets: &[f64],
    config: &SweepConfig,
) -> Result<Vec<CoolingPoint>, KbError> {
    if config.t_star_grid.is_empty() || beta_targets.is_empty() {
        return Err(KbError::InvalidInput("empty sweep grids".into()));
    }
    // reference energies of the uncoupled model
    let mut targets = Vec::with_capacity(beta_targets.len());
    for &b in beta_targets {
        let p = ModelParams::q4(0.0, b).map_err(KbError::Core)?;
        let sol = solve_imag(&p, &config.solver)?;
        targets.push((b, single_side_energy(&sol)?));
    }

    let params = ModelParams::q4(config.mu_i, config.beta_init).map_err(KbError::Core)?;
    let eq = solve_real(&params, &config.solver)?;

    let mut best: Vec<(Option<f64>, Option<f64>)> = vec![(None, None); targets.len()];
    for &t_star in &config.t_star_grid {
        let horizon = config.horizon_factor * t_star;
        let mut grid = initialize_with_threshold(
            &eq,
            config.t_init,
            horizon,
            config.dt,
            config.decay_threshold,
        )?;
        let schedule = RampSchedule::ExpToZero { mu_i: config.mu_i, time_constant: t_star };
        propagate(&mut grid, &schedule, 1)?;
        let e = energy_trace(&grid);
        for (k, &(_, e_target)) in targets.iter().enumerate() {
            if let Some(p) = e.iter().find(|p| p.value <= e_target) {
                let (cur, _) = best[k];
                if cur.map_or(true, |c| p.t < c) {
                    best[k] = (Some(p.t), Some(t_star));
                }
            }
        }
    }

    Ok(targets
        .iter()
        .zip(best)
        .map(|(&(beta_target, energy_target), (t_reach, t_star))| CoolingPoint {
            beta_target,
            energy_target,
            t_reach,
            t_star,
        })
        .collect())
}

/// Columnar export of a sweep table.
pub fn sweep_table(points: &[CoolingPoint]) -> String {
    let mut s = String::from("beta,energy_target,t_reach,t_star,reached\n");
    for p in points {
        s.push_str(&format!(
            "{:.9e},{:.9e},{},{},{}\n",
            p.beta_target,
            p.energy_target,
            p.t_reach.map_or("nan".into(), |v| format!("{v:.9e}")),
            p.t_star.map_or("nan".into(), |v| format!("{v:.9e}")),
            p.t_reach.is_some() as u8
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid_has_quarter_power_ratio() {
        let g = SweepConfig::geometric_t_star(2.0, 8.0);
        assert_eq!(g.len(), 9);
        for w in g.windows(2) {
            assert!((w[1] / w[0] - 2f64.powf(0.25)).abs() < 1e-12);
        }
    }
}
