use crate::config::SolverConfig;
use crate::error::SdError;
use crate::imag::solve_imag_seeded;
use crate::solution::EquilibriumSolution;
use mq_core::{C64, fermi_plus, ModelParams, OmegaGrid, SpectralData};
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// FFT-backed pair of continuum-normalized transforms between the symmetric
/// midpoint ω-grid and its dual time grid t_j = (j - W/2)·dt, dt = 2π/(W·dω):
///
///   to_time: f̃(t_j) = dω Σ_k f(ω_k) e^{-iω_k t_j}
///   to_freq: F(ω_k) = dt Σ_j f̃(t_j) e^{+iω_k t_j}
///
/// These are discretized Fourier integrals (not mutual inverses; the pair
/// composes to 2π, matching the continuum conventions they discretize).
pub struct RealFreqTransform {
    grid: OmegaGrid,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl RealFreqTransform {
    pub fn new(grid: OmegaGrid) -> Self {
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(grid.len());
        let fft_inv = planner.plan_fft_inverse(grid.len());
        Self { grid, fft_fwd, fft_inv }
    }

    pub fn grid(&self) -> &OmegaGrid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        2.0 * PI / (self.grid.len() as f64 * self.grid.spacing())
    }

    /// Time at slot j; t = 0 sits exactly at j = W/2.
    pub fn time(&self, j: usize) -> f64 {
        (j as f64 - 0.5 * self.grid.len() as f64) * self.dt()
    }

    pub fn to_time(&self, f: &[C64]) -> Vec<C64> {
        let w = self.grid.len();
        debug_assert_eq!(f.len(), w);
        let mut buf: Vec<C64> = f
            .iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
            .collect();
        self.fft_fwd.process(&mut buf);
        let c = (w - 1) as f64;
        let global = C64::from_polar(self.grid.spacing(), -PI * c / 2.0);
        buf.iter()
            .enumerate()
            .map(|(j, v)| global * C64::from_polar(1.0, PI * c * j as f64 / w as f64) * v)
            .collect()
    }

    pub fn to_freq(&self, f: &[C64]) -> Vec<C64> {
        let w = self.grid.len();
        debug_assert_eq!(f.len(), w);
        let c = (w - 1) as f64;
        let mut buf: Vec<C64> = f
            .iter()
            .enumerate()
            .map(|(j, v)| C64::from_polar(1.0, -PI * c * j as f64 / w as f64) * v)
            .collect();
        self.fft_inv.process(&mut buf);
        let global = C64::from_polar(self.dt(), PI * c / 2.0);
        buf.iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { global * v } else { -global * v })
            .collect()
    }
}

/// Solve the real-frequency equations on top of a converged imaginary-time
/// solution; returns the combined equilibrium solution.
pub fn solve_real(params: &ModelParams, config: &SolverConfig) -> Result<EquilibriumSolution, SdError> {
    solve_real_seeded(params, config, None)
}

pub fn solve_real_seeded(
    params: &ModelParams,
    config: &SolverConfig,
    real_seed: Option<&[C64]>,
) -> Result<EquilibriumSolution, SdError> {
    let mut sol = solve_imag_seeded(params, config, None)?;
    let spectral = solve_real_axis(params, config, real_seed)?;
    sol.real = Some(spectral);
    Ok(sol)
}

/// The real-axis iteration alone.
pub fn solve_real_axis(
    params: &ModelParams,
    config: &SolverConfig,
    seed: Option<&[C64]>,
) -> Result<SpectralData, SdError> {
    config.validate()?;
    if params.q_body != 4 {
        return Err(SdError::UnsupportedModel(params.q_body));
    }
    let grid = OmegaGrid::new(config.omega_max, config.omega_size)?;
    let w_len = grid.len();
    // Sub-grid resonances are unrepresentable and derail the iteration (the
    // gapped model's quasiparticle peaks can be far narrower than 10⁻⁵ J);
    // floor the regulator at one grid spacing. The effective value is
    // recorded in the output.
    let eps = config.epsilon_reg.max(grid.spacing());
    let j2 = params.j_coupling * params.j_coupling;

    // The cube of the occupation functions carries spectral content out to
    // 3·omega_max; evaluate it on a 3x zero-padded grid so it cannot alias
    // back into the physical window.
    let padded = OmegaGrid::new(3.0 * config.omega_max, 3 * w_len)?;
    let tf = RealFreqTransform::new(padded.clone());
    let pad = w_len; // physical window occupies the central third

    let free = |k: usize| C64::new(1.0, 0.0) / C64::new(grid.omega(k) - params.mu, eps);
    let mut g: Vec<C64> = match seed {
        Some(s) if s.len() == w_len => s.to_vec(),
        _ => (0..w_len).map(free).collect(),
    };

    let mut mix = config.mixing_weight;
    let mut prev_residual = f64::INFINITY;
    let mut history = Vec::new();
    let mut streak = 0usize;

    let mut n_ll = vec![C64::new(0.0, 0.0); padded.len()];
    let mut n_lr = vec![C64::new(0.0, 0.0); padded.len()];

    for _iter in 0..config.max_iterations {
        // occupations from the current spectral function
        for k in 0..w_len {
            let rho_k = -g[k].im / PI;
            let rho_r = -g[grid.reflect(k)].im / PI;
            let f = fermi_plus(params.beta * grid.omega(k));
            n_ll[pad + k] = C64::new(0.5 * (rho_k + rho_r) * f, 0.0);
            n_lr[pad + k] = C64::new(0.5 * (rho_k - rho_r) * f, 0.0);
        }
        let nt_ll = tf.to_time(&n_ll);
        let nt_lr = tf.to_time(&n_lr);

        // Σᴿ(t) = -2iJ²θ(t)[Re ñ_LL³ - i Im ñ_LR³]
        let mut sig_t = vec![C64::new(0.0, 0.0); padded.len()];
        for j in 0..padded.len() {
            let t = tf.time(j);
            if t < 0.0 {
                continue;
            }
            let a = nt_ll[j];
            let b = nt_lr[j];
            let a3 = a * a * a;
            let b3 = b * b * b;
            let combo = C64::new(a3.re, -b3.im);
            // trapezoid-consistent θ: half weight exactly at t = 0
            let theta = if t == 0.0 { 0.5 } else { 1.0 };
            sig_t[j] = C64::new(0.0, -2.0 * j2 * theta) * combo;
        }
        let sig_w = tf.to_freq(&sig_t);

        let mut residual = 0.0f64;
        for k in 0..w_len {
            let g_new =
                C64::new(1.0, 0.0) / (C64::new(grid.omega(k) - params.mu, eps) - sig_w[pad + k]);
            residual = residual.max((g_new - g[k]).norm());
            g[k] = (1.0 - mix) * g[k] + mix * g_new;
        }
        history.push(residual);
        if residual <= config.tolerance_real {
            return Ok(SpectralData::from_retarded(grid, g, params.beta, eps));
        }
        if residual > prev_residual {
            mix = (0.5 * mix).max(1.0 / 256.0);
            streak = 0;
        } else {
            streak += 1;
            if streak >= 8 {
                mix = (1.25 * mix).min(config.mixing_weight);
                streak = 0;
            }
        }
        prev_residual = residual;
    }

    Err(SdError::Convergence {
        iterations: config.max_iterations,
        last_residual: *history.last().unwrap_or(&f64::NAN),
        residual_history: history,
    })
}

/// Location of the lowest-ω local maximum of a spectral function at ω > 0,
/// with parabolic refinement. Peaks below `rel_height` of the global
/// maximum are treated as noise. Returns None when no peak qualifies.
pub fn lowest_positive_peak(rho: &[f64], grid: &OmegaGrid, rel_height: f64) -> Option<f64> {
    let global = rho.iter().cloned().fold(0.0, f64::max);
    if global <= 0.0 {
        return None;
    }
    let w = grid.len();
    for k in 1..w - 1 {
        if grid.omega(k) <= grid.spacing() {
            continue;
        }
        if rho[k] >= rho[k - 1] && rho[k] > rho[k + 1] && rho[k] >= rel_height * global {
            let denom = rho[k - 1] - 2.0 * rho[k] + rho[k + 1];
            let shift = if denom.abs() > 1e-300 {
                0.5 * (rho[k - 1] - rho[k + 1]) / denom
            } else {
                0.0
            };
            return Some(grid.omega(k) + shift.clamp(-0.5, 0.5) * grid.spacing());
        }
    }
    None
}
