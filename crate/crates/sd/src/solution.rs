use crate::config::SolverConfig;
use mq_core::{ImagCorrelator, ModelParams, SpectralData};
use serde::Serialize;

/// Converged equilibrium solution. The symmetries G_LL = G_RR and
/// G_LR = -G_RL hold by construction of the rotated channel.
#[derive(Debug, Clone)]
pub struct EquilibriumSolution {
    pub params: ModelParams,
    pub config: SolverConfig,
    pub imag: ImagCorrelator,
    pub real: Option<SpectralData>,
    pub iterations_used: usize,
    pub final_residual: f64,
}

/// Flat summary of a solve, for the run record.
#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub mu: f64,
    pub beta: f64,
    pub grid_size: usize,
    pub iterations_used: usize,
    pub final_residual: f64,
    pub g_ll_zero: f64,
    pub g_lr_zero: f64,
    pub g_ll_half_beta: f64,
    pub energy_per_fermion: f64,
    pub omega_max: Option<f64>,
    pub spectral_sum_rule: Option<f64>,
}

impl EquilibriumSolution {
    pub fn summary(&self) -> SolveSummary {
        SolveSummary {
            mu: self.params.mu,
            beta: self.params.beta,
            grid_size: self.imag.len(),
            iterations_used: self.iterations_used,
            final_residual: self.final_residual,
            g_ll_zero: self.imag.g_ll_zero(),
            g_lr_zero: self.imag.g_lr_zero(),
            g_ll_half_beta: self.imag.g_ll_half_beta(),
            energy_per_fermion: crate::observables::single_side_energy(self)
                .unwrap_or(f64::NAN),
            omega_max: self.real.as_ref().map(|r| r.grid.omega_max()),
            spectral_sum_rule: self.real.as_ref().map(|r| r.sum_rule()),
        }
    }

    /// Imaginary-time table: comma-separated columns with '#' metadata.
    /// `stride` thins the rows (full 2¹⁶-point dumps are rarely wanted).
    pub fn imag_table(&self, stride: usize) -> String {
        let stride = stride.max(1);
        let mut s = String::new();
        s.push_str(&format!(
            "# equilibrium imaginary-time correlators, mu={} beta={} M={}\n",
            self.params.mu,
            self.params.beta,
            self.imag.len()
        ));
        s.push_str(&format!(
            "# iterations={} residual={:.3e}\n",
            self.iterations_used, self.final_residual
        ));
        s.push_str("tau,g_ll,g_lr,g_plus_re,g_plus_im\n");
        for m in (0..self.imag.len()).step_by(stride) {
            s.push_str(&format!(
                "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}\n",
                self.imag.tau_grid.tau(m),
                self.imag.g_ll(m),
                self.imag.g_lr(m),
                self.imag.g_plus[m].re,
                self.imag.g_plus[m].im,
            ));
        }
        s
    }

    /// Real-frequency table (empty string when no spectral part is present).
    pub fn real_table(&self, stride: usize) -> String {
        let Some(sp) = &self.real else {
            return String::new();
        };
        let stride = stride.max(1);
        let mut s = String::new();
        s.push_str(&format!(
            "# equilibrium spectral data, mu={} beta={} W={} omega_max={} epsilon={:.1e}\n",
            self.params.mu,
            self.params.beta,
            sp.grid.len(),
            sp.grid.omega_max(),
            sp.epsilon_reg
        ));
        s.push_str("omega,rho_plus,rho_ll,rho_lr,n_ll,n_lr,g_ret_re,g_ret_im\n");
        for k in (0..sp.grid.len()).step_by(stride) {
            s.push_str(&format!(
                "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}\n",
                sp.grid.omega(k),
                sp.rho_plus[k],
                sp.rho_ll[k],
                sp.rho_lr[k],
                sp.n_ll[k],
                sp.n_lr[k],
                sp.g_retarded[k].re,
                sp.g_retarded[k].im,
            ));
        }
        s
    }
}
