use crate::error::CoreError;
use crate::C64;
use serde::{Deserialize, Serialize};

/// Fermi-type weight 1/(1 + e^{-x}) in overflow-safe form.
pub fn fermi_plus(x: f64) -> f64 {
    0.5 * (1.0 + (0.5 * x).tanh())
}

/// 1/(2 cosh x) in overflow-safe form.
pub fn sech_half(x: f64) -> f64 {
    let a = x.abs();
    (-a).exp() / (1.0 + (-2.0 * a).exp())
}

/// Uniform symmetric frequency grid, midpoint-sampled so that ω → -ω is the
/// exact index reflection k ↔ W-1-k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaGrid {
    omega_max: f64,
    len: usize,
}

impl OmegaGrid {
    pub fn new(omega_max: f64, len: usize) -> Result<Self, CoreError> {
        if !(omega_max > 0.0) {
            return Err(CoreError::InvalidGrid(format!(
                "omega_max must be positive, got {omega_max}"
            )));
        }
        if len < 8 || len % 2 != 0 {
            return Err(CoreError::InvalidGrid(format!(
                "frequency grid length must be even and >= 8, got {len}"
            )));
        }
        Ok(Self { omega_max, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.omega_max / self.len as f64
    }

    pub fn omega(&self, k: usize) -> f64 {
        (k as f64 - 0.5 * self.len as f64 + 0.5) * self.spacing()
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn reflect(&self, k: usize) -> usize {
        self.len - 1 - k
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.omega(k))
    }
}

/// Real-frequency equilibrium data for the rotated retarded channel
/// Gᴿ(ω) (free limit 1/(ω + iε - μ)), its spectral function
/// ρ(ω) = -(1/π) Im Gᴿ(ω), the even/odd components ρ_LL / ρ_LR, and the
/// occupation functions n_AB(ω) = ρ_AB(ω)/(e^{-βω} + 1).
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub grid: OmegaGrid,
    pub g_retarded: Vec<C64>,
    pub rho_plus: Vec<f64>,
    pub rho_ll: Vec<f64>,
    pub rho_lr: Vec<f64>,
    pub n_ll: Vec<f64>,
    pub n_lr: Vec<f64>,
    pub beta: f64,
    pub epsilon_reg: f64,
}

impl SpectralData {
    /// Build all derived quantities from the converged retarded channel.
    pub fn from_retarded(grid: OmegaGrid, g_retarded: Vec<C64>, beta: f64, epsilon_reg: f64) -> Self {
        let w = grid.len();
        let rho_plus: Vec<f64> = g_retarded
            .iter()
            .map(|g| -g.im / std::f64::consts::PI)
            .collect();
        let mut rho_ll = vec![0.0; w];
        let mut rho_lr = vec![0.0; w];
        let mut n_ll = vec![0.0; w];
        let mut n_lr = vec![0.0; w];
        for k in 0..w {
            let r = grid.reflect(k);
            rho_ll[k] = 0.5 * (rho_plus[k] + rho_plus[r]);
            rho_lr[k] = 0.5 * (rho_plus[k] - rho_plus[r]);
            let f = fermi_plus(beta * grid.omega(k));
            n_ll[k] = rho_ll[k] * f;
            n_lr[k] = rho_lr[k] * f;
        }
        Self { grid, g_retarded, rho_plus, rho_ll, rho_lr, n_ll, n_lr, beta, epsilon_reg }
    }

    /// ∫ ρ_LL dω; unity from the anticommutator.
    pub fn sum_rule(&self) -> f64 {
        self.rho_ll.iter().sum::<f64>() * self.grid.spacing()
    }

    /// Equilibrium Wightman functions at time t:
    ///   G^>_LL(t) = -i ∫dω e^{-iωt} n_LL(ω)
    ///   G^>_LR(t) =    ∫dω e^{-iωt} n_LR(ω)
    pub fn wightman_ll(&self, t: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (k, n) in self.n_ll.iter().enumerate() {
            acc += n * C64::from_polar(1.0, -self.grid.omega(k) * t);
        }
        C64::new(0.0, -1.0) * acc * self.grid.spacing()
    }

    pub fn wightman_lr(&self, t: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (k, n) in self.n_lr.iter().enumerate() {
            acc += n * C64::from_polar(1.0, -self.grid.omega(k) * t);
        }
        acc * self.grid.spacing()
    }

    /// Thermally regulated autocorrelator value G_β(0) = ∫dω ρ/(2cosh(βω/2));
    /// equals the imaginary-time G(β/2).
    pub fn g_half_beta(&self) -> f64 {
        let mut acc = 0.0;
        for (k, r) in self.rho_plus.iter().enumerate() {
            acc += r * sech_half(0.5 * self.beta * self.grid.omega(k));
        }
        acc * self.grid.spacing()
    }

    /// Second real-time derivative G″_β(0) = -∫dω ω² ρ/(2cosh(βω/2)) < 0.
    pub fn g_ddot_half_beta(&self) -> f64 {
        let mut acc = 0.0;
        for (k, r) in self.rho_plus.iter().enumerate() {
            let w = self.grid.omega(k);
            acc += w * w * r * sech_half(0.5 * self.beta * w);
        }
        -acc * self.grid.spacing()
    }

    /// Largest parity violation: ρ_LL should be even, ρ_LR odd. Both hold by
    /// construction; this checks the stored arrays (useful after IO).
    pub fn parity_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.grid.len() {
            let r = self.grid.reflect(k);
            worst = worst.max((self.rho_ll[k] - self.rho_ll[r]).abs());
            worst = worst.max((self.rho_lr[k] + self.rho_lr[r]).abs());
        }
        worst
    }
}
