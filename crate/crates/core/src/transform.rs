use crate::error::CoreError;
use crate::grid::TauGrid;
use crate::C64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Discrete antiperiodic Fourier pair between the midpoint τ-grid and the
/// fermionic Matsubara frequencies ω_n = (2n+1)π/β.
///
/// Forward:  Ĝ(iω_n) = Δτ Σ_m e^{-iω_n τ_m} G(τ_m),  n = -M/2 .. M/2-1
/// Inverse:  G(τ_m)  = (1/β) Σ_n e^{+iω_n τ_m} Ĝ(iω_n)
///
/// The pair is an exact bijection (round trip at machine precision).
/// Coefficients are stored in ascending-frequency order: slot k holds
/// n = k - M/2.
///
/// With these conventions the free rotated-channel propagator transforms
/// exactly: G⁰(τ) = e^{ν(τ-β)}/(1+e^{-νβ})  ↦  Ĝ⁰(iω_n) = 1/(iω_n - ν).
pub struct MatsubaraTransform {
    grid: TauGrid,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
    // e^{-iπ m / M} pre-twist for the forward direction
    twist_tau: Vec<C64>,
    // e^{-iπ (2k+1) / (2M)} post-twist for the forward direction
    twist_freq: Vec<C64>,
}

impl MatsubaraTransform {
    pub fn new(grid: TauGrid) -> Self {
        let m = grid.len();
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(m);
        let fft_inv = planner.plan_fft_inverse(m);
        let twist_tau = (0..m)
            .map(|j| C64::from_polar(1.0, -PI * j as f64 / m as f64))
            .collect();
        let twist_freq = (0..m)
            .map(|k| C64::from_polar(1.0, -PI * (2 * k + 1) as f64 / (2 * m) as f64))
            .collect();
        Self { grid, fft_fwd, fft_inv, twist_tau, twist_freq }
    }

    pub fn grid(&self) -> &TauGrid {
        &self.grid
    }

    fn check_len(&self, len: usize) -> Result<(), CoreError> {
        if len != self.grid.len() {
            return Err(CoreError::InvalidGrid(format!(
                "data length {len} does not match grid length {}",
                self.grid.len()
            )));
        }
        Ok(())
    }

    /// τ-samples → Matsubara coefficients (ascending n = -M/2..M/2-1).
    pub fn forward(&self, g_tau: &[C64]) -> Result<Vec<C64>, CoreError> {
        self.check_len(g_tau.len())?;
        let m = self.grid.len();
        let dtau = self.grid.spacing();
        let mut buf: Vec<C64> = g_tau
            .iter()
            .zip(&self.twist_tau)
            .map(|(g, w)| g * w)
            .collect();
        self.fft_fwd.process(&mut buf);
        // Slot k of the FFT output is the formula value at n = k; the signed
        // index wraps antiperiodically: F(n - M) = -F(n).
        let mut out = vec![C64::new(0.0, 0.0); m];
        for k in 0..m {
            let val = dtau * self.twist_freq[k] * buf[k];
            if k < m / 2 {
                out[k + m / 2] = val; // n = k
            } else {
                out[k - m / 2] = -val; // n = k - M
            }
        }
        Ok(out)
    }

    /// Matsubara coefficients (ascending order) → τ-samples.
    pub fn inverse(&self, g_hat: &[C64]) -> Result<Vec<C64>, CoreError> {
        self.check_len(g_hat.len())?;
        let m = self.grid.len();
        let beta = self.grid.beta();
        let mut buf = vec![C64::new(0.0, 0.0); m];
        for k in 0..m {
            // Z_k carries e^{+iπk/M}; slots k >= M/2 are the wrapped negative
            // frequencies and pick up the antiperiodic sign.
            let w = C64::from_polar(1.0, PI * k as f64 / m as f64);
            if k < m / 2 {
                buf[k] = g_hat[k + m / 2] * w;
            } else {
                buf[k] = -g_hat[k - m / 2] * w;
            }
        }
        self.fft_inv.process(&mut buf);
        let mut out = vec![C64::new(0.0, 0.0); m];
        for (j, o) in out.iter_mut().enumerate() {
            let w = C64::from_polar(1.0, PI * (2 * j + 1) as f64 / (2 * m) as f64);
            *o = w * buf[j] / beta;
        }
        Ok(out)
    }

    /// Forward transform with an explicit seam-jump subtraction.
    ///
    /// Functions antiperiodic on the circle carry a jump at τ = 0/β whose
    /// Fourier tail decays like 1/ω_n; subtracting j·(1/2) (unit-jump step
    /// with exact coefficients 1/(iω_n)) before the plain DFT removes the
    /// leading midpoint-rule error at high frequency. The jump is estimated
    /// by linear extrapolation of the first/last two samples to the seam.
    pub fn forward_seam_corrected(&self, s_tau: &[C64]) -> Result<Vec<C64>, CoreError> {
        self.check_len(s_tau.len())?;
        let m = self.grid.len();
        let s0 = (3.0 * s_tau[0] - s_tau[1]) * 0.5; // S(0⁺)
        let sb = (3.0 * s_tau[m - 1] - s_tau[m - 2]) * 0.5; // S(β⁻)
        let jump = s0 + sb; // S(0⁺) - S(0⁻) under antiperiodic wrap
        let shifted: Vec<C64> = s_tau.iter().map(|s| s - 0.5 * jump).collect();
        let mut out = self.forward(&shifted)?;
        for (k, o) in out.iter_mut().enumerate() {
            let wn = self.grid.matsubara(self.grid.index_to_n(k));
            *o += jump / C64::new(0.0, wn);
        }
        Ok(out)
    }

    /// Inverse transform with the pole 1/(iω_n - ν) split off and resummed
    /// analytically, so the 1/ω_n tail of a propagator-like input does not
    /// ring at the seam. The remainder must decay faster than 1/ω_n.
    pub fn inverse_pole_split(&self, g_hat: &[C64], nu: f64) -> Result<Vec<C64>, CoreError> {
        self.check_len(g_hat.len())?;
        let m = self.grid.len();
        let mut rest = vec![C64::new(0.0, 0.0); m];
        for k in 0..m {
            rest[k] = g_hat[k] - self.free_matsubara(nu, k);
        }
        let mut out = self.inverse(&rest)?;
        for (j, o) in out.iter_mut().enumerate() {
            *o += free_g_tau(self.grid.beta(), nu, self.grid.tau(j));
        }
        Ok(out)
    }

    /// 1/(iω_n - ν) at storage slot k.
    pub fn free_matsubara(&self, nu: f64, k: usize) -> C64 {
        let wn = self.grid.matsubara(self.grid.index_to_n(k));
        C64::new(1.0, 0.0) / C64::new(-nu, wn)
    }

    /// Free τ-side propagator sampled on the grid.
    pub fn free_tau(&self, nu: f64) -> Vec<C64> {
        self.grid
            .taus()
            .map(|t| C64::new(free_g_tau(self.grid.beta(), nu, t), 0.0))
            .collect()
    }
}

/// e^{ν(τ-β)}/(1 + e^{-νβ}), evaluated in overflow-safe form for either sign
/// of ν. Exact continuum partner of 1/(iω_n - ν).
pub fn free_g_tau(beta: f64, nu: f64, tau: f64) -> f64 {
    if nu >= 0.0 {
        (nu * (tau - beta)).exp() / (1.0 + (-nu * beta).exp())
    } else {
        (nu * tau).exp() / ((nu * beta).exp() + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn transform(beta: f64, m: usize) -> MatsubaraTransform {
        MatsubaraTransform::new(TauGrid::new(beta, m).unwrap())
    }

    #[test]
    fn free_solution_forward_matches_pole() {
        // Midpoint-rule error grows with ω_n; check the physical low-n window
        // at high resolution.
        let t = transform(8.0, 1 << 18);
        let g = t.free_tau(0.5);
        let ghat = t.forward(&g).unwrap();
        let m = t.grid().len();
        for n in -32i64..32 {
            let k = (n + (m / 2) as i64) as usize;
            let exact = t.free_matsubara(0.5, k);
            let err = (ghat[k] - exact).norm();
            assert!(err < 1e-8, "n={n}: err={err:.3e}");
        }
    }

    #[test]
    fn round_trip_identity() {
        let t = transform(3.7, 256);
        let g: Vec<C64> = (0..256)
            .map(|i| {
                let x = i as f64;
                C64::new((0.3 * x).sin() * 0.5, (0.17 * x).cos() * 0.2)
            })
            .collect();
        let back = t.inverse(&t.forward(&g).unwrap()).unwrap();
        let max: f64 = g
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale: f64 = g.iter().map(|a| a.norm()).fold(0.0, f64::max);
        assert!(max / scale < 1e-12, "round trip error {max:.3e}");
    }

    #[test]
    fn parseval_matches_time_norm() {
        // Σ_n |Ĝ|² = β·Δτ·Σ_m |G|² for this normalization.
        let t = transform(2.0, 128);
        let g: Vec<C64> = (0..128)
            .map(|i| C64::new((0.05 * i as f64).cos(), (0.03 * i as f64).sin()))
            .collect();
        let ghat = t.forward(&g).unwrap();
        let lhs: f64 = ghat.iter().map(|z| z.norm_sqr()).sum();
        let rhs: f64 =
            t.grid().beta() * t.grid().spacing() * g.iter().map(|z| z.norm_sqr()).sum::<f64>();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
    }

    #[test]
    fn pole_split_inverse_recovers_free_solution_exactly() {
        let t = transform(8.0, 512);
        let m = t.grid().len();
        let ghat: Vec<C64> = (0..m).map(|k| t.free_matsubara(0.3, k)).collect();
        let g = t.inverse_pole_split(&ghat, 0.3).unwrap();
        let expect = t.free_tau(0.3);
        for (a, b) in g.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn seam_corrected_forward_beats_plain_on_step_like_input() {
        // e^{ν(τ-β)}-type input has a seam jump of 1; the corrected forward
        // should track the exact pole uniformly in n.
        let t = transform(8.0, 1 << 12);
        let g = t.free_tau(0.5);
        let ghat = t.forward_seam_corrected(&g).unwrap();
        let m = t.grid().len();
        let mut worst = 0.0f64;
        for k in 0..m {
            let err = (ghat[k] - t.free_matsubara(0.5, k)).norm();
            worst = worst.max(err);
        }
        assert!(worst < 5e-7, "worst corrected error {worst:.3e}");
    }

    #[test]
    fn rejects_mismatched_length() {
        let t = transform(1.0, 64);
        assert!(t.forward(&vec![C64::new(0.0, 0.0); 63]).is_err());
    }
}
