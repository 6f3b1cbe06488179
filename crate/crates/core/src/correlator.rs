use crate::grid::TauGrid;
use crate::C64;

/// Antiperiodic imaginary-time correlator pair (G₊, Σ₊) on a midpoint τ-grid,
/// with the Matsubara-frequency view of G₊.
///
/// G₊ = G_LL + i G_LR is the rotated channel that closes the equilibrium
/// equations on its own; the physical components are reconstructed through
/// the reflection G₋(τ) = G₊(β-τ):
///
///   G_LL(τ) = [G₊(τ) + G₊(β-τ)]/2          (real, symmetric about β/2)
///   g_lr(τ) ≡ ⟨-i χ_L χ_R⟩-type component = [G₊(β-τ) - G₊(τ)]/2
///
/// g_lr is the two-sided correlator in the sign convention where ground
/// states give values in [0, 1/2] (EPR limit 1/2).
#[derive(Debug, Clone)]
pub struct ImagCorrelator {
    pub tau_grid: TauGrid,
    pub g_plus: Vec<C64>,
    pub sigma_plus: Vec<C64>,
    pub matsubara: Vec<C64>,
}

impl ImagCorrelator {
    pub fn len(&self) -> usize {
        self.g_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g_plus.is_empty()
    }

    pub fn g_ll(&self, m: usize) -> f64 {
        let r = self.tau_grid.reflect(m);
        0.5 * (self.g_plus[m].re + self.g_plus[r].re)
    }

    pub fn g_lr(&self, m: usize) -> f64 {
        let r = self.tau_grid.reflect(m);
        0.5 * (self.g_plus[r].re - self.g_plus[m].re)
    }

    pub fn g_ll_values(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.g_ll(m)).collect()
    }

    pub fn g_lr_values(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.g_lr(m)).collect()
    }

    /// G_LL(0⁺) by quadratic extrapolation of the first three midpoints
    /// (error O(Δτ³)).
    pub fn g_ll_zero(&self) -> f64 {
        extrapolate_to_seam(self.g_ll(0), self.g_ll(1), self.g_ll(2))
    }

    /// Two-sided correlator at equal time, extrapolated to τ = 0⁺.
    pub fn g_lr_zero(&self) -> f64 {
        extrapolate_to_seam(self.g_lr(0), self.g_lr(1), self.g_lr(2))
    }

    /// G(β/2) from the two straddling midpoints (the grid has no sample at
    /// β/2 itself; G_LL is smooth and symmetric there).
    pub fn g_ll_half_beta(&self) -> f64 {
        let m = self.len();
        0.5 * (self.g_ll(m / 2 - 1) + self.g_ll(m / 2))
    }

    /// Seam jump G₊(0⁺) - G₊(0⁻) = G₊(0⁺) + G₊(β⁻); canonically 1 from
    /// {χ, χ} = δ. Matches Re G_LL(0⁺) = 1/2.
    pub fn seam_jump(&self) -> f64 {
        let m = self.len();
        let g0 = extrapolate_to_seam(self.g_plus[0].re, self.g_plus[1].re, self.g_plus[2].re);
        let gb = extrapolate_to_seam(
            self.g_plus[m - 1].re,
            self.g_plus[m - 2].re,
            self.g_plus[m - 3].re,
        );
        g0 + gb
    }

    /// Largest |Im G₊| on the grid; the physical solution is real.
    pub fn max_imag(&self) -> f64 {
        self.g_plus.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Quadratic extrapolation from the three midpoints nearest the seam to
    /// the seam itself (distances Δτ/2, 3Δτ/2, 5Δτ/2).
    pub fn extrapolated(f0: f64, f1: f64, f2: f64) -> f64 {
        extrapolate_to_seam(f0, f1, f2)
    }

    /// Slow evaluation of the Matsubara series at arbitrary τ (tests only);
    /// antiperiodic under τ → τ + β by construction of the frequencies.
    pub fn eval_matsubara_sum(&self, tau: f64) -> C64 {
        let beta = self.tau_grid.beta();
        let mut acc = C64::new(0.0, 0.0);
        for (k, c) in self.matsubara.iter().enumerate() {
            let wn = self.tau_grid.matsubara(self.tau_grid.index_to_n(k));
            acc += c * C64::from_polar(1.0, wn * tau);
        }
        acc / beta
    }
}

/// Quadratic extrapolation through midpoints at Δτ/2, 3Δτ/2, 5Δτ/2,
/// evaluated at the seam: (15 f₀ - 10 f₁ + 3 f₂)/8.
fn extrapolate_to_seam(f0: f64, f1: f64, f2: f64) -> f64 {
    (15.0 * f0 - 10.0 * f1 + 3.0 * f2) / 8.0
}
