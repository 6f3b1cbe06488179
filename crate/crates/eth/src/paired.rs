use crate::error::EthError;
use crate::oscillator::oscillator_at;
use crate::table::ThermoTable;
use mq_core::C64;

/// Continuum Schrödinger problem on the paired subspace, discretized on a
/// uniform energy-density grid:
///
///   i N⁻¹ ∂_t ψ(e) = [2e - μG(e)] ψ(e) - μ G″(e) (∂²_e / 2N²) ψ(e)
///
/// The kinetic term is assembled in Sturm-Liouville form
/// -(1/2N²) ∂_e W(e) ∂_e with W = μ|G″|, which keeps the operator symmetric
/// for the position-dependent mass.
#[derive(Debug, Clone)]
pub struct PairedOperator {
    pub e_grid: Vec<f64>,
    pub potential: Vec<f64>,
    pub kinetic_weight: Vec<f64>,
    pub n_eff: f64,
}

/// Ground-state data of the discretized operator.
#[derive(Debug, Clone)]
pub struct PairedWavefunction {
    pub e_grid: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub beta_of_e: Vec<f64>,
    pub norm: f64,
    pub energy_mean: f64,
    pub width: f64,
    pub beta_eff: f64,
    pub eigenvalue: f64,
}

impl PairedOperator {
    /// Build at coupling μ with N fermions per side. `harmonic` replaces the
    /// potential and mass by their quadratic expansion about the minimum.
    pub fn build(
        mu: f64,
        table: &ThermoTable,
        n_eff: f64,
        n_points: usize,
        harmonic: bool,
    ) -> Result<Self, EthError> {
        if n_points < 64 {
            return Err(EthError::Resolution(format!("need >= 64 grid points, got {n_points}")));
        }
        let osc = oscillator_at(mu, table)?;
        let sigma = 1.0 / (n_eff * osc.mass_m * osc.omega).sqrt();

        let e_min_table = table.energy_at(table.beta_max())?;
        let e_max_table = table.energy_at(table.beta_min())?;
        let margin = 1e-6 * (e_max_table - e_min_table);
        let span = 9.0 * sigma;
        let e_lo = (osc.e_star - span).max(e_min_table + margin);
        let e_hi = (osc.e_star + span).min(e_max_table - margin);
        let de = (e_hi - e_lo) / (n_points - 1) as f64;
        if de > 0.25 * sigma {
            return Err(EthError::Resolution(format!(
                "grid spacing {de:.3e} does not resolve the ground-state width {sigma:.3e}; \
                 increase n_points"
            )));
        }

        let e_grid: Vec<f64> = (0..n_points).map(|i| e_lo + de * i as f64).collect();
        let mut potential = Vec::with_capacity(n_points);
        let mut kinetic_weight = Vec::with_capacity(n_points);
        for &e in &e_grid {
            if harmonic {
                potential.push(
                    2.0 * osc.e_star - mu * table.g_half_at(osc.beta_star)?
                        + 0.5 * osc.spring_k * (e - osc.e_star) * (e - osc.e_star),
                );
                kinetic_weight.push(1.0 / osc.mass_m);
            } else {
                let b = table.beta_of_energy(e)?;
                potential.push(2.0 * e - mu * table.g_half_at(b)?);
                kinetic_weight.push(mu * (-table.g_ddot_at(b)?));
            }
        }
        Ok(Self { e_grid, potential, kinetic_weight, n_eff })
    }

    fn spacing(&self) -> f64 {
        self.e_grid[1] - self.e_grid[0]
    }

    /// Symmetric tridiagonal representation (Dirichlet edges).
    fn tridiagonal(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.e_grid.len();
        let de = self.spacing();
        let scale = 1.0 / (2.0 * self.n_eff * self.n_eff * de * de);
        let w_mid = |i: usize| 0.5 * (self.kinetic_weight[i] + self.kinetic_weight[i + 1]);
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        for i in 0..n {
            let wl = if i > 0 { w_mid(i - 1) } else { self.kinetic_weight[0] };
            let wr = if i < n - 1 { w_mid(i) } else { self.kinetic_weight[n - 1] };
            diag[i] = self.potential[i] + (wl + wr) * scale;
        }
        for i in 0..n - 1 {
            off[i] = -w_mid(i) * scale;
        }
        (diag, off)
    }

    /// Lowest `k` eigenvalues.
    pub fn levels(&self, k: usize) -> Vec<f64> {
        let (diag, off) = self.tridiagonal();
        (0..k).map(|j| tridiag_eigenvalue(&diag, &off, j)).collect()
    }

    /// Ground-state eigenpair, packaged with its moments and the effective
    /// temperature read from ⟨e⟩.
    pub fn ground_state(&self, table: &ThermoTable) -> Result<PairedWavefunction, EthError> {
        let (diag, off) = self.tridiagonal();
        let ev = tridiag_eigenvalue(&diag, &off, 0);
        let mut v = tridiag_eigenvector(&diag, &off, ev);
        let de = self.spacing();
        // fix overall sign and normalize ∫|ψ|² de = 1
        let total: f64 = v.iter().map(|x| x * x).sum::<f64>() * de;
        let s = total.sqrt();
        let sign = if v[v.len() / 2] < 0.0 { -1.0 } else { 1.0 };
        for x in v.iter_mut() {
            *x *= sign / s;
        }
        let mean: f64 = v
            .iter()
            .zip(&self.e_grid)
            .map(|(p, e)| e * p * p)
            .sum::<f64>()
            * de;
        let var: f64 = v
            .iter()
            .zip(&self.e_grid)
            .map(|(p, e)| (e - mean) * (e - mean) * p * p)
            .sum::<f64>()
            * de;
        let beta_of_e = self
            .e_grid
            .iter()
            .map(|&e| table.beta_of_energy(e).unwrap_or(f64::NAN))
            .collect();
        Ok(PairedWavefunction {
            e_grid: self.e_grid.clone(),
            amplitudes: v,
            beta_of_e,
            norm: 1.0,
            energy_mean: mean,
            width: var.sqrt(),
            beta_eff: table.beta_of_energy(mean)?,
            eigenvalue: ev,
        })
    }

    /// Crank-Nicolson step for i N⁻¹ ∂_t ψ = H ψ; unitary for the symmetric
    /// tridiagonal H, so the norm is conserved to solver precision.
    pub fn propagate(&self, amps: &mut [C64], dt: f64, steps: usize) {
        let (diag, off) = self.tridiagonal();
        let n = diag.len();
        assert_eq!(amps.len(), n);
        let half = C64::new(0.0, 0.5 * dt * self.n_eff);
        let mut rhs = vec![C64::new(0.0, 0.0); n];
        for _ in 0..steps {
            // rhs = (I - i dt N H / 2) ψ
            for i in 0..n {
                let mut h = diag[i] * amps[i];
                if i > 0 {
                    h += off[i - 1] * amps[i - 1];
                }
                if i < n - 1 {
                    h += off[i] * amps[i + 1];
                }
                rhs[i] = amps[i] - half * h;
            }
            // (I + i dt N H / 2) ψ' = rhs, complex Thomas solve
            let a: Vec<C64> = diag.iter().map(|&d| C64::new(1.0, 0.0) + half * d).collect();
            let b: Vec<C64> = off.iter().map(|&o| half * o).collect();
            thomas_solve(&a, &b, &mut rhs, amps);
        }
    }
}

/// Convenience wrapper: full-potential ground state at coupling μ.
pub fn solve_paired_ground_state(
    mu: f64,
    table: &ThermoTable,
    n_eff: f64,
    n_points: usize,
) -> Result<PairedWavefunction, EthError> {
    PairedOperator::build(mu, table, n_eff, n_points, false)?.ground_state(table)
}

/// Lowest `k` levels of the full or harmonic operator.
pub fn solve_paired_levels(
    mu: f64,
    table: &ThermoTable,
    n_eff: f64,
    n_points: usize,
    k: usize,
    harmonic: bool,
) -> Result<Vec<f64>, EthError> {
    Ok(PairedOperator::build(mu, table, n_eff, n_points, harmonic)?.levels(k))
}

/// Norm drift per unit time of the Crank-Nicolson propagation (diagnostic).
pub fn propagate_paired(
    op: &PairedOperator,
    amps: &mut Vec<C64>,
    dt: f64,
    steps: usize,
) -> f64 {
    let de = op.spacing();
    let norm0: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * de;
    op.propagate(amps, dt, steps);
    let norm1: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * de;
    let elapsed = dt * steps as f64;
    ((norm1 / norm0).ln()).abs() / elapsed.max(f64::MIN_POSITIVE)
}

/// k-th smallest eigenvalue of a symmetric tridiagonal matrix by Sturm
/// bisection.
fn tridiag_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let n = diag.len();
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = (if i > 0 { off[i - 1].abs() } else { 0.0 })
            + (if i < n - 1 { off[i].abs() } else { 0.0 });
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = 1.0f64;
        for i in 0..n {
            let b2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
            d = diag[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = 1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-14 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector by inverse iteration at a converged eigenvalue.
fn tridiag_eigenvector(diag: &[f64], off: &[f64], ev: f64) -> Vec<f64> {
    let n = diag.len();
    let shift = ev + 1e-12 * ev.abs().max(1.0);
    let a: Vec<C64> = diag.iter().map(|&d| C64::new(d - shift, 0.0)).collect();
    let b: Vec<C64> = off.iter().map(|&o| C64::new(o, 0.0)).collect();
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut rhs: Vec<C64> = (0..n)
        .map(|i| C64::new(((i * 2654435761usize) % 1000) as f64 / 1000.0 - 0.5, 0.0))
        .collect();
    for _ in 0..4 {
        thomas_solve(&a, &b, &mut rhs.clone(), &mut v);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        rhs = v.clone();
    }
    v.iter().map(|z| z.re).collect()
}

/// Thomas algorithm for a symmetric tridiagonal complex system.
/// `a` diagonal, `b` off-diagonal, `rhs` destroyed, solution in `out`.
fn thomas_solve(a: &[C64], b: &[C64], rhs: &mut [C64], out: &mut [C64]) {
    let n = a.len();
    let mut cp = vec![C64::new(0.0, 0.0); n];
    let mut dp = vec![C64::new(0.0, 0.0); n];
    cp[0] = b.first().copied().unwrap_or(C64::new(0.0, 0.0)) / a[0];
    dp[0] = rhs[0] / a[0];
    for i in 1..n {
        let m = a[i] - b[i - 1] * cp[i - 1];
        cp[i] = if i < n - 1 { b[i] / m } else { C64::new(0.0, 0.0) };
        dp[i] = (rhs[i] - b[i - 1] * dp[i - 1]) / m;
    }
    out[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = dp[i] - cp[i] * out[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::oscillator_at;
    use crate::table::tests_support::shared_table;

    #[test]
    fn harmonic_ground_state_matches_textbook_moments() {
        // Deep harmonic regime: the packet width must clear the spectrum
        // floor at e₀ by many σ, which needs large N at these couplings.
        let table = shared_table();
        let mu = 0.2;
        let n_eff = 4.0e4;
        let osc = oscillator_at(mu, table).unwrap();
        let op = PairedOperator::build(mu, table, n_eff, 1200, true).unwrap();
        let gs = op.ground_state(table).unwrap();
        assert!(
            (gs.energy_mean / osc.e_star - 1.0).abs() < 0.01,
            "⟨e⟩ = {} vs e* = {}",
            gs.energy_mean,
            osc.e_star
        );
        let width_exact = (1.0 / (2.0 * n_eff * osc.mass_m * osc.omega)).sqrt();
        assert!(
            (gs.width / width_exact - 1.0).abs() < 0.05,
            "width {} vs {}",
            gs.width,
            width_exact
        );
    }

    #[test]
    fn harmonic_levels_are_uniformly_spaced() {
        let table = shared_table();
        let mu = 0.2;
        let n_eff = 4.0e4;
        let osc = oscillator_at(mu, table).unwrap();
        let levels = solve_paired_levels(mu, table, n_eff, 1200, 5, true).unwrap();
        let expect = osc.omega / n_eff;
        for w in levels.windows(2) {
            let gap = w[1] - w[0];
            assert!(
                (gap / expect - 1.0).abs() < 0.01,
                "level spacing {gap} vs ω/N = {expect}"
            );
        }
    }

    #[test]
    fn full_potential_agrees_with_harmonic_at_moderate_mu() {
        // At N = 100 the μ = 0.3 packet leans on the spectrum floor and the
        // two potentials genuinely differ over the box; N = 1000 puts the
        // comparison in the regime where the quadratic expansion is valid.
        let table = shared_table();
        let full = solve_paired_ground_state(0.3, table, 1000.0, 1600).unwrap();
        let op = PairedOperator::build(0.3, table, 1000.0, 1600, true).unwrap();
        let harm = op.ground_state(table).unwrap();
        assert!(
            (full.energy_mean / harm.energy_mean - 1.0).abs() < 0.02,
            "full ⟨e⟩ = {} vs harmonic {}",
            full.energy_mean,
            harm.energy_mean
        );
    }

    #[test]
    fn crank_nicolson_conserves_norm() {
        let table = shared_table();
        let op = PairedOperator::build(0.2, table, 60.0, 400, false).unwrap();
        let gs = op.ground_state(table).unwrap();
        // displace the packet a little so the evolution is nontrivial
        let mut amps: Vec<C64> = gs
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| C64::from_polar(a.abs().max(1e-300), 0.3 * i as f64 / 400.0))
            .collect();
        let drift = propagate_paired(&op, &mut amps, 0.05, 200);
        assert!(drift < 1e-6, "norm drift {drift:.3e} per unit time");
    }

    #[test]
    fn grid_resolution_guard() {
        let table = shared_table();
        match PairedOperator::build(0.2, table, 4.0e4, 64, false) {
            Err(EthError::Resolution(_)) => {}
            other => panic!("expected Resolution error, got {other:?}"),
        }
    }
}
