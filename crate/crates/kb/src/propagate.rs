use crate::error::KbError;
use crate::grid::{GPair, TwoTimeGrid};
use crate::schedule::RampSchedule;
use mq_core::C64;
use rayon::prelude::*;

/// Outcome of a propagation run.
#[derive(Debug, Clone)]
pub struct PropagateReport {
    pub steps: usize,
    pub warnings: Vec<String>,
}

#[inline(always)]
fn cube_scaled(g: GPair, neg_j2: f64) -> GPair {
    GPair { ll: neg_j2 * g.ll * g.ll * g.ll, lr: neg_j2 * g.lr * g.lr * g.lr }
}

/// Σ^>(i, t) along row i (reads the direct arrays).
#[inline(always)]
fn sig_gt_row(g: &TwoTimeGrid, neg_j2: f64, i: usize, t: usize) -> GPair {
    cube_scaled(g.greater(i, t), neg_j2)
}

/// Σ^<(i, t) = -J²(G^<(i,t))³ with G^<_LL(i,t) = -G^>_LL(t,i),
/// G^<_LR(i,t) = +G^>_LR(t,i) (transpose-row reads).
#[inline(always)]
fn sig_lt_row(g: &TwoTimeGrid, neg_j2: f64, i: usize, t: usize) -> GPair {
    let lesser = GPair { ll: -g.ll_t[(i, t)], lr: g.lr_t[(i, t)] };
    cube_scaled(lesser, neg_j2)
}

/// G^<(t, j) for fixed j (direct-row reads on row j).
#[inline(always)]
fn lesser_col(g: &TwoTimeGrid, t: usize, j: usize) -> GPair {
    GPair { ll: -g.ll[(j, t)], lr: g.lr[(j, t)] }
}

/// G^>(t, j) for fixed j (transpose-row reads on row j).
#[inline(always)]
fn greater_col(g: &TwoTimeGrid, t: usize, j: usize) -> GPair {
    GPair { ll: g.ll_t[(j, t)], lr: g.lr_t[(j, t)] }
}

struct Kernels {
    /// Σᴿ(i, t), t = 0..=i; the t = i entry is the exact coincident-time
    /// limit {-iJ²/4, 0} fixed by the anticommutator.
    sig_r_row: Vec<GPair>,
    /// Σ^>(i, t), t = 0..=i
    sig_gt_row: Vec<GPair>,
}

fn row_kernels(g: &TwoTimeGrid, neg_j2: f64, i: usize) -> Kernels {
    let mut sig_r = Vec::with_capacity(i + 1);
    let mut sig_g = Vec::with_capacity(i + 1);
    for t in 0..i {
        let gt = sig_gt_row(g, neg_j2, i, t);
        let lt = sig_lt_row(g, neg_j2, i, t);
        sig_r.push(gt.sub(lt));
        sig_g.push(gt);
    }
    sig_r.push(GPair { ll: C64::new(0.0, 0.25 * neg_j2), lr: C64::new(0.0, 0.0) });
    sig_g.push(cube_scaled(g.greater(i, i), neg_j2));
    Kernels { sig_r_row: sig_r, sig_gt_row: sig_g }
}

struct ColKernels {
    /// Σ^>(t, j), t = 0..=j_upper
    sig_gt_col: Vec<GPair>,
    /// Σ^A(t, j), t = 0..=j; coincident-time limit {+iJ²/4, 0}
    sig_a_col: Vec<GPair>,
}

fn col_kernels(g: &TwoTimeGrid, neg_j2: f64, j: usize, upper: usize) -> ColKernels {
    let mut sig_g = Vec::with_capacity(upper + 1);
    let mut sig_a = Vec::with_capacity(j + 1);
    for t in 0..=upper {
        sig_g.push(cube_scaled(greater_col(g, t, j), neg_j2));
    }
    for t in 0..j {
        let gt = sig_g[t];
        let lt = cube_scaled(lesser_col(g, t, j), neg_j2);
        // Σ^A = -θ(t_j - t)(Σ^> - Σ^<)
        sig_a.push(lt.sub(gt));
    }
    sig_a.push(GPair { ll: C64::new(0.0, -0.25 * neg_j2), lr: C64::new(0.0, 0.0) });
    ColKernels { sig_gt_col: sig_g, sig_a_col: sig_a }
}

#[inline(always)]
fn trapezoid_weight(t: usize, upper: usize) -> f64 {
    if t == 0 || t == upper {
        0.5
    } else {
        1.0
    }
}

/// Dissipative part of ∂_{t₁}G^>(i,j):
/// I₁ = -i·dt·[Σ_{t≤i} w·Σᴿ(i,t)·G^>(t,j) + Σ_{t≤j} w·Σ^>(i,t)·G^A(t,j)].
fn i1_dissipative(g: &TwoTimeGrid, k: &Kernels, dt: f64, i: usize, j: usize) -> GPair {
    let mut acc = GPair::ZERO;
    if i > 0 {
        for t in 0..=i {
            let w = trapezoid_weight(t, i);
            let term = k.sig_r_row[t].mul(greater_col(g, t, j));
            acc = acc.add(term.scale(C64::new(w, 0.0)));
        }
    }
    if j > 0 {
        for t in 0..=j {
            let w = trapezoid_weight(t, j);
            let ga = if t == j {
                GPair { ll: -2.0 * g.ll[(j, j)], lr: C64::new(0.0, 0.0) }
            } else {
                lesser_col(g, t, j).sub(greater_col(g, t, j))
            };
            let term = k.sig_gt_row[t].mul(ga);
            acc = acc.add(term.scale(C64::new(w, 0.0)));
        }
    }
    acc.scale(C64::new(0.0, -dt))
}

/// Dissipative part of ∂_{t₂}G^>(i,j):
/// I₂ = +i·dt·[Σ_{t≤i} w·Gᴿ(i,t)·Σ^>(t,j) + Σ_{t≤j} w·G^>(i,t)·Σ^A(t,j)].
/// The +i (opposite to the t₁ equation) is the adjoint Kadanoff-Baym
/// structure; it is what cancels I₁ on the equal-time diagonal and keeps
/// the anticommutator value pinned.
fn i2_dissipative(g: &TwoTimeGrid, ck: &ColKernels, dt: f64, i: usize, j: usize) -> GPair {
    let mut acc = GPair::ZERO;
    if i > 0 {
        for t in 0..=i {
            let w = trapezoid_weight(t, i);
            let gr = if t == i {
                GPair { ll: 2.0 * g.ll[(i, i)], lr: C64::new(0.0, 0.0) }
            } else {
                let lesser = GPair { ll: -g.ll_t[(i, t)], lr: g.lr_t[(i, t)] };
                g.greater(i, t).sub(lesser)
            };
            let term = gr.mul(ck.sig_gt_col[t]);
            acc = acc.add(term.scale(C64::new(w, 0.0)));
        }
    }
    if j > 0 {
        for t in 0..=j {
            let w = trapezoid_weight(t, j);
            let term = g.greater(i, t).mul(ck.sig_a_col[t]);
            acc = acc.add(term.scale(C64::new(w, 0.0)));
        }
    }
    acc.scale(C64::new(0.0, dt))
}

/// Full right-hand side of the t₁ equation at (i, j).
fn f1(g: &TwoTimeGrid, k: &Kernels, dt: f64, mu_i: f64, i: usize, j: usize) -> GPair {
    let gij = g.greater(i, j);
    let diss = i1_dissipative(g, k, dt, i, j);
    GPair { ll: -mu_i * gij.lr + diss.ll, lr: mu_i * gij.ll + diss.lr }
}

/// Full right-hand side of the t₂ equation at (i, j).
fn f2(g: &TwoTimeGrid, ck: &ColKernels, dt: f64, mu_j: f64, i: usize, j: usize) -> GPair {
    let gij = g.greater(i, j);
    let diss = i2_dissipative(g, ck, dt, i, j);
    GPair { ll: mu_j * gij.lr + diss.ll, lr: -mu_j * gij.ll + diss.lr }
}

/// I₁ at a diagonal point with fresh kernels; E(t)/N = (1/4)·I₁_LL(t,t).
pub(crate) fn i1_diagonal(g: &TwoTimeGrid, i: usize) -> GPair {
    let neg_j2 = -g.j_coupling * g.j_coupling;
    let k = row_kernels(g, neg_j2, i);
    i1_dissipative(g, &k, g.dt, i, i)
}

/// Advance the filled boundary from `filled` to `n_total - 1` under the
/// given coupling schedule. One Euler prediction plus `n_corrector`
/// trapezoid corrections per step ("a single step is sufficient" — the
/// default is 1; more passes are for convergence studies).
pub fn propagate(
    grid: &mut TwoTimeGrid,
    schedule: &RampSchedule,
    n_corrector: usize,
) -> Result<PropagateReport, KbError> {
    schedule.validate()?;
    let mut warnings = Vec::new();
    let j = grid.j_coupling;
    let mu_max = schedule.mu_initial();
    if grid.dt > 0.1 / j.max(mu_max) {
        warnings.push(format!(
            "dt = {} is coarse for the fastest scale 1/max(J, mu_i) = {}; expect degraded accuracy",
            grid.dt,
            1.0 / j.max(mu_max)
        ));
    }
    if (schedule.mu_initial() - grid.mu_init).abs() > 1e-12 {
        warnings.push(format!(
            "schedule mu_i = {} differs from the equilibrium window coupling {}",
            schedule.mu_initial(),
            grid.mu_init
        ));
    }
    grid.schedule = schedule.clone();
    let neg_j2 = -j * j;
    let n_corrector = n_corrector.max(1);

    let mu_at: Vec<f64> = (0..grid.n_total).map(|i| schedule.mu(grid.time(i))).collect();

    let mut steps = 0;
    while grid.filled + 1 < grid.n_total {
        let fm1 = grid.filled;
        let f = fm1 + 1;
        let dt = grid.dt;

        // -- right-hand sides on the old boundary
        let (f1_old, f2_old) = {
            let g: &TwoTimeGrid = grid;
            let row_k_old = row_kernels(g, neg_j2, fm1);
            let col_k_old = col_kernels(g, neg_j2, fm1, fm1);
            let f1_old: Vec<GPair> = (0..=fm1)
                .into_par_iter()
                .map(|jj| f1(g, &row_k_old, dt, mu_at[fm1], fm1, jj))
                .collect();
            let f2_old: Vec<GPair> = (0..=fm1)
                .into_par_iter()
                .map(|ii| f2(g, &col_k_old, dt, mu_at[fm1], ii, fm1))
                .collect();
            (f1_old, f2_old)
        };

        // -- Euler prediction of the new row, column and corner
        for jj in 0..=fm1 {
            let p = grid.greater(fm1, jj).add(f1_old[jj].scale(C64::new(dt, 0.0)));
            grid.set(f, jj, p);
        }
        for ii in 0..=fm1 {
            let p = grid.greater(ii, fm1).add(f2_old[ii].scale(C64::new(dt, 0.0)));
            grid.set(ii, f, p);
        }
        {
            let row_k_pred = row_kernels(grid, neg_j2, f);
            let col_k_pred = col_kernels(grid, neg_j2, f, f);
            let f1p = f1(grid, &row_k_pred, dt, mu_at[f], f, fm1);
            let f2p = f2(grid, &col_k_pred, dt, mu_at[f], fm1, f);
            let p = grid
                .greater(fm1, fm1)
                .add(f1p.add(f2p).scale(C64::new(dt, 0.0)));
            grid.set(f, f, p);
        }

        // -- trapezoid correction evaluated on the predicted state
        for _ in 0..n_corrector {
            let (corr_row, corr_col, corr_diag) = {
                let g: &TwoTimeGrid = grid;
                let row_k_new = row_kernels(g, neg_j2, f);
                let col_k_new = col_kernels(g, neg_j2, f, f);
                let half = C64::new(0.5 * dt, 0.0);
                let corr_row: Vec<GPair> = (0..=fm1)
                    .into_par_iter()
                    .map(|jj| {
                        let fnew = f1(g, &row_k_new, dt, mu_at[f], f, jj);
                        g.greater(fm1, jj).add(f1_old[jj].add(fnew).scale(half))
                    })
                    .collect();
                let corr_col: Vec<GPair> = (0..=fm1)
                    .into_par_iter()
                    .map(|ii| {
                        let fnew = f2(g, &col_k_new, dt, mu_at[f], ii, f);
                        g.greater(ii, fm1).add(f2_old[ii].add(fnew).scale(half))
                    })
                    .collect();
                let f1n = f1(g, &row_k_new, dt, mu_at[f], f, f);
                let f2n = f2(g, &col_k_new, dt, mu_at[f], f, f);
                let corr_diag = g
                    .greater(fm1, fm1)
                    .add(f1_old[fm1].add(f2_old[fm1]).add(f1n).add(f2n).scale(half));
                (corr_row, corr_col, corr_diag)
            };
            for jj in 0..=fm1 {
                grid.set(f, jj, corr_row[jj]);
            }
            for ii in 0..=fm1 {
                grid.set(ii, f, corr_col[ii]);
            }
            grid.set(f, f, corr_diag);
        }

        let d = grid.greater(f, f);
        if !d.ll.is_finite() || !d.lr.is_finite() || d.ll.norm() > 100.0 {
            return Err(KbError::Propagation {
                last_stable_time: grid.time(fm1),
                message: format!("diagonal value {:?} at step {f}", d.ll),
            });
        }
        grid.filled = f;
        steps += 1;
    }
    Ok(PropagateReport { steps, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::initialize_from_equilibrium;
    use mq_core::{fermi_plus, ModelParams};
    use mq_sd::{solve_real, SolverConfig};
    use ndarray::Array2;

    fn small_config() -> SolverConfig {
        SolverConfig { grid_size: 1 << 12, omega_size: 1 << 12, ..SolverConfig::default() }
    }

    /// Exact free (J = 0) grid at coupling μ and inverse temperature β:
    ///   G^>_LL(t) = -(i/2)[e^{-iμt}(1-n) + e^{iμt}n]
    ///   G^>_LR(t) = (1/2)[e^{-iμt}(1-n) - e^{iμt}n],  n = n_F(μ)
    /// (perfectly sinusoidal, so it can never pass the decay gate; built by
    /// hand to isolate the propagator).
    fn free_grid(mu: f64, beta: f64, t_init: f64, t_max: f64, dt: f64) -> TwoTimeGrid {
        let n_init = (t_init / dt).round() as usize;
        let n_total = n_init + (t_max / dt).round() as usize + 1;
        let n_occ = 1.0 - fermi_plus(beta * mu);
        let pair = |t: f64| {
            let em = C64::from_polar(1.0, -mu * t);
            let ep = C64::from_polar(1.0, mu * t);
            GPair {
                ll: C64::new(0.0, -0.5) * (em * (1.0 - n_occ) + ep * n_occ),
                lr: 0.5 * (em * (1.0 - n_occ) - ep * n_occ),
            }
        };
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
            schedule: RampSchedule::Constant { mu },
            init_decay: 1.0,
            beta_init: beta,
            mu_init: mu,
            j_coupling: 0.0,
        };
        for i in 0..=n_init {
            for j in 0..=n_init {
                let t = (i as f64 - j as f64) * dt;
                grid.set(i, j, pair(t));
            }
        }
        grid
    }

    /// J = 0: the exact solution rotates the initial pair,
    /// G_c(t₁,t₂) = G_c(0,0)·e^{i(φ(t₁)-φ(t₂))} with G_c = G_LL + iG_LR and
    /// φ(t) = ∫₀ᵗ μ(s) ds.
    #[test]
    fn free_limit_matches_exact_rotation() {
        let dt = 0.02;
        let mut grid = free_grid(0.5, 8.0, 1.0, 3.0, dt);
        let schedule = RampSchedule::ExpToFloor { mu_i: 0.5, mu_f: 0.2, time_constant: 1.0 };
        propagate(&mut grid, &schedule, 1).unwrap();

        let phi = |t: f64| -> f64 {
            // ∫ μ = μf·t + (μi-μf)·T*(1 - e^{-t/T*}) for t > 0
            if t <= 0.0 {
                0.5 * t
            } else {
                0.2 * t + 0.3 * (1.0 - (-t / 1.0f64).exp())
            }
        };
        let z = grid.zero_index();
        let g00 = grid.greater(z, z);
        let gc0 = g00.ll + C64::new(0.0, 1.0) * g00.lr;
        let mut worst = 0.0f64;
        for (di, dj) in [(30, 0), (75, 40), (149, 149), (100, 20)] {
            let (i, j) = (z + di, z + dj);
            let g = grid.greater(i, j);
            let gc = g.ll + C64::new(0.0, 1.0) * g.lr;
            let exact = gc0 * C64::from_polar(1.0, phi(grid.time(i)) - phi(grid.time(j)));
            worst = worst.max((gc - exact).norm());
        }
        assert!(worst < 5e-4, "free-rotation error {worst:.2e}");
    }

    #[test]
    fn causality_nan_poison_stays_outside() {
        // hot enough that the window decay gate passes with a short window
        let params = ModelParams::q4(0.5, 2.0).unwrap();
        let eq = solve_real(&params, &small_config()).unwrap();
        let mut grid = initialize_from_equilibrium(&eq, 22.0, 1.5, 0.1).unwrap();
        // future region is NaN by construction; propagate and verify the
        // filled square never picked any of it up
        propagate(&mut grid, &RampSchedule::Constant { mu: 0.5 }, 1).unwrap();
        assert_eq!(grid.filled, grid.n_total - 1);
        assert!(!grid.filled_region_has_nan());
        assert!(grid.canonical_violation() < 1e-3, "diag {}", grid.canonical_violation());
    }
}
