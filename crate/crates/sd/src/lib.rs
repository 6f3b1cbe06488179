//! Equilibrium solvers for the coupled and uncoupled SYK models.
//!
//! The coupled model (two SYK copies with a pairwise iμ χ_L χ_R bridge)
//! closes in the rotated channel G₊ = G_LL + i G_LR. At equilibrium the
//! fixed-point equations are, in imaginary time,
//!
//!   G₊(iω_n) = 1 / (iω_n - μ - Σ₊(iω_n))
//!   Σ₊(τ)    = -(J²/4) [ 3 G₊²(τ) G₊(-τ) + G₊³(-τ) ]
//!
//! and on the real-frequency axis (iε prescription, q = 4)
//!
//!   Gᴿ(ω)  = 1 / (ω + iε - μ - Σᴿ(ω))
//!   Σᴿ(t)  = -2i J² θ(t) [ Re ñ_LL³(t) - i Im ñ_LR³(t) ]
//!
//! with ñ_AB(t) = ∫dω e^{-iωt} n_AB(ω) the transformed occupation
//! functions. Both are solved by weighted fixed-point iteration seeded with
//! the free solution, with the mixing weight halved whenever the residual
//! grows.
//!
//! Each solve owns its arrays (single writer); independent parameter-sweep
//! solves can run fully in parallel. All reductions are sequential, so a
//! given config reproduces bit-identical output.

pub mod config;
pub mod error;
pub mod imag;
pub mod observables;
pub mod real;
pub mod solution;

pub use config::SolverConfig;
pub use error::SdError;
pub use imag::{solve_imag, solve_imag_seeded};
pub use observables::{beta_eff_of_mu, matter_gap, single_side_energy, uncoupled_g_half};
pub use real::{lowest_positive_peak, solve_real};
pub use solution::EquilibriumSolution;
