//! Two-time Kadanoff-Baym propagation of the coupled model under a
//! time-dependent coupling μ(t).
//!
//! The state is the greater Wightman matrix G^>_{AB}(t₁,t₂) on the square
//! [-t_init, T_max]². The L/R structure reduces to two independent complex
//! components (LL, LR) since G_RR = G_LL and G_RL = -G_LR hold throughout;
//! matrix products in that basis follow the complex-pair rule
//! (a·b)_LL = a_LL b_LL - a_LR b_LR, (a·b)_LR = a_LL b_LR + a_LR b_LL.
//!
//! Evolution equations (t-arguments suppressed inside the history
//! integrals, ∫ truncated at -t_init):
//!
//!   ∂_{t₁} G^> = -μ(t₁)·ε G^>  - i ∫ dt [Σᴿ(t₁,t) G^>(t,t₂) + Σ^>(t₁,t) G^A(t,t₂)]
//!   ∂_{t₂} G^> = +μ(t₂)·ε G^>  - i ∫ dt [Gᴿ(t₁,t) Σ^>(t,t₂) + G^>(t₁,t) Σ^A(t,t₂)]
//!
//! where ε rotates (LL, LR) → (LR, -LL), Σ^>_{AB} = -J²(G^>_{AB})³, and the
//! exchange relation G^<_{AB}(t₁,t₂) = -G^>_{BA}(t₂,t₁) supplies the lesser
//! functions. Each step advances the boundary row, column and diagonal with
//! one Euler prediction and one trapezoid correction, history integrals by
//! the trapezoid rule.
//!
//! Stepping is sequential in the outer time index; the per-step boundary
//! fills are data-parallel over the inner index with sequential inner
//! reductions, so runs are bit-reproducible for a fixed config.

pub mod error;
pub mod grid;
pub mod init;
pub mod propagate;
pub mod schedule;
pub mod spectrum;
pub mod sweep;
pub mod traces;

pub use error::KbError;
pub use grid::TwoTimeGrid;
pub use init::initialize_from_equilibrium;
pub use propagate::{propagate, PropagateReport};
pub use schedule::RampSchedule;
pub use spectrum::{oscillation_frequency, OscillationResult};
pub use sweep::{cooling_time_sweep, CoolingPoint, SweepConfig};
pub use traces::{energy_trace, glr_trace, quench_autocorrelator, TracePoint};
