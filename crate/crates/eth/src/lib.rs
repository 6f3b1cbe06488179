//! Effective description of the coupled model on the paired subspace of
//! mirrored SYK eigenstates.
//!
//! The two-sided coupling acts on paired states |nn*⟩ through squared
//! fermion matrix elements, which eigenstate thermalization ties to the
//! thermally regulated autocorrelator G_β(t) = tr(χ(t)√ρ χ √ρ). The
//! continuum limit is a one-dimensional Schrödinger problem in the energy
//! density e with potential V(e) = 2e - μG(e) and effective Planck constant
//! 1/N; expanding about the potential minimum gives a harmonic oscillator
//! whose frequency is the collective ("graviton") gap.
//!
//! Everything here is built from equilibrium properties of the *uncoupled*
//! model, tabulated once per β-grid:
//!   e(β)       single-side energy density
//!   c(β)       specific heat, c = -β³ de/dβ
//!   G(β)       G_SYK(β/2) = G_β(0)
//!   G″(β)      second real-time derivative of G_β at t = 0 (negative)
//!
//! Tables are immutable after construction; all predictions are pure
//! functions over them.

pub mod closed_form;
pub mod error;
pub mod oscillator;
pub mod paired;
pub mod table;

pub use closed_form::{low_temp_closed_forms, ClosedFormOscillator};
pub use error::EthError;
pub use oscillator::{minimum_condition, oscillator_at, self_consistency_variance, EthOscillator};
pub use paired::{
    propagate_paired, solve_paired_ground_state, solve_paired_levels, PairedWavefunction,
};
pub use table::{build_thermo_table, ThermoTable, ThermoTableConfig};
