//! Shared numeric substrate for the coupled-SYK simulation suite: model
//! parameters, imaginary-time grids, the antiperiodic Fourier transform
//! between τ and fermionic Matsubara frequencies, trapezoid quadrature, and
//! the correlator containers used by every solver.
//!
//! Conventions (fixed across the workspace):
//! - Majorana normalization {χᵢ, χⱼ} = δᵢⱼ, so χ² = 1/2 and G_LL(0⁺) = 1/2.
//! - Internal units J = 1; all quantities carry explicit powers of J.
//! - τ-grids are midpoint grids: τ_m = (m + 1/2)β/M, m = 0..M. The seam
//!   discontinuity of the antiperiodic extension falls between grid points.
//! - Matsubara frequencies ω_n = (2n+1)π/β, n ∈ [-M/2, M/2).
//! - Forward transform Ĝ(iω_n) = ∫₀^β dτ e^{-iω_n τ} G(τ); with these signs
//!   the free rotated-channel propagator is exactly Ĝ⁰(iω_n) = 1/(iω_n - μ)
//!   with τ-side G⁰(τ) = e^{μ(τ-β)}/(1 + e^{-μβ}).
//!
//! All types are immutable after construction; transforms are pure functions
//! and safe to call from concurrent workers.

pub mod correlator;
pub mod error;
pub mod fit;
pub mod grid;
pub mod params;
pub mod quad;
pub mod spectral;
pub mod transform;

pub use correlator::ImagCorrelator;
pub use error::CoreError;
pub use fit::linear_regression;
pub use grid::TauGrid;
pub use params::ModelParams;
pub use quad::{trapezoid_integral, trapezoid_uniform};
pub use spectral::{fermi_plus, OmegaGrid, SpectralData};
pub use transform::MatsubaraTransform;

/// Complex double used throughout the workspace.
pub type C64 = num_complex::Complex64;
