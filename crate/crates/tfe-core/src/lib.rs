//! Spectral simulator and verification harness for the one-dimensional
//! thin-film droplet with partial wetting, written in Lagrangian mass
//! coordinates.
//!
//! The droplet height `u(t, x)` on a moving support `(λ₋(t), λ₊(t))` is
//! mapped to a perturbation `g(t, y)` of the steady parabolic profile on
//! the fixed interval `(-1, 1)`. The crate provides:
//!
//! * [`spectral`] — Chebyshev–Gauss–Lobatto collocation: nodes, quadrature,
//!   differentiation matrices up to fourth order, barycentric interpolation.
//! * [`model`] — the transformed evolution operators, energy, dissipation,
//!   the ten interaction integrals and the exact energy-balance identity.
//! * [`transform`] — conversion between Eulerian droplet profiles and the
//!   Lagrangian perturbation, including contact-point reconstruction.
//! * [`evolution`] — IMEX time stepping with energy-balance step control.
//! * [`inequalities`] — numerical verification of the Poincaré /
//!   Gagliardo–Nirenberg toolbox and the decay-rate calculators.
//! * [`diagnostics`] — trajectory certification: decay fits, conservation
//!   monitors, identity cross-checks, CSV export.
//! * [`cli`] — the `tfe` command-line entry point.

pub mod cli;
pub mod corpus;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod inequalities;
pub mod model;
pub mod norms;
pub mod presets;
pub mod spectral;
pub mod transform;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
