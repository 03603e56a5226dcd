//! Exact spectral solutions, slow manifolds and convergence experiments for the
//! linear fast-reaction system
//!
//! ```text
//! eps ∂t u = eps (Δ - mu) u + alpha u + beta v
//!     ∂t v = (Δ - nu) v + gamma u + delta v
//! ```
//!
//! on `R^n`, and for its singular limit `alpha u + beta v = 0` as `eps -> 0`.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for `f32`
//! and `f64`); the aliases at the crate root fix it to `f64`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod field;
pub mod lattice;
pub mod manifold;
pub mod oracle;
pub mod params;
pub mod scalar;

pub use analytic::{
    mode_matrix, mode_propagator, solve_aux, solve_aux_eps0, solve_aux_tilde, solve_full, solve_limit, AuxKind, Mat2,
    ModeMatrix, ModePropagator,
};
pub use error::{Error, Result};
pub use field::{h0_map, h2_norm, sample_gaussian, Gaussian, GaussianMixture, SpectralField, SpectralPair};
pub use lattice::{build_lattice, build_lattice_with_budget, SpectralLattice};
pub use manifold::{
    attraction_rate, critical_manifold, graph_distance, project_to_manifold, reduced_slow_exponent, residual,
    slow_manifold, AttractionRate, ManifoldDiagnostics, ManifoldKind, ManifoldLine,
};
pub use oracle::{rk4_aux, rk4_full, rk4_full_samples, rk4_limit, OracleConfig};
pub use params::{derive_constants, validate_params, Branch, DerivedConstants, SystemParams};
pub use scalar::Real;

pub type Params = SystemParams<f64>;
pub type Constants = DerivedConstants<f64>;
pub type Lattice = SpectralLattice<f64>;
pub type Field = SpectralField<f64>;
pub type Pair = SpectralPair<f64>;
pub type Line = ManifoldLine<f64>;
pub type Propagator = ModePropagator<f64>;
