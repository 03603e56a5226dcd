//! Numerical experiments for the `O(eps)` convergence statements: solution
//! error against the limit system, the intermediate auxiliary-system bounds,
//! and convergence of the slow manifold to the critical manifold.

pub mod bounds;
pub mod config;
pub mod fit;
pub mod ladder;
pub mod manifold_conv;

/// Relative slack on calibrated ratio checks, absorbing rounding when a
/// finer-`eps` ratio equals the calibration ratio exactly.
pub const ROUNDING_TOLERANCE: f64 = 1e-9;

pub use bounds::{bound_series, check_bound, proposition_bounds, BoundCheck, BoundKind, BoundReport, BoundSeries};
pub use config::{ExperimentConfig, LatticeSpec, TimeGrid};
pub use fit::{fit_or_exact, fit_rate, RateFit, RateOutcome};
pub use ladder::{
    convergence_ladder, error_series, initial_layer_check, ErrorSeries, LadderRow, LadderTable, LayerReport,
};
pub use manifold_conv::{manifold_convergence, EigenvectorLimitCheck, ManifoldRow, ManifoldTable};
