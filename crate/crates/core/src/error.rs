use thiserror::Error;

/// Errors produced by parameter validation, lattice construction, the solvers
/// and the experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A sign or nonzero requirement on a single parameter failed.
    #[error("sign violation: {condition} is required (got {value})")]
    Sign { condition: &'static str, value: f64 },

    /// The fast direction is not normally hyperbolic.
    #[error("hyperbolicity violation: eps^-1*alpha - mu < 0 is required (got {value})")]
    Hyperbolicity { value: f64 },

    /// The eigenvalue gap `Omega` would be complex or zero.
    #[error(
        "complex-Omega violation: (delta - nu - eps^-1*alpha + mu)^2 + 4*eps^-1*beta*gamma > 0 \
         is required (got {discriminant})"
    )]
    ComplexOmega { discriminant: f64 },

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("lattice would hold {modes} modes, budget is {budget}")]
    LatticeTooLarge { modes: u128, budget: usize },

    #[error("fields live on different lattices")]
    LatticeMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A closed form hit a vanishing denominator for these parameters.
    #[error("parameter degeneracy: {0}")]
    Degenerate(String),

    /// Fixed-step integration would not resolve the fastest rate.
    #[error("stiffness guard: dt*|rate| = {product} exceeds {limit} (dt = {dt})")]
    Stiffness { dt: f64, product: f64, limit: f64 },

    #[error("rate fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    /// Log-log fitting needs strictly positive values; a zero value means the
    /// quantity vanishes identically and should be reported as exact.
    #[error("rate fit needs positive values, point {index} has value {value}")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("invalid experiment configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
