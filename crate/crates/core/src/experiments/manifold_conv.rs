use rayon::prelude::*;

use crate::error::Result;
use crate::manifold::{critical_manifold, manifold_diagnostics, reduced_slow_exponent};
use crate::scalar::Real;

use super::config::ExperimentConfig;
use super::fit::{fit_or_exact, RateOutcome};
use super::ROUNDING_TOLERANCE;

/// Number of evolution times in `[0, 2]` for the invariance check.
pub const INVARIANCE_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldRow<T> {
    pub eps: T,
    /// Slow vs critical line, first components bounded by 1.
    pub graph_distance: T,
    /// `max_k |reduced slow exponent - (-4π²|k|² + kappa)|`.
    pub rate_gap: T,
    /// Largest slow-line residual of evolved on-manifold data.
    pub invariance_residual: T,
    /// `‖eps w_slow - (2 beta, -2 alpha)‖ = |sigma_slow + 2 alpha|`.
    pub eigenvector_gap: T,
    pub attraction_rate: T,
}

/// `eigenvector_gap <= C eps` with `C` fitted at the coarsest `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorLimitCheck<T> {
    pub constant: T,
    /// `(eps, gap / (C eps))` for the finer ladder points.
    pub ratios: Vec<(T, T)>,
    pub max_ratio: T,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldTable<T> {
    pub rows: Vec<ManifoldRow<T>>,
    pub distance_fit: RateOutcome<T>,
    pub rate_gap_fit: RateOutcome<T>,
    pub eigenvector: EigenvectorLimitCheck<T>,
}

impl<T: Real> ManifoldTable<T> {
    pub fn max_invariance_residual(&self) -> T {
        self.rows.iter().map(|r| r.invariance_residual).fold(T::zero(), T::max)
    }
}

/// `INVARIANCE_SAMPLES` equally spaced times covering `[0, 2]`.
pub fn invariance_times<T: Real>() -> Vec<T> {
    let n = INVARIANCE_SAMPLES - 1;
    (0..=n).map(|i| T::of(2.0 * i as f64 / n as f64)).collect()
}

pub fn manifold_convergence<T: Real>(cfg: &ExperimentConfig<T>) -> Result<ManifoldTable<T>> {
    cfg.validate()?;
    let lattice = cfg.lattice.build()?;
    let v0 = cfg.v0.sample(&lattice)?;
    let times = invariance_times::<T>();
    let rows: Vec<ManifoldRow<T>> = cfg
        .eps_ladder
        .par_iter()
        .map(|&eps| -> Result<ManifoldRow<T>> {
            let c = cfg.constants_at(eps)?;
            let diag = manifold_diagnostics(&c, &v0, &times)?;
            let mut rate_gap = T::zero();
            for &q in lattice.sq_norms() {
                let limit_rate = c.kappa - T::four_pi_sq() * q;
                rate_gap = rate_gap.max((reduced_slow_exponent(&c, q)? - limit_rate).abs());
            }
            let critical = critical_manifold(&c.params);
            Ok(ManifoldRow {
                eps,
                graph_distance: diag.graph_distance,
                rate_gap,
                invariance_residual: diag.max_residual,
                eigenvector_gap: (c.sigma_slow - critical.sigma).abs(),
                attraction_rate: diag.attraction_rate_measured,
            })
        })
        .collect::<Result<_>>()?;
    let distance_fit = fit_or_exact(&rows.iter().map(|r| (r.eps, r.graph_distance)).collect::<Vec<_>>())?;
    let rate_gap_fit = fit_or_exact(&rows.iter().map(|r| (r.eps, r.rate_gap)).collect::<Vec<_>>())?;
    let eigenvector = eigenvector_limit_check(&rows.iter().map(|r| (r.eps, r.eigenvector_gap)).collect::<Vec<_>>());
    Ok(ManifoldTable { rows, distance_fit, rate_gap_fit, eigenvector })
}

pub fn eigenvector_limit_check<T: Real>(gaps: &[(T, T)]) -> EigenvectorLimitCheck<T> {
    let constant = gaps[0].1 / gaps[0].0;
    let ratios: Vec<(T, T)> = gaps[1..]
        .iter()
        .map(|&(eps, g)| {
            let r = if g == T::zero() {
                T::zero()
            } else if constant > T::zero() {
                g / (constant * eps)
            } else {
                T::infinity()
            };
            (eps, r)
        })
        .collect();
    let max_ratio = ratios.iter().map(|r| r.1).fold(T::zero(), T::max);
    EigenvectorLimitCheck { constant, ratios, max_ratio, pass: max_ratio <= T::one() + T::of(ROUNDING_TOLERANCE) }
}
