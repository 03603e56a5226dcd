use rayon::prelude::*;

use crate::analytic::{solve_full, solve_limit};
use crate::error::Result;
use crate::field::{h0_map, SpectralPair};
use crate::scalar::Real;

use super::config::ExperimentConfig;
use super::fit::{fit_or_exact, RateOutcome};
use super::ROUNDING_TOLERANCE;

/// `‖T_eps(t)(u0, v0) - T_0(t)(h0(v0), v0)‖` on the time grid for one `eps`,
/// together with the initial-layer term `e^{(eps^-1 alpha - mu) t} ‖u0 - h0(v0)‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries<T> {
    pub eps: T,
    pub times: Vec<T>,
    pub errors: Vec<T>,
    pub layer: Vec<T>,
}

impl<T: Real> ErrorSeries<T> {
    /// Largest error and the first time it is attained.
    pub fn sup(&self) -> (T, T) {
        sup_with_time(&self.times, &self.errors)
    }

    /// Largest `error - layer` and the first time it is attained.
    pub fn corrected_sup(&self) -> (T, T) {
        let corrected: Vec<T> = self.errors.iter().zip(&self.layer).map(|(&e, &l)| e - l).collect();
        sup_with_time(&self.times, &corrected)
    }
}

fn sup_with_time<T: Real>(times: &[T], values: &[T]) -> (T, T) {
    let mut best = (T::neg_infinity(), T::zero());
    for (&t, &v) in times.iter().zip(values) {
        if v > best.0 {
            best = (v, t);
        }
    }
    best
}

/// Error series for every ladder `eps`, in ladder order.
pub fn error_series<T: Real>(cfg: &ExperimentConfig<T>) -> Result<Vec<ErrorSeries<T>>> {
    cfg.validate()?;
    let lattice = cfg.lattice.build()?;
    let (u0, v0) = cfg.initial_data(&lattice)?;
    let state0 = SpectralPair::new(u0.clone(), v0.clone())?;
    let layer0 = u0.sub(&h0_map(&v0, &cfg.base))?.h2_norm();
    let times = cfg.time.times();
    cfg.eps_ladder
        .par_iter()
        .map(|&eps| {
            let c = cfg.constants_at(eps)?;
            let p = &c.params;
            let mut errors = Vec::with_capacity(times.len());
            let mut layer = Vec::with_capacity(times.len());
            for &t in &times {
                let full = solve_full(&c, &state0, t)?;
                let limit = solve_limit(&c, &v0, t)?;
                errors.push(full.sub(&limit)?.h2_norm());
                layer.push(((p.alpha / p.eps - p.mu) * t).exp() * layer0);
            }
            Ok(ErrorSeries { eps, times: times.clone(), errors, layer })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderRow<T> {
    pub eps: T,
    /// First time at which the sup is attained.
    pub t_sup: T,
    pub error_h2: T,
    /// `sup_t (error - layer)`.
    pub corrected_error: T,
    pub t_corrected_sup: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderTable<T> {
    pub rows: Vec<LadderRow<T>>,
    /// Rate of `error_h2` against `eps`.
    pub fit: RateOutcome<T>,
    /// Rate of `corrected_error` against `eps`, when every corrected value is positive.
    pub corrected_fit: Option<RateOutcome<T>>,
}

/// Sup-in-time error per ladder `eps`, with rate fits.
pub fn convergence_ladder<T: Real>(cfg: &ExperimentConfig<T>) -> Result<LadderTable<T>> {
    ladder_from_series(&error_series(cfg)?)
}

pub fn ladder_from_series<T: Real>(series: &[ErrorSeries<T>]) -> Result<LadderTable<T>> {
    let rows: Vec<LadderRow<T>> = series
        .iter()
        .map(|s| {
            let (error_h2, t_sup) = s.sup();
            let (corrected_error, t_corrected_sup) = s.corrected_sup();
            LadderRow { eps: s.eps, t_sup, error_h2, corrected_error, t_corrected_sup }
        })
        .collect();
    let fit = fit_or_exact(&rows.iter().map(|r| (r.eps, r.error_h2)).collect::<Vec<_>>())?;
    let corrected: Vec<(T, T)> = rows.iter().map(|r| (r.eps, r.corrected_error)).collect();
    let corrected_fit = if corrected.iter().all(|p| p.1 >= T::zero()) { Some(fit_or_exact(&corrected)?) } else { None };
    Ok(LadderTable { rows, fit, corrected_fit })
}

/// Initial-layer bound
/// `error(t) <= C eps (‖u0 - h0(v0)‖ + ‖v0‖) + e^{(eps^-1 alpha - mu) t} ‖u0 - h0(v0)‖`
/// with `C` fitted at the coarsest `eps` and checked at every finer one.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerReport<T> {
    pub constant: T,
    /// `(eps, max_t (error - layer) / (C eps (A + B)))` for the finer ladder points.
    pub ratios: Vec<(T, T)>,
    pub max_ratio: T,
    pub pass: bool,
}

pub fn initial_layer_check<T: Real>(cfg: &ExperimentConfig<T>) -> Result<LayerReport<T>> {
    let lattice = cfg.lattice.build()?;
    let (u0, v0) = cfg.initial_data(&lattice)?;
    let data_norm = u0.sub(&h0_map(&v0, &cfg.base))?.h2_norm() + v0.h2_norm();
    let series = error_series(cfg)?;
    Ok(layer_report(&series, data_norm))
}

pub fn layer_report<T: Real>(series: &[ErrorSeries<T>], data_norm: T) -> LayerReport<T> {
    let excess = |s: &ErrorSeries<T>| {
        let scale = s.eps * data_norm;
        s.errors.iter().zip(&s.layer).map(|(&e, &l)| (e - l) / scale).fold(T::neg_infinity(), T::max)
    };
    let constant = excess(&series[0]).max(T::zero());
    let ratios: Vec<(T, T)> = series[1..]
        .iter()
        .map(|s| {
            let r = excess(s);
            let ratio = if constant > T::zero() {
                r / constant
            } else if r > T::zero() {
                T::infinity()
            } else {
                T::zero()
            };
            (s.eps, ratio)
        })
        .collect();
    let max_ratio = ratios.iter().map(|r| r.1).fold(T::zero(), T::max);
    LayerReport { constant, ratios, max_ratio, pass: max_ratio <= T::one() + T::of(ROUNDING_TOLERANCE) }
}
