use rayon::prelude::*;

use crate::analytic::{solve_aux_eps0, solve_aux_tilde, solve_full, solve_limit};
use crate::error::Result;
use crate::field::{h0_map, SpectralPair};
use crate::scalar::Real;

use super::config::ExperimentConfig;
use super::ROUNDING_TOLERANCE;

/// Samples whose right-hand side falls below this multiple of the magnitude of
/// the two compared fields are not resolvable in floating point and are skipped.
pub const RESOLUTION_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `‖u^eps - ũ^eps‖ <= C sup_{s<=t} ‖v^eps(s) - v^0(s)‖`
    FullVsTilde,
    /// `‖u^{eps,0} - ũ^eps‖ <= C eps e^{kappa t} ‖v0‖`
    Eps0VsTilde,
    /// `‖u^{eps,0} - h0(v^0)‖ <= C e^{(-mu + eps^-1 alpha) t} ‖u0 - h0(v0)‖`
    Eps0VsCritical,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::FullVsTilde, BoundKind::Eps0VsTilde, BoundKind::Eps0VsCritical];

    pub fn label(self) -> &'static str {
        match self {
            BoundKind::FullVsTilde => "full_vs_tilde",
            BoundKind::Eps0VsTilde => "eps0_vs_tilde",
            BoundKind::Eps0VsCritical => "eps0_vs_critical",
        }
    }
}

/// Both sides of one bound on the time grid for one `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSeries<T> {
    pub eps: T,
    pub times: Vec<T>,
    pub lhs: Vec<T>,
    pub rhs: Vec<T>,
    /// `‖a‖ + ‖b‖` for the two fields compared on the left.
    pub scale: Vec<T>,
}

impl<T: Real> BoundSeries<T> {
    /// `max_t lhs/rhs` over resolvable samples; `0/0` counts as 0.
    pub fn max_ratio(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.times.len() {
            let (l, r) = (self.lhs[i], self.rhs[i]);
            if l == T::zero() {
                continue;
            }
            if !(r > T::of(RESOLUTION_FLOOR) * self.scale[i]) || !(r >= T::min_positive_value()) {
                continue;
            }
            worst = worst.max(l / r);
        }
        worst
    }
}

/// One bound across the ladder: `C` is the coarsest-`eps` ratio and the
/// violation is the largest finer-`eps` ratio relative to `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck<T> {
    pub kind: BoundKind,
    pub constant: T,
    /// `(eps, max_t lhs/rhs)` for every ladder point.
    pub ratios: Vec<(T, T)>,
    pub max_violation: T,
    /// The left side vanishes at every sample and `eps`.
    pub identically_zero: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub bounds: Vec<BoundCheck<T>>,
}

impl<T: Real> BoundReport<T> {
    pub fn pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }

    pub fn get(&self, kind: BoundKind) -> Option<&BoundCheck<T>> {
        self.bounds.iter().find(|b| b.kind == kind)
    }
}

pub fn check_bound<T: Real>(kind: BoundKind, series: &[BoundSeries<T>]) -> BoundCheck<T> {
    let ratios: Vec<(T, T)> = series.iter().map(|s| (s.eps, s.max_ratio())).collect();
    let identically_zero = series.iter().all(|s| s.lhs.iter().all(|&l| l == T::zero()));
    let constant = ratios[0].1;
    let max_violation = ratios[1..]
        .iter()
        .map(|&(_, r)| {
            if r == T::zero() {
                T::zero()
            } else if constant > T::zero() {
                r / constant
            } else {
                T::infinity()
            }
        })
        .fold(T::zero(), T::max);
    BoundCheck {
        kind,
        constant,
        ratios,
        max_violation,
        identically_zero,
        pass: max_violation <= T::one() + T::of(ROUNDING_TOLERANCE),
    }
}

/// Evaluates both sides of all three bounds for every ladder `eps`, in ladder
/// order, indexed as `[bound][eps]`.
pub fn bound_series<T: Real>(cfg: &ExperimentConfig<T>) -> Result<[Vec<BoundSeries<T>>; 3]> {
    cfg.validate()?;
    let lattice = cfg.lattice.build()?;
    let (u0, v0) = cfg.initial_data(&lattice)?;
    let state0 = SpectralPair::new(u0.clone(), v0.clone())?;
    let off_critical = u0.sub(&h0_map(&v0, &cfg.base))?.h2_norm();
    let v0_norm = v0.h2_norm();
    let times = cfg.time.times();

    let per_eps: Vec<[BoundSeries<T>; 3]> = cfg
        .eps_ladder
        .par_iter()
        .map(|&eps| -> Result<[BoundSeries<T>; 3]> {
            let c = cfg.constants_at(eps)?;
            let p = &c.params;
            let empty = || BoundSeries {
                eps,
                times: times.clone(),
                lhs: Vec::with_capacity(times.len()),
                rhs: Vec::with_capacity(times.len()),
                scale: Vec::with_capacity(times.len()),
            };
            let mut out = [empty(), empty(), empty()];
            let mut v_gap_sup = T::zero();
            for &t in &times {
                let full = solve_full(&c, &state0, t)?;
                let limit = solve_limit(&c, &v0, t)?;
                let tilde = solve_aux_tilde(&c, &u0, &v0, t)?;
                let eps0 = solve_aux_eps0(&c, &u0, &v0, t)?;
                v_gap_sup = v_gap_sup.max(full.v.sub(&limit.v)?.h2_norm());

                let mut push = |i: usize,
                                a: &crate::field::SpectralField<T>,
                                b: &crate::field::SpectralField<T>,
                                rhs: T|
                 -> Result<()> {
                    out[i].lhs.push(a.sub(b)?.h2_norm());
                    out[i].rhs.push(rhs);
                    out[i].scale.push(a.h2_norm() + b.h2_norm());
                    Ok(())
                };
                push(0, &full.u, &tilde, v_gap_sup)?;
                push(1, &eps0, &tilde, eps * (c.kappa * t).exp() * v0_norm)?;
                push(2, &eps0, &limit.u, ((p.alpha / p.eps - p.mu) * t).exp() * off_critical)?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut by_bound: [Vec<BoundSeries<T>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for row in per_eps {
        for (i, s) in row.into_iter().enumerate() {
            by_bound[i].push(s);
        }
    }
    Ok(by_bound)
}

pub fn proposition_bounds<T: Real>(cfg: &ExperimentConfig<T>) -> Result<BoundReport<T>> {
    let series = bound_series(cfg)?;
    Ok(BoundReport { bounds: BoundKind::ALL.iter().zip(series.iter()).map(|(&k, s)| check_bound(k, s)).collect() })
}
