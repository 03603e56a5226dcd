use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MIN_FIT_POINTS: usize = 4;

/// Least-squares line through `(ln eps, ln value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    pub points: Vec<(T, T)>,
}

/// Either a fitted rate or the report that every value is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub enum RateOutcome<T> {
    Fit(RateFit<T>),
    Exact,
}

impl<T: Real> RateOutcome<T> {
    pub fn fit(&self) -> Option<&RateFit<T>> {
        match self {
            RateOutcome::Fit(f) => Some(f),
            RateOutcome::Exact => None,
        }
    }
}

pub fn fit_rate<T: Real>(points: &[(T, T)]) -> Result<RateFit<T>> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_FIT_POINTS, got: points.len() });
    }
    for (index, &(x, y)) in points.iter().enumerate() {
        if !(x > T::zero()) {
            return Err(Error::NonPositiveValue { index, value: x.as_f64() });
        }
        if !(y > T::zero()) {
            return Err(Error::NonPositiveValue { index, value: y.as_f64() });
        }
    }
    let n = T::of(points.len() as f64);
    let xs: Vec<T> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<T> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: T = xs.iter().zip(&ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let syy: T = ys.iter().map(|&y| (y - my) * (y - my)).sum();
    if sxx == T::zero() {
        return Err(Error::InvalidArgument("rate fit needs at least two distinct eps values".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: T = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy == T::zero() { T::one() } else { T::one() - ss_res / syy };
    Ok(RateFit { slope, intercept, r_squared: r_squared.max(T::zero()).min(T::one()), points: points.to_vec() })
}

/// [`fit_rate`], except that an all-zero value column is reported as exact.
pub fn fit_or_exact<T: Real>(points: &[(T, T)]) -> Result<RateOutcome<T>> {
    if points.len() >= MIN_FIT_POINTS && points.iter().all(|p| p.1 == T::zero()) {
        return Ok(RateOutcome::Exact);
    }
    fit_rate(points).map(RateOutcome::Fit)
}
