//! Brute-force fixed-step RK4 integration of every equation the analytic
//! module solves in closed form. Shares data types with the rest of the crate
//! but none of the solution formulas.

use num_complex::Complex;
use rayon::prelude::*;

use crate::analytic::AuxKind;
use crate::error::{Error, Result};
use crate::field::{SpectralField, SpectralPair};
use crate::params::{validate_params, SystemParams};
use crate::scalar::Real;

/// Largest accepted `dt * |fast rate at k = 0|`.
pub const STIFFNESS_LIMIT: f64 = 0.5;

/// Modes whose own `dt * |rate|` exceeds this are integrated with an integer
/// subdivision of `dt` that brings the product back to [`STIFFNESS_LIMIT`].
const MODE_STABILITY_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig<T> {
    pub dt: T,
}

impl<T: Real> OracleConfig<T> {
    pub fn new(dt: T) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("oracle step must be positive, got {dt}")));
        }
        Ok(Self { dt })
    }
}

fn check_stiffness(dt: f64, rate: f64) -> Result<()> {
    let product = dt * rate.abs();
    if product > STIFFNESS_LIMIT {
        return Err(Error::Stiffness { dt, product, limit: STIFFNESS_LIMIT });
    }
    Ok(())
}

fn check_times<T: Real>(times: &[T]) -> Result<()> {
    let mut prev = T::zero();
    for &t in times {
        if !t.is_finite() || t < prev {
            return Err(Error::InvalidArgument(
                "oracle sample times must be finite, non-negative and non-decreasing".into(),
            ));
        }
        prev = t;
    }
    Ok(())
}

/// Number of equal steps covering `span` with steps no longer than `dt`,
/// snapping to `span/dt` when it is an integer within rounding.
fn step_count(span: f64, dt: f64) -> usize {
    let ratio = span / dt;
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) { nearest } else { ratio.ceil() };
    n.max(0.0) as usize
}

/// Entries of the per-mode generator, assembled here independently.
fn generator<T: Real>(p: &SystemParams<T>, q: T) -> [[T; 2]; 2] {
    let diffusion = T::of(4.0) * T::PI() * T::PI() * q;
    [[p.alpha / p.eps - p.mu - diffusion, p.beta / p.eps], [p.gamma, p.delta - p.nu - diffusion]]
}

/// Eigenvalues of a real 2×2 matrix with real spectrum, by the quadratic formula.
fn eigenvalues(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (0.5 * (tr + disc), 0.5 * (tr - disc))
}

fn spectral_radius(m: &[[f64; 2]; 2]) -> f64 {
    let (a, b) = eigenvalues(m);
    a.abs().max(b.abs())
}

fn subdivision(dt: f64, rate: f64) -> usize {
    let product = dt * rate.abs();
    if product <= MODE_STABILITY_LIMIT {
        1
    } else {
        (product / STIFFNESS_LIMIT).ceil() as usize
    }
}

/// Integrates a per-mode ODE through every sample time with the same
/// fixed-step schedule a single call to the last time would use.
fn march<S: Copy, T: Real>(
    state: S,
    times: &[T],
    dt: f64,
    sub: usize,
    mut step: impl FnMut(S, f64, f64) -> S,
) -> Vec<S> {
    let mut out = Vec::with_capacity(times.len());
    let mut s = state;
    let mut now = 0.0;
    for &t in times {
        let t = t.as_f64();
        let n = step_count(t - now, dt) * sub;
        if n > 0 {
            let h = (t - now) / n as f64;
            for i in 0..n {
                s = step(s, now + i as f64 * h, h);
            }
        }
        now = t;
        out.push(s);
    }
    out
}

type C = Complex<f64>;

fn rk4_pair(m: &[[f64; 2]; 2], (u, v): (C, C), h: f64) -> (C, C) {
    let f = |u: C, v: C| (u * m[0][0] + v * m[0][1], u * m[1][0] + v * m[1][1]);
    let (k1u, k1v) = f(u, v);
    let (k2u, k2v) = f(u + k1u * (0.5 * h), v + k1v * (0.5 * h));
    let (k3u, k3v) = f(u + k2u * (0.5 * h), v + k2v * (0.5 * h));
    let (k4u, k4v) = f(u + k3u * h, v + k3v * h);
    (u + (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (h / 6.0), v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0))
}

fn to_f64(c: Complex<impl Real>) -> C {
    Complex::new(c.re.as_f64(), c.im.as_f64())
}

fn from_f64<T: Real>(c: C) -> Complex<T> {
    Complex::new(T::of(c.re), T::of(c.im))
}

fn transpose_fields<T: Real>(
    template: &SpectralField<T>,
    per_mode: Vec<Vec<C>>,
    count: usize,
) -> Result<Vec<SpectralField<T>>> {
    (0..count)
        .map(|j| {
            let coeffs = per_mode.iter().map(|m| from_f64(m[j])).collect();
            SpectralField::from_coefficients(std::sync::Arc::clone(template.lattice()), coeffs)
        })
        .collect()
}

/// RK4 on `∂t w = M(k) w` for every mode, sampled at each of `times`.
pub fn rk4_full_samples<T: Real>(
    params: &SystemParams<T>,
    state0: &SpectralPair<T>,
    times: &[T],
    cfg: &OracleConfig<T>,
) -> Result<Vec<SpectralPair<T>>> {
    let p = validate_params(*params)?;
    check_times(times)?;
    let dt = cfg.dt.as_f64();
    let p64 = params_f64(&p);
    let (l1, l2) = eigenvalues(&generator(&p64, 0.0));
    check_stiffness(dt, if l1.abs() > l2.abs() { l1 } else { l2 })?;

    let lattice = state0.lattice();
    let per_mode: Vec<Vec<(C, C)>> = (0..lattice.len())
        .into_par_iter()
        .map(|i| {
            let m = generator(&p64, lattice.sq_norm(i).as_f64());
            let sub = subdivision(dt, spectral_radius(&m));
            let w0 = (to_f64(state0.u.coefficient(i)), to_f64(state0.v.coefficient(i)));
            march(w0, times, dt, sub, |w, _, h| rk4_pair(&m, w, h))
        })
        .collect();

    let us = per_mode.iter().map(|m| m.iter().map(|w| w.0).collect()).collect();
    let vs = per_mode.iter().map(|m| m.iter().map(|w| w.1).collect()).collect();
    let us = transpose_fields(&state0.u, us, times.len())?;
    let vs = transpose_fields(&state0.v, vs, times.len())?;
    us.into_iter().zip(vs).map(|(u, v)| SpectralPair::new(u, v)).collect()
}

pub fn rk4_full<T: Real>(
    params: &SystemParams<T>,
    state0: &SpectralPair<T>,
    t: T,
    cfg: &OracleConfig<T>,
) -> Result<SpectralPair<T>> {
    Ok(rk4_full_samples(params, state0, &[t], cfg)?.remove(0))
}

fn limit_rate(p: &SystemParams<f64>, q: f64) -> f64 {
    let kappa = -p.nu - p.beta * p.gamma / p.alpha + p.delta;
    -4.0 * std::f64::consts::PI * std::f64::consts::PI * q + kappa
}

fn rk4_scalar(rate: f64, y: C, forcing: impl Fn(f64) -> C, s: f64, h: f64) -> C {
    let f = |s: f64, y: C| y * rate + forcing(s);
    let k1 = f(s, y);
    let k2 = f(s + 0.5 * h, y + k1 * (0.5 * h));
    let k3 = f(s + 0.5 * h, y + k2 * (0.5 * h));
    let k4 = f(s + h, y + k3 * h);
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn params_f64<T: Real>(p: &SystemParams<T>) -> SystemParams<f64> {
    SystemParams::new(
        p.alpha.as_f64(),
        p.beta.as_f64(),
        p.gamma.as_f64(),
        p.delta.as_f64(),
        p.mu.as_f64(),
        p.nu.as_f64(),
        p.eps.as_f64(),
    )
}

/// RK4 on the slow limit equation `∂t v = (-4π²|k|² + κ) v` per mode.
pub fn rk4_limit<T: Real>(
    params: &SystemParams<T>,
    v0: &SpectralField<T>,
    t: T,
    cfg: &OracleConfig<T>,
) -> Result<SpectralField<T>> {
    let p = params_f64(&validate_params(*params)?);
    check_times(&[t])?;
    let dt = cfg.dt.as_f64();
    check_stiffness(dt, limit_rate(&p, 0.0))?;
    let lattice = v0.lattice();
    let coeffs: Vec<C> = (0..lattice.len())
        .into_par_iter()
        .map(|i| {
            let rate = limit_rate(&p, lattice.sq_norm(i).as_f64());
            let sub = subdivision(dt, rate);
            march(to_f64(v0.coefficient(i)), &[t], dt, sub, |y, s, h| rk4_scalar(rate, y, |_| C::new(0.0, 0.0), s, h))
                [0]
        })
        .collect();
    SpectralField::from_coefficients(std::sync::Arc::clone(lattice), coeffs.into_iter().map(from_f64).collect())
}

/// RK4 on an auxiliary fast equation per mode,
/// `∂t u = (-4π²|k|² - mu + eps^-1 alpha) u + drive(t)`, with the slow limit
/// solution `v0(t)` evaluated exactly at every stage point:
///
/// - `Tilde`: `drive = eps^-1 beta v0(t)`
/// - `Eps0`:  `drive = eps^-1 beta v0(t) + (∂t + 4π²|k|² + mu) h0 v0(t)`
pub fn rk4_aux<T: Real>(
    params: &SystemParams<T>,
    which: AuxKind,
    u0: &SpectralField<T>,
    v0: &SpectralField<T>,
    t: T,
    cfg: &OracleConfig<T>,
) -> Result<SpectralField<T>> {
    let p = params_f64(&validate_params(*params)?);
    check_times(&[t])?;
    if !u0.shares_lattice(v0) {
        return Err(Error::LatticeMismatch);
    }
    let dt = cfg.dt.as_f64();
    check_stiffness(dt, p.alpha / p.eps - p.mu)?;
    let h0 = -p.beta / p.alpha;
    let lattice = u0.lattice();
    let coeffs: Vec<C> = (0..lattice.len())
        .into_par_iter()
        .map(|i| {
            let q = lattice.sq_norm(i).as_f64();
            let diffusion = 4.0 * std::f64::consts::PI * std::f64::consts::PI * q;
            let rate = -diffusion - p.mu + p.alpha / p.eps;
            let slow = limit_rate(&p, q);
            let v_hat = to_f64(v0.coefficient(i));
            let drive = |s: f64| {
                let v = v_hat * (slow * s).exp();
                let base = v * (p.beta / p.eps);
                match which {
                    AuxKind::Tilde => base,
                    AuxKind::Eps0 => {
                        let dv = v * slow;
                        base + (dv + v * (diffusion + p.mu)) * h0
                    }
                }
            };
            let sub = subdivision(dt, rate);
            march(to_f64(u0.coefficient(i)), &[t], dt, sub, |y, s, h| rk4_scalar(rate, y, drive, s, h))[0]
        })
        .collect();
    SpectralField::from_coefficients(std::sync::Arc::clone(lattice), coeffs.into_iter().map(from_f64).collect())
}
