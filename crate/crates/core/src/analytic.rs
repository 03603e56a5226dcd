//! Exact solutions: the per-mode propagator of the full system, the limit
//! system on the critical manifold, and the two auxiliary fast equations
//! driven by the limit solution.
//!
//! Every solution is advanced from `t = 0` in one step; no time stepping.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{SpectralField, SpectralPair};
use crate::params::{DerivedConstants, SystemParams};
use crate::scalar::Real;

/// Below this ratio of `Omega` to the matrix scale the propagator switches to
/// scaling-and-squaring.
const EIGEN_GAP_THRESHOLD: f64 = 1e-7;

/// Dense 2×2 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn identity() -> Self {
        Self([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.0[r][c]
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> T {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Self([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn scale(&self, s: T) -> Self {
        let a = &self.0;
        Self([[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]])
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Self([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }

    /// Sum of absolute entries.
    pub fn abs_sum(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, x| acc + x.abs())
    }

    pub fn apply(&self, x: [T; 2]) -> [T; 2] {
        [self.0[0][0] * x[0] + self.0[0][1] * x[1], self.0[1][0] * x[0] + self.0[1][1] * x[1]]
    }

    pub fn apply_complex(&self, u: Complex<T>, v: Complex<T>) -> (Complex<T>, Complex<T>) {
        (u * self.0[0][0] + v * self.0[0][1], u * self.0[1][0] + v * self.0[1][1])
    }
}

/// Generator `M(q)` of one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMatrix<T>(pub Mat2<T>);

/// `exp(M(q) t)` for one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePropagator<T>(pub Mat2<T>);

impl<T: Real> ModePropagator<T> {
    pub fn matrix(&self) -> &Mat2<T> {
        &self.0
    }

    pub fn apply(&self, u: Complex<T>, v: Complex<T>) -> (Complex<T>, Complex<T>) {
        self.0.apply_complex(u, v)
    }
}

/// Assembles `M(q)` for `q = |k|²`.
pub fn mode_matrix<T: Real>(params: &SystemParams<T>, q: T) -> ModeMatrix<T> {
    let lap = T::four_pi_sq() * q;
    let p = params;
    ModeMatrix(Mat2([[p.alpha / p.eps - p.mu - lap, p.beta / p.eps], [p.gamma, p.delta - p.nu - lap]]))
}

/// `M(k)` for an explicit wavevector.
pub fn mode_matrix_at<T: Real>(params: &SystemParams<T>, k: &[T]) -> ModeMatrix<T> {
    let q = k.iter().fold(T::zero(), |acc, &x| acc + x * x);
    mode_matrix(params, q)
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("time must be finite and non-negative, got {t}")))
    }
}

/// `(1 - e^{-x t}) / x`, continuous at `x = 0`.
fn decay_integral<T: Real>(x: T, t: T) -> T {
    let xt = x * t;
    if xt.abs() < T::of(1e-300) {
        t
    } else {
        -(-xt).exp_m1() / x
    }
}

/// Exact `exp(M(q) t)`.
///
/// With `λ± = (tr ± Ω)/2`, `p = (Ω + X)/2`, `m = (Ω - X)/2`, `X = M00 - M11` and
/// `g = (1 - e^{-Ωt})/Ω` the spectral decomposition reduces to
///
/// ```text
/// exp(Mt) = e^{λ+ t} [ 1 - m g    M01 g  ]
///                    [ M10 g      1 - p g ]
/// ```
///
/// which has no cancellation for any sign pattern and stays continuous across
/// the modes where an eigenvalue vanishes.
pub fn mode_propagator<T: Real>(c: &DerivedConstants<T>, q: T, t: T) -> Result<ModePropagator<T>> {
    check_time(t)?;
    let m = mode_matrix(&c.params, q).0;
    if c.omega <= T::of(EIGEN_GAP_THRESHOLD) * m.abs_sum() {
        return Ok(ModePropagator(expm_scaling_squaring(&m, t)));
    }
    let (p_half, m_half) = c.half_gaps();
    let lead = (c.lambda_at(crate::params::Branch::Plus, q) * t).exp();
    let g = decay_integral(c.omega, t);
    Ok(ModePropagator(Mat2([
        [lead * (T::one() - m_half * g), lead * m.get(0, 1) * g],
        [lead * m.get(1, 0) * g, lead * (T::one() - p_half * g)],
    ])))
}

/// Generic 2×2 exponential by scaling and squaring of a degree-12 Taylor polynomial.
pub fn expm_scaling_squaring<T: Real>(m: &Mat2<T>, t: T) -> Mat2<T> {
    let a = m.scale(t);
    let norm = a.abs_sum();
    let mut squarings = 0i32;
    if norm > T::of(0.5) {
        squarings = (norm / T::of(0.5)).log2().ceil().to_i32().unwrap_or(0).max(0);
    }
    let a = a.scale(T::of(2.0).powi(-squarings));
    let mut term = Mat2::identity();
    let mut sum = Mat2::identity();
    for j in 1..=12 {
        term = term.mul(&a).scale(T::one() / T::of(j as f64));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Full system: `(û, v̂)(t) = exp(M(k) t) (û₀, v̂₀)` mode by mode.
pub fn solve_full<T: Real>(c: &DerivedConstants<T>, state0: &SpectralPair<T>, t: T) -> Result<SpectralPair<T>> {
    check_time(t)?;
    let lattice = state0.lattice();
    let mut us = Vec::with_capacity(lattice.len());
    let mut vs = Vec::with_capacity(lattice.len());
    for (i, &q) in lattice.sq_norms().iter().enumerate() {
        let (u, v) = mode_propagator(c, q, t)?.apply(state0.u.coefficient(i), state0.v.coefficient(i));
        us.push(u);
        vs.push(v);
    }
    SpectralPair::new(
        SpectralField::from_coefficients(Arc::clone(lattice), us)?,
        SpectralField::from_coefficients(Arc::clone(lattice), vs)?,
    )
}

/// Limit system on the critical manifold:
/// `v̂(t) = e^{(-4π²|k|² + κ) t} v̂₀`, `û(t) = h0(v̂(t))`.
pub fn solve_limit<T: Real>(c: &DerivedConstants<T>, v0: &SpectralField<T>, t: T) -> Result<SpectralPair<T>> {
    check_time(t)?;
    let lattice = v0.lattice();
    let mut v = v0.clone();
    for (coef, &q) in v.coefficients_mut().iter_mut().zip(lattice.sq_norms()) {
        *coef = *coef * limit_rate(c, q, t);
    }
    let u = crate::field::h0_map(&v, &c.params);
    SpectralPair::new(u, v)
}

fn limit_rate<T: Real>(c: &DerivedConstants<T>, q: T, t: T) -> T {
    ((c.kappa - T::four_pi_sq() * q) * t).exp()
}

/// Which auxiliary fast equation to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxKind {
    /// Fast equation driven by `beta v0(t)` only.
    Tilde,
    /// Fast equation with the additional `eps (∂t - Δ + mu) h0(v0)` correction.
    Eps0,
}

fn aux_denominator<T: Real>(c: &DerivedConstants<T>) -> Result<T> {
    let p = &c.params;
    let den = -p.alpha + p.eps * p.mu + p.eps * c.kappa;
    let scale = p.alpha.abs() + (p.eps * p.mu).abs() + (p.eps * c.kappa).abs();
    if den.abs() <= T::of(1e-14) * scale {
        return Err(Error::Degenerate(format!(
            "-alpha + eps*mu + eps*kappa = {den} vanishes; the auxiliary closed forms are undefined"
        )));
    }
    Ok(den)
}

/// Drive coefficient of the auxiliary closed form, before division by
/// `-alpha + eps mu + eps kappa`.
fn aux_numerator<T: Real>(c: &DerivedConstants<T>, kind: AuxKind) -> T {
    let p = &c.params;
    match kind {
        AuxKind::Tilde => p.beta,
        AuxKind::Eps0 => p.beta - p.eps * p.beta / p.alpha * (p.mu + c.kappa),
    }
}

/// Closed form of either auxiliary equation:
/// `û(t) = e^{F t} û₀ + c (e^{R t} - e^{F t}) v̂₀` with
/// `F = -4π²|k|² - mu + eps^-1 alpha`, `R = -4π²|k|² + κ` and `c` the drive
/// coefficient over `-alpha + eps mu + eps kappa`, evaluated as
/// `e^{F t} (û₀ - c v̂₀) + c e^{R t} v̂₀`.
pub fn solve_aux<T: Real>(
    c: &DerivedConstants<T>,
    kind: AuxKind,
    u0: &SpectralField<T>,
    v0: &SpectralField<T>,
    t: T,
) -> Result<SpectralField<T>> {
    check_time(t)?;
    if !u0.shares_lattice(v0) {
        return Err(Error::LatticeMismatch);
    }
    let coef = aux_numerator(c, kind) / aux_denominator(c)?;
    if t == T::zero() {
        return Ok(u0.clone());
    }
    let p = &c.params;
    let fast = p.alpha / p.eps - p.mu;
    let lattice = u0.lattice();
    let mut out = u0.clone();
    for (i, u) in out.coefficients_mut().iter_mut().enumerate() {
        let q = lattice.sq_norm(i);
        let fast_decay = ((fast - T::four_pi_sq() * q) * t).exp();
        let v = v0.coefficient(i);
        *u = (*u - v * coef) * fast_decay + v * limit_rate(c, q, t) * coef;
    }
    Ok(out)
}

pub fn solve_aux_tilde<T: Real>(
    c: &DerivedConstants<T>,
    u0: &SpectralField<T>,
    v0: &SpectralField<T>,
    t: T,
) -> Result<SpectralField<T>> {
    solve_aux(c, AuxKind::Tilde, u0, v0, t)
}

pub fn solve_aux_eps0<T: Real>(
    c: &DerivedConstants<T>,
    u0: &SpectralField<T>,
    v0: &SpectralField<T>,
    t: T,
) -> Result<SpectralField<T>> {
    solve_aux(c, AuxKind::Eps0, u0, v0, t)
}
