//! Fourier coefficients sampled on a lattice, H² norms, and initial data.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::SpectralLattice;
use crate::params::SystemParams;
use crate::scalar::Real;

/// One complex coefficient per lattice mode, in lattice order.
#[derive(Debug, Clone)]
pub struct SpectralField<T> {
    lattice: Arc<SpectralLattice<T>>,
    coeffs: Vec<Complex<T>>,
}

fn same_lattice<T: Real>(a: &Arc<SpectralLattice<T>>, b: &Arc<SpectralLattice<T>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(lattice: Arc<SpectralLattice<T>>) -> Self {
        let coeffs = vec![Complex::new(T::zero(), T::zero()); lattice.len()];
        Self { lattice, coeffs }
    }

    pub fn from_coefficients(lattice: Arc<SpectralLattice<T>>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                lattice.len(),
                coeffs.len()
            )));
        }
        Ok(Self { lattice, coeffs })
    }

    /// Builds a field from `f(mode index, wavevector)`.
    pub fn from_fn(lattice: Arc<SpectralLattice<T>>, mut f: impl FnMut(usize, &[T]) -> Complex<T>) -> Self {
        let coeffs = (0..lattice.len()).map(|i| f(i, lattice.wavevector(i))).collect();
        Self { lattice, coeffs }
    }

    pub fn lattice(&self) -> &Arc<SpectralLattice<T>> {
        &self.lattice
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn coefficient(&self, mode: usize) -> Complex<T> {
        self.coeffs[mode]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn shares_lattice(&self, other: &Self) -> bool {
        same_lattice(&self.lattice, &other.lattice)
    }

    pub fn scaled(&self, factor: T) -> Self {
        self.map(|c| c * factor)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { lattice: Arc::clone(&self.lattice), coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if !self.shares_lattice(other) {
            return Err(Error::LatticeMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&x, &y)| x * a + y * b).collect();
        Ok(Self { lattice: Arc::clone(&self.lattice), coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(T::one(), other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(T::one(), other, -T::one())
    }

    /// The field `k -> conj(c(-k))`; equal to `self` for real physical fields.
    pub fn conj_reflect(&self) -> Self {
        let n = self.len();
        let coeffs = (0..n).map(|i| self.coeffs[n - 1 - i].conj()).collect();
        Self { lattice: Arc::clone(&self.lattice), coeffs }
    }

    /// Largest `|c(-k) - conj(c(k))|` over the lattice.
    pub fn hermitian_defect(&self) -> T {
        let n = self.len();
        (0..n).map(|i| (self.coeffs[n - 1 - i] - self.coeffs[i].conj()).norm()).fold(T::zero(), T::max)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    pub fn h2_norm(&self) -> T {
        h2_norm(self)
    }
}

/// Sobolev norm `sqrt(Σ w (1 + |k|²)² |c_k|²)`, the quadrature of `‖(1+|k|²) F f‖_{L²}`.
pub fn h2_norm<T: Real>(field: &SpectralField<T>) -> T {
    h2_norm_sq(field).sqrt()
}

pub(crate) fn h2_norm_sq<T: Real>(field: &SpectralField<T>) -> T {
    let lat = field.lattice();
    let sum: T = field
        .coefficients()
        .iter()
        .zip(lat.sq_norms())
        .map(|(c, &q)| {
            let m = T::one() + q;
            m * m * c.norm_sqr()
        })
        .sum();
    sum * lat.weight()
}

/// Exact Fourier transform of `amp * exp(-a |x|²)` under the `e^{-2πikx}` convention:
/// `amp (π/a)^{n/2} exp(-π²|k|²/a)`.
pub fn sample_gaussian<T: Real>(lattice: Arc<SpectralLattice<T>>, a: T, amp: T) -> Result<SpectralField<T>> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("gaussian width a must be positive, got {a}")));
    }
    let n = lattice.dim();
    let pi = T::PI();
    let prefactor = amp * (pi / a).powf(T::of(n as f64 / 2.0));
    let coeffs =
        lattice.sq_norms().iter().map(|&q| Complex::new(prefactor * (-pi * pi * q / a).exp(), T::zero())).collect();
    SpectralField::from_coefficients(lattice, coeffs)
}

/// One Gaussian bump `amp * exp(-a |x|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian<T> {
    pub amp: T,
    pub a: T,
}

/// Finite sum of centred Gaussians; the initial-data family of the harness.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaussianMixture<T> {
    pub terms: Vec<Gaussian<T>>,
}

impl<T: Real> GaussianMixture<T> {
    pub fn single(amp: T, a: T) -> Self {
        Self { terms: vec![Gaussian { amp, a }] }
    }

    pub fn sample(&self, lattice: &Arc<SpectralLattice<T>>) -> Result<SpectralField<T>> {
        let mut out = SpectralField::zeros(Arc::clone(lattice));
        for g in &self.terms {
            let term = sample_gaussian(Arc::clone(lattice), g.a, g.amp)?;
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

/// Graph map of the critical manifold: `h0(v) = -alpha^-1 beta v`, so that
/// `alpha h0(v) + beta v = 0`.
pub fn h0_map<T: Real>(v: &SpectralField<T>, params: &SystemParams<T>) -> SpectralField<T> {
    v.scaled(params.h0_factor())
}

/// The state `(u, v)` of the system in Fourier space.
#[derive(Debug, Clone)]
pub struct SpectralPair<T> {
    pub u: SpectralField<T>,
    pub v: SpectralField<T>,
}

impl<T: Real> SpectralPair<T> {
    pub fn new(u: SpectralField<T>, v: SpectralField<T>) -> Result<Self> {
        if !u.shares_lattice(&v) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { u, v })
    }

    pub fn zeros(lattice: Arc<SpectralLattice<T>>) -> Self {
        Self { u: SpectralField::zeros(Arc::clone(&lattice)), v: SpectralField::zeros(lattice) }
    }

    pub fn lattice(&self) -> &Arc<SpectralLattice<T>> {
        self.u.lattice()
    }

    /// Product-space norm `sqrt(‖u‖² + ‖v‖²)` on `H² × H²`.
    pub fn h2_norm(&self) -> T {
        (h2_norm_sq(&self.u) + h2_norm_sq(&self.v)).sqrt()
    }

    /// `a * self + b * other`, componentwise.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        Ok(Self { u: self.u.combine(a, &other.u, b)?, v: self.v.combine(a, &other.v, b)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(T::one(), other, -T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    fn lat(k: f64, dk: f64) -> Arc<SpectralLattice<f64>> {
        Arc::new(build_lattice(1, k, dk).unwrap())
    }

    /// Trapezoid quadrature of the real part of `∫ exp(-πx²) e^{-2πikx} dx`.
    fn fourier_quadrature(k: f64) -> f64 {
        let (lo, hi, n) = (-12.0, 12.0, 240_000);
        let h = (hi - lo) / n as f64;
        let f = |x: f64| (-std::f64::consts::PI * x * x).exp() * (2.0 * std::f64::consts::PI * k * x).cos();
        let inner: f64 = (1..n).map(|i| f(lo + i as f64 * h)).sum();
        h * (inner + 0.5 * (f(lo) + f(hi)))
    }

    #[test]
    fn gaussian_matches_quadrature() {
        let l = lat(1.0, 1.0);
        let g = sample_gaussian(l, std::f64::consts::PI, 1.0).unwrap();
        let at0 = g.coefficient(1).re;
        let at1 = g.coefficient(2).re;
        assert!((at0 - fourier_quadrature(0.0)).abs() < 1e-12);
        assert!((at0 - 1.0).abs() < 1e-14);
        assert!((at1 - fourier_quadrature(1.0)).abs() < 1e-12);
        assert!((at1 - 0.043_213_918_263_772_25).abs() < 1e-15);
    }

    #[test]
    fn gaussian_rejects_bad_width() {
        assert!(sample_gaussian(lat(1.0, 0.5), 0.0, 1.0).is_err());
        assert!(sample_gaussian(lat(1.0, 0.5), -1.0, 1.0).is_err());
    }

    #[test]
    fn zero_amplitude_gives_zero_field() {
        let g = sample_gaussian(lat(1.0, 0.5), 2.0, 0.0).unwrap();
        assert_eq!(g.max_abs(), 0.0);
        assert_eq!(h2_norm(&g), 0.0);
    }

    #[test]
    fn single_coefficient_norm() {
        let l = lat(1.0, 0.5);
        let mut f = SpectralField::zeros(Arc::clone(&l));
        f.coefficients_mut()[3] = Complex::new(3.0, -4.0);
        // k = 0.5, w = 0.5: sqrt(0.5) * 1.25 * 5
        assert!((h2_norm(&f) - 0.5f64.sqrt() * 1.25 * 5.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_norm_converges_under_refinement() {
        let pi = std::f64::consts::PI;
        let coarse = sample_gaussian(lat(8.0, 0.01), pi, 1.0).unwrap().h2_norm();
        let fine = sample_gaussian(lat(8.0, 0.001), pi, 1.0).unwrap().h2_norm();
        assert!(((coarse - fine) / fine).abs() <= 1e-6);
    }

    #[test]
    fn h0_lies_on_critical_set() {
        let l = lat(2.0, 0.1);
        let v = sample_gaussian(l, 1.3, 0.7).unwrap();
        for (alpha, beta, factor) in [(-1.0, 1.0, 1.0), (-2.0, 4.0, 2.0)] {
            let p = SystemParams::new(alpha, beta, 1.0, -2.0, 0.0, 1.0, 0.1);
            let u = h0_map(&v, &p);
            for (cu, cv) in u.coefficients().iter().zip(v.coefficients()) {
                assert!((*cu - *cv * factor).norm() < 1e-15);
                assert!((*cu * alpha + *cv * beta).norm() < 1e-15);
            }
        }
        let zero = SpectralField::zeros(lat(1.0, 0.5));
        let p = SystemParams::new(-1.0, 1.0, 1.0, -2.0, 0.0, 1.0, 0.1);
        assert_eq!(h0_map(&zero, &p).max_abs(), 0.0);
    }

    #[test]
    fn mixture_is_sum_of_terms() {
        let l = lat(3.0, 0.1);
        let mix = GaussianMixture { terms: vec![Gaussian { amp: 1.0, a: 1.0 }, Gaussian { amp: -0.5, a: 4.0 }] };
        let f = mix.sample(&l).unwrap();
        let a = sample_gaussian(Arc::clone(&l), 1.0, 1.0).unwrap();
        let b = sample_gaussian(Arc::clone(&l), 4.0, -0.5).unwrap();
        let diff = f.sub(&a.add(&b).unwrap()).unwrap();
        assert!(diff.max_abs() < 1e-15);
        assert!(f.hermitian_defect() < 1e-15);
    }

    #[test]
    fn pair_rejects_mismatched_lattices() {
        let a = SpectralField::zeros(lat(1.0, 0.5));
        let b = SpectralField::zeros(lat(1.0, 0.25));
        assert!(matches!(SpectralPair::new(a, b), Err(Error::LatticeMismatch)));
    }
}
