//! Eigenlines of the per-mode generator: the slow and fast manifolds of the
//! `eps`-system and the critical manifold of the limit system.
//!
//! Every line is `sigma u - 2 beta v = 0` in each mode, with the same `sigma`
//! for all `k` because the eigenvectors of `M(q)` do not depend on `q`.

use crate::analytic::mode_propagator;
use crate::error::{Error, Result};
use crate::field::{SpectralField, SpectralPair};
use crate::params::{Branch, DerivedConstants, SystemParams};
use crate::scalar::Real;

/// Denominator floor of [`residual`], so the zero state has residual 0.
pub const RESIDUAL_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManifoldKind {
    SlowEps,
    FastEps,
    Critical,
}

/// The relation `sigma u - 2 beta v = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldLine<T> {
    pub sigma: T,
    pub beta: T,
    pub kind: ManifoldKind,
}

impl<T: Real> ManifoldLine<T> {
    /// Direction vector `(2 beta, sigma)`.
    pub fn direction(&self) -> [T; 2] {
        [T::of(2.0) * self.beta, self.sigma]
    }

    /// Slope of the line as a graph `v = s u` over the first component.
    pub fn graph_slope(&self) -> T {
        self.sigma / (T::of(2.0) * self.beta)
    }
}

/// Eigenline paired with the slow eigenvalue branch.
pub fn slow_manifold<T: Real>(c: &DerivedConstants<T>) -> ManifoldLine<T> {
    ManifoldLine { sigma: c.sigma_slow, beta: c.params.beta, kind: ManifoldKind::SlowEps }
}

pub fn fast_manifold<T: Real>(c: &DerivedConstants<T>) -> ManifoldLine<T> {
    ManifoldLine { sigma: c.sigma_fast, beta: c.params.beta, kind: ManifoldKind::FastEps }
}

/// `alpha u + beta v = 0`, written as `sigma = -2 alpha`.
pub fn critical_manifold<T: Real>(params: &SystemParams<T>) -> ManifoldLine<T> {
    ManifoldLine { sigma: -T::of(2.0) * params.alpha, beta: params.beta, kind: ManifoldKind::Critical }
}

/// Largest per-mode defect `|sigma û_k - 2 beta v̂_k|`, relative to the state's
/// `H² × H²` norm.
pub fn residual<T: Real>(line: &ManifoldLine<T>, state: &SpectralPair<T>) -> T {
    let two_beta = T::of(2.0) * line.beta;
    let worst = state
        .u
        .coefficients()
        .iter()
        .zip(state.v.coefficients())
        .map(|(u, v)| (*u * line.sigma - *v * two_beta).norm())
        .fold(T::zero(), T::max);
    worst / state.h2_norm().max(T::of(RESIDUAL_FLOOR))
}

/// The state on `line` with second component `v`: `û = 2 beta v̂ / sigma`.
pub fn project_to_manifold<T: Real>(line: &ManifoldLine<T>, v: &SpectralField<T>) -> Result<SpectralPair<T>> {
    if line.sigma == T::zero() {
        return Err(Error::Degenerate("line with sigma = 0 is not a graph over v".into()));
    }
    let u = v.scaled(T::of(2.0) * line.beta / line.sigma);
    SpectralPair::new(u, v.clone())
}

/// `M |sigma_a/(2 beta_a) - sigma_b/(2 beta_b)|`: the largest gap in the second
/// component between the two lines over first components bounded by `M`.
pub fn graph_distance<T: Real>(a: &ManifoldLine<T>, b: &ManifoldLine<T>, bound: T) -> T {
    bound * (a.graph_slope() - b.graph_slope()).abs()
}

/// Rate of the flow restricted to the slow manifold in mode `q = |k|²`:
/// `-4π²q - nu + delta + 2 beta gamma / sigma_slow`.
pub fn reduced_slow_exponent<T: Real>(c: &DerivedConstants<T>, q: T) -> Result<T> {
    if c.sigma_slow == T::zero() {
        return Err(Error::Degenerate("sigma_slow = 0".into()));
    }
    let p = &c.params;
    Ok(-T::four_pi_sq() * q - p.nu + p.delta + T::of(2.0) * p.beta * p.gamma / c.sigma_slow)
}

/// Eigenvector `(2 beta, sigma)` of a branch, i.e. `eps` times the unscaled
/// eigenvector `eps^-1 (2 beta, sigma)`.
pub fn scaled_eigenvector<T: Real>(c: &DerivedConstants<T>, branch: Branch) -> [T; 2] {
    [T::of(2.0) * c.params.beta, c.sigma(branch)]
}

/// Relative defect `‖M d - λ d‖ / (‖M‖ ‖d‖)` of the branch eigenpair in mode `q`.
pub fn eigen_pairing_defect<T: Real>(c: &DerivedConstants<T>, branch: Branch, q: T) -> T {
    let m = crate::analytic::mode_matrix(&c.params, q).0;
    let d = scaled_eigenvector(c, branch);
    let md = m.apply(d);
    let lambda = c.lambda_at(branch, q);
    let r0 = md[0] - lambda * d[0];
    let r1 = md[1] - lambda * d[1];
    let dn = (d[0] * d[0] + d[1] * d[1]).sqrt();
    (r0 * r0 + r1 * r1).sqrt() / (m.abs_sum() * dn)
}

/// Measured decay rate of the fast eigencomponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttractionRate<T> {
    Rate(T),
    /// The initial state has no fast component.
    NotApplicable,
}

impl<T: Real> AttractionRate<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            AttractionRate::Rate(r) => Some(*r),
            AttractionRate::NotApplicable => None,
        }
    }
}

/// Coordinates `(a, b)` of `(u, v)` in the basis `a·(2β, σ_slow) + b·(2β, σ_fast)`.
fn eigen_coordinates<T: Real>(c: &DerivedConstants<T>, u: T, v: T) -> (T, T) {
    let two_beta = T::of(2.0) * c.params.beta;
    let fast = (v - c.sigma_slow * u / two_beta) / (c.sigma_fast - c.sigma_slow);
    let slow = u / two_beta - fast;
    (slow, fast)
}

/// Evolves `state` in mode `q` over `[0, window]` and returns the log-decay rate
/// of its fast eigencomponent.
pub fn attraction_rate_from<T: Real>(
    c: &DerivedConstants<T>,
    q: T,
    state: [T; 2],
    window: T,
) -> Result<AttractionRate<T>> {
    let fast_rate = c.lambda_fast_at(q).abs();
    if !(window * fast_rate >= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "window {window} too short to resolve the fast rate {fast_rate}: window*|lambda_fast| >= 1 is required"
        )));
    }
    let (_, b0) = eigen_coordinates(c, state[0], state[1]);
    let scale = state[0].abs() + state[1].abs();
    if b0.abs() <= T::of(64.0) * T::epsilon() * scale {
        return Ok(AttractionRate::NotApplicable);
    }
    let p = mode_propagator(c, q, window)?;
    let evolved = p.matrix().apply(state);
    let (_, b1) = eigen_coordinates(c, evolved[0], evolved[1]);
    Ok(AttractionRate::Rate((b1 / b0).abs().ln() / window))
}

/// [`attraction_rate_from`] for the generic off-manifold state `(1, 0)`.
pub fn attraction_rate<T: Real>(c: &DerivedConstants<T>, q: T, window: T) -> Result<AttractionRate<T>> {
    attraction_rate_from(c, q, [T::one(), T::zero()], window)
}

/// Summary of one slow manifold: invariance, attraction and distance to the
/// critical manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldDiagnostics<T> {
    /// Largest slow-line residual of the evolved on-manifold state.
    pub max_residual: T,
    /// Decay rate magnitude of the fast component at `k = 0`.
    pub attraction_rate_measured: T,
    /// Graph distance to the critical line for first components bounded by 1.
    pub graph_distance: T,
}

/// Projects `v0` onto the slow line, evolves it with the full propagator over
/// `times`, and collects the diagnostics.
pub fn manifold_diagnostics<T: Real>(
    c: &DerivedConstants<T>,
    v0: &SpectralField<T>,
    times: &[T],
) -> Result<ManifoldDiagnostics<T>> {
    let slow = slow_manifold(c);
    let state0 = project_to_manifold(&slow, v0)?;
    let mut max_residual = T::zero();
    for &t in times {
        let s = crate::analytic::solve_full(c, &state0, t)?;
        max_residual = max_residual.max(residual(&slow, &s));
    }
    let window = T::of(2.0) / c.lambda_fast_at(T::zero()).abs();
    let rate = attraction_rate(c, T::zero(), window)?.value().unwrap_or(T::zero());
    Ok(ManifoldDiagnostics {
        max_residual,
        attraction_rate_measured: rate.abs(),
        graph_distance: graph_distance(&slow, &critical_manifold(&c.params), T::one()),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::analytic::{solve_full, solve_limit};
    use crate::field::sample_gaussian;
    use crate::lattice::build_lattice;
    use crate::params::derive_constants;

    fn p1(eps: f64) -> DerivedConstants<f64> {
        derive_constants(SystemParams::new(-1.0, 1.0, 1.0, -2.0, 0.0, 1.0, eps)).unwrap()
    }

    fn gaussian_v() -> SpectralField<f64> {
        let lat = Arc::new(build_lattice(1, 4.0, 0.05).unwrap());
        sample_gaussian(lat, 1.0, 1.0).unwrap()
    }

    #[test]
    fn slow_line_reference_values() {
        let slow = slow_manifold(&p1(0.1));
        assert!((slow.sigma - 1.643_398_1).abs() < 1e-7);
        assert_eq!(slow.kind, ManifoldKind::SlowEps);
        let near = slow_manifold(&p1(1e-3)).sigma;
        assert!((near - 2.0).abs() <= 0.01);
        assert_eq!(critical_manifold(&p1(0.1).params).sigma, 2.0);
    }

    #[test]
    fn slow_direction_is_an_eigenvector() {
        let c = p1(0.1);
        for q in [0.0, 1.0] {
            assert!(eigen_pairing_defect(&c, c.slow_branch, q) <= 1e-10);
            assert!(eigen_pairing_defect(&c, c.fast_branch(), q) <= 1e-10);
        }
    }

    #[test]
    fn residual_cases() {
        let c = p1(0.1);
        let slow = slow_manifold(&c);
        let v = gaussian_v();
        let on = project_to_manifold(&slow, &v).unwrap();
        assert!(residual(&slow, &on) < 1e-15);
        let zero = SpectralPair::zeros(Arc::clone(v.lattice()));
        assert_eq!(residual(&slow, &zero), 0.0);
        let off = SpectralPair::new(v.clone(), SpectralField::zeros(Arc::clone(v.lattice()))).unwrap();
        let expect = slow.sigma * v.max_abs() / off.h2_norm();
        assert!((residual(&slow, &off) - expect).abs() <= 1e-14 * expect);
    }

    #[test]
    fn projection_cases() {
        let v = gaussian_v();
        let crit = critical_manifold(&p1(0.1).params);
        let on = project_to_manifold(&crit, &v).unwrap();
        assert_eq!(on.u.coefficients(), v.coefficients());
        let zero = SpectralField::zeros(Arc::clone(v.lattice()));
        assert_eq!(project_to_manifold(&crit, &zero).unwrap().h2_norm(), 0.0);
        let slow = slow_manifold(&p1(0.1));
        let s = project_to_manifold(&slow, &v).unwrap();
        let ratio = s.u.coefficient(80).re / v.coefficient(80).re;
        assert!((ratio - 1.216_990_6).abs() < 1e-6);
        let flat = ManifoldLine { sigma: 0.0, beta: 1.0, kind: ManifoldKind::SlowEps };
        assert!(project_to_manifold(&flat, &v).is_err());
    }

    #[test]
    fn graph_distance_values() {
        let c = p1(0.1);
        let slow = slow_manifold(&c);
        assert_eq!(graph_distance(&slow, &slow, 1.0), 0.0);
        let d = graph_distance(&slow, &critical_manifold(&c.params), 1.0);
        assert!((d - 0.178_301_0).abs() < 1e-6);
        let ratios: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&e| {
                let c = p1(e);
                graph_distance(&slow_manifold(&c), &critical_manifold(&c.params), 1.0) / e
            })
            .collect();
        assert!((ratios[2] - 2.0).abs() < (ratios[1] - 2.0).abs());
        assert!((ratios[2] - 2.0).abs() < 0.01);
    }

    #[test]
    fn reduced_exponent_matches_slow_eigenvalue() {
        let c = p1(0.1);
        let r0 = reduced_slow_exponent(&c, 0.0).unwrap();
        assert!((r0 + 1.783_009_4).abs() < 1e-6);
        for q in [0.0, 0.3, 5.0, 64.0] {
            let r = reduced_slow_exponent(&c, q).unwrap();
            let l = c.lambda_slow_at(q);
            assert!((r - l).abs() <= 1e-10 * l.abs());
        }
        let gaps: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&e| {
                let c = p1(e);
                (reduced_slow_exponent(&c, 1.0).unwrap() - (c.kappa - 4.0 * std::f64::consts::PI.powi(2))).abs()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    }

    #[test]
    fn attraction_rate_is_fast_eigenvalue() {
        let c = p1(0.1);
        let r = attraction_rate(&c, 0.0, 0.5).unwrap().value().unwrap();
        assert!((r + 11.216_990_5).abs() < 1e-6);
        let r1 = attraction_rate(&c, 0.25, 0.5).unwrap();
        assert_eq!(r1, attraction_rate(&c, 0.25, 0.5).unwrap());
        assert!(attraction_rate(&c, 0.0, 0.01).is_err());
        let on = scaled_eigenvector(&c, c.slow_branch);
        assert_eq!(attraction_rate_from(&c, 0.0, on, 0.5).unwrap(), AttractionRate::NotApplicable);
    }

    #[test]
    fn invariance_under_evolution() {
        let c = p1(0.1);
        let v = gaussian_v();
        let times: Vec<f64> = (0..20).map(|i| 2.0 * i as f64 / 19.0).collect();
        let d = manifold_diagnostics(&c, &v, &times).unwrap();
        assert!(d.max_residual <= 1e-10);
        assert!((d.attraction_rate_measured - 11.216_990_5).abs() < 1e-6);
        assert!((d.graph_distance - 0.178_301_0).abs() < 1e-6);
    }

    #[test]
    fn limit_solution_lies_on_critical_line() {
        let c = p1(0.1);
        let crit = critical_manifold(&c.params);
        let s = solve_limit(&c, &gaussian_v(), 0.8).unwrap();
        assert!(residual(&crit, &s) < 1e-15);
        let off = solve_full(&c, &project_to_manifold(&crit, &gaussian_v()).unwrap(), 0.8).unwrap();
        assert!(residual(&crit, &off) > 1e-6);
    }
}
