//! System parameters, their validation, and the constants derived from them.
//!
//! The per-mode generator of the fast-reaction system is
//!
//! ```text
//! M(q) = [ eps^-1 alpha - mu - 4π²q    eps^-1 beta         ]
//!        [ gamma                       delta - nu - 4π²q   ]
//! ```
//!
//! with `q = |k|²`. Its eigenvalue gap `Omega` does not depend on `q`, so both
//! eigenvalue branches are `λ(0) - 4π²q` and both eigenvectors are
//! `q`-independent. Everything here is computed once per parameter set.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reaction/diffusion coefficients and the timescale separation `eps`.
///
/// Construct freely; call [`validate_params`] (or
/// [`SystemParams::validate`]) before handing the set to a solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    pub mu: T,
    pub nu: T,
    pub eps: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta: T, mu: T, nu: T, eps: T) -> Self {
        Self { alpha, beta, gamma, delta, mu, nu, eps }
    }

    pub fn with_eps(self, eps: T) -> Self {
        Self { eps, ..self }
    }

    pub fn validate(self) -> Result<Self> {
        validate_params(self)
    }

    /// Growth rate of the limit system at `k = 0`: `-nu - alpha^-1 beta gamma + delta`.
    pub fn kappa(&self) -> T {
        -self.nu - self.beta * self.gamma / self.alpha + self.delta
    }

    /// Decay rate of the fast variable at `k = 0`: `eps^-1 alpha - mu`.
    pub fn fast_rate(&self) -> T {
        self.alpha / self.eps - self.mu
    }

    /// `(delta - nu - eps^-1 alpha + mu)^2 + 4 eps^-1 beta gamma`.
    pub fn discriminant(&self) -> T {
        let shift = self.delta - self.nu - self.alpha / self.eps + self.mu;
        shift * shift + T::of(4.0) * self.beta * self.gamma / self.eps
    }

    /// Slope of the critical manifold graph `u = h0(v)`, i.e. `-alpha^-1 beta`.
    pub fn h0_factor(&self) -> T {
        -self.beta / self.alpha
    }
}

/// Checks every parameter invariant; the error names the first violated one.
pub fn validate_params<T: Real>(raw: SystemParams<T>) -> Result<SystemParams<T>> {
    let p = raw;
    let sign = |condition: &'static str, ok: bool, value: T| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Sign { condition, value: value.as_f64() })
        }
    };
    sign("alpha < 0", p.alpha < T::zero(), p.alpha)?;
    sign("beta != 0", p.beta != T::zero() && p.beta.is_finite(), p.beta)?;
    sign("gamma != 0", p.gamma != T::zero() && p.gamma.is_finite(), p.gamma)?;
    sign("eps > 0", p.eps > T::zero() && p.eps.is_finite(), p.eps)?;
    sign("alpha finite", p.alpha.is_finite(), p.alpha)?;
    sign("mu finite", p.mu.is_finite(), p.mu)?;
    sign("nu finite", p.nu.is_finite(), p.nu)?;

    let fast = p.fast_rate();
    if !(fast < T::zero()) {
        return Err(Error::Hyperbolicity { value: fast.as_f64() });
    }
    let disc = p.discriminant();
    if !(disc > T::zero()) || !disc.is_finite() {
        return Err(Error::ComplexOmega { discriminant: disc.as_f64() });
    }
    // Checked last so that a parameter set failing the Omega condition reports it.
    sign("delta != 0", p.delta != T::zero() && p.delta.is_finite(), p.delta)?;
    Ok(p)
}

/// Sign of `Omega` in `λ = (trace ± Omega) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn other(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Constants shared by every mode of a validated parameter set.
///
/// The slow branch is the eigenvalue branch whose value at `q = 0` lies
/// closer to the limit-system rate `kappa`, i.e. the branch that stays bounded
/// as `eps -> 0`. It is computed, never assumed from a `±` label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants<T> {
    pub params: SystemParams<T>,
    pub kappa: T,
    /// Eigenvalue gap `Omega > 0`, independent of `k`.
    pub omega: T,
    /// Line coefficient of the slow eigenline `sigma u - 2 beta v = 0`.
    pub sigma_slow: T,
    pub sigma_fast: T,
    pub slow_branch: Branch,
    lambda_plus0: T,
    lambda_minus0: T,
    sigma_plus: T,
    sigma_minus: T,
    gap: T,
    half_plus: T,
    half_minus: T,
}

/// Validates `params` and computes all derived constants.
pub fn derive_constants<T: Real>(params: SystemParams<T>) -> Result<DerivedConstants<T>> {
    let p = validate_params(params)?;
    let half = T::of(0.5);
    let omega = p.discriminant().sqrt();

    let m00 = p.alpha / p.eps - p.mu;
    let m11 = p.delta - p.nu;
    let coupling = p.beta * p.gamma / p.eps;
    let trace0 = m00 + m11;
    let det0 = m00 * m11 - coupling;

    // One root directly, the other from the product to avoid cancellation.
    let (lambda_plus0, lambda_minus0) = if trace0 >= T::zero() {
        let lp = half * (trace0 + omega);
        (lp, det0 / lp)
    } else {
        let lm = half * (trace0 - omega);
        (det0 / lm, lm)
    };

    // sigma_± = Y ± eps*Omega with Y = eps(delta - nu + mu) - alpha and
    // sigma_+ sigma_- = -4 eps beta gamma.
    let y = p.eps * (p.delta - p.nu + p.mu) - p.alpha;
    let eps_omega = p.eps * omega;
    let sigma_product = -T::of(4.0) * p.eps * p.beta * p.gamma;
    let (sigma_plus, sigma_minus) = if y >= T::zero() {
        let sp = y + eps_omega;
        (sp, sigma_product / sp)
    } else {
        let sm = y - eps_omega;
        (sigma_product / sm, sm)
    };

    // (Omega ± X)/2 with X = M00 - M11; their product is eps^-1 beta gamma.
    let gap = m00 - m11;
    let (half_plus, half_minus) = if gap >= T::zero() {
        let hp = half * (omega + gap);
        (hp, coupling / hp)
    } else {
        let hm = half * (omega - gap);
        (coupling / hm, hm)
    };

    let kappa = p.kappa();
    let slow_branch =
        if (lambda_plus0 - kappa).abs() <= (lambda_minus0 - kappa).abs() { Branch::Plus } else { Branch::Minus };
    let (sigma_slow, sigma_fast) = match slow_branch {
        Branch::Plus => (sigma_plus, sigma_minus),
        Branch::Minus => (sigma_minus, sigma_plus),
    };

    Ok(DerivedConstants {
        params: p,
        kappa,
        omega,
        sigma_slow,
        sigma_fast,
        slow_branch,
        lambda_plus0,
        lambda_minus0,
        sigma_plus,
        sigma_minus,
        gap,
        half_plus,
        half_minus,
    })
}

impl<T: Real> DerivedConstants<T> {
    pub fn new(params: SystemParams<T>) -> Result<Self> {
        derive_constants(params)
    }

    pub fn fast_branch(&self) -> Branch {
        self.slow_branch.other()
    }

    /// Eigenvalue of `M(q)` on the given branch.
    pub fn lambda_at(&self, branch: Branch, q: T) -> T {
        let base = match branch {
            Branch::Plus => self.lambda_plus0,
            Branch::Minus => self.lambda_minus0,
        };
        base - T::four_pi_sq() * q
    }

    pub fn lambda_slow_at(&self, q: T) -> T {
        self.lambda_at(self.slow_branch, q)
    }

    pub fn lambda_fast_at(&self, q: T) -> T {
        self.lambda_at(self.fast_branch(), q)
    }

    /// Eigenline coefficient on the given branch: the eigenvector is `(2 beta, sigma)`
    /// (the eigenvector `(2 eps^-1 beta, ...)` scaled by `eps`).
    pub fn sigma(&self, branch: Branch) -> T {
        match branch {
            Branch::Plus => self.sigma_plus,
            Branch::Minus => self.sigma_minus,
        }
    }

    /// `trace M(q)`.
    pub fn trace_at(&self, q: T) -> T {
        let p = &self.params;
        p.alpha / p.eps - p.mu + p.delta - p.nu - T::of(2.0) * T::four_pi_sq() * q
    }

    /// `det M(q)`.
    pub fn det_at(&self, q: T) -> T {
        let p = &self.params;
        let lap = T::four_pi_sq() * q;
        (p.alpha / p.eps - p.mu - lap) * (p.delta - p.nu - lap) - p.beta * p.gamma / p.eps
    }

    /// `M00 - M11 = eps^-1 alpha - mu - delta + nu`.
    pub fn gap(&self) -> T {
        self.gap
    }

    /// `((Omega + X)/2, (Omega - X)/2)` with `X = M00 - M11`.
    pub(crate) fn half_gaps(&self) -> (T, T) {
        (self.half_plus, self.half_minus)
    }
}
