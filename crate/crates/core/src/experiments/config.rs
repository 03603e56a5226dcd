use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{h0_map, GaussianMixture, SpectralField};
use crate::lattice::{build_lattice, SpectralLattice};
use crate::params::{derive_constants, DerivedConstants, SystemParams};
use crate::scalar::Real;

/// Minimum ladder length; rate fits need four points.
pub const MIN_LADDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec<T> {
    pub dim: usize,
    pub cutoff: T,
    pub spacing: T,
}

impl<T: Real> LatticeSpec<T> {
    pub fn build(&self) -> Result<Arc<SpectralLattice<T>>> {
        Ok(Arc::new(build_lattice(self.dim, self.cutoff, self.spacing)?))
    }
}

/// `samples` log-spaced times `T 10^{-3 + 3i/samples}`, `i = 1..=samples`.
///
/// The grid for `2N` samples contains the grid for `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub t_max: T,
    pub samples: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn times(&self) -> Vec<T> {
        let n = self.samples as f64;
        (1..=self.samples).map(|i| self.t_max * T::of(10f64.powf(-3.0 + 3.0 * i as f64 / n))).collect()
    }
}

/// One convergence experiment: a parameter family, an `eps` ladder, a
/// lattice, Gaussian initial data and a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    /// Parameters with the `eps` slot ignored.
    pub base: SystemParams<T>,
    /// Strictly decreasing.
    pub eps_ladder: Vec<T>,
    pub lattice: LatticeSpec<T>,
    pub u0: GaussianMixture<T>,
    pub v0: GaussianMixture<T>,
    /// Replace `u0` by `h0(v0)`.
    pub on_critical: bool,
    pub time: TimeGrid<T>,
    pub seed: u64,
}

impl<T: Real> ExperimentConfig<T> {
    /// Family with `nu > 0`, `kappa = -2`.
    pub fn reference() -> Self {
        Self::with_base(SystemParams::new(
            T::of(-1.0),
            T::one(),
            T::one(),
            T::of(-2.0),
            T::zero(),
            T::one(),
            T::of(0.1),
        ))
    }

    /// Family with `nu < 0`, `kappa = -0.5`.
    pub fn negative_nu() -> Self {
        Self::with_base(SystemParams::new(
            T::of(-1.0),
            T::one(),
            T::one(),
            T::of(-2.0),
            T::zero(),
            T::of(-0.5),
            T::of(0.1),
        ))
    }

    /// Default ladder, lattice, data and time grid around `base`.
    pub fn with_base(base: SystemParams<T>) -> Self {
        Self {
            base,
            eps_ladder: [1e-1, 3e-2, 1e-2, 3e-3, 1e-3].iter().map(|&e| T::of(e)).collect(),
            lattice: LatticeSpec { dim: 1, cutoff: T::of(8.0), spacing: T::of(0.01) },
            u0: GaussianMixture::single(T::of(0.5), T::of(0.2)),
            v0: GaussianMixture::single(T::one(), T::of(0.1)),
            on_critical: true,
            time: TimeGrid { t_max: T::of(2.0), samples: 64 },
            seed: 0,
        }
    }

    pub fn params_at(&self, eps: T) -> SystemParams<T> {
        self.base.with_eps(eps)
    }

    pub fn constants_at(&self, eps: T) -> Result<DerivedConstants<T>> {
        derive_constants(self.params_at(eps))
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_ladder.len() < MIN_LADDER {
            return Err(Error::Config(format!(
                "eps ladder needs at least {MIN_LADDER} values, got {}",
                self.eps_ladder.len()
            )));
        }
        if self.eps_ladder.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("eps ladder must be strictly decreasing".into()));
        }
        for &eps in &self.eps_ladder {
            self.constants_at(eps)?;
        }
        if !(self.time.t_max > T::zero()) || !self.time.t_max.is_finite() {
            return Err(Error::Config(format!("time horizon must be positive, got {}", self.time.t_max)));
        }
        if self.time.samples == 0 {
            return Err(Error::Config("time grid needs at least one sample".into()));
        }
        if self.v0.terms.is_empty() {
            return Err(Error::Config("v0 needs at least one Gaussian term".into()));
        }
        Ok(())
    }

    /// Initial data `(u0, v0)` on `lattice`; `u0 = h0(v0)` when `on_critical`.
    pub fn initial_data(&self, lattice: &Arc<SpectralLattice<T>>) -> Result<(SpectralField<T>, SpectralField<T>)> {
        let v0 = self.v0.sample(lattice)?;
        let u0 = if self.on_critical { h0_map(&v0, &self.base) } else { self.u0.sample(lattice)? };
        Ok((u0, v0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_config_is_valid() {
        let cfg = ExperimentConfig::<f64>::reference();
        cfg.validate().unwrap();
        assert_eq!(cfg.constants_at(0.1).unwrap().kappa, -2.0);
        assert_eq!(ExperimentConfig::<f64>::negative_nu().constants_at(0.1).unwrap().kappa, -0.5);
    }

    #[test]
    fn rejects_bad_ladders() {
        let mut cfg = ExperimentConfig::<f64>::reference();
        cfg.eps_ladder = vec![0.1, 0.01, 0.001];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.eps_ladder = vec![0.1, 0.01, 0.01, 0.001];
        assert!(cfg.validate().is_err());
        cfg.eps_ladder = vec![0.1, 0.05, 0.01, 0.001];
        cfg.base.alpha = 1.0;
        assert!(matches!(cfg.validate(), Err(Error::Sign { .. })));
    }

    #[test]
    fn time_grid_is_nested_under_doubling() {
        let coarse = TimeGrid { t_max: 2.0, samples: 64 }.times();
        let fine = TimeGrid { t_max: 2.0, samples: 128 }.times();
        assert_eq!(coarse.len(), 64);
        assert_eq!(*coarse.last().unwrap(), 2.0);
        assert!(coarse[0] > 0.0);
        for (i, t) in coarse.iter().enumerate() {
            assert_eq!(*t, fine[2 * i + 1]);
        }
    }
}
