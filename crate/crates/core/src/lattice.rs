//! Truncated symmetric wavenumber grid standing in for the Fourier domain `R^n`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default cap on the number of lattice modes.
pub const DEFAULT_MODE_BUDGET: usize = 4_000_000;

/// Grid `{m dk : m integer, |m dk| <= K}^n` with rectangle-rule weights `dk^n`.
///
/// Modes are stored in lexicographic order of their integer multi-index, so the
/// mode `-k` of mode `i` sits at index `len - 1 - i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLattice<T> {
    dim: usize,
    cutoff: T,
    spacing: T,
    per_axis: usize,
    weight: T,
    /// Flattened wavevectors, `dim` entries per mode.
    wavevectors: Vec<T>,
    /// `|k|^2` per mode.
    sq_norms: Vec<T>,
}

/// Builds the lattice with the default mode budget.
pub fn build_lattice<T: Real>(dim: usize, cutoff: T, spacing: T) -> Result<SpectralLattice<T>> {
    build_lattice_with_budget(dim, cutoff, spacing, DEFAULT_MODE_BUDGET)
}

pub fn build_lattice_with_budget<T: Real>(
    dim: usize,
    cutoff: T,
    spacing: T,
    budget: usize,
) -> Result<SpectralLattice<T>> {
    if dim == 0 {
        return Err(Error::Lattice("dimension must be at least 1".into()));
    }
    if !(cutoff > T::zero()) || !cutoff.is_finite() {
        return Err(Error::Lattice(format!("cutoff must be positive, got {cutoff}")));
    }
    if !(spacing > T::zero()) || !spacing.is_finite() {
        return Err(Error::Lattice(format!("spacing must be positive, got {spacing}")));
    }
    if spacing > cutoff {
        return Err(Error::Lattice(format!("spacing {spacing} exceeds cutoff {cutoff}")));
    }

    // Tolerate K/dk landing a hair below an integer.
    let ratio = (cutoff / spacing).as_f64();
    let half_width = (ratio * (1.0 + 1e-10)).floor() as u64;
    let per_axis = 2 * half_width + 1;
    let modes = (per_axis as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if modes > budget as u128 {
        return Err(Error::LatticeTooLarge { modes, budget });
    }
    let per_axis = per_axis as usize;
    let modes = modes as usize;

    let axis: Vec<T> = (0..per_axis).map(|i| T::of(i as f64 - half_width as f64) * spacing).collect();

    let mut wavevectors = Vec::with_capacity(modes * dim);
    let mut sq_norms = Vec::with_capacity(modes);
    let mut index = vec![0usize; dim];
    for _ in 0..modes {
        let mut sq = T::zero();
        for &i in &index {
            let k = axis[i];
            wavevectors.push(k);
            sq = sq + k * k;
        }
        sq_norms.push(sq);
        // Odometer increment, last axis fastest.
        for slot in index.iter_mut().rev() {
            *slot += 1;
            if *slot < per_axis {
                break;
            }
            *slot = 0;
        }
    }

    Ok(SpectralLattice { dim, cutoff, spacing, per_axis, weight: spacing.powi(dim as i32), wavevectors, sq_norms })
}

impl<T: Real> SpectralLattice<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> T {
        self.cutoff
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn points_per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn len(&self) -> usize {
        self.sq_norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sq_norms.is_empty()
    }

    /// Quadrature weight shared by every mode.
    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn wavevector(&self, mode: usize) -> &[T] {
        &self.wavevectors[mode * self.dim..(mode + 1) * self.dim]
    }

    pub fn sq_norm(&self, mode: usize) -> T {
        self.sq_norms[mode]
    }

    pub fn sq_norms(&self) -> &[T] {
        &self.sq_norms
    }

    /// Largest `|k|^2` on the lattice.
    pub fn max_sq_norm(&self) -> T {
        T::of(self.dim as f64) * self.cutoff_on_grid() * self.cutoff_on_grid()
    }

    /// Index of the mode `-k`.
    pub fn reflected(&self, mode: usize) -> usize {
        self.len() - 1 - mode
    }

    fn cutoff_on_grid(&self) -> T {
        T::of(((self.per_axis - 1) / 2) as f64) * self.spacing
    }
}
