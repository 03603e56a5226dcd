#![allow(dead_code)]

use std::sync::Arc;

use fastreact::{build_lattice, derive_constants, sample_gaussian, Constants, Field, Lattice, Params};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn p1(eps: f64) -> Params {
    Params::new(-1.0, 1.0, 1.0, -2.0, 0.0, 1.0, eps)
}

pub fn default_lattice() -> Arc<Lattice> {
    Arc::new(build_lattice(1, 8.0, 0.01).unwrap())
}

/// `(u0, v0)` Gaussians with `u0 != h0(v0)`.
pub fn gaussian_data(lattice: &Arc<Lattice>) -> (Field, Field) {
    (sample_gaussian(Arc::clone(lattice), 0.2, 0.5).unwrap(), sample_gaussian(Arc::clone(lattice), 0.1, 1.0).unwrap())
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Draws parameter sets until one validates; `eps` is log-uniform in `[eps_lo, eps_hi]`.
pub fn random_params(rng: &mut ChaCha8Rng, eps_lo: f64, eps_hi: f64) -> (Params, Constants) {
    loop {
        let p = Params::new(
            rng.gen_range(-3.0..-0.5),
            signed(rng, 0.5, 2.0),
            signed(rng, 0.5, 2.0),
            signed(rng, 0.5, 3.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            (rng.gen_range(eps_lo.ln()..eps_hi.ln())).exp(),
        );
        if let Ok(c) = derive_constants(p) {
            return (p, c);
        }
    }
}

/// Fourier symbol of the Laplacian, computed here rather than borrowed.
pub fn lap(q: f64) -> f64 {
    4.0 * std::f64::consts::PI * std::f64::consts::PI * q
}

/// Generator entries assembled directly from the parameters.
pub fn generator(p: &Params, q: f64) -> [[f64; 2]; 2] {
    [[p.alpha / p.eps - p.mu - lap(q), p.beta / p.eps], [p.gamma, p.delta - p.nu - lap(q)]]
}

/// Eigenvalues by the quadratic formula, larger first.
pub fn quadratic_eigenvalues(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    (0.5 * (tr + disc), 0.5 * (tr - disc))
}
