use std::sync::Arc;

use fastreact::manifold::eigen_pairing_defect;
use fastreact::{
    derive_constants, mode_matrix, rk4_full_samples, solve_full, Constants, Lattice, OracleConfig, Pair, Params,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORACLE_TIMES: [f64; 3] = [0.1, 0.5, 1.0];
pub const ORACLE_TOLERANCE: f64 = 1e-6;
pub const EIGEN_TOLERANCE: f64 = 1e-10;

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Draws until a set validates; `eps` is log-uniform in `[eps_lo, eps_hi]`.
pub fn random_params(rng: &mut ChaCha8Rng, eps_lo: f64, eps_hi: f64) -> (Params, Constants) {
    loop {
        let p = Params::new(
            rng.gen_range(-3.0..-0.5),
            signed(rng, 0.5, 2.0),
            signed(rng, 0.5, 2.0),
            signed(rng, 0.5, 3.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(eps_lo.ln()..eps_hi.ln()).exp(),
        );
        if let Ok(c) = derive_constants(p) {
            return (p, c);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub sets: usize,
    pub max_rel_gap: f64,
    /// Parameter sets the integrator refused, with the reason.
    pub errors: Vec<String>,
}

impl OracleSummary {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.max_rel_gap <= ORACLE_TOLERANCE
    }
}

/// Closed-form solution against RK4 with `dt = eps/100` at [`ORACLE_TIMES`],
/// for `first` followed by `random_sets` seeded random parameter sets.
pub fn oracle_equivalence(first: Params, state0: &Pair, random_sets: usize, seed: u64) -> OracleSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = vec![first];
    sets.extend((0..random_sets).map(|_| random_params(&mut rng, 0.01, 0.1).0));
    let mut max_rel_gap: f64 = 0.0;
    let mut errors = Vec::new();
    for p in &sets {
        let run = || -> fastreact::Result<f64> {
            let c = derive_constants(*p)?;
            let numeric = rk4_full_samples(p, state0, &ORACLE_TIMES, &OracleConfig::new(p.eps / 100.0)?)?;
            let mut worst: f64 = 0.0;
            for (t, n) in ORACLE_TIMES.iter().zip(&numeric) {
                let exact = solve_full(&c, state0, *t)?;
                let norm = exact.h2_norm();
                let gap = exact.sub(n)?.h2_norm();
                worst = worst.max(if norm > 0.0 { gap / norm } else { gap });
            }
            Ok(worst)
        };
        match run() {
            Ok(w) => max_rel_gap = max_rel_gap.max(w),
            Err(e) => errors.push(format!("{p:?}: {e}")),
        }
    }
    OracleSummary { sets: sets.len(), max_rel_gap, errors }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSummary {
    pub modes: usize,
    pub char_poly: f64,
    pub pairing: f64,
}

impl EigenSummary {
    pub fn pass(&self) -> bool {
        self.char_poly <= EIGEN_TOLERANCE && self.pairing <= EIGEN_TOLERANCE
    }
}

/// Characteristic-polynomial substitution and eigenpair defects for `modes`
/// random (parameter set, lattice mode) draws.
pub fn eigen_structure(lattice: &Arc<Lattice>, modes: usize, seed: u64) -> EigenSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut char_poly: f64 = 0.0;
    let mut pairing: f64 = 0.0;
    for _ in 0..modes {
        let (p, c) = random_params(&mut rng, 1e-3, 0.5);
        let q = lattice.sq_norm(rng.gen_range(0..lattice.len()));
        let m = mode_matrix(&p, q).0;
        let (tr, det) = (m.trace(), m.det());
        for branch in [c.slow_branch, c.fast_branch()] {
            let l = c.lambda_at(branch, q);
            let scale = l * l + (tr * l).abs() + det.abs();
            char_poly = char_poly.max((l * l - tr * l + det).abs() / scale);
            pairing = pairing.max(eigen_pairing_defect(&c, branch, q));
        }
    }
    EigenSummary { modes, char_poly, pairing }
}
