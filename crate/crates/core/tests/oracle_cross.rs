mod common;

use std::sync::Arc;

use fastreact::{
    build_lattice, derive_constants, rk4_aux, rk4_full, rk4_full_samples, rk4_limit, sample_gaussian, solve_aux,
    solve_full, solve_limit, AuxKind, Error, OracleConfig, Pair,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{default_lattice, gaussian_data, p1, random_params};

fn oracle(dt: f64) -> OracleConfig<f64> {
    OracleConfig::new(dt).unwrap()
}

#[test]
fn full_solution_matches_rk4_on_gaussian_data() {
    let lattice = default_lattice();
    let (u0, v0) = gaussian_data(&lattice);
    let state0 = Pair::new(u0, v0).unwrap();
    let c = derive_constants(p1(0.1)).unwrap();
    let exact = solve_full(&c, &state0, 0.5).unwrap();
    let rk = rk4_full(&c.params, &state0, 0.5, &oracle(1e-4)).unwrap();
    assert!(exact.u.sub(&rk.u).unwrap().h2_norm() <= 1e-6);
    assert!(exact.v.sub(&rk.v).unwrap().h2_norm() <= 1e-6);
}

#[test]
fn tilde_solution_matches_rk4() {
    let lattice = default_lattice();
    let (u0, v0) = gaussian_data(&lattice);
    let c = derive_constants(p1(0.1)).unwrap();
    let exact = solve_aux(&c, AuxKind::Tilde, &u0, &v0, 0.3).unwrap();
    let rk = rk4_aux(&c.params, AuxKind::Tilde, &u0, &v0, 0.3, &oracle(1e-4)).unwrap();
    assert!(exact.sub(&rk).unwrap().h2_norm() <= 1e-6);
}

#[test]
fn corrected_solution_matches_rk4() {
    let lattice = default_lattice();
    let (u0, v0) = gaussian_data(&lattice);
    for eps in [0.1, 0.01] {
        let c = derive_constants(p1(eps)).unwrap();
        let exact = solve_aux(&c, AuxKind::Eps0, &u0, &v0, 0.3).unwrap();
        let rk = rk4_aux(&c.params, AuxKind::Eps0, &u0, &v0, 0.3, &oracle(1e-5)).unwrap();
        assert!(exact.sub(&rk).unwrap().h2_norm() <= 1e-6, "eps {eps}");
    }
}

#[test]
fn limit_solution_matches_rk4() {
    let lattice = default_lattice();
    let (_, v0) = gaussian_data(&lattice);
    let c = derive_constants(p1(0.1)).unwrap();
    let exact = solve_limit(&c, &v0, 1.0).unwrap().v;
    let rk = rk4_limit(&c.params, &v0, 1.0, &oracle(1e-3)).unwrap();
    assert!(exact.sub(&rk).unwrap().h2_norm() <= 1e-8 * v0.h2_norm());
}

fn observed_order(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn oracles_are_fourth_order() {
    let lattice = Arc::new(build_lattice(1, 1.0, 0.1).unwrap());
    let v0 = sample_gaussian(Arc::clone(&lattice), 1.0, 1.0).unwrap();
    let u0 = sample_gaussian(Arc::clone(&lattice), 2.0, 0.5).unwrap();
    let c = derive_constants(p1(0.1)).unwrap();
    let steps = [0.04, 0.02, 0.01];

    let exact = solve_limit(&c, &v0, 1.0).unwrap().v;
    let limit: Vec<f64> = steps
        .iter()
        .map(|&dt| exact.sub(&rk4_limit(&c.params, &v0, 1.0, &oracle(dt)).unwrap()).unwrap().h2_norm())
        .collect();

    let exact = solve_aux(&c, AuxKind::Tilde, &u0, &v0, 0.4).unwrap();
    let aux: Vec<f64> = steps
        .iter()
        .map(|&dt| {
            let rk = rk4_aux(&c.params, AuxKind::Tilde, &u0, &v0, 0.4, &oracle(dt / 10.0)).unwrap();
            exact.sub(&rk).unwrap().h2_norm()
        })
        .collect();

    for order in observed_order(&limit).into_iter().chain(observed_order(&aux)) {
        assert!((3.7..4.3).contains(&order), "order {order}, limit {limit:?}, aux {aux:?}");
    }
}

#[test]
fn random_parameters_agree_with_rk4() {
    let lattice = Arc::new(build_lattice(1, 2.0, 0.1).unwrap());
    let (u0, v0) = gaussian_data(&lattice);
    let state0 = Pair::new(u0, v0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let (p, c) = random_params(&mut rng, 0.05, 0.5);
        let dt = 0.05 / c.lambda_fast_at(0.0).abs().max(1.0);
        let times = [0.1, 0.25];
        let rk = rk4_full_samples(&p, &state0, &times, &oracle(dt)).unwrap();
        for (t, rk) in times.iter().zip(rk) {
            let exact = solve_full(&c, &state0, *t).unwrap();
            let gap = exact.sub(&rk).unwrap().h2_norm();
            assert!(gap <= 1e-6 * exact.h2_norm().max(1.0), "{p:?} t={t} gap={gap}");
        }
    }
}

#[test]
fn oracle_rejects_stiff_steps() {
    let lattice = Arc::new(build_lattice(1, 1.0, 0.5).unwrap());
    let state0 = Pair::zeros(lattice);
    let p = p1(1e-3);
    assert!(matches!(rk4_full(&p, &state0, 1.0, &oracle(1e-2)), Err(Error::Stiffness { .. })));
}
