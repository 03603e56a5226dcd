use fastreact::experiments::{
    bound_series, check_bound, convergence_ladder, error_series, fit_rate, proposition_bounds, BoundKind,
    ExperimentConfig, LatticeSpec, TimeGrid,
};
use fastreact::Error;

fn small(mut cfg: ExperimentConfig<f64>) -> ExperimentConfig<f64> {
    cfg.lattice = LatticeSpec { dim: 1, cutoff: 4.0, spacing: 0.02 };
    cfg.time = TimeGrid { t_max: 2.0, samples: 32 };
    cfg
}

#[test]
fn sup_error_decreases_along_the_ladder() {
    for base in [ExperimentConfig::reference(), ExperimentConfig::negative_nu()] {
        for on_critical in [true, false] {
            let mut cfg = small(base.clone());
            cfg.on_critical = on_critical;
            let table = convergence_ladder(&cfg).unwrap();
            for w in table.rows.windows(2) {
                assert!(w[1].error_h2 < w[0].error_h2, "on_critical={on_critical}: {:?}", table.rows);
            }
        }
    }
}

#[test]
fn halving_the_spacing_barely_moves_the_sup() {
    let mut cfg = ExperimentConfig::<f64>::reference();
    cfg.on_critical = true;
    let coarse = convergence_ladder(&cfg).unwrap();
    cfg.lattice.spacing /= 2.0;
    let fine = convergence_ladder(&cfg).unwrap();
    for (a, b) in coarse.rows.iter().zip(&fine.rows) {
        assert!((a.error_h2 - b.error_h2).abs() <= 1e-4 * b.error_h2, "{a:?} {b:?}");
    }
}

#[test]
fn doubling_the_time_grid_never_lowers_the_sup() {
    let mut cfg = small(ExperimentConfig::reference());
    let coarse = convergence_ladder(&cfg).unwrap();
    cfg.time.samples *= 2;
    let fine = convergence_ladder(&cfg).unwrap();
    for (a, b) in coarse.rows.iter().zip(&fine.rows) {
        assert!(b.error_h2 >= a.error_h2);
    }
}

#[test]
fn ladder_is_deterministic() {
    let cfg = small(ExperimentConfig::negative_nu());
    assert_eq!(convergence_ladder(&cfg).unwrap(), convergence_ladder(&cfg).unwrap());
    assert_eq!(error_series(&cfg).unwrap(), error_series(&cfg).unwrap());
}

#[test]
fn on_critical_corrected_bound_vanishes() {
    let mut cfg = small(ExperimentConfig::reference());
    cfg.on_critical = true;
    let series = bound_series(&cfg).unwrap();
    let check = check_bound(BoundKind::Eps0VsCritical, &series[2]);
    assert!(check.identically_zero && check.pass);
    for s in &series[2] {
        assert!(s.lhs.iter().all(|&l| l == 0.0));
    }
}

#[test]
fn auxiliary_bound_report_covers_every_kind() {
    let report = proposition_bounds(&small(ExperimentConfig::reference())).unwrap();
    for kind in BoundKind::ALL {
        let check = report.get(kind).unwrap();
        assert!(check.constant.is_finite() && check.constant >= 0.0, "{}", kind.label());
    }
}

#[test]
fn invalid_ladders_are_rejected() {
    let mut cfg = small(ExperimentConfig::reference());
    cfg.eps_ladder = vec![1e-1, 1e-2, 3e-2, 1e-3];
    assert!(matches!(convergence_ladder(&cfg), Err(Error::Config(_))));
    cfg.eps_ladder = vec![1e-1, 1e-2, 1e-3];
    assert!(matches!(convergence_ladder(&cfg), Err(Error::Config(_))));
}

#[test]
fn exact_power_law_fits_exactly() {
    let points: Vec<(f64, f64)> = [1e-1, 3e-2, 1e-2, 3e-3].iter().map(|&e| (e, 2.5 * e)).collect();
    let fit = fit_rate(&points).unwrap();
    assert!((fit.slope - 1.0).abs() <= 1e-12);
    assert!((fit.r_squared - 1.0).abs() <= 1e-12);
    assert!(matches!(fit_rate(&points[..3]), Err(Error::TooFewPoints { .. })));
}
