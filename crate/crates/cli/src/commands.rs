use fastreact::experiments::{
    bound_series, check_bound, convergence_ladder, initial_layer_check, manifold_convergence, BoundKind,
    ExperimentConfig, LadderTable, RateOutcome,
};
use fastreact::manifold::{critical_manifold, reduced_slow_exponent, slow_manifold};
use fastreact::{solve_full, solve_limit, Pair};
use serde_json::{json, Map, Value};

use crate::checks::{eigen_structure, oracle_equivalence, EIGEN_TOLERANCE, ORACLE_TIMES, ORACLE_TOLERANCE};
use crate::config::RunConfig;
use crate::manifest::{CheckRecord, OutputDir};
use crate::plot::{manifold_plot, rate_plot, FitLine};
use crate::table::{Cell, Table};
use crate::Failure;

/// What one subcommand produced besides its files.
#[derive(Debug, Default)]
pub struct Section {
    pub checks: Vec<CheckRecord>,
    pub fits: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Section {
    fn check(&mut self, subcommand: &'static str, name: &str, pass: bool, gating: bool, detail: String) {
        self.checks.push(CheckRecord { subcommand, name: name.to_string(), pass, gating, detail });
    }

    fn plot(&mut self, out: &mut OutputDir, name: &str, svg: Option<String>) -> Result<(), Failure> {
        match svg {
            Some(svg) => out.write(name, svg.as_bytes()).map_err(Failure::Output),
            None => {
                self.warnings.push(format!("{name} not written: fewer than 2 plottable points"));
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: Section) {
        self.checks.extend(other.checks);
        self.fits.extend(other.fits);
        self.warnings.extend(other.warnings);
    }
}

fn outcome_json(outcome: &RateOutcome<f64>) -> Value {
    match outcome {
        RateOutcome::Fit(f) => json!({
            "slope": f.slope,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "points": f.points,
        }),
        RateOutcome::Exact => json!("exact"),
    }
}

fn fit_line(outcome: &RateOutcome<f64>) -> Option<FitLine> {
    outcome.fit().map(|f| FitLine { slope: f.slope, intercept: f.intercept })
}

/// `(pass, detail)` for a slope window; an identically vanishing quantity passes.
fn slope_check(outcome: &RateOutcome<f64>, lo: f64, hi: f64, min_r2: Option<f64>) -> (bool, String) {
    match outcome {
        RateOutcome::Exact => (true, "values vanish identically (exact)".into()),
        RateOutcome::Fit(f) => {
            let in_window = (lo..=hi).contains(&f.slope);
            match min_r2 {
                Some(r2) => (
                    in_window && f.r_squared >= r2,
                    format!("slope {:.4} in [{lo}, {hi}], r2 {:.5} >= {r2}", f.slope, f.r_squared),
                ),
                None => (in_window, format!("slope {:.4} in [{lo}, {hi}]", f.slope)),
            }
        }
    }
}

fn json_bytes(value: &Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    text.into_bytes()
}

pub fn solve(run: &RunConfig, cfg: &ExperimentConfig<f64>, out: &mut OutputDir) -> Result<Section, Failure> {
    let lattice = cfg.lattice.build()?;
    let (u0, v0) = cfg.initial_data(&lattice)?;
    let state0 = Pair::new(u0, v0.clone())?;
    let mut table = Table::new(&["eps", "t", "u_h2", "v_h2", "error_h2"]);
    for &eps in &cfg.eps_ladder {
        let c = cfg.constants_at(eps)?;
        for t in cfg.time.times() {
            let full = solve_full(&c, &state0, t)?;
            let limit = solve_limit(&c, &v0, t)?;
            let error = full.sub(&limit)?.h2_norm();
            table.push(vec![eps.into(), t.into(), full.u.h2_norm().into(), full.v.h2_norm().into(), error.into()]);
        }
    }
    out.write("solve.csv", table.render().as_bytes()).map_err(Failure::Output)?;

    let oracle = oracle_equivalence(cfg.params_at(cfg.eps_ladder[0]), &state0, run.checks.random_sets, cfg.seed);
    let eigen = eigen_structure(&lattice, run.checks.eigen_modes, cfg.seed);
    let summary = json!({
        "oracle": {
            "parameter_sets": oracle.sets,
            "times": ORACLE_TIMES,
            "dt": "eps/100",
            "max_rel_h2_gap": oracle.max_rel_gap,
            "errors": oracle.errors,
        },
        "eigen": {
            "modes": eigen.modes,
            "char_poly_residual": eigen.char_poly,
            "pairing_defect": eigen.pairing,
        },
    });
    out.write("solve_checks.json", &json_bytes(&summary)).map_err(Failure::Output)?;

    let mut section = Section::default();
    section.fits.insert("solve".into(), summary);
    let mut detail =
        format!("{} parameter sets, max rel H2 gap {:.3e} (<= {ORACLE_TOLERANCE:e})", oracle.sets, oracle.max_rel_gap);
    if !oracle.errors.is_empty() {
        detail.push_str(&format!(", integrator refused {}: {}", oracle.errors.len(), oracle.errors.join("; ")));
    }
    section.check("solve", "oracle equivalence", oracle.pass(), true, detail);
    section.check(
        "solve",
        "eigen-structure",
        eigen.pass(),
        true,
        format!(
            "{} modes, char-poly {:.2e}, pairing {:.2e} (<= {EIGEN_TOLERANCE:e})",
            eigen.modes, eigen.char_poly, eigen.pairing
        ),
    );
    Ok(section)
}

fn ladder_table(cfg: &ExperimentConfig<f64>, ladder: &LadderTable<f64>) -> Table {
    let slope = ladder.fit.fit().map(|f| f.slope);
    let mut columns = vec!["eps", "t_sup", "error_h2"];
    if !cfg.on_critical {
        columns.extend(["corrected_h2", "t_corrected_sup"]);
    }
    if slope.is_some() {
        columns.push("slope");
    }
    let mut table = Table::new(&columns);
    for r in &ladder.rows {
        let mut row: Vec<Cell> = vec![r.eps.into(), r.t_sup.into(), r.error_h2.into()];
        if !cfg.on_critical {
            row.extend([r.corrected_error.into(), r.t_corrected_sup.into()]);
        }
        if let Some(s) = slope {
            row.push(s.into());
        }
        table.push(row);
    }
    table
}

pub fn converge(cfg: &ExperimentConfig<f64>, out: &mut OutputDir) -> Result<Section, Failure> {
    let ladder = convergence_ladder(cfg)?;
    let csv = ladder_table(cfg, &ladder).render();
    let rerun = ladder_table(cfg, &convergence_ladder(cfg)?).render();
    out.write("converge.csv", csv.as_bytes()).map_err(Failure::Output)?;

    let mut section = Section::default();
    let mut fit = json!({
        "on_critical": cfg.on_critical,
        "error_fit": outcome_json(&ladder.fit),
    });
    if !cfg.on_critical {
        fit["corrected_fit"] = json!(ladder.corrected_fit.as_ref().map(outcome_json));
    }
    if cfg.on_critical {
        let (pass, detail) = slope_check(&ladder.fit, 0.9, 1.1, Some(0.99));
        section.check("converge", "error rate", pass, true, detail);
        let all_zero = ladder.rows.iter().all(|r| r.error_h2 == 0.0);
        let monotone = all_zero || ladder.rows.windows(2).all(|w| w[1].error_h2 < w[0].error_h2);
        section.check(
            "converge",
            "monotone decay",
            monotone,
            true,
            format!("sup error strictly decreasing along the ladder: {monotone}"),
        );
    } else {
        let (pass, detail) = match &ladder.corrected_fit {
            Some(outcome) => slope_check(outcome, 0.9, 1.1, None),
            None => (false, "error minus initial layer is negative at some eps".into()),
        };
        section.check("converge", "layer-corrected rate", pass, true, detail);
        let layer = initial_layer_check(cfg)?;
        fit["initial_layer"] = json!({
            "constant": layer.constant,
            "ratios": layer.ratios,
            "max_ratio": layer.max_ratio,
            "pass": layer.pass,
        });
        section.check(
            "converge",
            "initial-layer bound",
            layer.pass,
            false,
            format!(
                "C {:.4} at eps {:.0e}, max finer ratio {:.4} (<= 1)",
                layer.constant, cfg.eps_ladder[0], layer.max_ratio
            ),
        );
    }
    let same = csv == rerun;
    section.check("converge", "determinism", same, true, format!("rerun reproduces {} CSV bytes: {same}", csv.len()));
    out.write("converge_fit.json", &json_bytes(&fit)).map_err(Failure::Output)?;
    section.fits.insert("converge".into(), fit);

    let points: Vec<(f64, f64)> = ladder.rows.iter().map(|r| (r.eps, r.error_h2)).collect();
    let svg =
        rate_plot("sup-in-time error against eps", "eps", "sup_t error (H2 x H2)", &points, fit_line(&ladder.fit));
    section.plot(out, "converge.svg", svg)?;
    Ok(section)
}

pub fn bounds(cfg: &ExperimentConfig<f64>, out: &mut OutputDir) -> Result<Section, Failure> {
    let series = bound_series(cfg)?;
    let mut table = Table::new(&["eps", "t", "bound", "lhs", "rhs"]);
    for (kind, per_eps) in BoundKind::ALL.iter().zip(&series) {
        for s in per_eps {
            for i in 0..s.times.len() {
                table.push(vec![
                    s.eps.into(),
                    s.times[i].into(),
                    kind.label().into(),
                    s.lhs[i].into(),
                    s.rhs[i].into(),
                ]);
            }
        }
    }
    out.write("bounds.csv", table.render().as_bytes()).map_err(Failure::Output)?;

    let mut section = Section::default();
    let mut report = Map::new();
    for (kind, per_eps) in BoundKind::ALL.iter().zip(&series) {
        let check = check_bound(*kind, per_eps);
        report.insert(
            kind.label().into(),
            json!({
                "constant": check.constant,
                "ratios": check.ratios,
                "max_violation": check.max_violation,
                "identically_zero": check.identically_zero,
                "pass": check.pass,
            }),
        );
        section.check(
            "bounds",
            kind.label(),
            check.pass,
            false,
            if check.identically_zero {
                "left side vanishes identically".into()
            } else {
                format!(
                    "C {:.4} at eps {:.0e}, max finer ratio {:.4} (<= 1)",
                    check.constant, cfg.eps_ladder[0], check.max_violation
                )
            },
        );
    }
    let report = Value::Object(report);
    out.write("bounds.json", &json_bytes(&report)).map_err(Failure::Output)?;
    section.fits.insert("bounds".into(), report);
    Ok(section)
}

pub fn manifold(cfg: &ExperimentConfig<f64>, out: &mut OutputDir) -> Result<Section, Failure> {
    let table = manifold_convergence(cfg)?;
    let lattice = cfg.lattice.build()?;
    let mut identity_gap: f64 = 0.0;
    for &eps in &cfg.eps_ladder {
        let c = cfg.constants_at(eps)?;
        for &q in lattice.sq_norms() {
            let slow = c.lambda_slow_at(q);
            let reduced = reduced_slow_exponent(&c, q)?;
            identity_gap = identity_gap.max((reduced - slow).abs() / slow.abs().max(f64::MIN_POSITIVE));
        }
    }

    let mut csv =
        Table::new(&["eps", "graph_distance", "rate_gap", "invariance_residual", "eigenvector_gap", "attraction_rate"]);
    for r in &table.rows {
        csv.push(vec![
            r.eps.into(),
            r.graph_distance.into(),
            r.rate_gap.into(),
            r.invariance_residual.into(),
            r.eigenvector_gap.into(),
            r.attraction_rate.into(),
        ]);
    }
    out.write("manifold.csv", csv.render().as_bytes()).map_err(Failure::Output)?;

    let eig = &table.eigenvector;
    let residual = table.max_invariance_residual();
    let fit = json!({
        "distance_fit": outcome_json(&table.distance_fit),
        "rate_gap_fit": outcome_json(&table.rate_gap_fit),
        "max_invariance_residual": residual,
        "reduced_rate_identity_gap": identity_gap,
        "eigenvector_limit": {
            "constant": eig.constant,
            "ratios": eig.ratios,
            "max_ratio": eig.max_ratio,
            "pass": eig.pass,
        },
    });
    out.write("manifold_fit.json", &json_bytes(&fit)).map_err(Failure::Output)?;

    let mut section = Section::default();
    section.check("manifold", "invariance", residual <= 1e-10, true, format!("max residual {residual:.2e} (<= 1e-10)"));
    let (pass, detail) = slope_check(&table.distance_fit, 0.95, 1.05, None);
    section.check("manifold", "graph distance rate", pass, true, detail);
    let (pass, detail) = slope_check(&table.rate_gap_fit, 0.9, 1.1, None);
    section.check("manifold", "reduced rate gap rate", pass, true, detail);
    section.check(
        "manifold",
        "reduced rate identity",
        identity_gap <= 1e-10,
        true,
        format!("max relative gap {identity_gap:.2e} over {} modes (<= 1e-10)", lattice.len()),
    );
    section.check(
        "manifold",
        "scaled eigenvector limit",
        eig.pass,
        false,
        format!("C {:.4} at eps {:.0e}, max finer ratio {:.4} (<= 1)", eig.constant, cfg.eps_ladder[0], eig.max_ratio),
    );
    section.fits.insert("manifold".into(), fit);

    let coarsest = cfg.constants_at(cfg.eps_ladder[0])?;
    let svg = manifold_plot(
        slow_manifold(&coarsest).graph_slope(),
        critical_manifold(&coarsest.params).graph_slope(),
        coarsest.params.eps,
    );
    section.plot(out, "manifold.svg", Some(svg))?;
    let points: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.eps, r.graph_distance)).collect();
    let svg = rate_plot(
        "slow to critical graph distance",
        "eps",
        "graph distance (|u| <= 1)",
        &points,
        fit_line(&table.distance_fit),
    );
    section.plot(out, "manifold_distance.svg", svg)?;
    Ok(section)
}
