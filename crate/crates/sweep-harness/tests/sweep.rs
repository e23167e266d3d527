use approx::assert_abs_diff_eq;
use protocols::{Mode, ProtocolKind, RunConfig};
use signal_core::{CodeShape, NoiseModel, NoiseSpec};
use sweep_harness::*;

fn bare_template(gamma: f64) -> RunConfig {
    RunConfig {
        protocol: ProtocolKind::BareGhz,
        seed: 0,
        omega_true: 0.3,
        eps_targets: vec![0.1],
        budget_k: 20_000,
        mode: Mode::PostSelection,
        code: CodeShape::single(0),
        noise: NoiseSpec {
            sigma_eps: 0.0,
            gamma_mean: gamma,
            heterogeneity_h: 0.0,
            model: NoiseModel::Depolarizing,
        },
        grid_bits: 14,
        search: None,
        sql: None,
    }
}

#[test]
fn log_grid_is_log_spaced_descending() {
    let g = log_grid(1e-3, 1e-1, 30).unwrap();
    assert_eq!(g.len(), 30);
    assert_abs_diff_eq!(g[0], 1e-1, epsilon = 1e-12);
    assert_abs_diff_eq!(g[29], 1e-3, epsilon = 1e-15);
    let r0 = g[1] / g[0];
    for pair in g.windows(2) {
        assert_abs_diff_eq!(pair[1] / pair[0], r0, epsilon = 1e-12);
    }
}

#[test]
fn fit_recovers_exact_power_laws() {
    let grid = log_grid(1e-3, 1e-1, 12).unwrap();
    let quad: Vec<(f64, f64)> = grid.iter().map(|&e| (e, e.powi(-2))).collect();
    let f = fit_power_law(&quad, FitMethod::Ols).unwrap();
    assert_abs_diff_eq!(f.alpha, 2.0, epsilon = 1e-9);
    assert!(f.stderr_alpha < 1e-8);
    assert_eq!(f.n_points, 12);

    let lin: Vec<(f64, f64)> = grid.iter().map(|&e| (e, 7.0 / e)).collect();
    let f = fit_power_law(&lin, FitMethod::Wls).unwrap();
    assert_abs_diff_eq!(f.alpha, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(f.intercept, 7f64.ln(), epsilon = 1e-9);
    assert_eq!(f.method.label(), "WLS-inv-density");
}

#[test]
fn fit_rejects_insufficient_or_degenerate_data() {
    assert!(matches!(
        fit_power_law(&[(0.1, 10.0), (0.01, 100.0)], FitMethod::Ols),
        Err(SweepError::InsufficientData { needed: 3, got: 2 })
    ));
    assert!(matches!(
        fit_power_law(&[(0.1, 1.0), (0.1, 2.0), (0.1, 3.0)], FitMethod::Ols),
        Err(SweepError::DegenerateFit)
    ));
}

#[test]
fn fit_is_scale_equivariant() {
    let grid = log_grid(1e-4, 1e-1, 17).unwrap();
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, e.powf(-1.3) * (1.0 + 0.1 * ((i * 37) % 11) as f64)))
        .collect();
    for method in [FitMethod::Ols, FitMethod::Wls] {
        let f0 = fit_power_law(&pts, method).unwrap();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(e, t)| (e, 250.0 * t)).collect();
        let f1 = fit_power_law(&scaled, method).unwrap();
        assert_abs_diff_eq!(f0.alpha, f1.alpha, epsilon = 1e-12);
        assert_abs_diff_eq!(f1.intercept - f0.intercept, 250f64.ln(), epsilon = 1e-9);
    }
}

#[test]
fn wls_downweights_dense_clusters() {
    // An exact power law plus a dense cluster of outliers at one end: the
    // density weights should pull the WLS slope closer to the truth than OLS.
    let mut pts: Vec<(f64, f64)> =
        log_grid(1e-3, 1e-1, 10).unwrap().iter().map(|&e| (e, e.powi(-1))).collect();
    for i in 0..10 {
        let e = 1e-1 * (1.0 + 1e-4 * i as f64);
        pts.push((e, 3.0 * e.powi(-1)));
    }
    let ols = fit_power_law(&pts, FitMethod::Ols).unwrap();
    let wls = fit_power_law(&pts, FitMethod::Wls).unwrap();
    assert!((wls.alpha - 1.0).abs() < (ols.alpha - 1.0).abs());
}

#[test]
fn aggregate_mean_sem_and_permutation_invariance() {
    let fit = |alpha: f64, cf: f64| FitResult {
        alpha,
        intercept: 0.0,
        stderr_alpha: 0.0,
        n_points: 5,
        method: FitMethod::Ols,
        converged_fraction: cf,
    };
    let same = [fit(1.2, 1.0), fit(1.2, 1.0), fit(1.2, 1.0)];
    let a = aggregate_seeds(&same).unwrap();
    assert_eq!(a.mean_alpha, 1.2);
    assert_eq!(a.sem_alpha, Some(0.0));

    let two = [fit(1.0, 0.5), fit(2.0, 1.0)];
    let a = aggregate_seeds(&two).unwrap();
    assert_abs_diff_eq!(a.mean_alpha, 1.5, epsilon = 1e-15);
    assert_abs_diff_eq!(a.sem_alpha.unwrap(), 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(a.mean_converged_fraction, 0.75, epsilon = 1e-15);
    let swapped = [two[1], two[0]];
    assert_eq!(aggregate_seeds(&swapped).unwrap(), a);

    let single = aggregate_seeds(&[fit(1.1, 1.0)]).unwrap();
    assert_eq!(single.sem_alpha, None);
    assert!(aggregate_seeds(&[]).is_err());
}

#[test]
fn smoke_sweep_noiseless_bare_ghz() {
    let plan = SweepPlan {
        seeds: vec![7],
        eps_grid: vec![0.1, 0.03, 0.01],
        template: bare_template(0.0),
    };
    let rows = run_sweep(&plan).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.converged && r.t > 0));
    assert_eq!(rows[0].seed, 7);
    assert_eq!(rows[0].eps, 0.1);
}

#[test]
fn sweep_row_count_and_order_are_fixed() {
    let plan = SweepPlan {
        seeds: vec![3, 4, 5],
        eps_grid: vec![0.1, 0.05],
        template: bare_template(0.1),
    };
    let rows = run_sweep(&plan).unwrap();
    assert_eq!(rows.len(), plan.seeds.len() * plan.eps_grid.len());
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.seed, plan.seeds[i / 2]);
        assert_eq!(r.eps, plan.eps_grid[i % 2]);
    }
}

#[test]
fn sweep_rejects_bad_plans() {
    let plan =
        SweepPlan { seeds: vec![], eps_grid: vec![0.1, 0.05], template: bare_template(0.0) };
    assert!(run_sweep(&plan).is_err());
    let plan = SweepPlan {
        seeds: vec![1],
        eps_grid: vec![0.05, 0.1], // ascending
        template: bare_template(0.0),
    };
    assert!(run_sweep(&plan).is_err());
    let mut template = bare_template(0.0);
    template.protocol = ProtocolKind::SqlBaseline;
    let plan = SweepPlan { seeds: vec![1], eps_grid: vec![0.1, 0.05], template };
    assert!(run_sweep(&plan).is_err());
}

#[test]
fn csv_roundtrip_and_rerun_bytes_identical() {
    let plan = SweepPlan {
        seeds: vec![2, 3],
        eps_grid: vec![0.1, 0.03],
        template: bare_template(0.05),
    };
    let rows = run_sweep(&plan).unwrap();
    let csv1 = rows_to_csv(&rows, &plan.config_hash());
    let csv2 = rows_to_csv(&run_sweep(&plan).unwrap(), &plan.config_hash());
    assert_eq!(csv1, csv2);
    assert!(csv1.starts_with("# eqsp sweep v1 config_hash="));
    assert!(csv1.contains(CSV_HEADER));
    let parsed = rows_from_csv(&csv1).unwrap();
    assert_eq!(parsed, rows);
}

#[test]
fn reference_table_loads_and_matches_known_rows() {
    let rows = reference_rows();
    assert_eq!(rows.len(), 37);
    let l3 = rows
        .iter()
        .find(|r| {
            r.key.protocol == ProtocolKind::Bitflip
                && r.key.mode == Mode::PostSelection
                && r.key.l == 3
                && (r.key.level - 0.10).abs() < 1e-9
        })
        .unwrap();
    assert_eq!(l3.alpha, 1.00);
    assert_eq!(l3.acceptance_pct, Some(72.0));
}

#[test]
fn compare_to_reference_pass_fail_and_unmatched() {
    let key = ReferenceKey {
        protocol: ProtocolKind::Bitflip,
        mode: Mode::PostSelection,
        l: 3,
        level: 0.10,
        h: 0.0,
        sigma_eps: 0.0,
    };
    let tol = Tolerance { alpha_band: 0.2, acceptance_band_pct: 5.0 };
    let good = SeedAggregate {
        mean_alpha: 1.05,
        sem_alpha: Some(0.01),
        mean_converged_fraction: 1.0,
        mean_acceptance: Some(0.70),
    };
    let report = compare_to_reference(&good, &key, &tol).unwrap();
    assert!(report.alpha_pass);
    assert_eq!(report.acceptance_pass, Some(true));
    assert!(report.pass);

    // Negative control: a run at doubled noise drifts both alpha and the
    // acceptance rate outside their bands.
    let corrupted = SeedAggregate {
        mean_alpha: 1.45,
        sem_alpha: Some(0.02),
        mean_converged_fraction: 0.6,
        mean_acceptance: Some(0.45),
    };
    let report = compare_to_reference(&corrupted, &key, &tol).unwrap();
    assert!(!report.alpha_pass);
    assert_eq!(report.acceptance_pass, Some(false));
    assert!(!report.pass);

    let unmatched = ReferenceKey { l: 5, ..key };
    assert!(matches!(
        compare_to_reference(&good, &unmatched, &tol),
        Err(SweepError::UnmatchedReference(_))
    ));
}
