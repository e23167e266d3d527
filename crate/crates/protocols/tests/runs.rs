use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use protocols::*;
use signal_core::{CodeShape, NoiseModel, NoiseSpec};

fn base_config(protocol: ProtocolKind, code: CodeShape, noise: NoiseSpec) -> RunConfig {
    RunConfig {
        protocol,
        seed: 11,
        omega_true: 0.3,
        eps_targets: vec![0.01],
        budget_k: 10_000,
        mode: Mode::PostSelection,
        code,
        noise,
        grid_bits: 14,
        search: None,
        sql: None,
    }
}

fn depolarizing(gamma: f64, h: f64) -> NoiseSpec {
    NoiseSpec { sigma_eps: 0.0, gamma_mean: gamma, heterogeneity_h: h, model: NoiseModel::Depolarizing }
}

fn hamiltonian(gamma: f64, sigma: f64) -> NoiseSpec {
    NoiseSpec { sigma_eps: sigma, gamma_mean: gamma, heterogeneity_h: 0.0, model: NoiseModel::Hamiltonian }
}

#[test]
fn config_validation_rejects_bad_targets() {
    let mut cfg = base_config(ProtocolKind::BareGhz, CodeShape::single(1), depolarizing(0.0, 0.0));
    cfg.eps_targets = vec![0.01, 0.1];
    assert!(run_bare_ghz(&cfg).is_err());
    cfg.eps_targets = vec![0.1, -0.01];
    assert!(run_bare_ghz(&cfg).is_err());
    cfg.eps_targets = vec![0.1];
    cfg.budget_k = 0;
    assert!(run_bare_ghz(&cfg).is_err());
}

#[test]
fn runs_are_bitwise_deterministic() {
    let cfg = base_config(ProtocolKind::BareGhz, CodeShape::single(1), depolarizing(0.05, 0.3));
    let (r1, l1) = run_bare_ghz(&cfg).unwrap();
    let (r2, l2) = run_bare_ghz(&cfg).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(l1, l2);

    let mut ccfg = base_config(ProtocolKind::Combined, CodeShape::new(1, 3).unwrap(), hamiltonian(0.2, 0.01));
    ccfg.budget_k = 500;
    let (c1, m1) = run_combined(&ccfg).unwrap();
    let (c2, m2) = run_combined(&ccfg).unwrap();
    assert_eq!(c1, c2);
    assert_eq!(m1, m2);
}

#[test]
fn ledger_cost_matches_reported_totals() {
    let mut cfg = base_config(ProtocolKind::Bitflip, CodeShape::single(1), hamiltonian(0.25, 0.0));
    cfg.eps_targets = vec![0.05, 0.01];
    cfg.budget_k = 800;
    let (result, ledger) = run_bitflip(&cfg).unwrap();
    let ledger_cost: u64 = ledger.iter().map(|s| s.cost).sum();
    let reported: u64 = result.targets.iter().map(|t| t.total_cost).sum();
    assert_eq!(ledger_cost, reported);
    // Rejected shots stay in the ledger with their cost counted.
    assert!(ledger.iter().any(|s| !s.accepted));
    let experiments: u64 = result.targets.iter().map(|t| t.experiments).sum();
    assert_eq!(ledger.len() as u64, experiments);
}

#[test]
fn bare_ghz_noiseless_converges() {
    let cfg = base_config(ProtocolKind::BareGhz, CodeShape::single(1), depolarizing(0.0, 0.0));
    let (result, _) = run_bare_ghz(&cfg).unwrap();
    let t = &result.targets[0];
    assert!(t.converged);
    assert!(t.circular_error < 1.2 * t.eps);
    assert!(t.total_cost > 0);
}

#[test]
fn bare_ghz_zero_visibility_never_converges() {
    let mut cfg = base_config(ProtocolKind::BareGhz, CodeShape::single(1), depolarizing(0.99, 0.0));
    cfg.budget_k = 500;
    let (result, _) = run_bare_ghz(&cfg).unwrap();
    assert!(!result.targets[0].converged);
    assert_eq!(result.targets[0].experiments, 500);
}

#[test]
fn bitflip_noiseless_accepts_everything() {
    let cfg = base_config(ProtocolKind::Bitflip, CodeShape::single(1), hamiltonian(0.0, 0.0));
    let (result, ledger) = run_bitflip(&cfg).unwrap();
    let t = &result.targets[0];
    assert_eq!(t.acceptance_rate, 1.0);
    assert!(t.converged);
    assert!(ledger.iter().all(|s| s.syndrome_d == [0, 0, 0]));
}

#[test]
fn combined_noiseless_accepts_everything() {
    let mut cfg = base_config(ProtocolKind::Combined, CodeShape::new(1, 3).unwrap(), hamiltonian(0.0, 0.0));
    cfg.budget_k = 2_000;
    let (result, _) = run_combined(&cfg).unwrap();
    let t = &result.targets[0];
    assert_eq!(t.acceptance_rate, 1.0);
    assert!(t.converged);
}

fn search_config(protocol: ProtocolKind, n_probe: u32, sigma: f64) -> RunConfig {
    let l = (n_probe - 1) / 2;
    let width = PI / (4.0 * n_probe as f64);
    let mut cfg = base_config(
        protocol,
        CodeShape::single(l),
        NoiseSpec { sigma_eps: sigma, gamma_mean: 0.0, heterogeneity_h: 0.0, model: NoiseModel::Hamiltonian },
    );
    cfg.search = Some(SearchSettings { low: 0.25, width, eps: width / 32.0, delta: 0.05 });
    cfg
}

#[test]
fn binary_search_halves_exactly_and_finds_omega() {
    let mut cfg = search_config(ProtocolKind::BinarySearchGhz, 15, 0.0);
    let s = cfg.search.unwrap();
    cfg.omega_true = s.low + 0.61 * s.width;
    let r = run_binary_search(&cfg).unwrap();
    assert_eq!(r.iterations, 5);
    assert_eq!(r.final_width, s.width / 32.0);
    assert!((r.estimate - cfg.omega_true).abs() <= s.eps);
    assert_eq!(r.total_shots, r.shots_per_iteration.iter().sum::<u64>());
    assert!(r.shots_per_iteration.iter().all(|&m| m >= 10));
}

#[test]
fn binary_search_tolerates_boundary_omega() {
    let mut cfg = search_config(ProtocolKind::BinarySearchGhz, 15, 0.0);
    let s = cfg.search.unwrap();
    cfg.omega_true = s.low;
    let r = run_binary_search(&cfg).unwrap();
    assert!((r.estimate - cfg.omega_true).abs() <= s.eps);
}

#[test]
fn binary_search_code_variant_runs() {
    let mut cfg = search_config(ProtocolKind::BinarySearchCode, 15, 0.0);
    let s = cfg.search.unwrap();
    cfg.omega_true = s.low + 0.3 * s.width;
    let r = run_binary_search(&cfg).unwrap();
    assert!((r.estimate - cfg.omega_true).abs() <= 2.0 * s.eps);
}

#[test]
fn binary_search_requires_sane_interval() {
    let mut cfg = search_config(ProtocolKind::BinarySearchGhz, 15, 0.0);
    cfg.search = Some(SearchSettings { low: 0.25, width: 0.0, eps: 0.01, delta: 0.05 });
    assert!(run_binary_search(&cfg).is_err());
}

#[test]
fn sequential_finds_omega() {
    let mut cfg = base_config(ProtocolKind::Sequential, CodeShape::single(4), hamiltonian(0.0, 0.0));
    cfg.search = Some(SearchSettings { low: 0.25, width: 0.1, eps: 1e-3, delta: 0.01 });
    let r = run_sequential(&cfg).unwrap();
    assert!((r.estimate - 0.3).abs() <= 1e-3, "estimate {} off", r.estimate);
    assert!(r.m_total > 0);
    assert!(r.accepted_queries >= 2 * r.rounds as u64);
    assert!(r.attempts >= r.accepted_queries);
}

#[test]
fn sql_baseline_degenerate_at_zero_phase() {
    let mut cfg = base_config(ProtocolKind::SqlBaseline, CodeShape::single(0), depolarizing(0.0, 0.0));
    cfg.omega_true = 0.0;
    cfg.sql = Some(SqlSettings { qubits: 100, trials: 50 });
    let r = run_sql_baseline(&cfg).unwrap();
    assert_eq!(r.degenerate_trials, 50);
    assert_eq!(r.variance, 0.0);
    assert_eq!(r.mean_estimate, 0.0);
}

#[test]
fn barrier_probe_exact_values() {
    let mut cfg = base_config(ProtocolKind::SqlBarrierProbe, CodeShape::single(1), depolarizing(0.0, 0.0));
    cfg.sql = Some(SqlSettings { qubits: 3, trials: 10 });
    assert_eq!(run_sql_barrier_probe(&cfg).unwrap().exact, 12.0);
    cfg.sql = Some(SqlSettings { qubits: 21, trials: 10 });
    assert_eq!(run_sql_barrier_probe(&cfg).unwrap().exact, 84.0);
}

#[test]
fn rejection_filter_trivial_case() {
    // p(t) = 0 means every syndrome is zero with certainty, so each record
    // is kept with probability exactly P_min.
    let records: Vec<TimedSyndrome> =
        (0..200_000).map(|i| TimedSyndrome { t: (i as f64 + 1.0) / 200_000.0, d: 0 }).collect();
    let out = rejection_filter(&records, 5, |_| 0.0, 0, 0.25, 3).unwrap();
    assert_eq!(out.clamped, 0);
    assert_eq!(out.skipped_zero_prob, 0);
    let rate = out.accepted.len() as f64 / records.len() as f64;
    assert_abs_diff_eq!(rate, 0.25, epsilon = 3.0 * (0.25f64 * 0.75 / 200_000.0).sqrt());
}

#[test]
fn rejection_filter_rejects_bad_pmin() {
    assert!(rejection_filter(&[], 5, |_| 0.1, 1, 0.0, 3).is_err());
    assert!(rejection_filter(&[], 5, |_| 0.1, 1, 1.5, 3).is_err());
}
