use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::config::{ProtocolKind, RunConfig};
use crate::rng::stream_rng;
use crate::ProtocolError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqlBaselineResult {
    pub estimates: Vec<f64>,
    pub mean_estimate: f64,
    /// Sample variance across trials.
    pub variance: f64,
    /// Trials where every outcome agreed, making arccos(sqrt(p)) degenerate.
    pub degenerate_trials: u64,
}

/// Product-state baseline: N independent qubits measured in the X basis,
/// omega estimated from the empirical excited fraction. Variance is
/// ~1/(4N) + sigma_eps^2/N away from the degenerate points.
pub fn run_sql_baseline(cfg: &RunConfig) -> Result<SqlBaselineResult, ProtocolError> {
    if cfg.protocol != ProtocolKind::SqlBaseline {
        return Err(ProtocolError::Config("protocol tag must be sql_baseline".into()));
    }
    let s = cfg.sql_settings()?;
    let sigma = cfg.noise.sigma_eps;
    let omega = cfg.omega_true;
    let noise = if sigma > 0.0 {
        Some(Normal::new(0.0, sigma).expect("finite std dev"))
    } else {
        None
    };

    let mut estimates = Vec::with_capacity(s.trials as usize);
    let mut degenerate_trials = 0u64;
    for trial in 0..s.trials {
        let mut rng = stream_rng("sql_baseline", cfg.seed, 0, trial);
        let mut plus = 0u64;
        for _ in 0..s.qubits {
            let eps_k = noise.as_ref().map_or(0.0, |d| d.sample(&mut rng));
            plus += rng.gen_bool((omega + eps_k).cos().powi(2).clamp(0.0, 1.0)) as u64;
        }
        let p_hat = plus as f64 / s.qubits as f64;
        if p_hat == 0.0 || p_hat == 1.0 {
            degenerate_trials += 1;
        }
        estimates.push(p_hat.sqrt().clamp(0.0, 1.0).acos());
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let variance = if estimates.len() > 1 {
        estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (estimates.len() - 1) as f64
    } else {
        0.0
    };
    Ok(SqlBaselineResult { estimates, mean_estimate: mean, variance, degenerate_trials })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierProbeResult {
    pub exact: f64,
    pub empirical: f64,
    pub shots: u64,
}

/// Syndrome-averaged Fisher information at the balanced operating point
/// phi = pi/4: the exact binomial sum collapses to 4N, and an empirical
/// score-function estimate from simulated syndrome + logical outcomes
/// should land on the same value.
pub fn run_sql_barrier_probe(cfg: &RunConfig) -> Result<BarrierProbeResult, ProtocolError> {
    if cfg.protocol != ProtocolKind::SqlBarrierProbe {
        return Err(ProtocolError::Config("protocol tag must be sql_barrier_probe".into()));
    }
    let s = cfg.sql_settings()?;
    let n = s.qubits;
    if n > 63 {
        return Err(ProtocolError::Config("barrier probe supports at most 63 qubits".into()));
    }
    let exact = fisher_lab::sql_barrier_total(n)
        .map_err(|e| ProtocolError::Config(e.to_string()))?
        .value;

    // At phi = pi/4 every coset is balanced: flip count j ~ Binomial(N, 1/2),
    // the logical outcome is a fair coin, and the per-shot score is +/-2k
    // with k = |N - 2j|.
    let mut rng = stream_rng("sql_barrier", cfg.seed, 0, 0);
    let mask = (1u64 << n) - 1;
    let mut sum_sq = 0.0;
    for _ in 0..s.trials {
        let j = (rng.gen::<u64>() & mask).count_ones() as i64;
        let k = (n as i64 - 2 * j).unsigned_abs() as f64;
        let score = if rng.gen_bool(0.5) { 2.0 * k } else { -2.0 * k };
        sum_sq += score * score;
    }
    Ok(BarrierProbeResult { exact, empirical: sum_sq / s.trials as f64, shots: s.trials })
}
