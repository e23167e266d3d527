use std::f64::consts::{PI, TAU};

use bayes_engine::{
    circular_error, converged, init_uniform, map_estimate, update_harmonics, HarmonicShot,
};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use signal_core::NoiseModel;

use crate::bare::check_now;
use crate::config::{EpsOutcome, Mode, ProtocolKind, RunConfig, RunResult, ShotRecord};
use crate::rng::stream_rng;
use crate::syndrome::{sample_flip_pattern, shot_flip_probs};
use crate::ProtocolError;

/// Three repetition-code blocks probed in parallel with frozen per-device
/// qubit offsets eps_k. The parity outcome samples cos^2 of the effective
/// phase; inference marginalizes the offsets into a Gaussian visibility.
pub fn run_combined(cfg: &RunConfig) -> Result<(RunResult, Vec<ShotRecord>), ProtocolError> {
    cfg.validate()?;
    if cfg.protocol != ProtocolKind::Combined {
        return Err(ProtocolError::Config("protocol tag must be combined".into()));
    }
    if cfg.noise.model != NoiseModel::Hamiltonian {
        return Err(ProtocolError::Config("combined requires hamiltonian noise".into()));
    }
    if cfg.code.blocks != 3 {
        return Err(ProtocolError::Config("combined uses exactly three blocks".into()));
    }
    let n = cfg.code.n;
    let total = 3 * n as usize;
    let omega = cfg.omega_true;
    let (gamma, h, sigma) = (cfg.noise.gamma_mean, cfg.noise.heterogeneity_h, cfg.noise.sigma_eps);

    // Device offsets are one realization per seed, frozen across eps targets.
    let device_eps: Vec<f64> = if sigma > 0.0 {
        let dist = Normal::new(0.0, sigma).expect("finite std dev");
        let mut rng = stream_rng("combined_device", cfg.seed, 0, 0);
        (0..total).map(|_| dist.sample(&mut rng)).collect()
    } else {
        vec![0.0; total]
    };

    let ident_period = match cfg.mode {
        // Post-selected frequencies are multiples of 2*(3N).
        Mode::PostSelection => PI / (3.0 * n as f64),
        Mode::FullLikelihood => TAU,
    };
    let vis_trivial = (-2.0 * 3.0 * n as f64 * sigma * sigma).exp();

    let mut targets = Vec::new();
    let mut ledger = Vec::new();
    let mut probs = Vec::with_capacity(total);
    let mut flips = Vec::with_capacity(total);
    for (ei, &eps) in cfg.eps_targets.iter().enumerate() {
        let m_max = ((1.0 / eps).floor() as u64 / (3 * n as u64))
            .min((1u64 << (cfg.grid_bits - 2)) / (3 * n as u64))
            .max(1);
        let mut grid = init_uniform(cfg.grid_bits, TAU)?;
        let mut pending: Vec<HarmonicShot> = Vec::new();
        let (mut cost, mut used, mut accepted_count) = (0u64, 0u64, 0u64);
        let mut conv = false;
        for i in 0..cfg.budget_k {
            let mut rng = stream_rng("combined", cfg.seed, ei as u32, i);
            let m = rng.gen_range(1..=m_max);
            let theta = rng.gen_range(0.0..TAU);
            shot_flip_probs(omega, gamma, h, total, &mut rng, &mut probs);
            sample_flip_pattern(&probs, &mut rng, &mut flips);
            let mut d = [0u32; 3];
            let mut k_eff = 0.0;
            for b in 0..3 {
                let c: u32 =
                    flips[b * n as usize..(b + 1) * n as usize].iter().map(|&f| f as u32).sum();
                d[b] = c.min(n - c);
                k_eff += (n - c) as f64;
            }
            let s_eff: f64 = device_eps
                .iter()
                .zip(&flips)
                .filter(|(_, &f)| !f)
                .map(|(&e, _)| e)
                .sum();
            let phase = m as f64 * k_eff * (omega - theta) + s_eff;
            let p_plus = phase.cos().powi(2);
            let outcome: i8 = if rng.gen_bool(p_plus.clamp(0.0, 1.0)) { 1 } else { -1 };
            let accepted = match cfg.mode {
                Mode::PostSelection => d == [0, 0, 0],
                Mode::FullLikelihood => true,
            };
            if accepted {
                accepted_count += 1;
                let d_sum: u32 = d.iter().sum();
                let freq = 2.0 * m as f64 * (3 * n - d_sum) as f64;
                let visibility = match cfg.mode {
                    Mode::PostSelection => vis_trivial,
                    Mode::FullLikelihood => {
                        (-2.0 * (3 * n - d_sum) as f64 * sigma * sigma).exp()
                    }
                };
                pending.push(HarmonicShot {
                    freq,
                    theta: (freq * theta).rem_euclid(TAU),
                    visibility,
                    outcome,
                });
            }
            ledger.push(ShotRecord {
                index: i,
                multiplier: m,
                theta,
                syndrome_d: d,
                outcome,
                accepted,
                cost: 3 * n as u64 * m,
            });
            cost += 3 * n as u64 * m;
            used += 1;
            if check_now(i) && !pending.is_empty() {
                update_harmonics(&mut grid, &pending)?;
                pending.clear();
                if converged(&grid, omega, eps, ident_period) {
                    conv = true;
                    break;
                }
            }
        }
        if !conv && !pending.is_empty() {
            update_harmonics(&mut grid, &pending)?;
            conv = converged(&grid, omega, eps, ident_period);
        }
        let estimate = map_estimate(&grid);
        targets.push(EpsOutcome {
            eps,
            converged: conv,
            total_cost: cost,
            experiments: used,
            estimate,
            circular_error: circular_error(estimate, omega, ident_period),
            acceptance_rate: accepted_count as f64 / used as f64,
        });
    }
    Ok((RunResult { targets }, ledger))
}
