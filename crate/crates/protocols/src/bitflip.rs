use std::f64::consts::TAU;

use bayes_engine::{
    circular_error, converged, init_uniform, map_estimate, update_harmonics, HarmonicShot,
};
use rand::Rng;
use signal_core::{bitflip_shot_likelihood, NoiseModel};

use crate::bare::check_now;
use crate::config::{EpsOutcome, Mode, ProtocolKind, RunConfig, RunResult, ShotRecord};
use crate::rng::stream_rng;
use crate::syndrome::{sample_syndrome, shot_flip_probs};
use crate::ProtocolError;

/// Single-block repetition-code estimation with random time multiplier M and
/// rotation theta. Post-selection keeps only trivial syndromes (cost still
/// counted); full likelihood conditions on the decoded weight d.
pub fn run_bitflip(cfg: &RunConfig) -> Result<(RunResult, Vec<ShotRecord>), ProtocolError> {
    cfg.validate()?;
    if cfg.protocol != ProtocolKind::Bitflip {
        return Err(ProtocolError::Config("protocol tag must be bitflip".into()));
    }
    if cfg.noise.model != NoiseModel::Hamiltonian {
        return Err(ProtocolError::Config("bitflip requires hamiltonian noise".into()));
    }
    if cfg.code.blocks != 1 {
        return Err(ProtocolError::Config("bitflip uses a single code block".into()));
    }
    let n = cfg.code.n;
    let omega = cfg.omega_true;
    let (gamma, h) = (cfg.noise.gamma_mean, cfg.noise.heterogeneity_h);
    // Post-selected shots only carry frequency N*M, so omega is identified
    // mod 2pi/N; the full likelihood mixes (N-d)*M and resolves mod 2pi.
    let ident_period = match cfg.mode {
        Mode::PostSelection => TAU / n as f64,
        Mode::FullLikelihood => TAU,
    };

    let mut targets = Vec::new();
    let mut ledger = Vec::new();
    let mut probs = Vec::with_capacity(n as usize);
    for (ei, &eps) in cfg.eps_targets.iter().enumerate() {
        let m_max = ((1.0 / eps).floor() as u64 / n as u64)
            .min((1u64 << (cfg.grid_bits - 2)) / n as u64)
            .max(1);
        let mut grid = init_uniform(cfg.grid_bits, TAU)?;
        let mut pending: Vec<HarmonicShot> = Vec::new();
        let (mut cost, mut used, mut accepted_count) = (0u64, 0u64, 0u64);
        let mut conv = false;
        for i in 0..cfg.budget_k {
            let mut rng = stream_rng("bitflip", cfg.seed, ei as u32, i);
            let m = rng.gen_range(1..=m_max);
            let theta = rng.gen_range(0.0..TAU);
            shot_flip_probs(omega, gamma, h, n as usize, &mut rng, &mut probs);
            let (c, d) = sample_syndrome(&probs, &mut rng);
            // Truth uses the raw flip count; inference only sees d.
            let p_plus = bitflip_shot_likelihood(n, c, m, theta, omega);
            let outcome: i8 = if rng.gen_bool(p_plus.clamp(0.0, 1.0)) { 1 } else { -1 };
            let accepted = match cfg.mode {
                Mode::PostSelection => d == 0,
                Mode::FullLikelihood => true,
            };
            if accepted {
                accepted_count += 1;
                pending.push(HarmonicShot {
                    freq: ((n - d) as u64 * m) as f64,
                    theta,
                    visibility: 1.0,
                    outcome,
                });
            }
            ledger.push(ShotRecord {
                index: i,
                multiplier: m,
                theta,
                syndrome_d: [d, 0, 0],
                outcome,
                accepted,
                cost: n as u64 * m,
            });
            cost += n as u64 * m;
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
