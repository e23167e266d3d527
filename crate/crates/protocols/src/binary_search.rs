use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use signal_core::{kl_half_vs_p, three_category, Category};

use crate::config::{ProtocolKind, RunConfig};
use crate::rng::stream_rng;
use crate::ProtocolError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySearchResult {
    pub estimate: f64,
    pub iterations: u32,
    pub shots_per_iteration: Vec<u64>,
    pub total_shots: u64,
    pub final_width: f64,
}

/// Majority-vote shot count per bisection step: enough samples to keep the
/// per-iteration failure probability at delta/T for any phase at least eps/2
/// from the midpoint — the minimum separation that still matters for the
/// final precision. Decisions closer than that may flip, but then the lost
/// distance is under eps/2 and the final estimate stays within eps.
pub fn shots_for_decision(n_total: u32, eps: f64, sigma_eps: f64, t_iters: u32, delta: f64) -> u64 {
    let nf = n_total as f64;
    let eps_p =
        0.5 * (2.0 * nf * eps / 2.0).sin().abs() * (-2.0 * nf * sigma_eps * sigma_eps).exp();
    let kl = kl_half_vs_p((0.5 + eps_p).min(1.0));
    let m = if kl.is_finite() && kl > 0.0 {
        ((t_iters as f64 / delta).ln() / kl).ceil()
    } else {
        0.0
    };
    (m as u64).max(10)
}

/// Bisection on the phase interval: each iteration majority-votes M shots of
/// a rotated parity signal whose sign flips at the midpoint, then halves the
/// interval. Width after t iterations is exactly width0 / 2^t.
pub fn run_binary_search(cfg: &RunConfig) -> Result<BinarySearchResult, ProtocolError> {
    let s = cfg.search_settings()?;
    let code_variant = match cfg.protocol {
        ProtocolKind::BinarySearchGhz => false,
        ProtocolKind::BinarySearchCode => true,
        _ => {
            return Err(ProtocolError::Config(
                "protocol tag must be binary_search_ghz or binary_search_code".into(),
            ))
        }
    };
    let n_total = cfg.code.n * cfg.code.blocks;
    let nf = n_total as f64;
    let sigma = cfg.noise.sigma_eps;
    let omega = cfg.omega_true;
    let t_iters = (s.width / s.eps).log2().ceil() as u32;
    let noise = if sigma > 0.0 {
        Some(Normal::new(0.0, nf.sqrt() * sigma).expect("finite std dev"))
    } else {
        None
    };
    let tau = sigma.max(1e-6); // three-category deadband for the code variant

    let m = shots_for_decision(n_total, s.eps, sigma, t_iters, s.delta);
    let mut low = s.low;
    let mut width = s.width;
    let mut shots_per_iteration = Vec::with_capacity(t_iters as usize);
    let mut total_shots = 0u64;
    for t in 0..t_iters {
        let mid = low + 0.5 * width;
        let mut rng = stream_rng("binary_search", cfg.seed, 0, t as u64);
        let mut below_votes = 0u64;
        let mut voters = 0u64;
        for _ in 0..m {
            let shift = noise.as_ref().map_or(0.0, |d| d.sample(&mut rng));
            if code_variant {
                // Per-shot phase readout, classified against the deadband.
                let phi = nf * (omega - mid) + shift;
                match three_category(phi, tau)? {
                    Category::Low => below_votes += 1,
                    Category::High => {}
                    Category::Middle => continue,
                }
                voters += 1;
            } else {
                // Quarter-period-shifted parity: P(+1) > 1/2 iff omega < mid.
                let p_plus = 0.5 * (1.0 - (2.0 * nf * (omega - mid) + 2.0 * shift).sin());
                if rng.gen_bool(p_plus.clamp(0.0, 1.0)) {
                    below_votes += 1;
                }
                voters += 1;
            }
        }
        total_shots += m;
        shots_per_iteration.push(m);
        let keep_lower = 2 * below_votes > voters || voters == 0;
        let half = 0.5 * width;
        if !keep_lower {
            low += half;
        }
        width = half;
    }
    Ok(BinarySearchResult {
        estimate: low + 0.5 * width,
        iterations: t_iters,
        shots_per_iteration,
        total_shots,
        final_width: width,
    })
}
