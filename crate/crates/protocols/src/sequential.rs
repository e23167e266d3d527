use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use signal_core::arctan_tan_pow;

use crate::config::{ProtocolKind, RunConfig};
use crate::rng::stream_rng;
use crate::ProtocolError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequentialResult {
    pub estimate: f64,
    pub rounds: u32,
    /// Signal applications summed over every attempt, rejected ones included.
    pub m_total: u64,
    pub attempts: u64,
    pub accepted_queries: u64,
}

/// Product-state ternary search: each round asks two threshold questions of
/// the amplified step signal, post-selecting syndrome outcomes with
/// k = N - 2j >= sqrt(N)/2 and retrying on rejection.
pub fn run_sequential(cfg: &RunConfig) -> Result<SequentialResult, ProtocolError> {
    let s = cfg.search_settings()?;
    if cfg.protocol != ProtocolKind::Sequential {
        return Err(ProtocolError::Config("protocol tag must be sequential".into()));
    }
    if cfg.noise.gamma_mean != 0.0 || cfg.noise.sigma_eps != 0.0 {
        return Err(ProtocolError::Config("sequential protocol assumes noiseless signals".into()));
    }
    let n = cfg.code.n;
    let nf = n as f64;
    let k_min = nf.sqrt() / 2.0;
    let omega = cfg.omega_true;

    let mut low = s.low;
    let mut width = s.width;
    let mut rounds = 0u32;
    let mut m_total = 0u64;
    let mut attempts = 0u64;
    let mut accepted_queries = 0u64;
    let mut query_counter = 0u64;

    let query = |tau: f64,
                     m_r: u64,
                     m_total: &mut u64,
                     attempts: &mut u64,
                     accepted: &mut u64,
                     counter: &mut u64|
     -> Result<bool, ProtocolError> {
        for _ in 0..100_000u32 {
            let mut rng = stream_rng("sequential", cfg.seed, 0, *counter);
            *counter += 1;
            *attempts += 1;
            *m_total += m_r;
            // Quarter-period offset puts the step of the amplified signal at tau.
            let phi = m_r as f64 * (omega - tau) + PI / 4.0;
            let p_flip = phi.sin().powi(2);
            let mut c = 0u32;
            for _ in 0..n {
                c += rng.gen_bool(p_flip) as u32;
            }
            let j = c.min(n - c);
            let k = n - 2 * j;
            if (k as f64) < k_min {
                continue; // rejected round: cost already charged
            }
            *accepted += 1;
            let theta_j = arctan_tan_pow(k, phi, 1.0);
            return Ok(rng.gen_bool(theta_j.sin().powi(2).clamp(0.0, 1.0)));
        }
        Err(ProtocolError::Config("post-selection never accepted a round".into()))
    };

    while width > 2.0 * s.eps {
        let m_r = ((3.0 * (1.0 / s.delta).ln()) / (width * nf.sqrt())).ceil().max(1.0) as u64;
        let b1 = query(low + width / 3.0, m_r, &mut m_total, &mut attempts, &mut accepted_queries, &mut query_counter)?;
        let b2 = query(low + 2.0 * width / 3.0, m_r, &mut m_total, &mut attempts, &mut accepted_queries, &mut query_counter)?;
        let half = 0.5 * width;
        match (b1, b2) {
            (false, false) => {}                 // below both: keep lower half
            (true, true) => low += half,         // above both: keep upper half
            _ => low += 0.5 * half,              // straddling: keep middle half
        }
        width = half;
        rounds += 1;
    }
    Ok(SequentialResult {
        estimate: low + 0.5 * width,
        rounds,
        m_total,
        attempts,
        accepted_queries,
    })
}
