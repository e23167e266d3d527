use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::stream_rng;
use crate::ProtocolError;

/// A recorded experiment at continuous evolution time t with decoded
/// syndrome weight d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedSyndrome {
    pub t: f64,
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub accepted: Vec<TimedSyndrome>,
    /// Records skipped because Pr(d|t) vanished.
    pub skipped_zero_prob: u64,
    /// Records whose acceptance probability saturated at 1 (P_min chosen too
    /// large to keep the accepted-time marginal exactly flat).
    pub clamped: u64,
}

fn binomial_pmf(n: u32, p: f64, d: u32) -> f64 {
    let mut binom = 1.0f64;
    for j in 0..d {
        binom *= (n - j) as f64 / (j + 1) as f64;
    }
    binom * p.powi(d as i32) * (1.0 - p).powi((n - d) as i32)
}

/// Importance-style rejection filter: keep a record (t, d) with d <= d_max
/// with probability P_min / (Pr(d|t) (d_max+1)), so that accepted times are
/// uniform on the time range regardless of how Pr(d|t) tilts the raw sample.
pub fn rejection_filter(
    records: &[TimedSyndrome],
    n: u32,
    p_of_t: impl Fn(f64) -> f64,
    d_max: u32,
    p_min: f64,
    seed: u64,
) -> Result<FilterOutcome, ProtocolError> {
    if !(p_min > 0.0 && p_min <= 1.0) {
        return Err(ProtocolError::Config("P_min must be in (0, 1]".into()));
    }
    let mut rng = stream_rng("rejection_filter", seed, 0, 0);
    let mut out = FilterOutcome { accepted: Vec::new(), skipped_zero_prob: 0, clamped: 0 };
    for &rec in records {
        if rec.d > d_max {
            continue;
        }
        let pr = binomial_pmf(n, p_of_t(rec.t), rec.d);
        if pr <= 0.0 {
            out.skipped_zero_prob += 1;
            continue;
        }
        let mut accept_prob = p_min / (pr * (d_max + 1) as f64);
        if accept_prob > 1.0 {
            out.clamped += 1;
            accept_prob = 1.0;
        }
        if rng.gen_bool(accept_prob) {
            out.accepted.push(rec);
        }
    }
    Ok(out)
}
