//! Fisher-information and Cramér-Rao calculators.
//!
//! Everything here reduces to classical Fisher information of a concrete
//! two-outcome measurement; there is no SLD machinery.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FisherError {
    #[error("singular point: p(omega) = {0} is not in (0, 1)")]
    SingularPoint(f64),
    #[error("N must be odd, got {0}")]
    EvenN(u32),
    #[error("flip probability {0} outside [0, 1)")]
    BadFlipProb(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiMethod {
    Analytic,
    FiniteDifference,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherReport {
    /// Fisher information, 1/radians^2.
    pub value: f64,
    pub method: FiMethod,
    pub operating_point: f64,
}

fn two_outcome_fi(p: f64, dp: f64) -> Result<f64, FisherError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(FisherError::SingularPoint(p));
    }
    Ok(dp * dp * (1.0 / p + 1.0 / (1.0 - p)))
}

/// Two-outcome classical Fisher information with the derivative taken by
/// central finite difference, step h = max(1e-6, 1e-8|omega|).
pub fn classical_fi_binary(
    prob_fn: impl Fn(f64) -> f64,
    omega: f64,
) -> Result<FisherReport, FisherError> {
    let h = 1e-6f64.max(1e-8 * omega.abs());
    let dp = (prob_fn(omega + h) - prob_fn(omega - h)) / (2.0 * h);
    Ok(FisherReport {
        value: two_outcome_fi(prob_fn(omega), dp)?,
        method: FiMethod::FiniteDifference,
        operating_point: omega,
    })
}

/// Same as `classical_fi_binary` but with a caller-supplied analytic dp/domega.
pub fn classical_fi_analytic(
    prob_fn: impl Fn(f64) -> f64,
    dprob_fn: impl Fn(f64) -> f64,
    omega: f64,
) -> Result<FisherReport, FisherError> {
    Ok(FisherReport {
        value: two_outcome_fi(prob_fn(omega), dprob_fn(omega))?,
        method: FiMethod::Analytic,
        operating_point: omega,
    })
}

/// Score-function Monte-Carlo FI estimate: draws outcomes from Bernoulli(p)
/// and averages the squared analytic log-likelihood derivative.
pub fn mc_fi_binary(
    prob_fn: impl Fn(f64) -> f64,
    dprob_fn: impl Fn(f64) -> f64,
    omega: f64,
    samples: u64,
    seed: u64,
) -> Result<FisherReport, FisherError> {
    let p = prob_fn(omega);
    if !(p > 0.0 && p < 1.0) {
        return Err(FisherError::SingularPoint(p));
    }
    let dp = dprob_fn(omega);
    let (score_one, score_zero) = (dp / p, -dp / (1.0 - p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for _ in 0..samples {
        let s = if rng.gen_bool(p) { score_one } else { score_zero };
        sum += s * s;
    }
    Ok(FisherReport {
        value: sum / samples as f64,
        method: FiMethod::MonteCarlo,
        operating_point: omega,
    })
}

/// Total FI of N independent single-qubit probes averaged over random X
/// corrections: the exact binomial moment sum 4 sum_j C(N,j) 2^-N (N-2j)^2,
/// which collapses to 4N.
pub fn sql_barrier_total(n: u32) -> Result<FisherReport, FisherError> {
    if n % 2 == 0 {
        return Err(FisherError::EvenN(n));
    }
    // Integer moment sum keeps the collapse to 4N floating-point exact.
    let mut total: u128 = 0;
    let mut binom: u128 = 1; // C(N, j), updated multiplicatively
    for j in 0..=n {
        let k = (n as i128 - 2 * j as i128).unsigned_abs();
        total += binom * 4 * k * k;
        binom = binom * (n - j) as u128 / (j + 1) as u128;
    }
    Ok(FisherReport {
        value: total as f64 / (1u64 << n) as f64,
        method: FiMethod::Analytic,
        operating_point: 0.0,
    })
}

/// Exact Poisson-binomial distribution of the flip count over per-qubit
/// probabilities, by O(N^2) dynamic-programming convolution.
pub fn flip_count_distribution(probs: &[f64]) -> Result<Vec<f64>, FisherError> {
    let mut dist = vec![0.0; probs.len() + 1];
    dist[0] = 1.0;
    for (k, &p) in probs.iter().enumerate() {
        if !(0.0..1.0).contains(&p) {
            return Err(FisherError::BadFlipProb(p));
        }
        for c in (0..=k).rev() {
            dist[c + 1] += dist[c] * p;
            dist[c] *= 1.0 - p;
        }
    }
    Ok(dist)
}

/// QFI of the encoded probe with per-qubit flip probabilities:
/// 4 E[(N - d)^2] with d the Poisson-binomial flip count.
pub fn bitflip_qfi(n: u32, per_qubit_flip_probs: &[f64]) -> Result<FisherReport, FisherError> {
    assert_eq!(per_qubit_flip_probs.len(), n as usize, "need one flip prob per qubit");
    let dist = flip_count_distribution(per_qubit_flip_probs)?;
    let value = dist
        .iter()
        .enumerate()
        .map(|(d, pr)| {
            let k = n as f64 - d as f64;
            4.0 * k * k * pr
        })
        .sum();
    Ok(FisherReport { value, method: FiMethod::Analytic, operating_point: 0.0 })
}

/// Cramér-Rao variance lower bound 1/(M F); F <= 0 maps to the infinite
/// sentinel rather than an error.
pub fn cramer_rao_bound(fisher: f64, m_measurements: u64) -> f64 {
    assert!(m_measurements >= 1);
    if fisher <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / (m_measurements as f64 * fisher)
    }
}
