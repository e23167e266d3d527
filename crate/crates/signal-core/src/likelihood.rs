use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::amplify::arctan_tan_pow;
use crate::error::SignalError;
use crate::types::RotationDecomposition;

/// P(+1) for an X-parity measurement on an N-qubit GHZ branch pair that
/// accumulated total phase Nω + S: cos²(Nω + S).
pub fn ghz_parity_prob(n: u32, omega: f64, s: f64) -> f64 {
    (n as f64 * omega + s).cos().powi(2)
}

/// GHZ parity probability marginalized over S ~ Normal(0, Nσ²):
/// ½(1 + cos(2Nω)·e^{-2Nσ²}).
pub fn marginalized_parity_prob(n: u32, omega: f64, sigma_eps: f64) -> f64 {
    let nf = n as f64;
    0.5 * (1.0 + (2.0 * nf * omega).cos() * (-2.0 * nf * sigma_eps * sigma_eps).exp())
}

/// Shot likelihood for the bit-flip-code protocol with decoded weight d,
/// time multiplier M and rotation θ:
///
///   P(+1) = ½(1 + cos((N-d)·M·φ - θ)) = cos²(((N-d)·M·φ - θ)/2)
///
/// All shot likelihoods in this crate use the cos² convention internally;
/// this form realizes it with θ absorbing the factor of two (the stored θ
/// is the full offset of the undoubled cosine argument, i.e. the cos² is
/// taken of half the argument). P(-1) is the complement.
pub fn bitflip_shot_likelihood(n: u32, d: u32, m: u64, theta: f64, phi: f64) -> f64 {
    debug_assert!(d <= n && m >= 1);
    let x = ((n - d) as f64 * m as f64 * phi - theta) / 2.0;
    x.cos().powi(2)
}

/// Per-qubit X-flip probability p = 1 - β².
pub fn flip_probability(d: RotationDecomposition) -> f64 {
    (1.0 - d.beta * d.beta).clamp(0.0, 1.0)
}

/// Leading-order expectation of the flip probability over heterogeneous
/// draws γ_k ~ Normal(γ, (γh)²): sin²(ω)/ω² · γ²(1 + h²).
///
/// The boolean flags that the small-γ expansion is degrading
/// (γ(1+h)/ω > 0.3).
pub fn hetero_expected_flip_prob(omega: f64, gamma: f64, h: f64) -> (f64, bool) {
    let sinc = if omega == 0.0 { 1.0 } else { omega.sin() / omega };
    let value = sinc * sinc * gamma * gamma * (1.0 + h * h);
    let warn = omega != 0.0 && (gamma * (1.0 + h) / omega).abs() > 0.3;
    (value, warn)
}

/// Post-selected QSP activation of the repetition code: the logical angle
/// Φ_N(φ) together with the success probability cos^{2N}φ + sin^{2N}φ.
pub fn qsp_activation(n: u32, phi: f64) -> Result<(f64, f64), SignalError> {
    if n % 2 == 0 || n == 0 {
        return Err(SignalError::domain(format!("N = {n} must be odd >= 1")));
    }
    if !phi.is_finite() {
        return Err(SignalError::domain("phi must be finite"));
    }
    let l = (n - 1) / 2;
    let sign_factor = if l % 2 == 0 { 1.0 } else { -1.0 };
    let angle = arctan_tan_pow(n, phi, sign_factor);
    let (s, c) = phi.sin_cos();
    let success = c.abs().powi(2 * n as i32) + s.abs().powi(2 * n as i32);
    Ok((angle, success))
}

/// Post-measurement logical phase for subset S of flipped qubits:
///
///   φ_S = arctan((-1)^{L+|S|} ∏_{k∈S} tan ω_k ∏_{j∉S} cot ω_j)
///
/// computed in log-magnitude form; tan²(φ_S) = P(S)/P(S̄).
pub fn subset_phase(omega_list: &[f64], subset: &[usize]) -> Result<f64, SignalError> {
    let n = omega_list.len();
    let l = (n.saturating_sub(1)) / 2;
    let mut in_subset = vec![false; n];
    for &k in subset {
        if k >= n {
            return Err(SignalError::domain(format!("subset index {k} out of range")));
        }
        in_subset[k] = true;
    }
    let mut log_mag = 0.0;
    let mut sign = if (l + subset.len()) % 2 == 0 { 1.0 } else { -1.0 };
    for (k, &w) in omega_list.iter().enumerate() {
        if (w - (w / FRAC_PI_2).round() * FRAC_PI_2).abs() < 1e-12 {
            return Err(SignalError::domain(format!(
                "omega[{k}] = {w} at a multiple of pi/2"
            )));
        }
        let t = w.tan();
        sign *= t.signum();
        if in_subset[k] {
            log_mag += t.abs().ln();
        } else {
            log_mag -= t.abs().ln();
        }
    }
    Ok((sign * log_mag.exp()).atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Low,
    Middle,
    High,
}

/// Three-category threshold classifier: High iff φ > τ, Low iff φ < -τ,
/// Middle otherwise (boundary values are Middle).
pub fn three_category(phi_sample: f64, tau: f64) -> Result<Category, SignalError> {
    if !(tau > 0.0 && tau < FRAC_PI_4) {
        return Err(SignalError::domain(format!("tau = {tau} outside (0, pi/4)")));
    }
    Ok(if phi_sample > tau {
        Category::High
    } else if phi_sample < -tau {
        Category::Low
    } else {
        Category::Middle
    })
}

/// Binary KL divergence D(½ ‖ p) = -½ ln(4p(1-p)); +∞ at p ∈ {0, 1}.
pub fn kl_half_vs_p(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if p <= 0.0 || p >= 1.0 {
        return f64::INFINITY;
    }
    -0.5 * (4.0 * p * (1.0 - p)).ln()
}
