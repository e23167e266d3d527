//! The phase amplification function Φ_N and its syndrome-conditioned
//! relatives, all computed in log-magnitude form so that tan^N stays finite
//! for N up to the sweep sizes (~10^4).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::SignalError;

/// arctan(sign_factor · tan^k(ω)), overflow-safe.
///
/// The magnitude is exp(k·ln|tan ω|); when the exponent overflows, the
/// arctan saturates to ±π/2 on its own (atan(±inf) = ±π/2), and underflow
/// collapses to 0, so no explicit clamping is needed beyond the exp.
pub fn arctan_tan_pow(k: u32, omega: f64, sign_factor: f64) -> f64 {
    let t = omega.tan();
    if t == 0.0 || k == 0 {
        return if k == 0 { sign_factor.signum().atan() } else { 0.0 };
    }
    let log_mag = k as f64 * t.abs().ln();
    let sign = if k % 2 == 1 { t.signum() } else { 1.0 } * sign_factor.signum();
    (sign * log_mag.exp()).atan()
}

fn check_half_open(omega: f64) -> Result<(), SignalError> {
    if !omega.is_finite() || omega.abs() >= FRAC_PI_2 {
        return Err(SignalError::domain(format!(
            "omega = {omega} outside (-pi/2, pi/2)"
        )));
    }
    Ok(())
}

fn check_odd(n: u32) -> Result<u32, SignalError> {
    if n % 2 == 0 || n == 0 {
        return Err(SignalError::domain(format!("N = {n} must be odd >= 1")));
    }
    Ok((n - 1) / 2)
}

/// Φ_N(ω) = arctan((-1)^L tan^N ω) for N = 2L+1.
pub fn phase_amplification(n: u32, omega: f64) -> Result<f64, SignalError> {
    let l = check_odd(n)?;
    check_half_open(omega)?;
    let sign_factor = if l % 2 == 0 { 1.0 } else { -1.0 };
    Ok(arctan_tan_pow(n, omega, sign_factor))
}

/// dΦ_N/dω = (-1)^L N tan^{N-1}(ω) sec²(ω) / (1 + tan^{2N}(ω)).
///
/// Evaluated as N·exp((N-1)·ln|t| - 2·ln|cos ω| - ln(1 + t^{2N})) with the
/// last term via ln1p in log space; the overall sign is (-1)^L since the
/// tan power is even.
pub fn phase_amplification_derivative(n: u32, omega: f64) -> Result<f64, SignalError> {
    let l = check_odd(n)?;
    check_half_open(omega)?;
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let t = omega.tan();
    if t == 0.0 {
        // tan^{N-1}(0) = 0 for N >= 3; for N = 1 the derivative is 1.
        return Ok(if n == 1 { sign } else { 0.0 });
    }
    let log_t = t.abs().ln();
    let log_num = (n as f64 - 1.0) * log_t - 2.0 * omega.cos().abs().ln();
    let e2n = 2.0 * n as f64 * log_t;
    let log_den = if e2n > 700.0 { e2n } else { e2n.exp().ln_1p() };
    Ok(sign * n as f64 * (log_num - log_den).exp())
}

/// Θ_j = arctan(tan^{N-2j}(φ)): logical rotation angle after decoding j
/// errors. Exact pass-through when N-2j = 1.
pub fn syndrome_rotation_angle(n: u32, j: u32, phi: f64) -> Result<f64, SignalError> {
    let l = check_odd(n)?;
    if j > l {
        return Err(SignalError::domain(format!(
            "decoded weight j = {j} exceeds L = {l}"
        )));
    }
    check_half_open(phi)?;
    let k = n - 2 * j;
    if k == 1 {
        return Ok(phi);
    }
    Ok(arctan_tan_pow(k, phi, 1.0))
}

/// ϑ_eff = (N-2j)ϑ + (L-j)π, reduced into [0, 2π).
pub fn effective_axis(n: u32, j: u32, vartheta: f64) -> Result<f64, SignalError> {
    let l = check_odd(n)?;
    if j > l {
        return Err(SignalError::domain(format!(
            "decoded weight j = {j} exceeds L = {l}"
        )));
    }
    let raw = (n - 2 * j) as f64 * vartheta + (l - j) as f64 * PI;
    let mut reduced = raw.rem_euclid(2.0 * PI);
    if reduced >= 2.0 * PI {
        reduced = 0.0;
    }
    Ok(reduced)
}
