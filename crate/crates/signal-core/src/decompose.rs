use std::f64::consts::{FRAC_PI_2, PI};

use crate::types::{QubitHamiltonian, RotationDecomposition};

/// Fold an angle into (-π/2, π/2] by shifting multiples of π.
fn fold_half_period(mut x: f64) -> f64 {
    x = x.rem_euclid(PI);
    if x > FRAC_PI_2 {
        x -= PI;
    }
    x
}

/// Split the unit-time evolution of H = ωZ + γX + χY into a Z-phase signal
/// part and an orthogonal error rotation:
///
///   U = β e^{-iZφ} - i sqrt(1-β²) (cos(2Υ) X + sin(2Υ) Y)·(phase)
///
/// with β = sqrt(cos²Ω + sin²Ω·ω²/Ω²), φ = arctan(tanΩ·ω/Ω) and
/// Υ = atan2(χ, γ)/2. The φ branch is computed with atan2 (so cosΩ → 0 is
/// harmless) and folded back into (-π/2, π/2].
pub fn decompose(h: QubitHamiltonian) -> RotationDecomposition {
    if h.gamma == 0.0 && h.chi == 0.0 {
        // Pure Z rotation: β = 1 and φ = ω exactly (mod π).
        return RotationDecomposition { beta: 1.0, phi: fold_half_period(h.omega), upsilon: 0.0 };
    }
    let total = h.total();
    if total == 0.0 {
        return RotationDecomposition { beta: 1.0, phi: 0.0, upsilon: 0.0 };
    }
    let (sin_t, cos_t) = total.sin_cos();
    let z_frac = h.omega / total;
    let beta = (cos_t * cos_t + sin_t * sin_t * z_frac * z_frac).sqrt().clamp(0.0, 1.0);
    let phi = fold_half_period((sin_t * z_frac).atan2(cos_t));
    let upsilon = 0.5 * h.chi.atan2(h.gamma);
    RotationDecomposition { beta, phi, upsilon }
}
