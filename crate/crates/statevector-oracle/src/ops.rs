use num_complex::Complex64;
use signal_core::CodeShape;

use crate::state::{DenseState, OracleError};

type C = Complex64;

/// Rotation about an axis in the XY plane:
/// e^{-i phi (cos(vartheta) X + sin(vartheta) Y)}.
pub fn rotation_xy(phi: f64, vartheta: f64) -> [[C; 2]; 2] {
    let (s, c) = phi.sin_cos();
    let mi = C::new(0.0, -1.0);
    [
        [C::new(c, 0.0), mi * s * C::new(0.0, -vartheta).exp()],
        [mi * s * C::new(0.0, vartheta).exp(), C::new(c, 0.0)],
    ]
}

/// The closed-form logical rotation cosΘ I - i sinΘ (cos(axis) X + sin(axis) Y).
pub fn logical_rotation(theta: f64, axis: f64) -> [[C; 2]; 2] {
    rotation_xy(theta, axis)
}

/// Global-phase-insensitive operator agreement: |Tr(A†B)|² / (‖A‖²‖B‖²).
pub fn trace_fidelity(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> f64 {
    let mut tr = C::new(0.0, 0.0);
    let mut na = 0.0;
    let mut nb = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            tr += a[i][j].conj() * b[i][j];
            na += a[i][j].norm_sqr();
            nb += b[i][j].norm_sqr();
        }
    }
    tr.norm_sqr() / (na * nb)
}

/// Per-column agreement of two 2x2 operators, each column up to its own
/// phase: min over columns of |<a_col, b_col>|² / (‖a_col‖²‖b_col‖²).
///
/// The syndrome-corrected logical operator equals the closed-form XY
/// rotation only up to a trailing diagonal phase e^{i j vartheta Z} on the
/// input, which is a global phase on each logical basis input separately.
pub fn column_fidelity(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> f64 {
    let mut worst = f64::INFINITY;
    for col in 0..2 {
        let dot = a[0][col].conj() * b[0][col] + a[1][col].conj() * b[1][col];
        let na = a[0][col].norm_sqr() + a[1][col].norm_sqr();
        let nb = b[0][col].norm_sqr() + b[1][col].norm_sqr();
        worst = worst.min(dot.norm_sqr() / (na * nb));
    }
    worst
}

/// One syndrome coset's (unnormalized) effective logical operator.
#[derive(Debug, Clone)]
pub struct LogicalBlock {
    pub pattern: u32,
    pub decoded_weight: u32,
    /// matrix[out][in] in the corrected logical basis.
    pub matrix: [[C; 2]; 2],
}

/// Enumerate the effective logical operator for every syndrome coset after
/// per-qubit rotation e^{-i phi (cos(vartheta) X + sin(vartheta) Y)} and
/// min-weight X correction. N <= 9.
pub fn syndrome_rotation_exact(
    n: u32,
    phi: f64,
    vartheta: f64,
) -> Result<Vec<LogicalBlock>, OracleError> {
    if n % 2 == 0 || n > 9 {
        return Err(OracleError::Domain(format!("N = {n} must be odd <= 9")));
    }
    let code = CodeShape::single((n - 1) / 2);
    let u = rotation_xy(phi, vartheta);
    let full: u32 = (1u32 << n) - 1;
    // Amplitude of output pattern p given logical input bit b: prod_k u[p_k][b].
    let amp = |p: u32, b: usize| -> C {
        let mut a = C::new(1.0, 0.0);
        for k in 0..n {
            a *= u[(p >> k & 1) as usize][b];
        }
        a
    };
    let mut out = Vec::new();
    for e in 0..=full {
        if e.count_ones() > code.l {
            continue;
        }
        // Logical basis of this coset after correction X^e: {|e>, |e^full>}.
        // Input |1_L> = |1...1> corresponds to b = 1 on every qubit.
        let matrix = [
            [amp(e, 0), amp(e, 1)],
            [amp(e ^ full, 0), amp(e ^ full, 1)],
        ];
        out.push(LogicalBlock { pattern: e, decoded_weight: e.count_ones(), matrix });
    }
    Ok(out)
}

/// Exact statevector run of the arctan protocol: apply e^{-i arccos(x) X} per
/// qubit to |0...0> and project onto the code space.
pub fn arctan_protocol_exact(l: u32, x: f64) -> Result<(f64, f64), OracleError> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(OracleError::Domain(format!("x = {x} outside [-1, 1]")));
    }
    let n = 2 * l + 1;
    if n > crate::MAX_QUBITS {
        return Err(OracleError::Capacity(n));
    }
    let angle = x.acos();
    let state = DenseState::zero(n)?
        .evolve_product(&vec![rotation_xy(angle, 0.0); n as usize])?;
    let a0 = state.amplitudes[0];
    let a1 = state.amplitudes[(1usize << n) - 1];
    let projection_prob = a0.norm_sqr() + a1.norm_sqr();
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let logical_angle = sign * a0.norm().atan2(a1.norm());
    Ok((projection_prob, logical_angle))
}

/// Closed form for the same quantities: projection probability
/// x^{2(2L+1)} + (1-x²)^{2L+1} and logical angle
/// (-1)^L arctan(x^{2L+1} / (1-x²)^{(2L+1)/2}).
pub fn arctan_protocol_closed_form(l: u32, x: f64) -> (f64, f64) {
    let n = (2 * l + 1) as i32;
    let one_minus = (1.0 - x * x).max(0.0);
    let projection_prob = x.abs().powi(2 * n) + one_minus.powi(n);
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let logical_angle = sign * x.abs().powi(n).atan2(one_minus.powf(n as f64 / 2.0));
    (projection_prob, logical_angle)
}
