//! Dense brute-force statevector simulator (N <= 14 qubits).
//!
//! This crate exists to validate the closed forms in `signal-core` and the
//! protocol shot models: it is never on a sweep hot path. Everything is
//! computed by explicit tensor-product evolution and projector algebra.

mod ops;
mod state;

pub use ops::{
    arctan_protocol_closed_form, arctan_protocol_exact, column_fidelity, logical_rotation,
    rotation_xy, syndrome_rotation_exact, trace_fidelity, LogicalBlock,
};
pub use state::{DenseState, OracleError, SubsetAmplitude, SyndromeOutcome, MAX_QUBITS};

use num_complex::Complex64;

/// Z rotation e^{-i omega Z} as a 2x2 matrix.
pub fn rotation_z(omega: f64) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::new(0.0, -omega).exp(), zero],
        [zero, Complex64::new(0.0, omega).exp()],
    ]
}

/// X rotation e^{-i omega X} as a 2x2 matrix.
pub fn rotation_x(omega: f64) -> [[Complex64; 2]; 2] {
    rotation_xy(omega, 0.0)
}
