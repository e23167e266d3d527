//! Closed-form signal models for encoded phase estimation.
//!
//! Everything in this crate is a pure function of its arguments: rotation
//! decompositions of single-qubit Hamiltonians, the phase amplification
//! function and its syndrome-conditioned generalizations, GHZ parity
//! statistics, shot likelihoods for the repetition-code protocols, and the
//! small statistical helpers (KL divergence, three-category classifier)
//! used by the adaptive search protocols.
//!
//! No randomness, no state. The statevector oracle crate validates these
//! formulas against brute-force simulation; the protocol crate consumes
//! them on the hot path.

mod amplify;
mod decompose;
mod error;
mod likelihood;
mod types;

pub use amplify::{
    arctan_tan_pow, effective_axis, phase_amplification, phase_amplification_derivative,
    syndrome_rotation_angle,
};
pub use decompose::decompose;
pub use error::SignalError;
pub use likelihood::{
    bitflip_shot_likelihood, flip_probability, ghz_parity_prob, hetero_expected_flip_prob,
    kl_half_vs_p, marginalized_parity_prob, qsp_activation, subset_phase, three_category,
    Category,
};
pub use types::{CodeShape, NoiseModel, NoiseSpec, QubitHamiltonian, RotationDecomposition};
