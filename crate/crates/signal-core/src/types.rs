use serde::{Deserialize, Serialize};

use crate::error::SignalError;

/// Per-qubit field parameters H = ω Z + γ X + χ Y (radians per unit time).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitHamiltonian {
    pub omega: f64,
    pub gamma: f64,
    pub chi: f64,
}

impl QubitHamiltonian {
    pub fn new(omega: f64, gamma: f64, chi: f64) -> Self {
        Self { omega, gamma, chi }
    }

    /// Total field strength Ω = sqrt(ω² + γ² + χ²).
    pub fn total(&self) -> f64 {
        (self.omega * self.omega + self.gamma * self.gamma + self.chi * self.chi).sqrt()
    }
}

/// Decomposition of the unit-time evolution into a signal part and an
/// orthogonal error rotation: U = β e^{-iZφ} - i sqrt(1-β²) R(2Υ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationDecomposition {
    /// Signal amplitude in [0, 1]; 1 exactly when γ = χ = 0.
    pub beta: f64,
    /// Accumulated Z phase in (-π/2, π/2].
    pub phi: f64,
    /// Half-angle of the error axis in the XY plane.
    pub upsilon: f64,
}

/// Repetition-code geometry: the [2L+1, 1, 2L+1] code, possibly several
/// blocks of it for the combined protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeShape {
    pub l: u32,
    pub n: u32,
    pub blocks: u32,
}

impl CodeShape {
    pub fn new(l: u32, blocks: u32) -> Result<Self, SignalError> {
        if blocks == 0 {
            return Err(SignalError::CodeShape("blocks must be >= 1".into()));
        }
        Ok(Self { l, n: 2 * l + 1, blocks })
    }

    pub fn single(l: u32) -> Self {
        Self::new(l, 1).expect("blocks = 1")
    }

    /// Total physical qubits across all blocks.
    pub fn total_qubits(&self) -> u32 {
        self.n * self.blocks
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    Depolarizing,
    Hamiltonian,
}

/// Noise environment for a protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Std-dev of the per-qubit Z inhomogeneity ε_k (radians).
    pub sigma_eps: f64,
    /// Mean transverse field (radians) or mean depolarizing rate, per model.
    pub gamma_mean: f64,
    /// Relative std-dev h of per-qubit noise draws: γ_k ~ N(γ, (γh)²).
    pub heterogeneity_h: f64,
    pub model: NoiseModel,
}

impl NoiseSpec {
    pub fn noiseless(model: NoiseModel) -> Self {
        Self { sigma_eps: 0.0, gamma_mean: 0.0, heterogeneity_h: 0.0, model }
    }
}
