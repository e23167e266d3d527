use serde::{Deserialize, Serialize};
use signal_core::{CodeShape, NoiseSpec};

use crate::ProtocolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    BareGhz,
    Bitflip,
    Combined,
    BinarySearchGhz,
    BinarySearchCode,
    Sequential,
    SqlBaseline,
    SqlBarrierProbe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PostSelection,
    FullLikelihood,
}

/// Extra knobs for the interval-search protocols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    pub low: f64,
    pub width: f64,
    pub eps: f64,
    pub delta: f64,
}

/// Extra knobs for the SQL baseline / barrier probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqlSettings {
    pub qubits: u32,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub protocol: ProtocolKind,
    pub seed: u64,
    #[serde(default = "default_omega")]
    pub omega_true: f64,
    pub eps_targets: Vec<f64>,
    pub budget_k: u64,
    pub mode: Mode,
    pub code: CodeShape,
    pub noise: NoiseSpec,
    pub grid_bits: u32,
    #[serde(default)]
    pub search: Option<SearchSettings>,
    #[serde(default)]
    pub sql: Option<SqlSettings>,
}

fn default_omega() -> f64 {
    0.3
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.budget_k < 1 {
            return Err(ProtocolError::Config("budget_K must be >= 1".into()));
        }
        if self.eps_targets.is_empty() {
            return Err(ProtocolError::Config("eps_targets must be non-empty".into()));
        }
        for pair in self.eps_targets.windows(2) {
            if pair[1] > pair[0] {
                return Err(ProtocolError::Config(
                    "eps_targets must be sorted descending".into(),
                ));
            }
        }
        if self.eps_targets.iter().any(|&e| !(e > 0.0)) {
            return Err(ProtocolError::Config("eps_targets must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn search_settings(&self) -> Result<SearchSettings, ProtocolError> {
        let s = self
            .search
            .ok_or_else(|| ProtocolError::Config("search settings required".into()))?;
        if !(s.width > 0.0) || !(s.eps > 0.0) || s.eps >= s.width {
            return Err(ProtocolError::Config(
                "search interval degenerate: need 0 < eps < width".into(),
            ));
        }
        if !(s.delta > 0.0 && s.delta < 1.0) {
            return Err(ProtocolError::Config("delta must be in (0,1)".into()));
        }
        Ok(s)
    }

    pub(crate) fn sql_settings(&self) -> Result<SqlSettings, ProtocolError> {
        let s = self
            .sql
            .ok_or_else(|| ProtocolError::Config("sql settings required".into()))?;
        if s.qubits == 0 || s.trials == 0 {
            return Err(ProtocolError::Config("sql qubits and trials must be >= 1".into()));
        }
        Ok(s)
    }
}

/// One simulated experiment, as logged to the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    /// Experiment counter within the eps target.
    pub index: u64,
    /// Probe size n (bare GHZ) or time multiplier M (code protocols).
    pub multiplier: u64,
    pub theta: f64,
    /// Decoded error weights per block (unused blocks stay 0).
    pub syndrome_d: [u32; 3],
    pub outcome: i8,
    pub accepted: bool,
    /// Qubit-time units: n for bare GHZ, N_total * M for code protocols.
    pub cost: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsOutcome {
    pub eps: f64,
    pub converged: bool,
    pub total_cost: u64,
    pub experiments: u64,
    pub estimate: f64,
    pub circular_error: f64,
    pub acceptance_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub targets: Vec<EpsOutcome>,
}

/// Transverse field reproducing a named noise level at the operating point:
/// calibrated so the per-qubit flip probability is ~5 * level^2, which matches
/// the reference post-selection acceptance rates for levels 1%/5%/10%.
pub fn gamma_for_noise_level(level: f64, omega: f64) -> f64 {
    5f64.sqrt() * level * omega / omega.sin()
}
