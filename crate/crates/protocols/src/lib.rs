//! Runnable estimation protocols: bare GHZ, repetition-code variants,
//! interval searches, and SQL baselines.
//!
//! Every run is driven by a `RunConfig` and is bitwise deterministic: each
//! experiment owns a counter-derived RNG stream, so results do not depend on
//! batching or execution order. Runs emit a `RunResult` per eps target plus
//! a full `ShotRecord` ledger (rejected shots included — their cost counts).

mod bare;
mod binary_search;
mod bitflip;
mod combined;
mod config;
mod filter;
mod rng;
mod sequential;
mod sql;
mod syndrome;

use bayes_engine::BayesError;
use signal_core::SignalError;
use thiserror::Error;

pub use bare::run_bare_ghz;
pub use binary_search::{run_binary_search, shots_for_decision, BinarySearchResult};
pub use bitflip::run_bitflip;
pub use combined::run_combined;
pub use config::{
    gamma_for_noise_level, EpsOutcome, Mode, ProtocolKind, RunConfig, RunResult, SearchSettings,
    ShotRecord, SqlSettings,
};
pub use filter::{rejection_filter, FilterOutcome, TimedSyndrome};
pub use rng::stream_rng;
pub use sequential::{run_sequential, SequentialResult};
pub use sql::{run_sql_baseline, run_sql_barrier_probe, BarrierProbeResult, SqlBaselineResult};
pub use syndrome::{sample_flip_pattern, sample_syndrome, shot_flip_probs};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Bayes(#[from] BayesError),
    #[error(transparent)]
    Signal(#[from] SignalError),
}
