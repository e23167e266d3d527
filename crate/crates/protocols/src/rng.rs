use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Counter-based deterministic stream: every experiment gets its own RNG
/// keyed by (label, seed, eps index, experiment index), so runs are
/// reproducible shot-for-shot regardless of batching or parallel layout.
pub fn stream_rng(label: &str, seed: u64, eps_index: u32, experiment_index: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(label.as_bytes());
    hasher.update(seed.to_le_bytes());
    hasher.update(eps_index.to_le_bytes());
    hasher.update(experiment_index.to_le_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}
