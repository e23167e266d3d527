use rand::Rng;
use rand_distr::{Distribution, Normal};
use signal_core::{decompose, flip_probability, QubitHamiltonian};

/// Sample a flip pattern and return (raw flip count, decoded coset weight).
/// The decoder reports the minimum-weight coset representative, so the
/// decoded weight never exceeds floor(N/2); raw counts beyond that are
/// silently mis-reported, which is exactly the logical-failure channel.
pub fn sample_syndrome(probs: &[f64], rng: &mut impl Rng) -> (u32, u32) {
    let n = probs.len() as u32;
    let mut c = 0u32;
    for &p in probs {
        if rng.gen_bool(p) {
            c += 1;
        }
    }
    (c, c.min(n - c))
}

/// Like `sample_syndrome` but also reports which qubits flipped, for
/// protocols whose phase depends on the surviving qubit set.
pub fn sample_flip_pattern(probs: &[f64], rng: &mut impl Rng, flips: &mut Vec<bool>) -> u32 {
    flips.clear();
    let mut c = 0u32;
    for &p in probs {
        let f = rng.gen_bool(p);
        c += f as u32;
        flips.push(f);
    }
    c
}

/// Per-qubit flip probabilities for a shot: heterogeneous transverse fields
/// gamma_k ~ Normal(gamma, (gamma h)^2) clipped to [0, 0.99], pushed through
/// the single-qubit decomposition at the true phase.
pub fn shot_flip_probs(
    omega: f64,
    gamma: f64,
    h: f64,
    count: usize,
    rng: &mut impl Rng,
    out: &mut Vec<f64>,
) {
    out.clear();
    if gamma == 0.0 {
        out.resize(count, 0.0);
        return;
    }
    if h == 0.0 {
        let p = flip_probability(decompose(QubitHamiltonian { omega, gamma, chi: 0.0 }));
        out.resize(count, p);
        return;
    }
    let dist = Normal::new(gamma, gamma * h).expect("finite std dev");
    for _ in 0..count {
        let g = dist.sample(rng).clamp(0.0, 0.99);
        out.push(flip_probability(decompose(QubitHamiltonian { omega, gamma: g, chi: 0.0 })));
    }
}
