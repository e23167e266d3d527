//! Grid-based Bayesian posterior over a periodic phase domain.
//!
//! The posterior lives on 2^m cell-left-edge points ω_j = j·period/2^m and
//! is maintained in log space: after every update the maximum log weight is
//! shifted to zero and everything is floored at -745 so nothing propagates
//! to -inf. Updates are pointwise multiplications, so sequential updating
//! and batch MLE finalization give the same argmax.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BayesError {
    #[error("grid bits m = {0} outside [4, 24]")]
    BadGridBits(u32),
    #[error("period must be positive, got {0}")]
    BadPeriod(f64),
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    #[error("no records supplied")]
    EmptyRecords,
}

/// Floor for log weights; below this a cell is effectively dead.
pub const LOG_FLOOR: f64 = -745.0;

#[derive(Debug, Clone)]
pub struct PosteriorGrid {
    pub bits: u32,
    pub period: f64,
    pub log_weights: Vec<f64>,
}

/// One sinusoidal-likelihood shot: P(outcome | ω) =
/// ½(1 + outcome·visibility·cos(freq·ω - theta)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicShot {
    pub freq: f64,
    pub theta: f64,
    pub visibility: f64,
    /// +1 or -1.
    pub outcome: i8,
}

impl HarmonicShot {
    pub fn likelihood(&self, omega: f64) -> f64 {
        0.5 * (1.0 + self.outcome as f64 * self.visibility * (self.freq * omega - self.theta).cos())
    }
}

pub fn init_uniform(bits: u32, period: f64) -> Result<PosteriorGrid, BayesError> {
    if !(4..=24).contains(&bits) {
        return Err(BayesError::BadGridBits(bits));
    }
    if !(period > 0.0 && period.is_finite()) {
        return Err(BayesError::BadPeriod(period));
    }
    Ok(PosteriorGrid { bits, period, log_weights: vec![0.0; 1 << bits] })
}

impl PosteriorGrid {
    pub fn point(&self, index: usize) -> f64 {
        index as f64 * self.period / (1u64 << self.bits) as f64
    }

    pub fn cell_width(&self) -> f64 {
        self.period / (1u64 << self.bits) as f64
    }

    fn renormalize(&mut self) -> Result<(), BayesError> {
        let max = self.log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(BayesError::Degenerate(
                "all grid cells have zero posterior weight".into(),
            ));
        }
        for w in &mut self.log_weights {
            *w = (*w - max).max(LOG_FLOOR);
        }
        Ok(())
    }
}

/// Multiply the posterior by an arbitrary likelihood row.
pub fn update(
    grid: &mut PosteriorGrid,
    likelihood: impl Fn(f64) -> f64,
) -> Result<(), BayesError> {
    for j in 0..grid.log_weights.len() {
        let p = likelihood(grid.point(j));
        debug_assert!((0.0..=1.0 + 1e-12).contains(&p), "likelihood {p} out of [0,1]");
        grid.log_weights[j] += if p > 0.0 { p.ln() } else { f64::NEG_INFINITY };
    }
    grid.renormalize()
}

/// Multiply the posterior by a batch of harmonic shots.
///
/// Same semantics as calling `update` per shot (up to fp rounding), but the
/// cosines come from a complex-rotation recurrence and the per-cell products
/// are accumulated in linear space with a single log per sub-batch, which is
/// what makes desk-scale sweeps affordable.
pub fn update_harmonics(grid: &mut PosteriorGrid, shots: &[HarmonicShot]) -> Result<(), BayesError> {
    let len = grid.log_weights.len();
    let delta = grid.cell_width();
    let mut acc = vec![1.0f64; len];
    for (i, chunk) in shots.chunks(64).enumerate() {
        if i > 0 {
            acc.iter_mut().for_each(|a| *a = 1.0);
        }
        for shot in chunk {
            let ov = shot.outcome as f64 * shot.visibility;
            let (step_s, step_c) = (shot.freq * delta).sin_cos();
            let (mut zs, mut zc) = (-shot.theta).sin_cos();
            for a in acc.iter_mut() {
                *a *= 0.5 * (1.0 + ov * zc);
                let nc = zc * step_c - zs * step_s;
                zs = zc * step_s + zs * step_c;
                zc = nc;
            }
        }
        for (w, a) in grid.log_weights.iter_mut().zip(&acc) {
            *w += if *a > 0.0 { a.ln() } else { f64::NEG_INFINITY };
        }
    }
    grid.renormalize()
}

/// Grid point carrying the maximum log weight; ties break to lowest index.
pub fn map_estimate(grid: &PosteriorGrid) -> f64 {
    let mut best = 0usize;
    for (j, w) in grid.log_weights.iter().enumerate() {
        if *w > grid.log_weights[best] {
            best = j;
        }
    }
    grid.point(best)
}

/// min over wraps of |a - b + n·period|, in [0, period/2].
pub fn circular_error(a: f64, b: f64, period: f64) -> f64 {
    let r = (a - b).rem_euclid(period);
    r.min(period - r)
}

/// Convergence rule: circular MAP error below 1.2·eps (strict), measured
/// modulo the protocol's identifiability period.
pub fn converged(grid: &PosteriorGrid, omega_true: f64, eps: f64, ident_period: f64) -> bool {
    circular_error(map_estimate(grid), omega_true, ident_period) < 1.2 * eps
}

/// Batch MLE over a record ledger: argmax of the product likelihood,
/// realized as a fold of `update` so it is bit-identical to sequential MAP.
pub fn mle_finalize<R>(
    records: &[R],
    likelihood: impl Fn(&R, f64) -> f64,
    bits: u32,
    period: f64,
) -> Result<f64, BayesError> {
    if records.is_empty() {
        return Err(BayesError::EmptyRecords);
    }
    let mut grid = init_uniform(bits, period)?;
    for r in records {
        update(&mut grid, |w| likelihood(r, w))?;
    }
    Ok(map_estimate(&grid))
}
