//! Multi-seed, multi-eps sweep orchestration: runs the Bayesian estimation
//! protocols over a precision grid, fits the resource scaling exponent
//! T ~ eps^(-alpha), aggregates across seeds, and checks the result against
//! the embedded reference tables.
//!
//! Sweeps parallelize over seeds (the combined protocol freezes device
//! offsets per seed, so a seed is the natural work unit); row order in the
//! output table is independent of scheduling, and reruns are byte-identical.

use protocols::{
    run_bare_ghz, run_bitflip, run_combined, Mode, ProtocolKind, RunConfig, RunResult,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("insufficient data: need at least {needed} converged points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("degenerate fit: all abscissae coincide")]
    DegenerateFit,
    #[error("no reference row matches configuration: {0}")]
    UnmatchedReference(String),
    #[error(transparent)]
    Protocol(#[from] protocols::ProtocolError),
}

/// Logarithmically spaced grid from `hi` down to `lo` (descending, as the
/// run configs require).
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, SweepError> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return Err(SweepError::Plan("log grid needs 0 < lo < hi and >= 2 points".into()));
    }
    let (la, lb) = (hi.ln(), lo.ln());
    Ok((0..count)
        .map(|i| (la + (lb - la) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub seeds: Vec<u64>,
    pub eps_grid: Vec<f64>,
    pub template: RunConfig,
}

impl SweepPlan {
    /// Desk scale: 10 seeds, 30 targets in [1e-3, 1e-1]. Minutes, not hours.
    pub fn desk(template: RunConfig) -> Result<Self, SweepError> {
        Ok(Self { seeds: (2..12).collect(), eps_grid: log_grid(1e-3, 1e-1, 30)?, template })
    }

    /// Full scale: 40 seeds, 60 targets down to 1e-4.
    pub fn paper(template: RunConfig) -> Result<Self, SweepError> {
        Ok(Self { seeds: (2..42).collect(), eps_grid: log_grid(1e-4, 1e-1, 60)?, template })
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.seeds.is_empty() {
            return Err(SweepError::Plan("seed range is empty".into()));
        }
        if self.eps_grid.len() < 2 {
            return Err(SweepError::Plan("eps grid needs >= 2 points".into()));
        }
        for pair in self.eps_grid.windows(2) {
            if !(pair[1] < pair[0] && pair[1] > 0.0) {
                return Err(SweepError::Plan("eps grid must be positive and descending".into()));
            }
        }
        match self.template.protocol {
            ProtocolKind::BareGhz | ProtocolKind::Bitflip | ProtocolKind::Combined => Ok(()),
            other => Err(SweepError::Plan(format!(
                "protocol {} is not sweepable (no per-eps Bayesian run)",
                enum_label(&other)
            ))),
        }
    }

    /// Hash of the fully-resolved plan, stamped into CSV metadata so outputs
    /// are traceable to their configuration.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("plan serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// One (seed, eps) result row; mirrors the CSV schema exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub seed: u64,
    pub protocol: ProtocolKind,
    pub mode: Mode,
    pub l: u32,
    pub gamma: f64,
    pub sigma_eps: f64,
    pub eps: f64,
    pub converged: bool,
    pub t: u64,
    pub experiments: u64,
    pub estimate: f64,
    pub circ_error: f64,
    pub acceptance: f64,
}

fn enum_label<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("enum serializes").trim_matches('"').to_string()
}

fn seed_rows(plan: &SweepPlan, seed: u64) -> Vec<SweepRow> {
    let mut cfg = plan.template.clone();
    cfg.seed = seed;
    cfg.eps_targets = plan.eps_grid.clone();
    let outcome: Result<RunResult, _> = match cfg.protocol {
        ProtocolKind::BareGhz => run_bare_ghz(&cfg).map(|(r, _)| r),
        ProtocolKind::Bitflip => run_bitflip(&cfg).map(|(r, _)| r),
        ProtocolKind::Combined => run_combined(&cfg).map(|(r, _)| r),
        _ => unreachable!("plan validated"),
    };
    let base = |eps: f64| SweepRow {
        seed,
        protocol: cfg.protocol,
        mode: cfg.mode,
        l: cfg.code.l,
        gamma: cfg.noise.gamma_mean,
        sigma_eps: cfg.noise.sigma_eps,
        eps,
        converged: false,
        t: 0,
        experiments: 0,
        estimate: f64::NAN,
        circ_error: f64::NAN,
        acceptance: 0.0,
    };
    match outcome {
        Ok(result) => result
            .targets
            .iter()
            .map(|t| SweepRow {
                converged: t.converged,
                t: t.total_cost,
                experiments: t.experiments,
                estimate: t.estimate,
                circ_error: t.circular_error,
                acceptance: t.acceptance_rate,
                ..base(t.eps)
            })
            .collect(),
        Err(e) => {
            // Isolate the failure: keep the row count invariant, flag the rows.
            eprintln!("sweep: seed {seed} failed: {e}");
            plan.eps_grid.iter().map(|&eps| base(eps)).collect()
        }
    }
}

/// Run every (seed, eps) cell of the plan. Deterministic given the plan:
/// rows come out ordered by seed then descending eps, and the count is
/// always |seeds| * |eps_grid|.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>, SweepError> {
    plan.validate()?;
    plan.template.validate()?;
    let per_seed: Vec<Vec<SweepRow>> =
        plan.seeds.par_iter().map(|&seed| seed_rows(plan, seed)).collect();
    Ok(per_seed.into_iter().flatten().collect())
}

pub const CSV_HEADER: &str =
    "seed,protocol,mode,L,gamma,sigma_eps,eps,converged,T,experiments,estimate,circ_error,acceptance";

/// Serialize rows to CSV with a metadata comment line carrying the config
/// hash. `{}` float formatting is shortest-roundtrip, so equal plans give
/// byte-identical output.
pub fn rows_to_csv(rows: &[SweepRow], config_hash: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("# eqsp sweep v1 config_hash={config_hash}\n"));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.seed,
            enum_label(&r.protocol),
            enum_label(&r.mode),
            r.l,
            r.gamma,
            r.sigma_eps,
            r.eps,
            r.converged,
            r.t,
            r.experiments,
            r.estimate,
            r.circ_error,
            r.acceptance,
        ));
    }
    out
}

/// Parse rows back from `rows_to_csv` output (comment and header skipped).
pub fn rows_from_csv(text: &str) -> Result<Vec<SweepRow>, SweepError> {
    let bad = |line: &str, why: &str| SweepError::Plan(format!("bad csv line ({why}): {line}"));
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.is_empty() || line.starts_with('#') || line.starts_with("seed,") {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 13 {
            return Err(bad(line, "wrong column count"));
        }
        let protocol = serde_json::from_str(&format!("\"{}\"", f[1]))
            .map_err(|_| bad(line, "unknown protocol"))?;
        let mode =
            serde_json::from_str(&format!("\"{}\"", f[2])).map_err(|_| bad(line, "unknown mode"))?;
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line, "bad number"));
        rows.push(SweepRow {
            seed: f[0].parse().map_err(|_| bad(line, "bad seed"))?,
            protocol,
            mode,
            l: f[3].parse().map_err(|_| bad(line, "bad L"))?,
            gamma: num(f[4])?,
            sigma_eps: num(f[5])?,
            eps: num(f[6])?,
            converged: f[7].parse().map_err(|_| bad(line, "bad converged flag"))?,
            t: f[8].parse().map_err(|_| bad(line, "bad T"))?,
            experiments: f[9].parse().map_err(|_| bad(line, "bad experiments"))?,
            estimate: num(f[10])?,
            circ_error: num(f[11])?,
            acceptance: num(f[12])?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMethod {
    Ols,
    Wls,
}

impl FitMethod {
    /// Label used in output metadata; the WLS weight choice (inverse local
    /// point density in log eps) is not unique, so outputs name it.
    pub fn label(&self) -> &'static str {
        match self {
            FitMethod::Ols => "OLS",
            FitMethod::Wls => "WLS-inv-density",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub intercept: f64,
    pub stderr_alpha: f64,
    pub n_points: usize,
    pub method: FitMethod,
    pub converged_fraction: f64,
}

/// Fit log T = -alpha log eps + c on converged points. WLS weights each point
/// by the local log-eps spacing (trapezoidal), so an uneven grid does not
/// over-count its dense regions.
pub fn fit_power_law(points: &[(f64, f64)], method: FitMethod) -> Result<FitResult, SweepError> {
    if points.len() < 3 {
        return Err(SweepError::InsufficientData { needed: 3, got: points.len() });
    }
    let mut pts: Vec<(f64, f64)> =
        points.iter().map(|&(eps, t)| (eps.ln(), t.ln())).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pts.len();
    let mut w = vec![1.0; n];
    if method == FitMethod::Wls {
        for i in 0..n {
            let left = if i > 0 { pts[i].0 - pts[i - 1].0 } else { pts[1].0 - pts[0].0 };
            let right =
                if i + 1 < n { pts[i + 1].0 - pts[i].0 } else { pts[n - 1].0 - pts[n - 2].0 };
            w[i] = 0.5 * (left + right);
        }
        // Normalize to mean 1 so the residual variance keeps its OLS scale.
        let mean = w.iter().sum::<f64>() / n as f64;
        if !(mean > 0.0) {
            return Err(SweepError::DegenerateFit);
        }
        w.iter_mut().for_each(|wi| *wi /= mean);
    }
    let wsum: f64 = w.iter().sum();
    let xbar = pts.iter().zip(&w).map(|(p, wi)| wi * p.0).sum::<f64>() / wsum;
    let ybar = pts.iter().zip(&w).map(|(p, wi)| wi * p.1).sum::<f64>() / wsum;
    let sxx: f64 = pts.iter().zip(&w).map(|(p, wi)| wi * (p.0 - xbar).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(SweepError::DegenerateFit);
    }
    let sxy: f64 = pts.iter().zip(&w).map(|(p, wi)| wi * (p.0 - xbar) * (p.1 - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = pts
        .iter()
        .zip(&w)
        .map(|(p, wi)| wi * (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let stderr = (rss / (n as f64 - 2.0) / sxx).max(0.0).sqrt();
    Ok(FitResult {
        alpha: -slope,
        intercept,
        stderr_alpha: stderr,
        n_points: n,
        method,
        converged_fraction: 1.0,
    })
}

/// Fit one seed's rows: converged rows feed the regression, the converged
/// fraction records how much of the grid made it.
pub fn fit_seed_rows(rows: &[SweepRow], method: FitMethod) -> Result<FitResult, SweepError> {
    if rows.is_empty() {
        return Err(SweepError::InsufficientData { needed: 3, got: 0 });
    }
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.converged).map(|r| (r.eps, r.t as f64)).collect();
    let mut fit = fit_power_law(&pts, method)?;
    fit.converged_fraction = pts.len() as f64 / rows.len() as f64;
    Ok(fit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedAggregate {
    pub mean_alpha: f64,
    /// Standard error of the mean; absent for a single seed.
    pub sem_alpha: Option<f64>,
    pub mean_converged_fraction: f64,
    /// Mean post-selection acceptance over all rows, when the caller has it.
    pub mean_acceptance: Option<f64>,
}

pub fn aggregate_seeds(fits: &[FitResult]) -> Result<SeedAggregate, SweepError> {
    if fits.is_empty() {
        return Err(SweepError::InsufficientData { needed: 1, got: 0 });
    }
    let n = fits.len() as f64;
    let mean_alpha = fits.iter().map(|f| f.alpha).sum::<f64>() / n;
    let sem_alpha = if fits.len() >= 2 {
        let var =
            fits.iter().map(|f| (f.alpha - mean_alpha).powi(2)).sum::<f64>() / (n - 1.0);
        Some((var / n).sqrt())
    } else {
        None
    };
    let mean_converged_fraction =
        fits.iter().map(|f| f.converged_fraction).sum::<f64>() / n;
    Ok(SeedAggregate { mean_alpha, sem_alpha, mean_converged_fraction, mean_acceptance: None })
}

/// Mean acceptance rate over rows that actually ran (failed rows excluded).
pub fn mean_acceptance(rows: &[SweepRow]) -> Option<f64> {
    let ran: Vec<f64> =
        rows.iter().filter(|r| r.experiments > 0).map(|r| r.acceptance).collect();
    if ran.is_empty() {
        None
    } else {
        Some(ran.iter().sum::<f64>() / ran.len() as f64)
    }
}

/// Configuration key into the embedded reference tables. `level` is the
/// named noise level (depolarizing rate for bare GHZ, the calibration level
/// for the code protocols), not the raw transverse field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceKey {
    pub protocol: ProtocolKind,
    pub mode: Mode,
    pub l: u32,
    pub level: f64,
    pub h: f64,
    pub sigma_eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub key: ReferenceKey,
    pub alpha: f64,
    pub alpha_sem: f64,
    pub converged_pct: f64,
    pub acceptance_pct: Option<f64>,
}

const REFERENCE_CSV: &str = include_str!("../reference/tables.csv");

pub fn reference_rows() -> Vec<ReferenceRow> {
    REFERENCE_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), 10, "malformed reference row: {line}");
            let protocol = serde_json::from_str(&format!("\"{}\"", f[0])).expect("protocol");
            let mode = serde_json::from_str(&format!("\"{}\"", f[1])).expect("mode");
            ReferenceRow {
                key: ReferenceKey {
                    protocol,
                    mode,
                    l: f[2].parse().expect("l"),
                    level: f[3].parse().expect("level"),
                    h: f[4].parse().expect("h"),
                    sigma_eps: f[5].parse().expect("sigma_eps"),
                },
                alpha: f[6].parse().expect("alpha"),
                alpha_sem: f[7].parse().expect("alpha_sem"),
                converged_pct: f[8].parse().expect("converged_pct"),
                acceptance_pct: if f[9].is_empty() { None } else { Some(f[9].parse().expect("acceptance")) },
            }
        })
        .collect()
}

/// Comparison slack. The alpha band is deliberately wider than the reference
/// SEM: RNG streams differ, and WLS-vs-OLS alone shifts alpha by 0.1-0.3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub alpha_band: f64,
    pub acceptance_band_pct: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { alpha_band: 0.2, acceptance_band_pct: 5.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub reference: ReferenceRow,
    pub measured_alpha: f64,
    pub alpha_pass: bool,
    pub measured_acceptance_pct: Option<f64>,
    pub acceptance_pass: Option<bool>,
    pub pass: bool,
}

fn key_matches(a: &ReferenceKey, b: &ReferenceKey) -> bool {
    a.protocol == b.protocol
        && a.mode == b.mode
        && a.l == b.l
        && (a.level - b.level).abs() < 1e-9
        && (a.h - b.h).abs() < 1e-9
        && (a.sigma_eps - b.sigma_eps).abs() < 1e-9
}

pub fn compare_to_reference(
    agg: &SeedAggregate,
    key: &ReferenceKey,
    tol: &Tolerance,
) -> Result<ComparisonReport, SweepError> {
    let reference = reference_rows()
        .into_iter()
        .find(|r| key_matches(&r.key, key))
        .ok_or_else(|| {
            SweepError::UnmatchedReference(format!(
                "{} {} L={} level={} h={} sigma_eps={}",
                enum_label(&key.protocol),
                enum_label(&key.mode),
                key.l,
                key.level,
                key.h,
                key.sigma_eps
            ))
        })?;
    let alpha_pass = (agg.mean_alpha - reference.alpha).abs() <= tol.alpha_band;
    let measured_acceptance_pct = agg.mean_acceptance.map(|a| 100.0 * a);
    let acceptance_pass = match (measured_acceptance_pct, reference.acceptance_pct) {
        (Some(m), Some(r)) => Some((m - r).abs() <= tol.acceptance_band_pct),
        _ => None,
    };
    let pass = alpha_pass && acceptance_pass.unwrap_or(true);
    Ok(ComparisonReport {
        reference,
        measured_alpha: agg.mean_alpha,
        alpha_pass,
        measured_acceptance_pct,
        acceptance_pass,
        pass,
    })
}
