//! Run configuration: a strict JSON schema, flag-level overrides, and the
//! resolution of both into a fully-specified sweep plan. The resolved plan is
//! echoed into output metadata so every CSV is traceable to what produced it.

use clap::ValueEnum;
use protocols::{gamma_for_noise_level, Mode, ProtocolKind, RunConfig};
use serde::{Deserialize, Serialize};
use signal_core::{CodeShape, NoiseModel, NoiseSpec};
use sweep_harness::{log_grid, SweepPlan};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolArg {
    BareGhz,
    Bitflip,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    PostSelection,
    FullLikelihood,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// 10 seeds, 30 eps targets in [1e-3, 1e-1]; minutes of runtime.
    Desk,
    /// 40 seeds, 60 eps targets down to 1e-4; hours of runtime.
    Paper,
}

/// The JSON config document. Every field is optional; unknown keys are
/// rejected. Command-line flags override whatever the file says.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub protocol: Option<ProtocolArg>,
    pub mode: Option<ModeArg>,
    pub l: Option<u32>,
    /// Raw noise strength: depolarizing rate for bare-ghz, transverse field
    /// for the code protocols. Mutually exclusive with `level`.
    pub gamma: Option<f64>,
    /// Named noise level for the code protocols; calibrated to a transverse
    /// field at the operating point.
    pub level: Option<f64>,
    pub heterogeneity_h: Option<f64>,
    pub sigma_eps: Option<f64>,
    pub omega: Option<f64>,
    pub profile: Option<Profile>,
    pub seeds: Option<Vec<u64>>,
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub eps_points: Option<usize>,
    pub budget: Option<u64>,
    pub grid_bits: Option<u32>,
}

impl FileConfig {
    /// Overlay `over` on `self`: any field the override sets wins.
    pub fn merged(&self, over: &FileConfig) -> FileConfig {
        macro_rules! pick {
            ($f:ident) => {
                over.$f.clone().or_else(|| self.$f.clone())
            };
        }
        FileConfig {
            protocol: pick!(protocol),
            mode: pick!(mode),
            l: pick!(l),
            gamma: pick!(gamma),
            level: pick!(level),
            heterogeneity_h: pick!(heterogeneity_h),
            sigma_eps: pick!(sigma_eps),
            omega: pick!(omega),
            profile: pick!(profile),
            seeds: pick!(seeds),
            eps_min: pick!(eps_min),
            eps_max: pick!(eps_max),
            eps_points: pick!(eps_points),
            budget: pick!(budget),
            grid_bits: pick!(grid_bits),
        }
    }

    pub fn from_path(path: &std::path::Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config schema error in {}: {e}", path.display())))
    }
}

/// Turn a merged config into a concrete sweep plan. Per-protocol defaults:
/// desk profile uses budget 1000 (bare) / 5000 (code) and a 2^14 posterior
/// grid; paper profile uses 10000 / 50000 and 2^16 / 2^20.
pub fn resolve(cfg: &FileConfig) -> Result<SweepPlan, CliError> {
    let usage = |m: String| CliError::Usage(m);
    let protocol = cfg
        .protocol
        .ok_or_else(|| usage("protocol is required (--protocol or \"protocol\" in config)".into()))?;
    let profile = cfg.profile.unwrap_or(Profile::Desk);
    let omega = cfg.omega.unwrap_or(0.3);
    if !(omega > 0.0 && omega < std::f64::consts::FRAC_PI_2) {
        return Err(usage(format!("omega = {omega} outside (0, pi/2)")));
    }
    let h = cfg.heterogeneity_h.unwrap_or(0.0);
    let sigma_eps = cfg.sigma_eps.unwrap_or(0.0);
    if !(0.0..1.0).contains(&sigma_eps) || !(0.0..1.0).contains(&h) {
        return Err(usage("sigma_eps and heterogeneity_h must be in [0, 1)".into()));
    }

    let is_bare = protocol == ProtocolArg::BareGhz;
    if is_bare {
        if cfg.level.is_some() {
            return Err(usage("level names a code-protocol noise level; bare-ghz takes gamma".into()));
        }
        if cfg.mode.is_some() {
            return Err(usage("bare-ghz has no syndrome, so mode does not apply".into()));
        }
        if cfg.l.is_some() {
            return Err(usage("bare-ghz has no code distance L".into()));
        }
        if sigma_eps != 0.0 {
            return Err(usage("bare-ghz models depolarizing noise only; sigma_eps must be 0".into()));
        }
    }
    if cfg.gamma.is_some() && cfg.level.is_some() {
        return Err(usage("gamma and level both set; pick one".into()));
    }

    let (code, noise) = if is_bare {
        let gamma = cfg.gamma.unwrap_or(0.0);
        if !(0.0..1.0).contains(&gamma) {
            return Err(usage(format!("depolarizing gamma = {gamma} outside [0, 1)")));
        }
        let noise =
            NoiseSpec { sigma_eps: 0.0, gamma_mean: gamma, heterogeneity_h: h, model: NoiseModel::Depolarizing };
        (CodeShape::single(0), noise)
    } else {
        let l = cfg.l.unwrap_or(1);
        if l < 1 {
            return Err(usage("code protocols need L >= 1".into()));
        }
        let blocks = if protocol == ProtocolArg::Combined { 3 } else { 1 };
        let code = CodeShape::new(l, blocks).map_err(|e| usage(e.to_string()))?;
        let gamma = match (cfg.gamma, cfg.level) {
            (Some(g), _) => g,
            (None, Some(level)) => gamma_for_noise_level(level, omega),
            (None, None) => 0.0,
        };
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(usage(format!("transverse field gamma = {gamma} must be finite and >= 0")));
        }
        let noise =
            NoiseSpec { sigma_eps, gamma_mean: gamma, heterogeneity_h: h, model: NoiseModel::Hamiltonian };
        (code, noise)
    };

    let budget_k = cfg.budget.unwrap_or(match (profile, is_bare) {
        (Profile::Desk, true) => 1_000,
        (Profile::Desk, false) => 5_000,
        (Profile::Paper, true) => 10_000,
        (Profile::Paper, false) => 50_000,
    });
    let grid_bits = cfg.grid_bits.unwrap_or(match (profile, is_bare) {
        (Profile::Desk, _) => 14,
        (Profile::Paper, true) => 16,
        (Profile::Paper, false) => 20,
    });
    if !(8..=24).contains(&grid_bits) {
        return Err(usage(format!("grid_bits = {grid_bits} outside [8, 24]")));
    }

    let template = RunConfig {
        protocol: match protocol {
            ProtocolArg::BareGhz => ProtocolKind::BareGhz,
            ProtocolArg::Bitflip => ProtocolKind::Bitflip,
            ProtocolArg::Combined => ProtocolKind::Combined,
        },
        seed: 0,
        omega_true: omega,
        eps_targets: vec![0.1], // placeholder; the harness installs the grid
        budget_k,
        mode: match cfg.mode.unwrap_or(ModeArg::PostSelection) {
            ModeArg::PostSelection => Mode::PostSelection,
            ModeArg::FullLikelihood => Mode::FullLikelihood,
        },
        code,
        noise,
        grid_bits,
        search: None,
        sql: None,
    };

    let mut plan = match profile {
        Profile::Desk => SweepPlan::desk(template),
        Profile::Paper => SweepPlan::paper(template),
    }
    .map_err(|e| usage(e.to_string()))?;
    if let Some(seeds) = &cfg.seeds {
        plan.seeds = seeds.clone();
    }
    if cfg.eps_min.is_some() || cfg.eps_max.is_some() || cfg.eps_points.is_some() {
        let lo = cfg.eps_min.unwrap_or(plan.eps_grid[plan.eps_grid.len() - 1]);
        let hi = cfg.eps_max.unwrap_or(plan.eps_grid[0]);
        let points = cfg.eps_points.unwrap_or(plan.eps_grid.len());
        plan.eps_grid = log_grid(lo, hi, points).map_err(|e| usage(e.to_string()))?;
    }
    plan.validate().map_err(|e| usage(e.to_string()))?;
    Ok(plan)
}
