//! Experiment configuration: one TOML document per run.
//!
//! Scientific parameters (`n`, `k`, `delta` or `c`, `reps`, ...) have no
//! defaults. Only resource budgets fall back to tooling defaults.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use symprop_core::packing::{choose_delta, DeltaChoice};
use symprop_core::pml::pml_plugin_estimator;
use symprop_core::risk::{ConstantEstimator, Empirical, IdentityOracle, KRule};
use symprop_core::{Budgets, DiscreteDistribution, Estimator, PmlSolver};

use crate::error::{CliError, Result};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Top-level seed; every random stream is derived from it.
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BudgetOverrides::is_empty")]
    pub budgets: BudgetOverrides,
    pub experiment: Experiment,
}

/// Optional replacements for the default resource caps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumeration_states: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub packing_scan: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejections: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polish_sweeps: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ascent_sweeps: Option<u32>,
}

impl BudgetOverrides {
    pub fn is_empty(&self) -> bool {
        *self == BudgetOverrides::default()
    }

    pub fn resolve(&self) -> Budgets {
        let d = Budgets::default();
        Budgets {
            profiles: self.profiles.unwrap_or(d.profiles),
            grid_points: self.grid_points.unwrap_or(d.grid_points),
            enumeration_states: self.enumeration_states.unwrap_or(d.enumeration_states),
            packing_scan: self.packing_scan.unwrap_or(d.packing_scan),
            rejections: self.rejections.unwrap_or(d.rejections),
            polish_sweeps: self.polish_sweeps.unwrap_or(d.polish_sweeps),
            ascent_sweeps: self.ascent_sweeps.unwrap_or(d.ascent_sweeps),
        }
    }
}

/// One experiment. `delta` (probability units) and `c` (the constant in
/// `δ = c/√(nk)`) are alternatives; exactly one must be given where both
/// appear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    Sample {
        distribution: Vec<f64>,
        n: usize,
    },
    ProfileExtract {
        /// CSV file with one 1-based symbol index per row.
        samples: PathBuf,
        #[serde(skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
    },
    ProfileEnumerate {
        n: u64,
        k: usize,
    },
    ProfileProbability {
        /// `[φ_0, φ_1, …, φ_n]`.
        profile: Vec<u64>,
        distribution: Vec<f64>,
    },
    Pml {
        profile: Vec<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        /// `"approx"` or `"exact:<resolution>"`.
        solver: String,
    },
    Packing {
        k: usize,
        n: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
        trials: u64,
    },
    FanoBound {
        delta: f64,
        p_min: f64,
        m: usize,
        mi_nats: f64,
    },
    FanoVerify {
        n: u64,
        k: usize,
        m: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
        estimator: String,
        grid_resolution: u64,
        /// Replicates per hypothesis if exact enumeration is over budget.
        mc_reps: u64,
    },
    RiskMc {
        estimator: String,
        property: String,
        distribution: Vec<f64>,
        n: u64,
        reps: u64,
    },
    RiskExact {
        estimator: String,
        property: String,
        distribution: Vec<f64>,
        n: u64,
    },
    RiskAdaptive {
        estimator: String,
        k: usize,
        n: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
        reps: u64,
    },
    RiskAssumption1 {
        estimator: String,
        k: usize,
        n: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
        reps: u64,
    },
    RiskCompetitive {
        n: u64,
        distributions: Vec<Vec<f64>>,
        epsilons: Vec<f64>,
        solver: String,
        /// Monte Carlo replicates; absent means exact enumeration.
        #[serde(skip_serializing_if = "Option::is_none")]
        reps: Option<u64>,
    },
    RiskRateCurve {
        estimator: String,
        n_list: Vec<u64>,
        /// `"fixed:<k>"` or `"even-power:<exponent>"`.
        k_rule: String,
        c: f64,
        reps: u64,
    },
}

impl Experiment {
    pub fn command(&self) -> &'static str {
        match self {
            Experiment::Sample { .. } => "sample",
            Experiment::ProfileExtract { .. } => "profile-extract",
            Experiment::ProfileEnumerate { .. } => "profile-enumerate",
            Experiment::ProfileProbability { .. } => "profile-probability",
            Experiment::Pml { .. } => "pml",
            Experiment::Packing { .. } => "packing",
            Experiment::FanoBound { .. } => "fano-bound",
            Experiment::FanoVerify { .. } => "fano-verify",
            Experiment::RiskMc { .. } => "risk-mc",
            Experiment::RiskExact { .. } => "risk-exact",
            Experiment::RiskAdaptive { .. } => "risk-adaptive",
            Experiment::RiskAssumption1 { .. } => "risk-assumption1",
            Experiment::RiskCompetitive { .. } => "risk-competitive",
            Experiment::RiskRateCurve { .. } => "risk-rate-curve",
        }
    }
}

impl ExperimentConfig {
    pub fn new(seed: u64, experiment: Experiment) -> Self {
        ExperimentConfig { schema_version: CONFIG_SCHEMA_VERSION, seed, budgets: BudgetOverrides::default(), experiment }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        if cfg.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "config schema_version {} is not supported (expected {CONFIG_SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    /// Canonical text form; hashing this identifies the run.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::config(e.to_string()))
    }
}

/// Resolves the `delta` / `c` alternative.
pub fn resolve_delta(delta: Option<f64>, c: Option<f64>, n: u64, k: usize) -> Result<DeltaChoice> {
    match (delta, c) {
        (Some(delta), None) => Ok(DeltaChoice { delta, clamped: false }),
        (None, Some(c)) => Ok(choose_delta(n, k, c)?),
        (Some(_), Some(_)) => Err(CliError::config("give either delta or c, not both")),
        (None, None) => Err(CliError::config("one of delta or c is required")),
    }
}

/// `"approx"` or `"exact:<resolution>"`.
pub fn parse_solver(spec: &str) -> Result<PmlSolver> {
    match spec.trim() {
        "approx" => Ok(PmlSolver::Approx),
        s => match s.strip_prefix("exact:").map(str::parse::<u64>) {
            Some(Ok(resolution)) if resolution > 0 => Ok(PmlSolver::Exact { resolution }),
            _ => Err(CliError::config(format!("unknown solver `{spec}` (expected approx or exact:<resolution>)"))),
        },
    }
}

/// `"fixed:<k>"` or `"even-power:<exponent>"`.
pub fn parse_k_rule(spec: &str) -> Result<KRule> {
    let bad = || CliError::config(format!("unknown k rule `{spec}` (expected fixed:<k> or even-power:<exponent>)"));
    let (head, arg) = spec.trim().split_once(':').ok_or_else(bad)?;
    match head {
        "fixed" => arg.parse().map(KRule::Fixed).map_err(|_| bad()),
        "even-power" => match arg.parse::<f64>() {
            Ok(exponent) if exponent > 0.0 && exponent.is_finite() => Ok(KRule::EvenPower { exponent }),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

/// Builds an estimator from its name.
///
/// Names: `empirical`, `identity`, `pml-approx`, `pml-exact:<resolution>`,
/// `constant-p0` (needs a packing center), `constant:[p_1, …, p_k]`.
pub fn parse_estimator(
    spec: &str,
    center: Option<&DiscreteDistribution>,
    budgets: &Budgets,
) -> Result<Box<dyn Estimator>> {
    let spec = spec.trim();
    let plugin = |solver| {
        let mut est = pml_plugin_estimator(solver);
        est.budgets = *budgets;
        Box::new(est) as Box<dyn Estimator>
    };
    match spec {
        "empirical" => Ok(Box::new(Empirical)),
        "identity" => Ok(Box::new(IdentityOracle)),
        "pml-approx" => Ok(plugin(PmlSolver::Approx)),
        "constant-p0" => center
            .map(|p| Box::new(ConstantEstimator(p.clone())) as Box<dyn Estimator>)
            .ok_or_else(|| CliError::config("constant-p0 needs a packing experiment")),
        s if s.starts_with("pml-exact:") => Ok(plugin(parse_solver(&s["pml-".len()..])?)),
        s if s.starts_with("constant:") => {
            let probs: Vec<f64> = serde_json::from_str(&s["constant:".len()..])
                .map_err(|e| CliError::config(format!("constant estimator: {e}")))?;
            Ok(Box::new(ConstantEstimator(DiscreteDistribution::new(probs)?)))
        }
        _ => Err(CliError::config(format!("unknown estimator `{spec}`"))),
    }
}
