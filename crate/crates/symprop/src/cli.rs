//! Command-line front end. Each subcommand builds an [`ExperimentConfig`]
//! and hands it to [`run`]; `run --config` takes the config from a file.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::formats::{parse_distribution, read_text};
use crate::run::{replay, run, RunFailure, RunOptions};

#[derive(Debug, Parser)]
#[command(name = "symprop", version, about = "Profile maximum likelihood, adversarial packings and Fano lower bounds")]
pub struct Cli {
    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true, env = "SYMPROP_OUT_DIR", default_value = "symprop-out")]
    pub out: PathBuf,
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print the config the subcommand would run, as TOML, and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment described by a TOML config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-run a manifest's config and compare every artifact bit for bit.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Draw an i.i.d. sample, written as a CSV of 1-based symbols.
    Sample {
        /// JSON array of probabilities.
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Profile extraction, enumeration and probability.
    #[command(subcommand)]
    Profile(ProfileCommand),
    /// Solve for the PML distribution of a profile.
    Pml {
        /// JSON array `[φ_0, φ_1, …, φ_n]`.
        #[arg(long)]
        profile: String,
        #[arg(long)]
        k: Option<usize>,
        /// Grid search plus polishing (the default is pairwise ascent).
        #[arg(long)]
        exact: bool,
        #[arg(long, requires = "exact")]
        resolution: Option<u64>,
    },
    /// Build the adversarial packing and verify its properties.
    Packing {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        delta: DeltaArgs,
        /// Sampled actions for the separation check.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate the generalized Fano bound, or verify it on a packing.
    Fano(FanoArgs),
    /// Risk experiments.
    #[command(subcommand)]
    Risk(RiskCommand),
}

#[derive(Debug, Subcommand)]
pub enum ProfileCommand {
    /// Profile of a sample CSV.
    Extract {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// All profiles of n draws on k symbols, as JSON lines.
    Enumerate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
    },
    /// P(p, φ).
    Probability {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        dist: String,
    },
}

#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct DeltaArgs {
    /// Perturbation size (probability units).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Constant c in δ = c/√(nk), clamped to the admissible range.
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FanoArgs {
    /// Verify the bound for an estimator on a packing instead of evaluating it.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub p_min: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Mutual information in nats.
    #[arg(long)]
    pub mi: Option<f64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, conflicts_with = "delta")]
    pub c: Option<f64>,
    #[arg(long)]
    pub estimator: Option<String>,
    #[arg(long, default_value_t = 60)]
    pub grid_resolution: u64,
    #[arg(long, default_value_t = 10_000)]
    pub mc_reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum RiskCommand {
    /// Monte Carlo risk of a plug-in estimate of one property.
    Mc {
        #[arg(long)]
        estimator: String,
        #[arg(long)]
        property: String,
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact risk by enumerating all samples.
    Exact {
        #[arg(long)]
        estimator: String,
        #[arg(long)]
        property: String,
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: u64,
    },
    /// Worst case over the packing family.
    Adaptive {
        #[arg(long)]
        estimator: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        delta: DeltaArgs,
        #[arg(long)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sorted-ℓ₁ risk over the packing family and the implied constant.
    Assumption1 {
        #[arg(long)]
        estimator: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        delta: DeltaArgs,
        #[arg(long)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// PML versus empirical tail probabilities.
    Competitive {
        #[arg(long)]
        n: u64,
        /// JSON array of probabilities; repeat for several distributions.
        #[arg(long = "dist", required = true)]
        dists: Vec<String>,
        /// Comma-separated ε values.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        /// `approx` or `exact:<resolution>`.
        #[arg(long)]
        solver: String,
        /// Monte Carlo replicates; omit for exact enumeration.
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Adaptive risk across sample sizes.
    RateCurve {
        #[arg(long)]
        estimator: String,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        /// `fixed:<k>` or `even-power:<exponent>`.
        #[arg(long)]
        k_rule: String,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn dist_vec(json: &str) -> Result<Vec<f64>> {
    Ok(parse_distribution(json)?.into_probs())
}

fn counts_vec(json: &str) -> Result<Vec<u64>> {
    serde_json::from_str(json.trim()).map_err(|e| CliError::config(format!("profile: {e}")))
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| CliError::config(format!("--{flag} is required")))
}

/// Translates a subcommand into the config it runs.
pub fn to_config(command: &Command) -> Result<ExperimentConfig> {
    let cfg = |seed, e| Ok(ExperimentConfig::new(seed, e));
    match command {
        Command::Run { config } => ExperimentConfig::from_toml(&read_text(config)?),
        Command::Replay { .. } => Err(CliError::config("replay has no config of its own")),
        Command::Sample { dist, n, seed } => cfg(*seed, Experiment::Sample { distribution: dist_vec(dist)?, n: *n }),
        Command::Profile(p) => match p {
            ProfileCommand::Extract { samples, k } => {
                cfg(0, Experiment::ProfileExtract { samples: samples.clone(), k: *k })
            }
            ProfileCommand::Enumerate { n, k } => cfg(0, Experiment::ProfileEnumerate { n: *n, k: *k }),
            ProfileCommand::Probability { profile, dist } => {
                cfg(0, Experiment::ProfileProbability { profile: counts_vec(profile)?, distribution: dist_vec(dist)? })
            }
        },
        Command::Pml { profile, k, exact, resolution } => {
            let solver = match (exact, resolution) {
                (true, Some(r)) => format!("exact:{r}"),
                (true, None) => return Err(CliError::config("--exact needs --resolution")),
                (false, _) => "approx".into(),
            };
            cfg(0, Experiment::Pml { profile: counts_vec(profile)?, k: *k, solver })
        }
        Command::Packing { k, n, delta, trials, seed } => {
            cfg(*seed, Experiment::Packing { k: *k, n: *n, delta: delta.delta, c: delta.c, trials: *trials })
        }
        Command::Fano(a) => {
            if a.verify {
                let k = require(a.k, "k")?;
                // without δ or c, use the largest admissible δ, as the construction
                // is stated for small n where the clamp binds anyway
                let delta = match (a.delta, a.c) {
                    (None, None) => Some(0.99 / (4.0 * k as f64 * (k as f64 - 1.0))),
                    (d, _) => d,
                };
                cfg(
                    a.seed,
                    Experiment::FanoVerify {
                        n: require(a.n, "n")?,
                        k,
                        m: require(a.m, "M")?,
                        delta,
                        c: a.c,
                        estimator: require(a.estimator.clone(), "estimator")?,
                        grid_resolution: a.grid_resolution,
                        mc_reps: a.mc_reps,
                    },
                )
            } else {
                cfg(
                    a.seed,
                    Experiment::FanoBound {
                        delta: require(a.delta, "delta")?,
                        p_min: require(a.p_min, "p-min")?,
                        m: require(a.m, "M")?,
                        mi_nats: require(a.mi, "mi")?,
                    },
                )
            }
        }
        Command::Risk(r) => match r {
            RiskCommand::Mc { estimator, property, dist, n, reps, seed } => cfg(
                *seed,
                Experiment::RiskMc {
                    estimator: estimator.clone(),
                    property: property.clone(),
                    distribution: dist_vec(dist)?,
                    n: *n,
                    reps: *reps,
                },
            ),
            RiskCommand::Exact { estimator, property, dist, n } => cfg(
                0,
                Experiment::RiskExact {
                    estimator: estimator.clone(),
                    property: property.clone(),
                    distribution: dist_vec(dist)?,
                    n: *n,
                },
            ),
            RiskCommand::Adaptive { estimator, k, n, delta, reps, seed } => cfg(
                *seed,
                Experiment::RiskAdaptive {
                    estimator: estimator.clone(),
                    k: *k,
                    n: *n,
                    delta: delta.delta,
                    c: delta.c,
                    reps: *reps,
                },
            ),
            RiskCommand::Assumption1 { estimator, k, n, delta, reps, seed } => cfg(
                *seed,
                Experiment::RiskAssumption1 {
                    estimator: estimator.clone(),
                    k: *k,
                    n: *n,
                    delta: delta.delta,
                    c: delta.c,
                    reps: *reps,
                },
            ),
            RiskCommand::Competitive { n, dists, epsilons, solver, reps, seed } => cfg(
                *seed,
                Experiment::RiskCompetitive {
                    n: *n,
                    distributions: dists.iter().map(|d| dist_vec(d)).collect::<Result<_>>()?,
                    epsilons: epsilons.clone(),
                    solver: solver.clone(),
                    reps: *reps,
                },
            ),
            RiskCommand::RateCurve { estimator, n_list, k_rule, c, reps, seed } => cfg(
                *seed,
                Experiment::RiskRateCurve {
                    estimator: estimator.clone(),
                    n_list: n_list.clone(),
                    k_rule: k_rule.clone(),
                    c: *c,
                    reps: *reps,
                },
            ),
        },
    }
}

/// Runs the parsed command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let opts = RunOptions { out_dir: cli.out.clone(), threads: cli.threads };
    let result = match &cli.command {
        command if cli.print_config => match to_config(command).and_then(|c| c.to_toml()) {
            Ok(text) => {
                print!("{text}");
                return crate::error::EXIT_OK;
            }
            Err(e) => Err(RunFailure::from(e)),
        },
        Command::Replay { manifest } => replay(manifest, &opts).map(|(outcome, report)| {
            let mut outcome = outcome;
            outcome.summary.push(format!("replay matched {} artifacts", report.compared));
            outcome
        }),
        command => to_config(command).map_err(RunFailure::from).and_then(|cfg| run(&cfg, &opts)),
    };
    match result {
        Ok(outcome) => {
            // a closed stdout must not turn a finished run into a failure
            let mut out = std::io::stdout().lock();
            for line in &outcome.summary {
                let _ = writeln!(out, "{line}");
            }
            let _ = writeln!(out, "manifest: {}", crate::Manifest::path_in(&outcome.out_dir).display());
            crate::error::EXIT_OK
        }
        Err(f) => {
            let report = serde_json::json!({
                "error": f.error.kind(),
                "message": f.error.to_string(),
                "exit_code": f.error.exit_code(),
                "manifest": f.manifest_path.map(|p| p.display().to_string()),
            });
            eprintln!("{report}");
            f.error.exit_code()
        }
    }
}
