//! Executes an [`ExperimentConfig`], writing artifacts and a manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use symprop_core::fano::{verify_lemma_with, FiniteExperiment, LemmaOptions};
use symprop_core::pml::solve;
use symprop_core::profile::{enumerate_profiles_with, profile_space_bounds, ProfileEvaluator};
use symprop_core::property::builtin;
use symprop_core::risk::{competitive_tail_check, competitive_tail_check_mc, exact_risk_with, mc_risk};
use symprop_core::rng::labels;
use symprop_core::{fano_bound, profile_of, sample, Budgets, DiscreteDistribution, FanoInputs, PackingInstance, Profile};

use crate::config::{parse_estimator, parse_k_rule, parse_solver, resolve_delta, Experiment, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::formats::{
    json_pretty, jsonl, read_samples, records_csv, risk_csv, risk_jsonl, samples_csv, LemmaJson, PackingJson, ProfileJson,
    RiskRow, ARTIFACT_SCHEMA_VERSION,
};
use crate::manifest::{digest, sha256_hex, FileDigest, Manifest, RunError, RunStatus, MANIFEST_SCHEMA_VERSION};
use crate::parallel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub out_dir: PathBuf,
    /// Human-readable result lines.
    pub summary: Vec<String>,
}

/// A failed run: the error plus where its (failed) manifest was written.
#[derive(Debug)]
pub struct RunFailure {
    pub error: CliError,
    pub manifest_path: Option<PathBuf>,
}

impl From<CliError> for RunFailure {
    fn from(error: CliError) -> Self {
        RunFailure { error, manifest_path: None }
    }
}

struct Sink {
    dir: PathBuf,
    artifacts: Vec<FileDigest>,
    inputs: Vec<FileDigest>,
    labels: BTreeMap<String, u64>,
    summary: Vec<String>,
}

impl Sink {
    fn write(&mut self, name: &str, bytes: Vec<u8>) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, &bytes).map_err(|e| CliError::io(&path, e))?;
        self.artifacts.push(digest(name, &bytes));
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, json_pretty(value)?)
    }

    fn risk(&mut self, rows: &[RiskRow]) -> Result<()> {
        self.write("risk.csv", risk_csv(rows)?)?;
        self.write("risk.jsonl", risk_jsonl(rows)?)
    }

    fn label(&mut self, name: &str, value: u64) {
        self.labels.insert(name.into(), value);
    }

    fn say(&mut self, line: String) {
        self.summary.push(line);
    }
}

/// Runs `cfg` into `opts.out_dir`. The manifest is written with status
/// `running` before any work and rewritten as `complete` or `failed` after.
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> std::result::Result<RunOutcome, RunFailure> {
    let dir = opts.out_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let config = cfg.to_toml()?;
    let mut manifest = Manifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        core_version: symprop_core::VERSION.into(),
        command: cfg.experiment.command().into(),
        config_sha256: sha256_hex(config.as_bytes()),
        config,
        seed: cfg.seed,
        stream_labels: BTreeMap::new(),
        threads: opts.threads,
        status: RunStatus::Running,
        error: None,
        inputs: Vec::new(),
        artifacts: Vec::new(),
    };
    manifest.write(&dir)?;
    let mut sink = Sink { dir: dir.clone(), artifacts: Vec::new(), inputs: Vec::new(), labels: BTreeMap::new(), summary: Vec::new() };
    let result = parallel::with_threads(opts.threads, || execute(cfg, &mut sink)).and_then(|r| r);
    manifest.artifacts = sink.artifacts;
    manifest.inputs = sink.inputs;
    manifest.stream_labels = sink.labels;
    match result {
        Ok(()) => {
            manifest.status = RunStatus::Complete;
            manifest.write(&dir)?;
            Ok(RunOutcome { manifest, out_dir: dir, summary: sink.summary })
        }
        Err(error) => {
            manifest.status = RunStatus::Failed;
            manifest.error = Some(RunError { kind: error.kind().into(), message: error.to_string(), exit_code: error.exit_code() });
            let manifest_path = manifest.write(&dir).ok().map(|_| Manifest::path_in(&dir));
            Err(RunFailure { error, manifest_path })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub original_manifest: String,
    pub compared: usize,
    pub mismatches: Vec<String>,
}

/// Re-runs the config stored in a manifest into a fresh directory and
/// compares every artifact's hash with the recorded one.
pub fn replay(manifest_path: &Path, opts: &RunOptions) -> std::result::Result<(RunOutcome, ReplayReport), RunFailure> {
    let original = Manifest::read(manifest_path)?;
    if original.status != RunStatus::Complete {
        return Err(CliError::config("only complete runs can be replayed").into());
    }
    let source_dir = manifest_path.parent().unwrap_or(Path::new("."));
    if same_dir(source_dir, &opts.out_dir) {
        return Err(CliError::config("replay output directory must differ from the original run").into());
    }
    let cfg = ExperimentConfig::from_toml(&original.config)?;
    let outcome = run(&cfg, opts)?;
    let mut mismatches = Vec::new();
    for a in &original.artifacts {
        match outcome.manifest.artifacts.iter().find(|b| b.path == a.path) {
            Some(b) if b.sha256 == a.sha256 => {}
            Some(_) => mismatches.push(format!("{}: content differs", a.path)),
            None => mismatches.push(format!("{}: not produced", a.path)),
        }
    }
    for b in &outcome.manifest.artifacts {
        if !original.artifacts.iter().any(|a| a.path == b.path) {
            mismatches.push(format!("{}: not in original run", b.path));
        }
    }
    let report = ReplayReport {
        original_manifest: manifest_path.display().to_string(),
        compared: original.artifacts.len(),
        mismatches,
    };
    let path = outcome.out_dir.join("replay.json");
    fs::write(&path, json_pretty(&report)?).map_err(|e| CliError::io(&path, e))?;
    if !report.mismatches.is_empty() {
        return Err(RunFailure {
            error: CliError::Assertion(format!("replay differs: {}", report.mismatches.join("; "))),
            manifest_path: Some(Manifest::path_in(&outcome.out_dir)),
        });
    }
    Ok((outcome, report))
}

fn same_dir(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn execute(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<()> {
    let budgets = cfg.budgets.resolve();
    let seed = cfg.seed;
    match &cfg.experiment {
        Experiment::Sample { distribution, n } => {
            let p = DiscreteDistribution::new(distribution.clone())?;
            sink.label("sample", labels::SAMPLE);
            let batch = sample(&p, *n, seed)?;
            sink.write("samples.csv", samples_csv(&batch)?)?;
            sink.say(format!("wrote {n} draws"));
        }
        Experiment::ProfileExtract { samples, k } => {
            let bytes = fs::read(samples).map_err(|e| CliError::io(samples, e))?;
            sink.inputs.push(digest(samples.display().to_string(), &bytes));
            let batch = read_samples(samples, *k)?;
            let phi = profile_of(&batch);
            sink.json("profile.json", &ProfileJson::from(&phi))?;
            sink.say(format!("profile {:?} (n = {}, k = {})", phi.counts(), phi.n(), phi.k()));
        }
        Experiment::ProfileEnumerate { n, k } => {
            let space = enumerate_profiles_with(*n, *k, &budgets)?;
            sink.write("profiles.jsonl", jsonl(space.profiles.iter().map(ProfileJson::from))?)?;
            let bounds = profile_space_bounds(*n, *k)?;
            let ln_count = (space.len() as f64).ln();
            sink.json(
                "profile_space.json",
                &ProfileSpaceJson {
                    schema_version: ARTIFACT_SCHEMA_VERSION,
                    n: *n,
                    k: *k,
                    count: space.len() as u64,
                    ln_poly_bound: bounds.ln_poly,
                    ln_exp_bound: bounds.ln_exp,
                    within_poly_bound: ln_count <= bounds.ln_poly,
                    within_exp_bound: ln_count <= bounds.ln_exp,
                },
            )?;
            sink.say(format!("|Φ| = {}", space.len()));
        }
        Experiment::ProfileProbability { profile, distribution } => {
            let p = DiscreteDistribution::new(distribution.clone())?;
            let phi = Profile::with_k(profile.clone(), p.k())?;
            let ln = ProfileEvaluator::new(&phi).ln_probability(p.probs());
            sink.json(
                "probability.json",
                &ProbabilityJson {
                    schema_version: ARTIFACT_SCHEMA_VERSION,
                    profile: ProfileJson::from(&phi),
                    distribution: distribution.clone(),
                    probability: ln.exp(),
                    ln_probability: ln,
                },
            )?;
            sink.say(format!("P(p, φ) = {}", ln.exp()));
        }
        Experiment::Pml { profile, k, solver } => {
            let phi = match k {
                Some(k) => Profile::with_k(profile.clone(), *k)?,
                None => Profile::new(profile.clone())?,
            };
            let sol = solve(&phi, parse_solver(solver)?, &budgets)?;
            let json = PmlJson {
                schema_version: ARTIFACT_SCHEMA_VERSION,
                profile: ProfileJson::from(&phi),
                distribution: sol.distribution.probs().to_vec(),
                likelihood: sol.likelihood,
                method: sol.method.tag().into(),
                converged: sol.converged,
                sweeps: sol.sweeps,
                certificate: sol.certificate.map(|c| CertificateJson {
                    resolution: c.resolution,
                    grid_points: c.grid_points,
                    best_grid_likelihood: c.best_grid_likelihood,
                    gain_over_grid: c.gain_over_grid,
                }),
            };
            sink.json("pml.json", &json)?;
            sink.say(format!("PML {:?}, likelihood {}", json.distribution, json.likelihood));
        }
        Experiment::Packing { k, n, delta, c, trials } => {
            let choice = resolve_delta(*delta, *c, *n, *k)?;
            let packing = PackingInstance::new_with(*k, choice.delta, &budgets)?;
            sink.label("separation", labels::SEPARATION);
            sink.json("packing.json", &PackingJson::from(&packing))?;
            let report = packing.verify(*n, *trials, seed, &budgets)?;
            let gv = packing.gv().expect("built from scratch");
            let json = PackingVerificationJson {
                schema_version: ARTIFACT_SCHEMA_VERSION,
                k: *k,
                n: *n,
                delta: choice.delta,
                clamped: choice.clamped,
                m: packing.m(),
                all_monotone: report.all_monotone,
                all_in_a0: report.all_in_a0,
                min_hamming: report.min_hamming,
                required_distance: report.required_distance,
                separation_minimum: report.separation.map(|s| s.minimum),
                separation_bound: packing.separation_bound(),
                separation_trials: *trials,
                separation_rejections: report.separation.map_or(0, |s| s.rejections),
                kl_term: report.kl_term,
                chi2_term: report.chi2_term,
                mi_bound: report.mi_bound,
                gv_counting_bound: gv.counting_bound,
                gv_exp_target: gv.exp_target,
                gv_reaches_exp_target: gv.reaches_exp_target(),
                passed: report.passed(),
            };
            sink.json("verification.json", &json)?;
            sink.say(format!(
                "k = {k}, δ = {}, M = {}, separation min {:?} vs kδ/5 = {}",
                choice.delta,
                packing.m(),
                json.separation_minimum,
                json.separation_bound
            ));
            if !report.passed() {
                return Err(CliError::Assertion("packing verification failed".into()));
            }
        }
        Experiment::FanoBound { delta, p_min, m, mi_nats } => {
            let value = fano_bound(&FanoInputs::new(*delta, *p_min, *m, *mi_nats)?)?;
            sink.json(
                "fano_bound.json",
                &FanoBoundJson {
                    schema_version: ARTIFACT_SCHEMA_VERSION,
                    delta: *delta,
                    p_min: *p_min,
                    m: *m,
                    mi: *mi_nats,
                    fano_bound: value,
                    clamped_bound: value.max(0.0),
                },
            )?;
            sink.say(format!("bound = {value}"));
        }
        Experiment::FanoVerify { n, k, m, delta, c, estimator, grid_resolution, mc_reps } => {
            let choice = resolve_delta(*delta, *c, *n, *k)?;
            let packing = PackingInstance::new_with(*k, choice.delta, &budgets)?;
            let exp = FiniteExperiment::from_packing(&packing, *m, *n)?;
            let est = parse_estimator(estimator, Some(packing.p0()), &budgets)?;
            sink.label("lemma_base", labels::LEMMA);
            let opts = LemmaOptions { grid_resolution: *grid_resolution, mc_reps: *mc_reps, budgets };
            let report = verify_lemma_with(&exp, est.as_ref(), seed, &opts)?;
            sink.json("packing.json", &PackingJson::from(&packing.restricted(*m)?))?;
            sink.json("lemma.json", &LemmaJson::new(&report, est.name()))?;
            sink.say(format!(
                "LHS {} vs bound {} (p_min {}, I {}, Δ {}): satisfied = {}",
                report.lhs_risk, report.fano_bound, report.p_min, report.mi, report.delta, report.satisfied
            ));
            if !report.satisfied {
                return Err(CliError::Assertion("Fano bound exceeds the measured risk".into()));
            }
        }
        Experiment::RiskMc { estimator, property, distribution, n, reps } => {
            let (est, f, p) = risk_inputs(estimator, property, distribution, &budgets)?;
            sink.label("replicate_stream_base", 0);
            let r = mc_risk(est.as_ref(), &f, &p, *n, *reps, seed)?;
            sink.say(format!("risk {} ± {}", r.value, r.stderr));
            sink.risk(&[RiskRow::from_report(format!("risk-mc:{}", f.name()), &est.name(), &r, None, None)])?;
        }
        Experiment::RiskExact { estimator, property, distribution, n } => {
            let (est, f, p) = risk_inputs(estimator, property, distribution, &budgets)?;
            let r = exact_risk_with(est.as_ref(), &f, &p, *n, &budgets)?;
            sink.say(format!("risk {}", r.value));
            sink.risk(&[RiskRow::from_report(format!("risk-exact:{}", f.name()), &est.name(), &r, None, None)])?;
        }
        Experiment::RiskAdaptive { estimator, k, n, delta, c, reps } => {
            let choice = resolve_delta(*delta, *c, *n, *k)?;
            let packing = PackingInstance::new_with(*k, choice.delta, &budgets)?;
            let est = parse_estimator(estimator, Some(packing.p0()), &budgets)?;
            sink.label("hypothesis_base", labels::HYPOTHESIS_BASE);
            let report = parallel::adaptive_risk(est.as_ref(), &packing, *n, *reps, seed)?;
            let name = est.name();
            let (d, m) = (Some(packing.delta()), Some(packing.m()));
            let mut rows: Vec<RiskRow> = report
                .per_hypothesis
                .iter()
                .zip(packing.codewords())
                .map(|(r, u)| RiskRow::from_report(format!("risk-adaptive:u={}", u.to_bit_string()), &name, r, d, m))
                .collect();
            rows.push(RiskRow::from_report("risk-adaptive:worst", &name, &report.worst, d, m));
            let mut avg = RiskRow::from_report("risk-adaptive:average", &name, &report.worst, d, m);
            avg.value = report.average;
            avg.stderr = report.average_stderr;
            avg.seed = seed;
            rows.push(avg);
            sink.risk(&rows)?;
            sink.json("packing.json", &PackingJson::from(&packing))?;
            sink.say(format!(
                "worst-case risk over the packing family {} ± {} (u = {}), average {}",
                report.worst.value,
                report.worst.stderr,
                packing.codewords()[report.worst_index].to_bit_string(),
                report.average
            ));
        }
        Experiment::RiskAssumption1 { estimator, k, n, delta, c, reps } => {
            let choice = resolve_delta(*delta, *c, *n, *k)?;
            let packing = PackingInstance::new_with(*k, choice.delta, &budgets)?;
            let est = parse_estimator(estimator, Some(packing.p0()), &budgets)?;
            sink.label("hypothesis_base", labels::HYPOTHESIS_BASE);
            let report = parallel::assumption1_check(est.as_ref(), &packing, *n, *reps, seed)?;
            let name = est.name();
            let (d, m) = (Some(packing.delta()), Some(packing.m()));
            let mut rows: Vec<RiskRow> = report
                .per_distribution
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let label = match i {
                        0 => "risk-assumption1:p0".to_string(),
                        i => format!("risk-assumption1:u={}", packing.codewords()[i - 1].to_bit_string()),
                    };
                    RiskRow::from_report(label, &name, r, d, m)
                })
                .collect();
            rows.push(RiskRow::from_report("risk-assumption1:sup", &name, &report.sup, d, m));
            sink.risk(&rows)?;
            sink.json(
                "assumption1.json",
                &Assumption1Json {
                    schema_version: ARTIFACT_SCHEMA_VERSION,
                    estimator: name,
                    n: *n,
                    k: *k,
                    delta: packing.delta(),
                    m: packing.m(),
                    sup_index: report.sup_index,
                    sup: report.sup.value,
                    sup_stderr: report.sup.stderr,
                    scale: report.scale,
                    implied_a: report.implied_a,
                    implied_a_stderr: report.implied_a_stderr,
                },
            )?;
            sink.say(format!("implied A(n) = {} ± {}", report.implied_a, report.implied_a_stderr));
        }
        Experiment::RiskCompetitive { n, distributions, epsilons, solver, reps } => {
            let dists =
                distributions.iter().map(|d| DiscreteDistribution::new(d.clone())).collect::<Result<Vec<_>, _>>()?;
            let solver = parse_solver(solver)?;
            let report = match reps {
                None => competitive_tail_check(&dists, *n, epsilons, solver, &budgets)?,
                Some(reps) => {
                    sink.label("tail_base", labels::TAIL);
                    competitive_tail_check_mc(&dists, *n, epsilons, solver, *reps, seed, &budgets)?
                }
            };
            let rows: Vec<CompetitiveCsv> = report
                .rows
                .iter()
                .map(|r| CompetitiveCsv {
                    dist_index: r.dist_index,
                    epsilon: r.epsilon,
                    pml_tail: r.pml_tail,
                    empirical_tail: r.empirical_tail,
                    sup_empirical_tail: r.sup_empirical_tail,
                    profile_count: report.profile_count,
                    rhs: r.rhs,
                    holds: r.holds,
                })
                .collect();
            sink.write("competitive.csv", records_csv(&rows)?)?;
            let mc: Vec<McDiarmidCsv> = report
                .mcdiarmid
                .iter()
                .map(|r| McDiarmidCsv { dist_index: r.dist_index, epsilon: r.epsilon, excess_tail: r.excess_tail, bound: r.bound })
                .collect();
            sink.write("mcdiarmid.csv", records_csv(&mc)?)?;
            sink.json(
                "competitive.json",
                &CompetitiveJson {
                    schema_version: ARTIFACT_SCHEMA_VERSION,
                    n: report.n,
                    k: report.k,
                    profile_count: report.profile_count,
                    method: report.method.tag().into(),
                    sup_candidates: report.sup_candidates,
                    all_hold: report.all_hold(),
                },
            )?;
            sink.say(format!("competitive inequality holds on all rows: {}", report.all_hold()));
            if reps.is_none() && !report.all_hold() {
                return Err(CliError::Assertion("competitive inequality violated".into()));
            }
        }
        Experiment::RiskRateCurve { estimator, n_list, k_rule, c, reps } => {
            let rule = parse_k_rule(k_rule)?;
            let est = parse_estimator(estimator, None, &budgets)?;
            sink.label("rate_base", labels::RATE_BASE);
            sink.label("hypothesis_base", labels::HYPOTHESIS_BASE);
            let rows = parallel::rate_curve(est.as_ref(), n_list, rule, *c, *reps, seed, &budgets)?;
            let name = est.name();
            let csv_rows: Vec<RateCsv> = rows
                .iter()
                .map(|r| RateCsv {
                    n: r.n,
                    k: r.k,
                    delta: r.delta,
                    clamped: r.clamped,
                    m: r.m,
                    risk: r.risk,
                    stderr: r.stderr,
                    ratio_parametric: r.ratio_parametric,
                    ratio_log: r.ratio_log,
                    seed: r.seed,
                })
                .collect();
            sink.write("rate_curve.csv", records_csv(&csv_rows)?)?;
            let risk_rows: Vec<RiskRow> = rows
                .iter()
                .map(|r| RiskRow {
                    experiment: "risk-rate-curve".into(),
                    estimator: name.clone(),
                    n: r.n,
                    k: r.k,
                    delta: Some(r.delta),
                    m: Some(r.m),
                    value: r.risk,
                    stderr: r.stderr,
                    seed: r.seed,
                    method: symprop_core::RiskMethod::MonteCarlo.tag().into(),
                })
                .collect();
            sink.risk(&risk_rows)?;
            for r in &rows {
                sink.say(format!("n = {}, k = {}: risk {} ± {}, risk/√(k/n) = {}", r.n, r.k, r.risk, r.stderr, r.ratio_parametric));
            }
        }
    }
    Ok(())
}

type RiskInputs = (Box<dyn symprop_core::Estimator>, symprop_core::SymmetricProperty, DiscreteDistribution);

fn risk_inputs(estimator: &str, property: &str, distribution: &[f64], budgets: &Budgets) -> Result<RiskInputs> {
    let p = DiscreteDistribution::new(distribution.to_vec())?;
    Ok((parse_estimator(estimator, None, budgets)?, builtin(property)?, p))
}

#[derive(Serialize)]
struct ProfileSpaceJson {
    schema_version: u32,
    n: u64,
    k: usize,
    count: u64,
    ln_poly_bound: f64,
    ln_exp_bound: f64,
    within_poly_bound: bool,
    within_exp_bound: bool,
}

#[derive(Serialize)]
struct ProbabilityJson {
    schema_version: u32,
    profile: ProfileJson,
    distribution: Vec<f64>,
    probability: f64,
    ln_probability: f64,
}

#[derive(Serialize)]
struct CertificateJson {
    resolution: u64,
    grid_points: u64,
    best_grid_likelihood: f64,
    gain_over_grid: f64,
}

#[derive(Serialize)]
struct PmlJson {
    schema_version: u32,
    profile: ProfileJson,
    distribution: Vec<f64>,
    likelihood: f64,
    method: String,
    converged: bool,
    sweeps: u32,
    certificate: Option<CertificateJson>,
}

#[derive(Serialize)]
struct PackingVerificationJson {
    schema_version: u32,
    k: usize,
    n: u64,
    delta: f64,
    clamped: bool,
    #[serde(rename = "M")]
    m: usize,
    all_monotone: bool,
    all_in_a0: bool,
    min_hamming: Option<u32>,
    required_distance: u32,
    separation_minimum: Option<f64>,
    separation_bound: f64,
    separation_trials: u64,
    separation_rejections: u64,
    kl_term: f64,
    chi2_term: f64,
    mi_bound: f64,
    gv_counting_bound: f64,
    gv_exp_target: f64,
    gv_reaches_exp_target: bool,
    passed: bool,
}

#[derive(Serialize)]
struct FanoBoundJson {
    schema_version: u32,
    delta: f64,
    p_min: f64,
    #[serde(rename = "M")]
    m: usize,
    mi: f64,
    fano_bound: f64,
    clamped_bound: f64,
}

#[derive(Serialize)]
struct Assumption1Json {
    schema_version: u32,
    estimator: String,
    n: u64,
    k: usize,
    delta: f64,
    #[serde(rename = "M")]
    m: usize,
    sup_index: usize,
    sup: f64,
    sup_stderr: f64,
    scale: f64,
    implied_a: f64,
    implied_a_stderr: f64,
}

#[derive(Serialize)]
struct CompetitiveCsv {
    dist_index: usize,
    epsilon: f64,
    pml_tail: f64,
    empirical_tail: f64,
    sup_empirical_tail: f64,
    profile_count: u64,
    rhs: f64,
    holds: bool,
}

#[derive(Serialize)]
struct McDiarmidCsv {
    dist_index: usize,
    epsilon: f64,
    excess_tail: f64,
    bound: f64,
}

#[derive(Serialize)]
struct CompetitiveJson {
    schema_version: u32,
    n: u64,
    k: usize,
    profile_count: u64,
    method: String,
    sup_candidates: usize,
    all_hold: bool,
}

#[derive(Serialize)]
struct RateCsv {
    n: u64,
    k: usize,
    delta: f64,
    clamped: bool,
    #[serde(rename = "M")]
    m: usize,
    risk: f64,
    stderr: f64,
    ratio_parametric: f64,
    ratio_log: f64,
    seed: u64,
}
