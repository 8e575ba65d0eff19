//! Estimators, risk evaluation and the finite-family risk experiments.
//!
//! All suprema over properties and distributions are taken over explicitly
//! constructed finite families (a packing's `{(p_u, F_u)}` or a given list
//! of distributions). Such a maximum lower-bounds the true supremum; no
//! report here claims more than that.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::config::{Budgets, TOLERANCES};
use crate::dist::{sample_counts, sorted_l1_slices, DiscreteDistribution, SampleBatch};
use crate::math::{self, ln_sequence_probability, LnFactorials};
use crate::packing::{choose_delta, PackingInstance};
use crate::pml::{solve, PmlSolver};
use crate::profile::{enumerate_profiles_with, ProfileEvaluator};
use crate::property::SymmetricProperty;
use crate::rng::{derive_seed, labels, stream_rng};
use crate::{Error, Result};

/// What an estimator sees: the per-symbol counts of the sample. The
/// generating distribution is exposed only so that oracle controls such as
/// [`IdentityOracle`] can exist; real estimators must ignore it.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub counts: &'a [u64],
    pub generating: &'a DiscreteDistribution,
}

impl Observation<'_> {
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// A distribution estimator `X^n ↦ p̂`. Deterministic given the counts;
/// randomized procedures must draw from the replicate's stream upstream.
pub trait Estimator: Send + Sync {
    fn name(&self) -> String;

    fn estimate(&self, obs: &Observation<'_>) -> Result<DiscreteDistribution>;

    /// True when the output depends only on the profile of the counts, which
    /// lets exact enumerations evaluate it once per profile.
    fn label_invariant(&self) -> bool {
        false
    }
}

impl<E: Estimator + ?Sized> Estimator for &E {
    fn name(&self) -> String {
        (**self).name()
    }
    fn estimate(&self, obs: &Observation<'_>) -> Result<DiscreteDistribution> {
        (**self).estimate(obs)
    }
    fn label_invariant(&self) -> bool {
        (**self).label_invariant()
    }
}

impl<E: Estimator + ?Sized> Estimator for Box<E> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn estimate(&self, obs: &Observation<'_>) -> Result<DiscreteDistribution> {
        (**self).estimate(obs)
    }
    fn label_invariant(&self) -> bool {
        (**self).label_invariant()
    }
}

/// Runs an estimator on a sample batch.
pub fn estimate_batch(
    est: &dyn Estimator,
    batch: &SampleBatch,
    generating: &DiscreteDistribution,
) -> Result<DiscreteDistribution> {
    let counts = batch.counts();
    est.estimate(&Observation { counts: &counts, generating })
}

/// `p̂_i = c_i / n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Empirical;

impl Estimator for Empirical {
    fn name(&self) -> String {
        "empirical".into()
    }
    fn estimate(&self, obs: &Observation<'_>) -> Result<DiscreteDistribution> {
        DiscreteDistribution::empirical(obs.counts)
    }
}

/// Ignores the data and returns a fixed distribution.
#[derive(Debug, Clone)]
pub struct ConstantEstimator(pub DiscreteDistribution);

impl Estimator for ConstantEstimator {
    fn name(&self) -> String {
        "constant".into()
    }
    fn estimate(&self, obs: &Observation<'_>) -> Result<DiscreteDistribution> {
        if obs.counts.len() != self.0.k() {
            return Err(Error::DimensionMismatch { left: obs.counts.len(), right: self.0.k() });
        }
        Ok(self.0.clone())
    }
    fn label_invariant(&self) -> bool {
        // constant in the data, so trivially a function of the profile
        true
    }
}

/// Returns the generating distribution: the zero-risk control.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityOracle;

impl Estimator for IdentityOracle {
    fn name(&self) -> String {
        "identity_oracle".into()
    }
    fn estimate(&self, obs: &Observation<'_>) -> Result<DiscreteDistribution> {
        Ok(obs.generating.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskMethod {
    ExactEnum,
    MonteCarlo,
}

impl RiskMethod {
    pub fn tag(self) -> &'static str {
        match self {
            RiskMethod::ExactEnum => "exact_enum",
            RiskMethod::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub value: f64,
    /// Zero for exact enumeration.
    pub stderr: f64,
    pub method: RiskMethod,
    /// Monte Carlo replicates, or the number of count vectors enumerated.
    pub reps: u64,
    pub seed: u64,
    pub n: u64,
    pub k: usize,
}

/// Monte Carlo mean of `loss(p̂)`; replicate `r` draws its counts from
/// stream `r` of `seed`.
pub fn mc_loss(
    est: &dyn Estimator,
    p: &DiscreteDistribution,
    n: u64,
    reps: u64,
    seed: u64,
    mut loss: impl FnMut(&DiscreteDistribution) -> Result<f64>,
) -> Result<RiskReport> {
    if reps < 2 {
        return Err(Error::invalid_argument("Monte Carlo needs at least two replicates"));
    }
    let mut values = Vec::with_capacity(reps as usize);
    for r in 0..reps {
        let counts = sample_counts(p, n, &mut stream_rng(seed, r));
        let fail = |e: Error| Error::EstimatorFailed { seed, stream: r, source: Box::new(e) };
        let p_hat = est.estimate(&Observation { counts: &counts, generating: p }).map_err(fail)?;
        values.push(loss(&p_hat).map_err(fail)?);
    }
    let (value, stderr) = math::mean_and_stderr(&values);
    Ok(RiskReport { value, stderr, method: RiskMethod::MonteCarlo, reps, seed, n, k: p.k() })
}

/// Monte Carlo estimate of `E_p |F(p̂) − F(p)|`.
pub fn mc_risk(
    est: &dyn Estimator,
    f: &SymmetricProperty,
    p: &DiscreteDistribution,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<RiskReport> {
    let truth = f.evaluate(p)?;
    mc_loss(est, p, n, reps, seed, |p_hat| Ok((f.evaluate(p_hat)? - truth).abs()))
}

/// Exact `Σ_c P_p(c)·loss(p̂(c))` over all count vectors `c` of `n` draws,
/// which equals the sum over all `k^n` sequences. Label-invariant estimators
/// are evaluated once per profile.
pub fn exact_loss(
    est: &dyn Estimator,
    p: &DiscreteDistribution,
    n: u64,
    budgets: &Budgets,
    mut loss: impl FnMut(&DiscreteDistribution) -> Result<f64>,
) -> Result<RiskReport> {
    let k = p.k();
    let states = math::count_vector_total(n, k);
    if states > budgets.enumeration_states as f64 {
        return Err(Error::BudgetExceeded { what: "exact risk enumeration", required: states, cap: budgets.enumeration_states });
    }
    let lf = LnFactorials::new(n);
    let mut cache = EstimateCache::new(est);
    let mut total = 0.0;
    math::for_each_count_vector(n, k, |c| {
        let ln_prob = lf.ln_multinomial(c) + ln_sequence_probability(p.probs(), c);
        if ln_prob == f64::NEG_INFINITY {
            return Ok(());
        }
        let p_hat = cache.get(c, p)?;
        total += libm::exp(ln_prob) * loss(p_hat)?;
        Ok(())
    })?;
    Ok(RiskReport { value: total, stderr: 0.0, method: RiskMethod::ExactEnum, reps: states as u64, seed: 0, n, k })
}

/// Exact `E_p |F(p̂) − F(p)|` under the default budgets.
pub fn exact_risk(est: &dyn Estimator, f: &SymmetricProperty, p: &DiscreteDistribution, n: u64) -> Result<RiskReport> {
    exact_risk_with(est, f, p, n, &Budgets::default())
}

pub fn exact_risk_with(
    est: &dyn Estimator,
    f: &SymmetricProperty,
    p: &DiscreteDistribution,
    n: u64,
    budgets: &Budgets,
) -> Result<RiskReport> {
    let truth = f.evaluate(p)?;
    exact_loss(est, p, n, budgets, |p_hat| Ok((f.evaluate(p_hat)? - truth).abs()))
}

/// Memoizes estimator outputs by profile for label-invariant estimators.
pub(crate) struct EstimateCache<'e> {
    est: &'e dyn Estimator,
    by_profile: BTreeMap<Vec<u64>, DiscreteDistribution>,
    last: Option<DiscreteDistribution>,
}

impl<'e> EstimateCache<'e> {
    pub(crate) fn new(est: &'e dyn Estimator) -> Self {
        EstimateCache { est, by_profile: BTreeMap::new(), last: None }
    }

    pub(crate) fn get(&mut self, counts: &[u64], generating: &DiscreteDistribution) -> Result<&DiscreteDistribution> {
        let obs = Observation { counts, generating };
        if self.est.label_invariant() {
            let mut key = counts.to_vec();
            key.sort_unstable();
            if !self.by_profile.contains_key(&key) {
                let v = self.est.estimate(&obs)?;
                self.by_profile.insert(key.clone(), v);
            }
            Ok(&self.by_profile[&key])
        } else {
            Ok(self.last.insert(self.est.estimate(&obs)?))
        }
    }
}

/// Worst case and average over a packing's `{(p_u, F_u)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveRiskReport {
    /// `max_u E_{p_u} |F_u(p̂) − F_u(p_u)|`.
    pub worst: RiskReport,
    pub worst_index: usize,
    /// Average over `u`, the quantity the Fano argument bounds from below.
    pub average: f64,
    pub average_stderr: f64,
    pub per_hypothesis: Vec<RiskReport>,
}

/// `mc_risk(est, F_u, p_u, n)` for codeword `index`, on the seed derived
/// for that codeword.
pub fn hypothesis_risk(
    est: &dyn Estimator,
    packing: &PackingInstance,
    index: usize,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<RiskReport> {
    let u = packing
        .codewords()
        .get(index)
        .ok_or_else(|| Error::invalid_argument("codeword index out of range"))?;
    let p = packing.perturb(u)?;
    let f = crate::property::adversarial_property(u, packing)?;
    mc_risk(est, &f, &p, n, reps, derive_seed(seed, labels::HYPOTHESIS_BASE + index as u64))
}

/// Reduces per-hypothesis reports in index order.
pub fn summarize_adaptive(per_hypothesis: Vec<RiskReport>) -> Result<AdaptiveRiskReport> {
    if per_hypothesis.is_empty() {
        return Err(Error::invalid_argument("no hypotheses"));
    }
    let mut worst_index = 0;
    for (i, r) in per_hypothesis.iter().enumerate() {
        if r.value > per_hypothesis[worst_index].value {
            worst_index = i;
        }
    }
    let m = per_hypothesis.len() as f64;
    let average = per_hypothesis.iter().map(|r| r.value).sum::<f64>() / m;
    let average_stderr = libm::sqrt(per_hypothesis.iter().map(|r| r.stderr * r.stderr).sum::<f64>()) / m;
    Ok(AdaptiveRiskReport { worst: per_hypothesis[worst_index], worst_index, average, average_stderr, per_hypothesis })
}

/// Adaptive risk restricted to the packing's finite family.
pub fn adaptive_risk(
    est: &dyn Estimator,
    packing: &PackingInstance,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<AdaptiveRiskReport> {
    let reports = (0..packing.m())
        .map(|i| hypothesis_risk(est, packing, i, n, reps, seed))
        .collect::<Result<Vec<_>>>()?;
    summarize_adaptive(reports)
}

/// `p0` for index 0, `p_u` of codeword `index − 1` otherwise.
pub fn assumption1_distribution(packing: &PackingInstance, index: usize) -> Result<DiscreteDistribution> {
    match index {
        0 => Ok(packing.p0().clone()),
        i => packing
            .codewords()
            .get(i - 1)
            .ok_or_else(|| Error::invalid_argument("distribution index out of range"))
            .and_then(|u| packing.perturb(u)),
    }
}

/// Monte Carlo `E_p[sorted_l1(p, p̂)]` for distribution `index` of
/// `{p0} ∪ {p_u}`.
pub fn assumption1_part(
    est: &dyn Estimator,
    packing: &PackingInstance,
    index: usize,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<RiskReport> {
    let p = assumption1_distribution(packing, index)?;
    let s = derive_seed(seed, labels::HYPOTHESIS_BASE + index as u64);
    mc_loss(est, &p, n, reps, s, |p_hat| Ok(sorted_l1_slices(p.probs(), p_hat.probs())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assumption1Report {
    /// Index 0 is `p0`, index `i ≥ 1` is codeword `i − 1`.
    pub per_distribution: Vec<RiskReport>,
    pub sup_index: usize,
    pub sup: RiskReport,
    /// `√(k/n)`.
    pub scale: f64,
    /// `sup / √(k/n)`.
    pub implied_a: f64,
    pub implied_a_stderr: f64,
}

pub fn summarize_assumption1(k: usize, n: u64, per_distribution: Vec<RiskReport>) -> Result<Assumption1Report> {
    if per_distribution.is_empty() {
        return Err(Error::invalid_argument("no distributions"));
    }
    let mut sup_index = 0;
    for (i, r) in per_distribution.iter().enumerate() {
        if r.value > per_distribution[sup_index].value {
            sup_index = i;
        }
    }
    let sup = per_distribution[sup_index];
    let scale = libm::sqrt(k as f64 / n as f64);
    Ok(Assumption1Report {
        implied_a: sup.value / scale,
        implied_a_stderr: sup.stderr / scale,
        per_distribution,
        sup_index,
        sup,
        scale,
    })
}

/// Estimates `sup_{p ∈ {p0} ∪ {p_u}} E_p[sorted_l1(p, p̂)]` and the implied
/// constant `A(n)` in `≤ A(n)·√(k/n)`.
pub fn assumption1_check(
    est: &dyn Estimator,
    packing: &PackingInstance,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<Assumption1Report> {
    let parts = (0..=packing.m())
        .map(|i| assumption1_part(est, packing, i, n, reps, seed))
        .collect::<Result<Vec<_>>>()?;
    summarize_assumption1(packing.k(), n, parts)
}

/// Exact `P_{p}(p̂ ∉ A0)` for distribution `index` of `{p0} ∪ {p_u}`.
pub fn exact_a0_exit_probability(
    est: &dyn Estimator,
    packing: &PackingInstance,
    index: usize,
    n: u64,
    budgets: &Budgets,
) -> Result<f64> {
    let p = assumption1_distribution(packing, index)?;
    let r = exact_loss(est, &p, n, budgets, |p_hat| Ok(if packing.in_a0(p_hat)? { 0.0 } else { 1.0 }))?;
    Ok(r.value)
}

/// `2 exp(−n ε² / 2)`: McDiarmid's tail for the ℓ₁ error of the empirical
/// distribution in excess of `√(k/n)`.
pub fn mcdiarmid_tail(n: u64, epsilon: f64) -> f64 {
    2.0 * libm::exp(-(n as f64) * epsilon * epsilon / 2.0)
}

/// `min{1, 2 exp(k ln(n+1) − (n/2)(ε − √(k/n))₊²)}`: the resulting tail
/// bound on `P(sorted_l1(p^PML, p) ≥ 2ε)`.
pub fn pml_sorted_tail_bound(n: u64, k: usize, epsilon: f64) -> f64 {
    let nf = n as f64;
    let excess = (epsilon - libm::sqrt(k as f64 / nf)).max(0.0);
    let ln = libm::log(2.0) + k as f64 * libm::log(nf + 1.0) - nf / 2.0 * excess * excess;
    libm::exp(ln).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompetitiveRow {
    pub dist_index: usize,
    pub epsilon: f64,
    /// `P_p(sorted_l1(p^PML, p) ≥ 2ε)`.
    pub pml_tail: f64,
    /// `P_p(sorted_l1(p̂_emp, p) ≥ ε)`.
    pub empirical_tail: f64,
    /// `max_{p'} P_{p'}(sorted_l1(p̂_emp, p') ≥ ε)` over the candidate set.
    pub sup_empirical_tail: f64,
    /// `|Φ_{n,k}| · sup_empirical_tail`.
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McDiarmidRow {
    pub dist_index: usize,
    pub epsilon: f64,
    /// `P_p((sorted_l1(p̂_emp, p) − √(k/n))₊ ≥ ε)`.
    pub excess_tail: f64,
    /// `2 exp(−nε²/2)`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompetitiveReport {
    pub n: u64,
    pub k: usize,
    pub profile_count: u64,
    pub method: RiskMethod,
    /// Size of the set the empirical tail supremum ranges over.
    pub sup_candidates: usize,
    pub rows: Vec<CompetitiveRow>,
    pub mcdiarmid: Vec<McDiarmidRow>,
}

impl CompetitiveReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

fn check_family(dists: &[DiscreteDistribution]) -> Result<usize> {
    let k = dists.first().ok_or_else(|| Error::invalid_argument("no distributions"))?.k();
    if let Some(d) = dists.iter().find(|d| d.k() != k) {
        return Err(Error::DimensionMismatch { left: k, right: d.k() });
    }
    Ok(k)
}

/// Exact competitive tail check by profile enumeration.
///
/// For each tested `p` and `ε`, compares `P_p(sorted_l1(p^PML, p) ≥ 2ε)` with
/// `|Φ_{n,k}|·sup_{p'} P_{p'}(sorted_l1(p̂, p') ≥ ε)`, `p̂` the empirical
/// distribution. The supremum ranges over the tested distributions together
/// with every PML output `p^PML(φ)`, `φ ∈ Φ_{n,k}`, which is the set the
/// union-bound argument actually uses.
pub fn competitive_tail_check(
    dists: &[DiscreteDistribution],
    n: u64,
    epsilons: &[f64],
    solver: PmlSolver,
    budgets: &Budgets,
) -> Result<CompetitiveReport> {
    let k = check_family(dists)?;
    let space = enumerate_profiles_with(n, k, budgets)?;
    let evals: Vec<ProfileEvaluator> = space.profiles.iter().map(ProfileEvaluator::new).collect();
    let empirical: Vec<DiscreteDistribution> =
        space.profiles.iter().map(|phi| phi.sorted_empirical()).collect::<Result<_>>()?;
    let pml: Vec<DiscreteDistribution> = space
        .profiles
        .iter()
        .map(|phi| solve(phi, solver, budgets).map(|s| s.distribution))
        .collect::<Result<_>>()?;

    let probs_under = |p: &DiscreteDistribution| -> Vec<f64> { evals.iter().map(|e| e.probability(p.probs())).collect() };
    let tail = |probs: &[f64], p: &DiscreteDistribution, outputs: &[DiscreteDistribution], threshold: f64| -> f64 {
        probs
            .iter()
            .zip(outputs)
            .filter(|(_, out)| sorted_l1_slices(out.probs(), p.probs()) >= threshold)
            .map(|(w, _)| w)
            .sum()
    };

    let candidates: Vec<&DiscreteDistribution> = dists.iter().chain(pml.iter()).collect();
    let candidate_probs: Vec<Vec<f64>> = candidates.iter().map(|p| probs_under(p)).collect();
    let scale = libm::sqrt(k as f64 / n as f64);
    let size = space.len() as f64;

    let mut rows = Vec::new();
    let mut mcdiarmid = Vec::new();
    for &eps in epsilons {
        let sup_empirical_tail = candidates
            .iter()
            .zip(&candidate_probs)
            .map(|(p, w)| tail(w, p, &empirical, eps))
            .fold(0.0, f64::max);
        for (dist_index, p) in dists.iter().enumerate() {
            let w = &candidate_probs[dist_index];
            let pml_tail = tail(w, p, &pml, 2.0 * eps);
            let empirical_tail = tail(w, p, &empirical, eps);
            let rhs = size * sup_empirical_tail;
            rows.push(CompetitiveRow {
                dist_index,
                epsilon: eps,
                pml_tail,
                empirical_tail,
                sup_empirical_tail,
                rhs,
                holds: pml_tail <= rhs + TOLERANCES.exact_slack,
            });
            mcdiarmid.push(McDiarmidRow {
                dist_index,
                epsilon: eps,
                excess_tail: tail(w, p, &empirical, scale + eps),
                bound: mcdiarmid_tail(n, eps),
            });
        }
    }
    Ok(CompetitiveReport {
        n,
        k,
        profile_count: space.len() as u64,
        method: RiskMethod::ExactEnum,
        sup_candidates: candidates.len(),
        rows,
        mcdiarmid,
    })
}

/// Monte Carlo form of [`competitive_tail_check`] for sizes beyond exact
/// enumeration. The supremum ranges over the tested distributions only.
pub fn competitive_tail_check_mc(
    dists: &[DiscreteDistribution],
    n: u64,
    epsilons: &[f64],
    solver: PmlSolver,
    reps: u64,
    seed: u64,
    budgets: &Budgets,
) -> Result<CompetitiveReport> {
    let k = check_family(dists)?;
    if reps < 2 {
        return Err(Error::invalid_argument("Monte Carlo needs at least two replicates"));
    }
    let profile_count = math::partition_count(n, k);
    let scale = libm::sqrt(k as f64 / n as f64);
    let mut pml_cache: BTreeMap<Vec<u64>, DiscreteDistribution> = BTreeMap::new();
    // per distribution: (pml distance, empirical distance) per replicate
    let mut draws: Vec<Vec<(f64, f64)>> = Vec::with_capacity(dists.len());
    for (i, p) in dists.iter().enumerate() {
        let s = derive_seed(seed, labels::TAIL + i as u64);
        let mut rows = Vec::with_capacity(reps as usize);
        for r in 0..reps {
            let counts = sample_counts(p, n, &mut stream_rng(s, r));
            let mut key = counts.clone();
            key.sort_unstable();
            if !pml_cache.contains_key(&key) {
                let phi = crate::profile::Profile::from_counts(&counts)?;
                pml_cache.insert(key.clone(), solve(&phi, solver, budgets)?.distribution);
            }
            let emp = DiscreteDistribution::empirical(&counts)?;
            rows.push((
                sorted_l1_slices(pml_cache[&key].probs(), p.probs()),
                sorted_l1_slices(emp.probs(), p.probs()),
            ));
        }
        draws.push(rows);
    }
    let frac = |xs: &[(f64, f64)], pick: fn(&(f64, f64)) -> f64, t: f64| {
        xs.iter().filter(|x| pick(x) >= t).count() as f64 / xs.len() as f64
    };
    let mut rows = Vec::new();
    let mut mcdiarmid = Vec::new();
    for &eps in epsilons {
        let sup = draws.iter().map(|d| frac(d, |x| x.1, eps)).fold(0.0, f64::max);
        for (dist_index, d) in draws.iter().enumerate() {
            let pml_tail = frac(d, |x| x.0, 2.0 * eps);
            let rhs = profile_count * sup;
            rows.push(CompetitiveRow {
                dist_index,
                epsilon: eps,
                pml_tail,
                empirical_tail: frac(d, |x| x.1, eps),
                sup_empirical_tail: sup,
                rhs,
                holds: pml_tail <= rhs + TOLERANCES.exact_slack,
            });
            mcdiarmid.push(McDiarmidRow {
                dist_index,
                epsilon: eps,
                excess_tail: frac(d, |x| x.1, scale + eps),
                bound: mcdiarmid_tail(n, eps),
            });
        }
    }
    Ok(CompetitiveReport {
        n,
        k,
        profile_count: profile_count as u64,
        method: RiskMethod::MonteCarlo,
        sup_candidates: dists.len(),
        rows,
        mcdiarmid,
    })
}

/// How a rate curve picks `k` from `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KRule {
    Fixed(usize),
    /// `k = 2·⌊n^e / 2⌋ + 2`, always even.
    EvenPower { exponent: f64 },
}

impl KRule {
    pub fn k(&self, n: u64) -> usize {
        match *self {
            KRule::Fixed(k) => k,
            KRule::EvenPower { exponent } => 2 * (libm::floor(libm::pow(n as f64, exponent) / 2.0) as usize) + 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub n: u64,
    pub k: usize,
    pub delta: f64,
    pub clamped: bool,
    pub m: usize,
    pub risk: f64,
    pub stderr: f64,
    /// `risk / √(k/n)`.
    pub ratio_parametric: f64,
    /// `risk / √(k/(n ln n))`.
    pub ratio_log: f64,
    pub seed: u64,
}

/// Seed used for row `index` of a rate curve.
pub fn rate_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, labels::RATE_BASE + index as u64)
}

/// Builds the row for one `n` from its adaptive-risk report.
pub fn rate_row(n: u64, packing: &PackingInstance, clamped: bool, seed: u64, report: &AdaptiveRiskReport) -> RateRow {
    let k = packing.k() as f64;
    let nf = n as f64;
    RateRow {
        n,
        k: packing.k(),
        delta: packing.delta(),
        clamped,
        m: packing.m(),
        risk: report.worst.value,
        stderr: report.worst.stderr,
        ratio_parametric: report.worst.value / libm::sqrt(k / nf),
        ratio_log: report.worst.value / libm::sqrt(k / (nf * libm::log(nf))),
        seed,
    }
}

/// Packing for one rate-curve row: `k = rule(n)`, `δ = choose_delta(n, k, c)`.
pub fn rate_packing(n: u64, rule: KRule, c: f64, budgets: &Budgets) -> Result<(PackingInstance, bool)> {
    let k = rule.k(n);
    let choice = choose_delta(n, k, c)?;
    Ok((PackingInstance::new_with(k, choice.delta, budgets)?, choice.clamped))
}

/// Adaptive risk over a sweep of `n`, one packing per `n`.
pub fn rate_curve(
    est: &dyn Estimator,
    n_list: &[u64],
    rule: KRule,
    c: f64,
    reps: u64,
    seed: u64,
    budgets: &Budgets,
) -> Result<Vec<RateRow>> {
    n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let (packing, clamped) = rate_packing(n, rule, c, budgets)?;
            let s = rate_seed(seed, i);
            let report = adaptive_risk(est, &packing, n, reps, s)?;
            Ok(rate_row(n, &packing, clamped, s, &report))
        })
        .collect()
}
