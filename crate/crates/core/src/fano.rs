//! Generalized Fano bound, exact mutual information and the lemma check.

use alloc::vec::Vec;

use crate::config::{Budgets, TOLERANCES};
use crate::dist::{kl, sample_counts, DiscreteDistribution};
use crate::math::{self, ln_sequence_probability, log_sum_exp, LnFactorials};
use crate::packing::{interval_misses, PackingInstance};
use crate::profile::{enumerate_profiles_with, ProfileEvaluator};
use crate::property::SymmetricProperty;
use crate::risk::{EstimateCache, Estimator, Observation, RiskMethod};
use crate::rng::{derive_seed, labels, stream_rng};
use crate::{Error, Result};

/// Inputs to the generalized Fano bound. Mutual information is in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoInputs {
    pub delta: f64,
    pub p_min: f64,
    pub m: usize,
    pub mi: f64,
}

impl FanoInputs {
    pub fn new(delta: f64, p_min: f64, m: usize, mi: f64) -> Result<Self> {
        let inputs = FanoInputs { delta, p_min, m, mi };
        inputs.validate()?;
        Ok(inputs)
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::invalid_argument("delta must be finite and non-negative"));
        }
        if !(self.p_min > 0.0 && self.p_min <= 1.0) {
            return Err(Error::invalid_argument("p_min must lie in (0, 1]"));
        }
        if self.m < 2 {
            return Err(Error::invalid_argument("M must be at least 2"));
        }
        if !(self.mi >= 0.0) || !self.mi.is_finite() {
            return Err(Error::invalid_argument("mutual information must be finite and non-negative"));
        }
        Ok(())
    }
}

/// `Δ/2 · (p_min − (I + p_min ln 2) / ln M)`, unclamped.
pub fn fano_bound(inputs: &FanoInputs) -> Result<f64> {
    inputs.validate()?;
    let ln_m = libm::log(inputs.m as f64);
    Ok(inputs.delta / 2.0 * (inputs.p_min - (inputs.mi + inputs.p_min * core::f64::consts::LN_2) / ln_m))
}

/// The restricted action set `A0` of the lemma.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionSet {
    /// Every distribution is admissible.
    Simplex,
    /// At most `max_misses` of the open intervals `(c_j − h, c_j + h)` may
    /// contain no coordinate of the action.
    Intervals { centers: Vec<f64>, halfwidth: f64, max_misses: usize },
}

impl ActionSet {
    /// The packing's `A0`.
    pub fn from_packing(packing: &PackingInstance) -> Self {
        ActionSet::Intervals {
            centers: packing.p0().probs().to_vec(),
            halfwidth: packing.interval_halfwidth(),
            max_misses: packing.k() / 10,
        }
    }

    pub fn contains(&self, a: &[f64]) -> bool {
        match self {
            ActionSet::Simplex => true,
            ActionSet::Intervals { centers, halfwidth, max_misses } => {
                a.len() == centers.len() && interval_misses(a, centers, *halfwidth) <= *max_misses
            }
        }
    }
}

/// `M` hypotheses `θ_i` with losses `L_i(θ_i, a) = |F_i(a) − F_i(θ_i)|`,
/// observed through `n` i.i.d. draws, under a uniform prior.
#[derive(Debug, Clone)]
pub struct FiniteExperiment {
    pub hypotheses: Vec<DiscreteDistribution>,
    pub losses: Vec<SymmetricProperty>,
    pub n: u64,
    pub action_set: ActionSet,
}

impl FiniteExperiment {
    pub fn new(
        hypotheses: Vec<DiscreteDistribution>,
        losses: Vec<SymmetricProperty>,
        n: u64,
        action_set: ActionSet,
    ) -> Result<Self> {
        if hypotheses.len() != losses.len() {
            return Err(Error::DimensionMismatch { left: hypotheses.len(), right: losses.len() });
        }
        let k = hypotheses.first().ok_or_else(|| Error::invalid_argument("no hypotheses"))?.k();
        if let Some(h) = hypotheses.iter().find(|h| h.k() != k) {
            return Err(Error::DimensionMismatch { left: k, right: h.k() });
        }
        if let ActionSet::Intervals { centers, .. } = &action_set {
            if centers.len() != k {
                return Err(Error::DimensionMismatch { left: k, right: centers.len() });
            }
        }
        Ok(FiniteExperiment { hypotheses, losses, n, action_set })
    }

    /// The first `m` codewords of a packing: `θ_i = p_{u_i}`, `F_i = F_{u_i}`,
    /// action set `A0`.
    pub fn from_packing(packing: &PackingInstance, m: usize, n: u64) -> Result<Self> {
        let sub = packing.restricted(m)?;
        FiniteExperiment::new(sub.hypotheses(), sub.properties(), n, ActionSet::from_packing(&sub))
    }

    pub fn m(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn k(&self) -> usize {
        self.hypotheses[0].k()
    }

    fn truths(&self) -> Result<Vec<f64>> {
        self.losses.iter().zip(&self.hypotheses).map(|(f, h)| f.evaluate(h)).collect()
    }

    fn losses_at(&self, truths: &[f64], a: &DiscreteDistribution, out: &mut Vec<f64>) -> Result<()> {
        out.clear();
        for (f, t) in self.losses.iter().zip(truths) {
            out.push((f.evaluate(a)? - t).abs());
        }
        Ok(())
    }
}

/// `I(U; X^n)` under the default budgets.
pub fn mutual_information_exact(exp: &FiniteExperiment) -> Result<f64> {
    mutual_information_exact_with(exp, &Budgets::default())
}

/// `I(U; X^n) = Σ_u (1/M) Σ_x P_u(x) ln(P_u(x) / P̄(x))` in nats, summed over
/// count vectors with multinomial weights. The cost is
/// `C(n+k−1, k−1)·M` states.
pub fn mutual_information_exact_with(exp: &FiniteExperiment, budgets: &Budgets) -> Result<f64> {
    let (n, k, m) = (exp.n, exp.k(), exp.m());
    let states = math::count_vector_total(n, k) * m as f64;
    if states > budgets.enumeration_states as f64 {
        return Err(Error::BudgetExceeded { what: "mutual information enumeration", required: states, cap: budgets.enumeration_states });
    }
    let lf = LnFactorials::new(n);
    let mut ln_probs = Vec::with_capacity(m);
    let mut total = 0.0;
    math::for_each_count_vector(n, k, |c| {
        let w = lf.ln_multinomial(c);
        ln_probs.clear();
        ln_probs.extend(exp.hypotheses.iter().map(|h| ln_sequence_probability(h.probs(), c)));
        total += mixture_term(w, &ln_probs);
        Ok::<_, Error>(())
    })?;
    Ok(clamp_mi(total, m))
}

/// `I(U; Φ)` where `Φ` is the profile of `X^n`; at most `I(U; X^n)` by data
/// processing.
pub fn mutual_information_profile(exp: &FiniteExperiment, budgets: &Budgets) -> Result<f64> {
    if exp.n == 0 {
        return Ok(0.0);
    }
    let space = enumerate_profiles_with(exp.n, exp.k(), budgets)?;
    let m = exp.m();
    let mut total = 0.0;
    let mut ln_probs = Vec::with_capacity(m);
    for phi in &space.profiles {
        let eval = ProfileEvaluator::new(phi);
        ln_probs.clear();
        ln_probs.extend(exp.hypotheses.iter().map(|h| eval.ln_probability(h.probs())));
        total += mixture_term(0.0, &ln_probs);
    }
    Ok(clamp_mi(total, m))
}

// Σ_u (1/M) exp(w + ℓ_u)(ℓ_u − ln P̄) for one outcome.
fn mixture_term(w: f64, ln_probs: &[f64]) -> f64 {
    let ln_m = libm::log(ln_probs.len() as f64);
    let ln_mix = log_sum_exp(ln_probs) - ln_m;
    if ln_mix == f64::NEG_INFINITY {
        return 0.0;
    }
    ln_probs
        .iter()
        .filter(|&&l| l > f64::NEG_INFINITY)
        .map(|&l| libm::exp(w + l - ln_m) * (l - ln_mix))
        .sum()
}

// Rounding can push the sum a hair outside [0, ln M].
fn clamp_mi(total: f64, m: usize) -> f64 {
    total.max(0.0).min(libm::log(m as f64))
}

/// `n · (1/M) Σ_u KL(θ_u ‖ θ̄)` with `θ̄` the single-letter mixture, an upper
/// bound on `I(U; X^n)` that needs no enumeration.
pub fn mutual_information_upper_bound(exp: &FiniteExperiment) -> Result<f64> {
    let m = exp.m() as f64;
    let mut mix = alloc::vec![0.0; exp.k()];
    for h in &exp.hypotheses {
        for (s, p) in mix.iter_mut().zip(h.probs()) {
            *s += p / m;
        }
    }
    let mix = DiscreteDistribution::normalized(mix)?;
    let mut total = 0.0;
    for h in &exp.hypotheses {
        total += kl(h, &mix)?;
    }
    Ok(exp.n as f64 * total / m)
}

/// `Ψ(a) = argmin_i L_i(θ_i, a)`, lowest index on ties.
pub fn test_rule(a: &DiscreteDistribution, exp: &FiniteExperiment) -> Result<usize> {
    if a.k() != exp.k() {
        return Err(Error::DimensionMismatch { left: a.k(), right: exp.k() });
    }
    if !exp.action_set.contains(a.probs()) {
        return Err(Error::OutsideActionSet);
    }
    let truths = exp.truths()?;
    let mut losses = Vec::new();
    exp.losses_at(&truths, a, &mut losses)?;
    let mut best = 0;
    for (i, &l) in losses.iter().enumerate() {
        if l < losses[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Sum of the two smallest entries: the least `L_i(a) + L_j(a)`, `i ≠ j`.
fn pair_separation(losses: &[f64]) -> f64 {
    let (mut a, mut b) = (f64::INFINITY, f64::INFINITY);
    for &l in losses {
        if l < a {
            b = a;
            a = l;
        } else if l < b {
            b = l;
        }
    }
    a + b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaOptions {
    /// Resolution of the sorted simplex grid scanned for `Δ`.
    pub grid_resolution: u64,
    /// Replicates per hypothesis when exact enumeration exceeds the budget.
    pub mc_reps: u64,
    pub budgets: Budgets,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions { grid_resolution: 60, mc_reps: 10_000, budgets: Budgets::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub p_min: f64,
    pub mi: f64,
    /// True when `mi` is the closed-form upper bound rather than exact.
    pub mi_is_bound: bool,
    /// Separation used in the bound: the smaller of the grid and realized values.
    pub delta: f64,
    /// Least pairwise loss sum over the grid of `A0` actions and the hypotheses themselves.
    pub delta_grid: Option<f64>,
    /// Least pairwise loss sum over the estimator outputs that landed in `A0`.
    pub delta_realized: Option<f64>,
    /// `max_i E_{θ_i}[L_i(θ_i, a(X))]`.
    pub lhs_risk: f64,
    pub lhs_stderr: f64,
    /// Unclamped bound, or 0 (the trivial bound) when not applicable.
    pub fano_bound: f64,
    pub satisfied: bool,
    /// False when some hypothesis never puts the estimator in `A0`.
    pub applicable: bool,
    pub method: RiskMethod,
    pub m: usize,
    pub n: u64,
    pub k: usize,
    pub seed: u64,
}

/// Checks the lemma for `estimator` on `exp` under the default options.
pub fn verify_lemma(exp: &FiniteExperiment, estimator: &dyn Estimator, seed: u64) -> Result<LemmaReport> {
    verify_lemma_with(exp, estimator, seed, &LemmaOptions::default())
}

/// Computes `p_min`, `I(U; X^n)`, `Δ` and the left-hand side, then compares
/// the left-hand side with the bound.
///
/// Exact enumeration is used when `C(n+k−1, k−1)·M` fits the budget; the
/// tolerance is then `1e-10`. Otherwise every hypothesis gets
/// `opts.mc_reps` replicates, the mutual information is replaced by its
/// closed-form upper bound, and the tolerance is three standard errors.
pub fn verify_lemma_with(
    exp: &FiniteExperiment,
    estimator: &dyn Estimator,
    seed: u64,
    opts: &LemmaOptions,
) -> Result<LemmaReport> {
    let (n, k, m) = (exp.n, exp.k(), exp.m());
    let truths = exp.truths()?;
    let states = math::count_vector_total(n, k) * m as f64;
    let exact = states <= opts.budgets.enumeration_states as f64;

    let mut in_set = alloc::vec![0.0; m];
    let mut risk = alloc::vec![0.0; m];
    let mut risk_se = alloc::vec![0.0; m];
    let mut realized: Option<f64> = None;
    let mut losses = Vec::with_capacity(m);
    let note_realized = |losses: &[f64], realized: &mut Option<f64>| {
        let s = pair_separation(losses);
        *realized = Some(realized.map_or(s, |r: f64| r.min(s)));
    };

    let (mi, mi_is_bound, method) = if exact {
        let lf = LnFactorials::new(n);
        let mut cache = EstimateCache::new(estimator);
        let mut ln_probs = Vec::with_capacity(m);
        math::for_each_count_vector(n, k, |c| {
            let w = lf.ln_multinomial(c);
            ln_probs.clear();
            ln_probs.extend(exp.hypotheses.iter().map(|h| ln_sequence_probability(h.probs(), c)));
            if ln_probs.iter().all(|&l| l == f64::NEG_INFINITY) {
                return Ok(());
            }
            for i in 0..m {
                if ln_probs[i] == f64::NEG_INFINITY {
                    continue;
                }
                let a = cache.get(c, &exp.hypotheses[i])?.clone();
                let inside = exp.action_set.contains(a.probs());
                exp.losses_at(&truths, &a, &mut losses)?;
                if inside {
                    note_realized(&losses, &mut realized);
                }
                let pr = libm::exp(w + ln_probs[i]);
                risk[i] += pr * losses[i];
                if inside {
                    in_set[i] += pr;
                }
            }
            Ok::<_, Error>(())
        })?;
        (mutual_information_exact_with(exp, &opts.budgets)?, false, RiskMethod::ExactEnum)
    } else {
        if opts.mc_reps < 2 {
            return Err(Error::invalid_argument("Monte Carlo needs at least two replicates"));
        }
        let mut draws = Vec::with_capacity(opts.mc_reps as usize);
        for i in 0..m {
            let s = derive_seed(seed, labels::LEMMA + i as u64);
            let theta = &exp.hypotheses[i];
            draws.clear();
            let mut hits = 0u64;
            for r in 0..opts.mc_reps {
                let counts = sample_counts(theta, n, &mut stream_rng(s, r));
                let a = estimator
                    .estimate(&Observation { counts: &counts, generating: theta })
                    .map_err(|e| Error::EstimatorFailed { seed: s, stream: r, source: alloc::boxed::Box::new(e) })?;
                exp.losses_at(&truths, &a, &mut losses)?;
                if exp.action_set.contains(a.probs()) {
                    hits += 1;
                    note_realized(&losses, &mut realized);
                }
                draws.push(losses[i]);
            }
            let (mean, se) = math::mean_and_stderr(&draws);
            risk[i] = mean;
            risk_se[i] = se;
            in_set[i] = hits as f64 / opts.mc_reps as f64;
        }
        (mutual_information_upper_bound(exp)?, true, RiskMethod::MonteCarlo)
    };

    let delta_grid = grid_separation(exp, &truths, opts)?;
    let delta = match (delta_grid, realized) {
        (Some(g), Some(r)) => g.min(r),
        (Some(v), None) | (None, Some(v)) => v,
        (None, None) => 0.0,
    };
    let p_min = in_set.iter().copied().fold(f64::INFINITY, f64::min).min(1.0);
    let mut worst = 0;
    for i in 0..m {
        if risk[i] > risk[worst] {
            worst = i;
        }
    }
    let (lhs_risk, lhs_stderr) = (risk[worst], risk_se[worst]);

    let applicable = p_min > 0.0 && m >= 2;
    let bound = if applicable { fano_bound(&FanoInputs::new(delta, p_min, m, mi)?)? } else { 0.0 };
    let slack = if exact { TOLERANCES.exact_slack } else { TOLERANCES.fano_mc_sigma * lhs_stderr };
    Ok(LemmaReport {
        p_min,
        mi,
        mi_is_bound,
        delta,
        delta_grid,
        delta_realized: realized,
        lhs_risk,
        lhs_stderr,
        fano_bound: bound,
        satisfied: lhs_risk >= bound - slack,
        applicable,
        method,
        m,
        n,
        k,
        seed,
    })
}

// Both the losses and A0 are permutation invariant, so sorted grid points
// cover the simplex grid.
fn grid_separation(exp: &FiniteExperiment, truths: &[f64], opts: &LemmaOptions) -> Result<Option<f64>> {
    let k = exp.k();
    let points = math::partition_count(opts.grid_resolution, k);
    if points > opts.budgets.grid_points as f64 {
        return Err(Error::BudgetExceeded { what: "separation grid", required: points, cap: opts.budgets.grid_points });
    }
    let mut best: Option<f64> = None;
    let mut losses = Vec::with_capacity(exp.m());
    let mut consider = |a: &DiscreteDistribution, best: &mut Option<f64>| -> Result<()> {
        if exp.action_set.contains(a.probs()) {
            exp.losses_at(truths, a, &mut losses)?;
            let s = pair_separation(&losses);
            *best = Some(best.map_or(s, |b| b.min(s)));
        }
        Ok(())
    };
    for h in &exp.hypotheses {
        consider(h, &mut best)?;
    }
    math::for_each_sorted_grid_point(k, opts.grid_resolution, |x| {
        let a = DiscreteDistribution::normalized(x.to_vec())?;
        consider(&a, &mut best)
    })?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::mi_upper_bound;
    use crate::property::builtin;
    use crate::risk::{ConstantEstimator, Empirical};
    use std::vec;

    fn dist(v: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(v.to_vec()).unwrap()
    }

    // Brute force over all k^n sequences.
    fn sequence_mi(exp: &FiniteExperiment) -> f64 {
        let (n, k, m) = (exp.n as u32, exp.k(), exp.m());
        let mut total = 0.0;
        for code in 0..k.pow(n) {
            let mut x = code;
            let mut probs = vec![1.0; m];
            for _ in 0..n {
                for (u, h) in exp.hypotheses.iter().enumerate() {
                    probs[u] *= h.probs()[x % k];
                }
                x /= k;
            }
            let mix = probs.iter().sum::<f64>() / m as f64;
            for &p in &probs {
                if p > 0.0 {
                    total += p / m as f64 * (p / mix).ln();
                }
            }
        }
        total
    }

    fn simplex_exp(h: Vec<DiscreteDistribution>, n: u64) -> FiniteExperiment {
        let f = builtin("entropy").unwrap();
        let m = h.len();
        FiniteExperiment::new(h, vec![f; m], n, ActionSet::Simplex).unwrap()
    }

    #[test]
    fn classical_reduction() {
        for m in [2usize, 3, 10, 1000] {
            for delta in [0.0, 0.3, 2.0] {
                let b = fano_bound(&FanoInputs::new(delta, 1.0, m, 0.0).unwrap()).unwrap();
                let expect = delta / 2.0 * (1.0 - (2f64).ln() / (m as f64).ln());
                assert!((b - expect).abs() <= 1e-15 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn algebraic_zero_and_monotonicity() {
        let (p, m) = (0.7, 5usize);
        let mi = p * ((m as f64).ln() - 2f64.ln());
        assert!(fano_bound(&FanoInputs::new(1.3, p, m, mi).unwrap()).unwrap().abs() < 1e-15);
        let b = |d: f64, i: f64| fano_bound(&FanoInputs { delta: d, p_min: 0.5, m: 8, mi: i }).unwrap();
        assert!(b(1.0, 0.1) > b(1.0, 0.2));
        assert!(b(2.0, 0.1) > b(1.0, 0.1));
    }

    #[test]
    fn input_validation() {
        assert!(FanoInputs::new(1.0, 0.5, 1, 0.0).is_err());
        assert!(FanoInputs::new(-1.0, 0.5, 2, 0.0).is_err());
        assert!(FanoInputs::new(1.0, 0.0, 2, 0.0).is_err());
        assert!(FanoInputs::new(1.0, 0.5, 2, -0.1).is_err());
        assert!(fano_bound(&FanoInputs { delta: 1.0, p_min: 0.5, m: 1, mi: 0.0 }).is_err());
    }

    #[test]
    fn mi_matches_sequence_enumeration() {
        let cases = [
            vec![dist(&[0.2, 0.8]), dist(&[0.6, 0.4])],
            vec![dist(&[0.1, 0.3, 0.6]), dist(&[0.5, 0.25, 0.25]), dist(&[1.0 / 3.0; 3])],
            vec![dist(&[0.0, 0.5, 0.5]), dist(&[1.0, 0.0, 0.0])],
        ];
        for h in cases {
            for n in 0..=5 {
                let exp = simplex_exp(h.clone(), n);
                let mi = mutual_information_exact(&exp).unwrap();
                let oracle = sequence_mi(&exp).clamp(0.0, (exp.m() as f64).ln());
                assert!((mi - oracle).abs() < 1e-12, "n={n}: {mi} vs {oracle}");
                assert!(mi >= 0.0 && mi <= (exp.m() as f64).ln());
                let prof = mutual_information_profile(&exp, &Budgets::default()).unwrap();
                assert!(prof <= mi + 1e-12);
            }
        }
    }

    #[test]
    fn disjoint_supports_reach_ln_m() {
        let exp = simplex_exp(vec![dist(&[1.0, 0.0]), dist(&[0.0, 1.0])], 3);
        assert!((mutual_information_exact(&exp).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn identical_hypotheses() {
        let p = dist(&[0.3, 0.7]);
        let exp = simplex_exp(vec![p.clone(), p.clone()], 4);
        assert_eq!(mutual_information_exact(&exp).unwrap(), 0.0);
        assert_eq!(mutual_information_exact(&simplex_exp(vec![p.clone(), p], 0)).unwrap(), 0.0);
        let r = verify_lemma(&exp, &Empirical, 0).unwrap();
        assert_eq!(r.mi, 0.0);
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.fano_bound, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn packing_mi_below_closed_form() {
        let packing = PackingInstance::new(4, 0.01).unwrap();
        let exp = FiniteExperiment::from_packing(&packing, packing.m().min(4), 4).unwrap();
        let mi = mutual_information_exact(&exp).unwrap();
        assert!(mi <= mi_upper_bound(4, 4, 0.01));
        assert!(mi <= mutual_information_upper_bound(&exp).unwrap() + 1e-15);
    }

    #[test]
    fn test_rule_contract() {
        let packing = PackingInstance::new(4, 0.02).unwrap();
        let exp = FiniteExperiment::from_packing(&packing, packing.m(), 3).unwrap();
        for (i, h) in exp.hypotheses.iter().enumerate() {
            assert_eq!(test_rule(h, &exp).unwrap(), i);
        }
        // p0 is equidistant from every hypothesis
        assert_eq!(test_rule(packing.p0(), &exp).unwrap(), 0);
        let far = DiscreteDistribution::uniform(4).unwrap();
        assert!(matches!(test_rule(&far, &exp), Err(Error::OutsideActionSet)));
    }

    #[test]
    fn constant_p0_closed_form() {
        let packing = PackingInstance::new(4, 0.02).unwrap();
        let exp = FiniteExperiment::from_packing(&packing, 2, 4).unwrap();
        let est = ConstantEstimator(packing.p0().clone());
        let r = verify_lemma(&exp, &est, 1).unwrap();
        let expect = exp
            .losses
            .iter()
            .zip(&exp.hypotheses)
            .map(|(f, h)| (f.evaluate(packing.p0()).unwrap() - f.evaluate(h).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!((r.lhs_risk - expect).abs() < 1e-12);
        assert!((r.p_min - 1.0).abs() < 1e-12);
        assert!(r.applicable && r.satisfied);
    }

    #[test]
    fn empirical_plugin_satisfies_lemma() {
        let exp = FiniteExperiment::new(
            vec![dist(&[0.1, 0.2, 0.3, 0.4]), dist(&[0.4, 0.3, 0.2, 0.1])],
            vec![builtin("entropy").unwrap(), builtin("power_sum(2)").unwrap()],
            4,
            ActionSet::Simplex,
        )
        .unwrap();
        let r = verify_lemma(&exp, &Empirical, 0).unwrap();
        assert_eq!(r.method, RiskMethod::ExactEnum);
        assert!(r.applicable && r.satisfied, "{r:?}");
    }

    #[test]
    fn monte_carlo_fallback() {
        let exp = simplex_exp(vec![dist(&[0.1, 0.9]), dist(&[0.5, 0.5])], 20);
        let opts = LemmaOptions {
            mc_reps: 2_000,
            budgets: Budgets { enumeration_states: 10, ..Budgets::default() },
            ..LemmaOptions::default()
        };
        let r = verify_lemma_with(&exp, &Empirical, 5, &opts).unwrap();
        assert_eq!(r.method, RiskMethod::MonteCarlo);
        assert!(r.mi_is_bound && r.satisfied && r.lhs_stderr > 0.0);
        assert_eq!(r, verify_lemma_with(&exp, &Empirical, 5, &opts).unwrap());
    }
}
