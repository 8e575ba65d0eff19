//! The perturbed-center hypothesis family used for the adaptive lower bound.
//!
//! For even `k = 2·k0` the center is
//! `p0 = (1/(2k), 1/(2k) + 1/(k(k−1)), …, 3/(2k))`, equally spaced with gap
//! `1/(k(k−1))`. A sign vector `u ∈ {±1}^{k0}` moves coordinate `i` by
//! `+u_i·δ` and coordinate `k0 + i` by `−u_i·δ`. For `δ < 1/(4k(k−1))` every
//! `p_u` stays strictly increasing and inside the open intervals
//! `I_i = (p0_i − h, p0_i + h)`, `h = 1/(2k(k−1))`.
//!
//! The admissible action set `A0` holds the distributions whose entries hit
//! all but at most `k/10` of the intervals.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::config::Budgets;
use crate::dist::{chi2, kl, DiscreteDistribution};
use crate::property::{adversarial_property, SymmetricProperty};
use crate::rng::{derive_seed, labels, stream_rng};
use crate::{Error, Result};

/// A vector in `{±1}^len`, stored as bits: coordinate `i` is `−1` exactly
/// when bit `len − 1 − i` is set, so the bit string reads left to right
/// with `'1'` for `−1` and `'0'` for `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    bits: u64,
    len: usize,
}

impl SignVector {
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > 63 || (bits >> len) != 0 {
            return Err(Error::invalid_argument(format!("bits {bits:#x} do not fit length {len}")));
        }
        Ok(SignVector { bits, len })
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut bits = 0u64;
        for &s in signs {
            bits = (bits << 1)
                | match s {
                    1 => 0,
                    -1 => 1,
                    _ => return Err(Error::invalid_argument(format!("sign {s} is not ±1"))),
                };
        }
        Self::from_bits(bits, signs.len())
    }

    pub fn parse_bit_string(s: &str) -> Result<Self> {
        let signs: Result<Vec<i8>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(1),
                '1' => Ok(-1),
                _ => Err(Error::invalid_argument(format!("bad bit string {s:?}"))),
            })
            .collect();
        Self::from_signs(&signs?)
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.sign(i) < 0 { '1' } else { '0' }).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// `u_i ∈ {+1, −1}`.
    #[inline]
    pub fn sign(&self, i: usize) -> i8 {
        if (self.bits >> (self.len - 1 - i)) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn hamming(&self, other: &SignVector) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

/// Output of the greedy packing.
#[derive(Debug, Clone, PartialEq)]
pub struct GvPacking {
    pub codewords: Vec<SignVector>,
    pub min_distance: u32,
    /// `2^{k0} / V(k0, d − 1)`; a maximal code always reaches it.
    pub counting_bound: f64,
    /// `exp(k0 / 8)`.
    pub exp_target: f64,
}

impl GvPacking {
    pub fn reaches_exp_target(&self) -> bool {
        self.codewords.len() as f64 >= self.exp_target
    }
}

/// `ceil(k0 / 5)`.
pub fn required_distance(k0: usize) -> u32 {
    k0.div_ceil(5) as u32
}

/// Greedy scan of `{±1}^{k0}` in increasing bit order (all `+1` first),
/// keeping each vector at Hamming distance `≥ ceil(k0/5)` from every vector
/// already kept.
pub fn gv_packing(k0: usize, budgets: &Budgets) -> Result<GvPacking> {
    if k0 == 0 || k0 > 63 {
        return Err(Error::invalid_argument(format!("k0 = {k0} outside 1..=63")));
    }
    let total = 1u64 << k0;
    if total > budgets.packing_scan {
        return Err(Error::BudgetExceeded { what: "packing scan", required: total as f64, cap: budgets.packing_scan });
    }
    let d = required_distance(k0);
    let mut codewords: Vec<SignVector> = Vec::new();
    for bits in 0..total {
        let v = SignVector { bits, len: k0 };
        if codewords.iter().all(|c| c.hamming(&v) >= d) {
            codewords.push(v);
        }
    }
    let mut ball = 0.0;
    let mut binom = 1.0;
    for i in 0..d as usize {
        ball += binom;
        binom = binom * (k0 - i) as f64 / (i + 1) as f64;
    }
    Ok(GvPacking {
        codewords,
        min_distance: d,
        counting_bound: total as f64 / ball,
        exp_target: libm::exp(k0 as f64 / 8.0),
    })
}

/// `p0` for even `k ≥ 2`.
pub fn center_distribution(k: usize) -> Result<DiscreteDistribution> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::invalid_argument(format!("k = {k} must be even and at least 2")));
    }
    let kf = k as f64;
    let first = 1.0 / (2.0 * kf);
    let gap = 1.0 / (kf * (kf - 1.0));
    DiscreteDistribution::new((0..k).map(|i| first + i as f64 * gap).collect())
}

/// `δ = min(c/√(nk), 0.99/(4k(k−1)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaChoice {
    pub delta: f64,
    /// Set when the `c/√(nk)` choice violated `δ < 1/(4k(k−1))`.
    pub clamped: bool,
}

pub fn choose_delta(n: u64, k: usize, c: f64) -> Result<DeltaChoice> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::invalid_argument(format!("c must be positive, got {c}")));
    }
    if n == 0 || k < 2 {
        return Err(Error::invalid_argument("choose_delta needs n ≥ 1 and k ≥ 2"));
    }
    let raw = c / libm::sqrt(n as f64 * k as f64);
    let cap = 0.99 / (4.0 * k as f64 * (k as f64 - 1.0));
    Ok(if raw > cap { DeltaChoice { delta: cap, clamped: true } } else { DeltaChoice { delta: raw, clamped: false } })
}

/// `2 n k² δ²`, the closed-form bound on `I(U; X^n)`.
pub fn mi_upper_bound(n: u64, k: usize, delta: f64) -> f64 {
    2.0 * n as f64 * (k as f64) * (k as f64) * delta * delta
}

/// Number of intervals `(c_i − h, c_i + h)` containing no entry of `q`.
pub(crate) fn interval_misses(q: &[f64], centers: &[f64], halfwidth: f64) -> usize {
    let mut sorted = q.to_vec();
    sorted.sort_by(f64::total_cmp);
    centers
        .iter()
        .filter(|&&c| {
            let lo = c - halfwidth;
            let idx = sorted.partition_point(|&x| x <= lo);
            !sorted.get(idx).is_some_and(|&x| x < c + halfwidth)
        })
        .count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackingInstance {
    k: usize,
    delta: f64,
    p0: DiscreteDistribution,
    codewords: Vec<SignVector>,
    min_hamming: u32,
    gv: Option<GvPacking>,
}

impl PackingInstance {
    /// Builds the instance with the greedy packing under default budgets.
    pub fn new(k: usize, delta: f64) -> Result<Self> {
        Self::new_with(k, delta, &Budgets::default())
    }

    pub fn new_with(k: usize, delta: f64, budgets: &Budgets) -> Result<Self> {
        let p0 = center_distribution(k)?;
        Self::check_delta(k, delta)?;
        let gv = gv_packing(k / 2, budgets)?;
        Ok(PackingInstance { k, delta, p0, codewords: gv.codewords.clone(), min_hamming: gv.min_distance, gv: Some(gv) })
    }

    /// Rebuilds an instance from stored codewords, re-checking every invariant.
    pub fn from_codewords(k: usize, delta: f64, codewords: Vec<SignVector>) -> Result<Self> {
        let p0 = center_distribution(k)?;
        Self::check_delta(k, delta)?;
        let k0 = k / 2;
        let d = required_distance(k0);
        if codewords.is_empty() {
            return Err(Error::invalid_argument("packing needs at least one codeword"));
        }
        for (a, u) in codewords.iter().enumerate() {
            if u.len() != k0 {
                return Err(Error::invalid_argument(format!("codeword length {} ≠ k0 = {k0}", u.len())));
            }
            if codewords[..a].iter().any(|v| v.hamming(u) < d) {
                return Err(Error::invalid_argument(format!("codeword {} violates distance {d}", u.to_bit_string())));
            }
        }
        Ok(PackingInstance { k, delta, p0, codewords, min_hamming: d, gv: None })
    }

    fn check_delta(k: usize, delta: f64) -> Result<()> {
        let cap = 1.0 / (4.0 * k as f64 * (k as f64 - 1.0));
        if !(delta > 0.0 && delta < cap) {
            return Err(Error::invalid_argument(format!("δ = {delta} outside (0, {cap})")));
        }
        Ok(())
    }

    /// The same instance keeping only the first `m` codewords.
    pub fn restricted(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.codewords.len() {
            return Err(Error::invalid_argument(format!("cannot keep {m} of {} codewords", self.codewords.len())));
        }
        let mut out = self.clone();
        out.codewords.truncate(m);
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn k0(&self) -> usize {
        self.k / 2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p0(&self) -> &DiscreteDistribution {
        &self.p0
    }

    pub fn codewords(&self) -> &[SignVector] {
        &self.codewords
    }

    /// `M = |U0|`.
    pub fn m(&self) -> usize {
        self.codewords.len()
    }

    /// The distance every pair of codewords is guaranteed, `ceil(k0/5)`.
    pub fn min_hamming(&self) -> u32 {
        self.min_hamming
    }

    /// Smallest pairwise Hamming distance actually present; `None` for a
    /// single codeword.
    pub fn observed_min_hamming(&self) -> Option<u32> {
        let w = &self.codewords;
        (0..w.len()).flat_map(|i| (i + 1..w.len()).map(move |j| w[i].hamming(&w[j]))).min()
    }

    /// Greedy construction report, when built from scratch.
    pub fn gv(&self) -> Option<&GvPacking> {
        self.gv.as_ref()
    }

    /// `h = 1/(2k(k−1))`.
    pub fn interval_halfwidth(&self) -> f64 {
        1.0 / (2.0 * self.k as f64 * (self.k as f64 - 1.0))
    }

    /// `kδ/5`.
    pub fn separation_bound(&self) -> f64 {
        self.k as f64 * self.delta / 5.0
    }

    /// `p_u`.
    pub fn perturb(&self, u: &SignVector) -> Result<DiscreteDistribution> {
        let k0 = self.k0();
        if u.len() != k0 {
            return Err(Error::invalid_argument(format!("sign vector length {} ≠ k0 = {k0}", u.len())));
        }
        let mut probs = self.p0.probs().to_vec();
        for i in 0..k0 {
            let s = u.sign(i) as f64 * self.delta;
            probs[i] += s;
            probs[k0 + i] -= s;
        }
        DiscreteDistribution::new(probs)
    }

    /// `{p_u : u ∈ U0}` in codeword order.
    pub fn hypotheses(&self) -> Vec<DiscreteDistribution> {
        self.codewords.iter().map(|u| self.perturb(u).expect("valid by construction")).collect()
    }

    /// `{F_u : u ∈ U0}` in codeword order.
    pub fn properties(&self) -> Vec<SymmetricProperty> {
        self.codewords.iter().map(|u| adversarial_property(u, self).expect("member")).collect()
    }

    /// Membership in `A0`; endpoints of the open intervals count as misses.
    pub fn in_a0(&self, q: &DiscreteDistribution) -> Result<bool> {
        if q.k() != self.k {
            return Err(Error::DimensionMismatch { left: q.k(), right: self.k });
        }
        Ok(self.a0_misses(q.probs()) as f64 <= self.k as f64 / 10.0)
    }

    pub(crate) fn a0_misses(&self, q: &[f64]) -> usize {
        interval_misses(q, self.p0.probs(), self.interval_halfwidth())
    }

    /// `n·E_U[KL(p_U ‖ p0)]`, `n·E_U[χ²(p_U ‖ p0)]` and `2nk²δ²`, with `U`
    /// uniform over the codewords.
    pub fn information_chain(&self, n: u64) -> Result<(f64, f64, f64)> {
        let m = self.m() as f64;
        let mut kl_sum = 0.0;
        let mut chi_sum = 0.0;
        for p in self.hypotheses() {
            kl_sum += kl(&p, &self.p0)?;
            chi_sum += chi2(&p, &self.p0)?;
        }
        let n = n as f64;
        Ok((n * kl_sum / m, n * chi_sum / m, mi_upper_bound(n as u64, self.k, self.delta)))
    }

    /// Samples `trials` distributions from `A0` and returns the smallest
    /// observed `F_u(q) + F_u'(q)` over all codeword pairs `u ≠ u'`.
    ///
    /// Each candidate perturbs every `p0_i` uniformly within half the
    /// interval half-width, moves up to `⌊k/10⌋` coordinates into a
    /// neighbouring interval (creating misses), then shifts all coordinates
    /// equally to restore `Σ q = 1`. Candidates with a negative entry or
    /// outside `A0` are rejected. Trial `t` reads stream `t` of the seed
    /// derived for separation checks.
    pub fn separation_check(&self, trials: u64, seed: u64, budgets: &Budgets) -> Result<SeparationReport> {
        if self.m() < 2 {
            return Err(Error::invalid_argument("separation needs at least two codewords"));
        }
        let props = self.properties();
        let k = self.k;
        let h = self.interval_halfwidth();
        let p0 = self.p0.probs();
        let max_moves = k / 10;
        let base = derive_seed(seed, labels::SEPARATION);
        let mut minimum = f64::INFINITY;
        let mut rejections = 0u64;
        let mut q = alloc::vec![0.0; k];
        let mut values = alloc::vec![0.0; props.len()];
        for t in 0..trials {
            let mut rng = stream_rng(base, t);
            loop {
                for (qi, &c) in q.iter_mut().zip(p0) {
                    *qi = c + h * (rng.random::<f64>() - 0.5);
                }
                let moves = rng.random_range(0..=max_moves);
                for _ in 0..moves {
                    let i = rng.random_range(0..k);
                    let j = if i == 0 || (i + 1 < k && rng.random::<bool>()) { i + 1 } else { i - 1 };
                    q[i] = p0[j] + h * (rng.random::<f64>() - 0.5);
                }
                let shift = (q.iter().sum::<f64>() - 1.0) / k as f64;
                q.iter_mut().for_each(|x| *x -= shift);
                let ok = q.iter().all(|&x| x >= 0.0) && self.a0_misses(&q) as f64 <= k as f64 / 10.0;
                if ok {
                    break;
                }
                rejections += 1;
                if rejections > budgets.rejections {
                    return Err(Error::RejectionLimit(rejections));
                }
            }
            for (v, f) in values.iter_mut().zip(&props) {
                *v = q.iter().map(|&x| f.f(x)).sum();
            }
            // min over pairs u ≠ u' of a sum = sum of the two smallest values
            let (mut a, mut b) = (f64::INFINITY, f64::INFINITY);
            for &v in &values {
                if v < a {
                    b = a;
                    a = v;
                } else if v < b {
                    b = v;
                }
            }
            minimum = minimum.min(a + b);
        }
        Ok(SeparationReport { minimum, bound: self.separation_bound(), trials, rejections })
    }
}

/// Everything [`PackingInstance::verify`] checks.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingReport {
    /// Every `p_u` has strictly increasing entries.
    pub all_monotone: bool,
    /// Every `p_u` lies in `A0`.
    pub all_in_a0: bool,
    /// Observed smallest pairwise distance; `None` for a single codeword.
    pub min_hamming: Option<u32>,
    pub required_distance: u32,
    /// `None` when the packing has a single codeword.
    pub separation: Option<SeparationReport>,
    /// `n·E_U[KL(p_U ‖ p0)]`.
    pub kl_term: f64,
    /// `n·E_U[χ²(p_U ‖ p0)]`.
    pub chi2_term: f64,
    /// `2nk²δ²`.
    pub mi_bound: f64,
}

impl PackingReport {
    pub fn chain_holds(&self) -> bool {
        self.kl_term <= self.chi2_term && self.chi2_term <= self.mi_bound * (1.0 + 1e-12)
    }

    pub fn hamming_holds(&self) -> bool {
        self.min_hamming.is_none_or(|d| d >= self.required_distance)
    }

    pub fn passed(&self) -> bool {
        self.all_monotone
            && self.all_in_a0
            && self.hamming_holds()
            && self.chain_holds()
            && self.separation.is_none_or(|s| s.holds())
    }
}

impl PackingInstance {
    /// Rechecks the construction: monotone entries, `A0` membership, pairwise
    /// distance, the information chain at `n`, and separation over `trials`
    /// sampled actions.
    pub fn verify(&self, n: u64, trials: u64, seed: u64, budgets: &Budgets) -> Result<PackingReport> {
        let hyps = self.hypotheses();
        let all_monotone = hyps.iter().all(|p| p.probs().windows(2).all(|w| w[0] < w[1]));
        let mut all_in_a0 = true;
        for p in &hyps {
            all_in_a0 &= self.in_a0(p)?;
        }
        let separation = if self.m() >= 2 { Some(self.separation_check(trials, seed, budgets)?) } else { None };
        let (kl_term, chi2_term, mi_bound) = self.information_chain(n)?;
        Ok(PackingReport {
            all_monotone,
            all_in_a0,
            min_hamming: self.observed_min_hamming(),
            required_distance: required_distance(self.k0()),
            separation,
            kl_term,
            chi2_term,
            mi_bound,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    /// Smallest observed `F_u(q) + F_u'(q)`.
    pub minimum: f64,
    /// `kδ/5`.
    pub bound: f64,
    pub trials: u64,
    pub rejections: u64,
}

impl SeparationReport {
    pub fn holds(&self) -> bool {
        self.minimum >= self.bound
    }
}
