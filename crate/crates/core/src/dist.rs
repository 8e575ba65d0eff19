//! Discrete distributions on `[k]`, seeded sampling and divergences.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::config::TOLERANCES;
use crate::rng::{stream_rng, StreamRng};
use crate::{Error, Result};

/// A probability vector `(p_1, …, p_k)`.
///
/// Entries are finite and nonnegative and sum to one within
/// [`TOLERANCES.simplex`](crate::Tolerances::simplex).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("support size must be at least 1".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!("entry {i} is {p}")));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TOLERANCES.simplex {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(DiscreteDistribution { probs })
    }

    /// Scales nonnegative weights to sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDistribution("support size must be at least 1".into()));
        }
        Ok(DiscreteDistribution { probs: vec![1.0 / k as f64; k] })
    }

    /// Empirical distribution `c_i / n` of a count vector.
    pub fn empirical(counts: &[u64]) -> Result<Self> {
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::invalid_argument("empirical distribution of an empty sample"));
        }
        Self::new(counts.iter().map(|&c| c as f64 / n as f64).collect())
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// The same distribution with entries in ascending order.
    pub fn sorted(&self) -> Self {
        let mut probs = self.probs.clone();
        probs.sort_by(f64::total_cmp);
        DiscreteDistribution { probs }
    }

    fn check_same_k(&self, other: &Self) -> Result<()> {
        if self.k() != other.k() {
            return Err(Error::DimensionMismatch { left: self.k(), right: other.k() });
        }
        Ok(())
    }
}

/// `n` i.i.d. draws from a distribution, as 1-based symbol indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBatch {
    draws: Vec<u32>,
    k: usize,
    seed: u64,
}

impl SampleBatch {
    /// Wraps externally produced draws; every draw must lie in `1..=k`.
    pub fn new(draws: Vec<u32>, k: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid_argument("alphabet size must be at least 1"));
        }
        if let Some(bad) = draws.iter().find(|&&x| x == 0 || x as usize > k) {
            return Err(Error::invalid_argument(format!("draw {bad} outside 1..={k}")));
        }
        Ok(SampleBatch { draws, k, seed })
    }

    pub fn draws(&self) -> &[u32] {
        &self.draws
    }

    pub fn n(&self) -> usize {
        self.draws.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Per-symbol counts `(c_1, …, c_k)`.
    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.k];
        for &x in &self.draws {
            counts[x as usize - 1] += 1;
        }
        counts
    }
}

/// Draws `n` i.i.d. symbols from `p` by CDF inversion on stream 0 of `seed`.
pub fn sample(p: &DiscreteDistribution, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::invalid_argument("sample size must be at least 1"));
    }
    let mut cdf: Vec<f64> = p
        .probs()
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    // symbols past the last positive entry must stay unreachable
    let last = p.probs().iter().rposition(|&x| x > 0.0).unwrap_or(0);
    cdf[last..].fill(f64::INFINITY);

    let mut rng = stream_rng(seed, crate::rng::labels::SAMPLE);
    let draws = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            cdf.partition_point(|&c| c <= u) as u32 + 1
        })
        .collect();
    SampleBatch::new(draws, p.k(), seed)
}

/// Draws the count vector of `n` i.i.d. symbols from `p` directly, by
/// sequential conditional binomials. Distributed identically to
/// `sample(p, n, _).counts()` but costs `O(k)` rather than `O(n)`.
pub fn sample_counts(p: &DiscreteDistribution, n: u64, rng: &mut StreamRng) -> Vec<u64> {
    let k = p.k();
    let mut counts = vec![0u64; k];
    let mut remaining = n;
    let mut mass_left = 1.0;
    for i in 0..k - 1 {
        if remaining == 0 {
            break;
        }
        let pi = p.probs()[i];
        let q = if mass_left <= 0.0 { 1.0 } else { (pi / mass_left).clamp(0.0, 1.0) };
        let c = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q).expect("q in (0,1)").sample(rng)
        };
        counts[i] = c;
        remaining -= c;
        mass_left -= pi;
    }
    counts[k - 1] += remaining;
    counts
}

/// `min_σ Σ_i |q_{σ(i)} − p_i|`, computed by sorting both vectors: on the line
/// the monotone matching minimizes ℓ₁ transport cost.
pub fn sorted_l1(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_same_k(q)?;
    Ok(sorted_l1_slices(p.probs(), q.probs()))
}

pub(crate) fn sorted_l1_slices(p: &[f64], q: &[f64]) -> f64 {
    let mut a = p.to_vec();
    let mut b = q.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum()
}

/// Total variation distance `Σ|p_i − q_i| / 2`.
pub fn tv(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_same_k(q)?;
    Ok(p.probs().iter().zip(q.probs()).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

/// `D_KL(p ‖ q) = Σ p_i ln(p_i / q_i)` in nats.
pub fn kl(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_same_k(q)?;
    let mut acc = 0.0;
    for (index, (&a, &b)) in p.probs().iter().zip(q.probs()).enumerate() {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Err(Error::InfiniteDivergence { index, p_value: a });
        }
        // difference of logs: no overflow of a/b when b is subnormal
        acc += a * (libm::log(a) - libm::log(b));
    }
    if !acc.is_finite() {
        return Err(Error::NonFinite("kl"));
    }
    Ok(acc.max(0.0))
}

/// `χ²(p ‖ q) = Σ (p_i − q_i)² / q_i`.
pub fn chi2(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    p.check_same_k(q)?;
    let mut acc = 0.0;
    for (index, (&a, &b)) in p.probs().iter().zip(q.probs()).enumerate() {
        if b == 0.0 {
            if a > 0.0 {
                return Err(Error::InfiniteDivergence { index, p_value: a });
            }
            continue;
        }
        let d = a - b;
        acc += d * d / b;
    }
    if !acc.is_finite() {
        return Err(Error::NonFinite("chi2"));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use proptest::prelude::*;
    use rand::Rng;
    use std::vec::Vec;

    fn dist(v: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(v.to_vec()).unwrap()
    }

    fn next_permutation(a: &mut [usize]) -> bool {
        if a.len() < 2 {
            return false;
        }
        let Some(i) = (0..a.len() - 1).rev().find(|&i| a[i] < a[i + 1]) else {
            return false;
        };
        let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
        a.swap(i, j);
        a[i + 1..].reverse();
        true
    }

    fn brute_sorted_l1(p: &[f64], q: &[f64]) -> f64 {
        let mut sigma: Vec<usize> = (0..p.len()).collect();
        let mut best = f64::INFINITY;
        loop {
            let v: f64 = sigma.iter().enumerate().map(|(i, &s)| (q[s] - p[i]).abs()).sum();
            best = best.min(v);
            if !next_permutation(&mut sigma) {
                return best;
            }
        }
    }

    fn random_dist(rng: &mut StreamRng, k: usize) -> DiscreteDistribution {
        let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        DiscreteDistribution::normalized(w).unwrap()
    }

    #[test]
    fn validation() {
        assert!(DiscreteDistribution::new(vec![]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![-0.1, 1.1]).is_err());
        assert!(DiscreteDistribution::new(vec![f64::NAN, 1.0]).is_err());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5 + 1e-13]).is_ok());
        assert!(DiscreteDistribution::new(vec![0.5, 0.5 + 1e-11]).is_err());
    }

    #[test]
    fn degenerate_sample() {
        let b = sample(&dist(&[1.0]), 5, 99).unwrap();
        assert_eq!(b.draws(), &[1, 1, 1, 1, 1]);
        assert!(sample(&dist(&[1.0]), 0, 1).is_err());
    }

    #[test]
    fn zero_mass_symbols_never_drawn() {
        let b = sample(&dist(&[0.0, 0.3, 0.7, 0.0]), 10_000, 3).unwrap();
        assert!(b.draws().iter().all(|&x| x == 2 || x == 3));
    }

    #[test]
    fn fair_coin_frequency() {
        // binomial sd at n=1e5 is 0.5/sqrt(1e5) ≈ 1.58e-3; 0.01 is ~6.3 sd
        let b = sample(&dist(&[0.5, 0.5]), 100_000, 2024).unwrap();
        let freq = b.counts()[0] as f64 / 1e5;
        assert!((freq - 0.5).abs() < 0.01, "{freq}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = dist(&[0.2, 0.3, 0.5]);
        assert_eq!(sample(&p, 100, 5).unwrap(), sample(&p, 100, 5).unwrap());
        assert_ne!(sample(&p, 100, 5).unwrap(), sample(&p, 100, 6).unwrap());
    }

    #[test]
    fn count_sampler_matches_means() {
        let p = dist(&[0.1, 0.2, 0.3, 0.4]);
        let mut totals = [0u64; 4];
        let reps = 20_000;
        for r in 0..reps {
            let c = sample_counts(&p, 50, &mut stream_rng(11, r));
            assert_eq!(c.iter().sum::<u64>(), 50);
            for (t, x) in totals.iter_mut().zip(&c) {
                *t += x;
            }
        }
        for (i, &t) in totals.iter().enumerate() {
            let mean = t as f64 / reps as f64;
            let expect = 50.0 * p.probs()[i];
            let sd = libm::sqrt(50.0 * p.probs()[i] * (1.0 - p.probs()[i]) / reps as f64);
            assert!((mean - expect).abs() < 5.0 * sd, "{i}: {mean} vs {expect}");
        }
        let c = sample_counts(&dist(&[0.0, 1.0, 0.0]), 7, &mut stream_rng(1, 1));
        assert_eq!(c, vec![0, 7, 0]);
    }

    #[test]
    fn sorted_l1_examples() {
        let p = dist(&[0.5, 0.5]);
        assert_eq!(sorted_l1(&p, &p).unwrap(), 0.0);
        assert_eq!(sorted_l1(&p, &dist(&[1.0, 0.0])).unwrap(), 1.0);
        assert!(sorted_l1(&p, &dist(&[1.0])).is_err());
    }

    #[test]
    fn sorted_l1_matches_permutation_oracle() {
        let mut rng = stream_rng(42, 0);
        for k in 1..=6 {
            for _ in 0..200 {
                let p = random_dist(&mut rng, k);
                let q = random_dist(&mut rng, k);
                let fast = sorted_l1(&p, &q).unwrap();
                let slow = brute_sorted_l1(p.probs(), q.probs());
                assert!((fast - slow).abs() <= 1e-12, "k={k}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn divergence_examples() {
        let p = dist(&[0.2, 0.3, 0.5]);
        assert_eq!(tv(&p, &p).unwrap(), 0.0);
        assert_eq!(kl(&p, &p).unwrap(), 0.0);
        assert_eq!(chi2(&p, &p).unwrap(), 0.0);
        assert_eq!(tv(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0])).unwrap(), 1.0);
        assert!(matches!(
            kl(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0])),
            Err(Error::InfiniteDivergence { index: 0, .. })
        ));
        assert!(matches!(
            chi2(&dist(&[0.5, 0.5]), &dist(&[1.0, 0.0])),
            Err(Error::InfiniteDivergence { index: 1, .. })
        ));
        // support of p inside support of q is fine
        assert!(kl(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap() > 0.0);
        let tiny = dist(&[1.0 - 1e-310, 1e-310]);
        assert!(kl(&dist(&[0.5, 0.5]), &tiny).unwrap().is_finite());
    }

    fn arb_pair(k: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (
            proptest::collection::vec(0.01f64..1.0, k),
            proptest::collection::vec(0.01f64..1.0, k),
        )
    }

    proptest! {
        #[test]
        fn divergence_invariants(k in 1usize..8, seed in any::<u64>()) {
            let mut rng = stream_rng(seed, 0);
            let p = random_dist(&mut rng, k);
            let q = random_dist(&mut rng, k);
            let t = tv(&p, &q).unwrap();
            let d = kl(&p, &q).unwrap();
            let c = chi2(&p, &q).unwrap();
            prop_assert!((0.0..=1.0).contains(&t));
            prop_assert!(d >= 0.0 && c >= 0.0);
            prop_assert!(d <= c + 1e-12);
        }

        #[test]
        fn sorted_l1_symmetric_and_permutation_invariant(
            (a, b) in (2usize..7).prop_flat_map(arb_pair),
            rot in 0usize..7,
        ) {
            let p = DiscreteDistribution::normalized(a).unwrap();
            let q = DiscreteDistribution::normalized(b).unwrap();
            let d = sorted_l1(&p, &q).unwrap();
            prop_assert!((d - sorted_l1(&q, &p).unwrap()).abs() < 1e-15);
            let mut rotated = q.probs().to_vec();
            let r = rot % rotated.len();
            rotated.rotate_left(r);
            let q2 = DiscreteDistribution::new(rotated).unwrap();
            prop_assert!((d - sorted_l1(&p, &q2).unwrap()).abs() < 1e-15);
        }
    }
}
