//! Profiles (fingerprints) of a sample and exact profile probabilities.
//!
//! The profile of a sample over `[k]` is `φ = (φ_0, …, φ_n)` where `φ_i`
//! counts the symbols seen exactly `i` times. It is the sufficient statistic
//! for every label-invariant procedure, PML included.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::Budgets;
use crate::dist::{DiscreteDistribution, SampleBatch};
use crate::math::{self, log_add_exp, LnFactorials};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    counts: Vec<u64>,
    n: u64,
    k: usize,
}

impl Profile {
    /// Builds a profile from `(φ_0, φ_1, …)`. `n = Σ i·φ_i` and `k = Σ φ_i`
    /// are derived; trailing zeros past index `n` are dropped.
    pub fn new(mut counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidProfile("empty profile".into()));
        }
        let mut n: u64 = 0;
        let mut k: u64 = 0;
        for (i, &c) in counts.iter().enumerate() {
            n = (i as u64)
                .checked_mul(c)
                .and_then(|v| v.checked_add(n))
                .ok_or_else(|| Error::InvalidProfile("sample size overflows".into()))?;
            k = k
                .checked_add(c)
                .ok_or_else(|| Error::InvalidProfile("support size overflows".into()))?;
        }
        if k == 0 {
            return Err(Error::InvalidProfile("support size must be at least 1".into()));
        }
        counts.resize(n as usize + 1, 0);
        Ok(Profile { counts, n, k: k as usize })
    }

    /// Like [`Profile::new`], additionally checking the declared support size.
    pub fn with_k(counts: Vec<u64>, k: usize) -> Result<Self> {
        let profile = Self::new(counts)?;
        if profile.k != k {
            return Err(Error::InvalidProfile(format!(
                "entries sum to {} but k = {k}",
                profile.k
            )));
        }
        Ok(profile)
    }

    /// Profile of a per-symbol count vector.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidProfile("empty count vector".into()));
        }
        let n: u64 = counts.iter().sum();
        let mut phi = vec![0u64; n as usize + 1];
        for &c in counts {
            phi[c as usize] += 1;
        }
        Ok(Profile { counts: phi, n, k: counts.len() })
    }

    /// `(φ_0, …, φ_n)`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The multiset of per-symbol counts, ascending, length `k`.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k);
        for (i, &c) in self.counts.iter().enumerate() {
            out.extend(core::iter::repeat_n(i as u64, c as usize));
        }
        out
    }

    /// Empirical distribution with entries in ascending order.
    pub fn sorted_empirical(&self) -> Result<DiscreteDistribution> {
        DiscreteDistribution::empirical(&self.multiplicities())
    }
}

/// Extracts the profile of a sample batch.
pub fn profile_of(batch: &SampleBatch) -> Profile {
    Profile::from_counts(&batch.counts()).expect("batch has k ≥ 1")
}

/// The complete profile space `Φ_{n,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSpace {
    pub n: u64,
    pub k: usize,
    /// Profiles in reverse lexicographic order of their partitions of `n`.
    pub profiles: Vec<Profile>,
}

impl ProfileSpace {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

/// `|Φ_{n,k}|`, the number of partitions of `n` into at most `k` parts,
/// without enumerating them.
pub fn profile_space_size(n: u64, k: usize) -> f64 {
    math::partition_count(n, k)
}

/// [`enumerate_profiles_with`] under the default budget.
pub fn enumerate_profiles(n: u64, k: usize) -> Result<ProfileSpace> {
    enumerate_profiles_with(n, k, &Budgets::default())
}

/// Enumerates `Φ_{n,k}`: each partition of `n` into at most `k` parts is one
/// profile. Refuses when the count exceeds `budgets.profiles`.
pub fn enumerate_profiles_with(n: u64, k: usize, budgets: &Budgets) -> Result<ProfileSpace> {
    if n == 0 || k == 0 {
        return Err(Error::invalid_argument("profile enumeration needs n ≥ 1 and k ≥ 1"));
    }
    let size = profile_space_size(n, k);
    if size > budgets.profiles as f64 {
        return Err(Error::BudgetExceeded { what: "profile enumeration", required: size, cap: budgets.profiles });
    }
    let mut profiles = Vec::with_capacity(size as usize);
    math::for_each_partition::<()>(n, k, |parts| {
        let mut phi = vec![0u64; n as usize + 1];
        phi[0] = (k - parts.len()) as u64;
        for &part in parts {
            phi[part as usize] += 1;
        }
        profiles.push(Profile { counts: phi, n, k });
        Ok(())
    })
    .expect("infallible");
    Ok(ProfileSpace { n, k, profiles })
}

/// Reusable evaluator of `ln P(p, φ)` for a fixed profile.
///
/// `P(p, φ) = n!/Π_c (c!)^{φ_c} · Σ_σ Π_i p_i^{c_σ(i)}`, the sum running over
/// distinct assignments of the count multiset to the `k` symbols. The sum is
/// evaluated by dynamic programming over symbols, with the state recording
/// how many symbols of each multiplicity class are still unassigned, so the
/// cost is `k · Π_c (φ_c + 1) · #classes` rather than `k!`.
#[derive(Debug, Clone)]
pub struct ProfileEvaluator {
    k: usize,
    /// (count value, class size) for every class with `φ_c > 0`.
    classes: Vec<(u64, u64)>,
    strides: Vec<usize>,
    states: usize,
    ln_coefficient: f64,
}

impl ProfileEvaluator {
    pub fn new(profile: &Profile) -> Self {
        let classes: Vec<(u64, u64)> = profile
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as u64, c))
            .collect();
        let mut strides = Vec::with_capacity(classes.len());
        let mut states = 1usize;
        for &(_, size) in &classes {
            strides.push(states);
            states *= size as usize + 1;
        }
        let lf = LnFactorials::new(profile.n);
        let ln_coefficient = classes
            .iter()
            .fold(lf.get(profile.n), |acc, &(c, size)| acc - size as f64 * lf.get(c));
        ProfileEvaluator { k: profile.k, classes, strides, states, ln_coefficient }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `ln P(p, φ)` for a probability slice of length `k` (unchecked).
    pub fn ln_probability(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), self.k);
        let mut cur = vec![f64::NEG_INFINITY; self.states];
        let mut next = vec![f64::NEG_INFINITY; self.states];
        cur[self.states - 1] = 0.0;
        for &pi in p {
            let ln_p = if pi > 0.0 { libm::log(pi) } else { f64::NEG_INFINITY };
            next.fill(f64::NEG_INFINITY);
            for (s, &v) in cur.iter().enumerate() {
                if v == f64::NEG_INFINITY {
                    continue;
                }
                for (j, &(c, size)) in self.classes.iter().enumerate() {
                    let stride = self.strides[j];
                    let remaining = (s / stride) % (size as usize + 1);
                    if remaining == 0 {
                        continue;
                    }
                    let term = if c == 0 {
                        0.0
                    } else if pi > 0.0 {
                        c as f64 * ln_p
                    } else {
                        continue;
                    };
                    let t = s - stride;
                    next[t] = log_add_exp(next[t], v + term);
                }
            }
            core::mem::swap(&mut cur, &mut next);
        }
        cur[0] + self.ln_coefficient
    }

    pub fn probability(&self, p: &[f64]) -> f64 {
        libm::exp(self.ln_probability(p))
    }
}

/// `ln P(p, φ)`.
pub fn ln_profile_probability(p: &DiscreteDistribution, profile: &Profile) -> Result<f64> {
    if p.k() != profile.k() {
        return Err(Error::DimensionMismatch { left: p.k(), right: profile.k() });
    }
    Ok(ProfileEvaluator::new(profile).ln_probability(p.probs()))
}

/// `P(p, φ)`: probability that `n` i.i.d. draws from `p` have profile `φ`.
pub fn profile_probability(p: &DiscreteDistribution, profile: &Profile) -> Result<f64> {
    ln_profile_probability(p, profile).map(libm::exp)
}

/// The two cardinality bounds on `|Φ_{n,k}|`, kept in log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpaceBounds {
    /// `k · ln(n + 1)`.
    pub ln_poly: f64,
    /// `3 √n`.
    pub ln_exp: f64,
}

impl ProfileSpaceBounds {
    /// `(n+1)^k`; `+∞` on overflow.
    pub fn poly(&self) -> f64 {
        libm::exp(self.ln_poly)
    }

    /// `exp(3√n)`; `+∞` on overflow.
    pub fn exp(&self) -> f64 {
        libm::exp(self.ln_exp)
    }

    pub fn overflows(&self) -> bool {
        !self.poly().is_finite() || !self.exp().is_finite()
    }
}

pub fn profile_space_bounds(n: u64, k: usize) -> Result<ProfileSpaceBounds> {
    if n == 0 || k == 0 {
        return Err(Error::invalid_argument("bounds need n ≥ 1 and k ≥ 1"));
    }
    Ok(ProfileSpaceBounds {
        ln_poly: k as f64 * libm::log(n as f64 + 1.0),
        ln_exp: 3.0 * libm::sqrt(n as f64),
    })
}
