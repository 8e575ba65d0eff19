//! Small numeric and combinatorial helpers shared across modules.

use alloc::vec;
use alloc::vec::Vec;

/// `ln(e^a + e^b)` without overflow; `-∞` is the additive identity.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// Numerically stable `ln Σ e^{x_i}` over a slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = xs.iter().map(|&x| libm::exp(x - max)).sum();
    max + libm::log(s)
}

/// Table of `ln m!` for `m = 0..=n`.
#[derive(Debug, Clone)]
pub struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub fn new(n: u64) -> Self {
        let mut table = Vec::with_capacity(n as usize + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for m in 1..=n {
            acc += libm::log(m as f64);
            table.push(acc);
        }
        LnFactorials(table)
    }

    #[inline]
    pub fn get(&self, m: u64) -> f64 {
        self.0[m as usize]
    }

    /// `ln (n! / Π c_i!)` with `n = Σ c_i`.
    pub fn ln_multinomial(&self, counts: &[u64]) -> f64 {
        let n: u64 = counts.iter().sum();
        counts.iter().fold(self.get(n), |acc, &c| acc - self.get(c))
    }
}

/// `Σ c_i ln p_i` with the convention `0 · ln 0 = 0`; `-∞` when a positive
/// count lands on a zero-probability symbol.
pub fn ln_sequence_probability(probs: &[f64], counts: &[u64]) -> f64 {
    let mut acc = 0.0;
    for (&p, &c) in probs.iter().zip(counts) {
        if c == 0 {
            continue;
        }
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += c as f64 * libm::log(p);
    }
    acc
}

/// Number of count vectors of length `k` summing to `n`, i.e. `C(n+k-1, k-1)`,
/// saturating to `f64::INFINITY`.
pub fn count_vector_total(n: u64, k: usize) -> f64 {
    if k == 0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let r = (k - 1) as u128;
    let mut acc: u128 = 1;
    for i in 1..=r {
        // acc * (n + i) / i stays integral at every step
        match acc.checked_mul(n as u128 + i) {
            Some(v) => acc = v / i,
            None => return f64::INFINITY,
        }
    }
    acc as f64
}

/// Visits every count vector `(c_1, …, c_k)` with `Σ c_i = n`, in
/// lexicographically decreasing order starting at `(n, 0, …, 0)`.
pub fn for_each_count_vector<E>(
    n: u64,
    k: usize,
    mut f: impl FnMut(&[u64]) -> Result<(), E>,
) -> Result<(), E> {
    if k == 0 {
        return Ok(());
    }
    let mut c = vec![0u64; k];
    c[0] = n;
    loop {
        f(&c)?;
        let tail = c[k - 1];
        c[k - 1] = 0;
        let Some(i) = (0..k - 1).rev().find(|&i| c[i] > 0) else {
            return Ok(());
        };
        c[i] -= 1;
        c[i + 1] = tail + 1;
    }
}

/// Number of integer partitions of `n` into at most `k` parts, saturating to
/// `f64::INFINITY`.
pub fn partition_count(n: u64, k: usize) -> f64 {
    let n = n as usize;
    let k = k.min(n.max(1));
    // ways[m] = partitions of m with parts ≤ j (conjugate: at most j parts)
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=k {
        for m in part..=n {
            ways[m] = ways[m].saturating_add(ways[m - part]);
        }
    }
    if ways[n] == u128::MAX {
        f64::INFINITY
    } else {
        ways[n] as f64
    }
}

/// Visits every partition of `n` into at most `max_parts` positive parts,
/// parts listed in non-increasing order, partitions in reverse
/// lexicographic order (`(n)` first, `(1, …, 1)` last).
pub fn for_each_partition<E>(
    n: u64,
    max_parts: usize,
    mut f: impl FnMut(&[u64]) -> Result<(), E>,
) -> Result<(), E> {
    fn rec<E>(
        rem: u64,
        max_part: u64,
        parts_left: usize,
        parts: &mut Vec<u64>,
        f: &mut dyn FnMut(&[u64]) -> Result<(), E>,
    ) -> Result<(), E> {
        if rem == 0 {
            return f(parts);
        }
        if parts_left == 0 {
            return Ok(());
        }
        let hi = rem.min(max_part);
        for part in (1..=hi).rev() {
            if part.saturating_mul(parts_left as u64) < rem {
                break;
            }
            parts.push(part);
            rec(rem - part, part, parts_left - 1, parts, f)?;
            parts.pop();
        }
        Ok(())
    }
    let mut parts = Vec::with_capacity(max_parts);
    rec(n, n, max_parts, &mut parts, &mut f)
}

/// Visits every point of the sorted simplex grid
/// `{x : x_1 ≤ … ≤ x_k, x_i ∈ {0, 1/r, …, 1}, Σ x_i = 1}` in reverse
/// lexicographic order of the underlying partition of `r`.
pub fn for_each_sorted_grid_point<E>(
    k: usize,
    resolution: u64,
    mut f: impl FnMut(&[f64]) -> Result<(), E>,
) -> Result<(), E> {
    let mut point = vec![0.0; k];
    let r = resolution as f64;
    for_each_partition(resolution, k, |parts| {
        let zeros = k - parts.len();
        point[..zeros].fill(0.0);
        for (slot, &part) in point[zeros..].iter_mut().zip(parts.iter().rev()) {
            *slot = part as f64 / r;
        }
        f(&point)
    })
}

/// Sample mean and standard error (`sd / √m`, unbiased variance).
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / m as f64;
    if m < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1) as f64;
    (mean, libm::sqrt(var / m as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    // p(n, ≤k) by the classic recurrence p(n,k) = p(n,k-1) + p(n-k,k)
    fn partitions_rec(n: i64, k: i64) -> u64 {
        if n == 0 {
            return 1;
        }
        if n < 0 || k == 0 {
            return 0;
        }
        partitions_rec(n, k - 1) + partitions_rec(n - k, k)
    }

    #[test]
    fn partition_counts_match_recurrence() {
        for n in 1..=14u64 {
            for k in 1..=14usize {
                let mut seen = 0u64;
                for_each_partition::<()>(n, k, |p| {
                    assert!(p.len() <= k);
                    assert_eq!(p.iter().sum::<u64>(), n);
                    assert!(p.windows(2).all(|w| w[0] >= w[1]));
                    seen += 1;
                    Ok(())
                })
                .unwrap();
                let expected = partitions_rec(n as i64, k as i64);
                assert_eq!(seen, expected);
                assert_eq!(partition_count(n, k), expected as f64);
            }
        }
        assert_eq!(partitions_rec(10, 10), 42);
    }

    #[test]
    fn partitions_come_in_reverse_lex_order() {
        let mut all: Vec<Vec<u64>> = Vec::new();
        for_each_partition::<()>(6, 6, |p| {
            all.push(p.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(all[0], [6]);
        assert_eq!(all.last().unwrap(), &[1, 1, 1, 1, 1, 1]);
        assert!(all.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn count_vectors_cover_all_compositions() {
        for k in 1..=4 {
            for n in 0..=6u64 {
                let mut seen = Vec::new();
                for_each_count_vector::<()>(n, k, |c| {
                    seen.push(c.to_vec());
                    Ok(())
                })
                .unwrap();
                let mut brute = Vec::new();
                let total = (n + 1).pow(k as u32);
                for code in 0..total {
                    let mut c = Vec::new();
                    let mut x = code;
                    for _ in 0..k {
                        c.push(x % (n + 1));
                        x /= n + 1;
                    }
                    if c.iter().sum::<u64>() == n {
                        brute.push(c);
                    }
                }
                assert_eq!(seen.len(), brute.len());
                assert_eq!(count_vector_total(n, k), brute.len() as f64);
                let mut sorted = seen.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), seen.len());
            }
        }
    }

    #[test]
    fn log_add_exp_identities() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 1.5), 1.5);
        let v = log_add_exp(libm::log(0.25), libm::log(0.5));
        assert!((libm::exp(v) - 0.75).abs() < 1e-15);
        assert!((log_sum_exp(&[-1000.0, -1000.0]) - (-1000.0 + libm::log(2.0))).abs() < 1e-12);
    }

    #[test]
    fn grid_points_are_sorted_and_normalized() {
        let mut count = 0;
        for_each_sorted_grid_point::<()>(3, 12, |x| {
            assert!(x.windows(2).all(|w| w[0] <= w[1]));
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count as f64, partition_count(12, 3));
    }
}
