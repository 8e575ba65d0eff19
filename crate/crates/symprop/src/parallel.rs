//! Rayon drivers for the per-hypothesis risk loops. Work items are
//! independent and carry their own seeds; results are collected in index
//! order, so outputs do not depend on the thread count.

use rayon::prelude::*;
use symprop_core::risk::{
    assumption1_part, hypothesis_risk, rate_packing, rate_row, rate_seed, summarize_adaptive, summarize_assumption1,
    AdaptiveRiskReport, Assumption1Report, KRule, RateRow,
};
use symprop_core::{Budgets, Estimator, PackingInstance, Result};

/// Runs `f` on a pool of `threads` workers, or on the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> crate::Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => Ok(rayon::ThreadPoolBuilder::new().num_threads(t).build()?.install(f)),
    }
}

pub fn adaptive_risk(
    est: &dyn Estimator,
    packing: &PackingInstance,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<AdaptiveRiskReport> {
    let reports = (0..packing.m())
        .into_par_iter()
        .map(|i| hypothesis_risk(est, packing, i, n, reps, seed))
        .collect::<Result<Vec<_>>>()?;
    summarize_adaptive(reports)
}

pub fn assumption1_check(
    est: &dyn Estimator,
    packing: &PackingInstance,
    n: u64,
    reps: u64,
    seed: u64,
) -> Result<Assumption1Report> {
    let parts = (0..=packing.m())
        .into_par_iter()
        .map(|i| assumption1_part(est, packing, i, n, reps, seed))
        .collect::<Result<Vec<_>>>()?;
    summarize_assumption1(packing.k(), n, parts)
}

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

#[cfg(test)]
mod tests {
    use super::*;
    use symprop_core::risk::Empirical;

    #[test]
    fn matches_sequential_core() {
        let packing = PackingInstance::new(6, 0.004).unwrap();
        let par = adaptive_risk(&Empirical, &packing, 200, 50, 11).unwrap();
        let seq = symprop_core::risk::adaptive_risk(&Empirical, &packing, 200, 50, 11).unwrap();
        assert_eq!(par, seq);
        let one = with_threads(Some(1), || adaptive_risk(&Empirical, &packing, 200, 50, 11).unwrap()).unwrap();
        assert_eq!(one, seq);
        let a = assumption1_check(&Empirical, &packing, 200, 50, 3).unwrap();
        assert_eq!(a, symprop_core::risk::assumption1_check(&Empirical, &packing, 200, 50, 3).unwrap());
    }
}
