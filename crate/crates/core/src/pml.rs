//! Profile maximum likelihood.
//!
//! `P(p, φ)` is invariant under permutations of `p`, so both solvers search
//! the sorted simplex `p_1 ≤ … ≤ p_k` and return sorted distributions. The
//! support size is the problem's `k`; it is not optimized.
//!
//! - [`pml_exact`] scans every point of the sorted grid with spacing
//!   `1/resolution`, keeps the best (earliest in reverse lexicographic grid
//!   order on ties) and polishes it with the pairwise-transfer search.
//! - [`pml_approx`] runs the pairwise-transfer search from the smoothed
//!   sorted empirical distribution and from the uniform distribution.
//!
//! The pairwise-transfer search moves mass from one coordinate to another
//! (`p_i += t`, `p_j -= t`), which keeps `Σ p = 1` without renormalizing and
//! can drive coordinates to exactly zero. A move is accepted only if it
//! strictly increases `ln P(p, φ)`, so the objective is monotone across
//! sweeps. The step halves after a sweep without improvement and the search
//! stops once it falls below [`TOLERANCES.ascent_step`](crate::Tolerances).
//!
//! Nothing distinguishes local from global optima here; the grid certificate
//! only records how far polishing moved above the best grid point.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::{Budgets, TOLERANCES};
use crate::dist::DiscreteDistribution;
use crate::math;
use crate::profile::{Profile, ProfileEvaluator};
use crate::risk::{Estimator, Observation};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmlMethod {
    GridExact,
    AscentApprox,
}

impl PmlMethod {
    pub fn tag(self) -> &'static str {
        match self {
            PmlMethod::GridExact => "grid_exact",
            PmlMethod::AscentApprox => "ascent_approx",
        }
    }
}

/// What the grid stage of [`pml_exact`] established.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCertificate {
    pub resolution: u64,
    pub grid_points: u64,
    /// Best `P(p, φ)` over the grid.
    pub best_grid_likelihood: f64,
    /// Returned likelihood minus the best grid likelihood (≥ 0).
    pub gain_over_grid: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PmlSolution {
    /// Sorted ascending.
    pub distribution: DiscreteDistribution,
    /// `P(distribution, φ)`.
    pub likelihood: f64,
    pub method: PmlMethod,
    pub certificate: Option<GridCertificate>,
    /// False when a sweep cap stopped the search before the step tolerance.
    pub converged: bool,
    pub sweeps: u32,
}

/// Solver selection for [`solve`] and [`PmlPlugin`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmlSolver {
    Exact { resolution: u64 },
    Approx,
}

struct Ascent {
    sweeps: u32,
    converged: bool,
}

fn pairwise_ascent(eval: &ProfileEvaluator, p: &mut [f64], initial_step: f64, max_sweeps: u32) -> Ascent {
    let k = p.len();
    let mut cur = eval.ln_probability(p);
    let mut trial = p.to_vec();
    let mut step = initial_step;
    let mut sweeps = 0;
    while step >= TOLERANCES.ascent_step {
        if sweeps >= max_sweeps {
            return Ascent { sweeps, converged: false };
        }
        sweeps += 1;
        let mut improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j || p[j] <= 0.0 {
                    continue;
                }
                let mut best: Option<(f64, f64)> = None;
                for t in [step.min(p[j]), p[j]] {
                    trial.copy_from_slice(p);
                    trial[i] += t;
                    trial[j] = if t == p[j] { 0.0 } else { p[j] - t };
                    let v = eval.ln_probability(&trial);
                    if v > best.map_or(cur, |b| b.1) {
                        best = Some((t, v));
                    }
                }
                if let Some((t, v)) = best {
                    p[i] += t;
                    p[j] = if t == p[j] { 0.0 } else { p[j] - t };
                    cur = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ascent { sweeps, converged: true }
}

/// Sorts, renormalizes away accumulated rounding and re-evaluates.
fn finalize(eval: &ProfileEvaluator, mut p: Vec<f64>) -> Result<(DiscreteDistribution, f64)> {
    p.sort_by(f64::total_cmp);
    let dist = DiscreteDistribution::normalized(p)?;
    let ln = eval.ln_probability(dist.probs());
    Ok((dist, ln))
}

fn point_mass_solution(method: PmlMethod) -> PmlSolution {
    PmlSolution {
        distribution: DiscreteDistribution::new(vec![1.0]).expect("valid"),
        likelihood: 1.0,
        method,
        certificate: None,
        converged: true,
        sweeps: 0,
    }
}

/// Grid PML under the default budgets.
pub fn pml_exact(profile: &Profile, resolution: u64) -> Result<PmlSolution> {
    pml_exact_with(profile, resolution, &Budgets::default())
}

pub fn pml_exact_with(profile: &Profile, resolution: u64, budgets: &Budgets) -> Result<PmlSolution> {
    let k = profile.k();
    if resolution == 0 {
        return Err(Error::invalid_argument("grid resolution must be positive"));
    }
    if k == 1 {
        let mut s = point_mass_solution(PmlMethod::GridExact);
        s.certificate = Some(GridCertificate { resolution, grid_points: 1, best_grid_likelihood: 1.0, gain_over_grid: 0.0 });
        return Ok(s);
    }
    let points = math::partition_count(resolution, k);
    if points > budgets.grid_points as f64 {
        return Err(Error::BudgetExceeded { what: "PML grid", required: points, cap: budgets.grid_points });
    }
    let eval = ProfileEvaluator::new(profile);
    let mut best_ln = f64::NEG_INFINITY;
    let mut best = vec![1.0 / k as f64; k];
    math::for_each_sorted_grid_point::<()>(k, resolution, |x| {
        let v = eval.ln_probability(x);
        if v > best_ln {
            best_ln = v;
            best.copy_from_slice(x);
        }
        Ok(())
    })
    .expect("infallible");

    let mut polished = best.clone();
    let ascent = pairwise_ascent(&eval, &mut polished, 1.0 / resolution as f64, budgets.polish_sweeps);
    let (mut dist, mut ln) = finalize(&eval, polished)?;
    if !(ln >= best_ln) {
        (dist, ln) = (DiscreteDistribution::new(best)?, best_ln);
    }
    let likelihood = libm::exp(ln);
    let best_grid_likelihood = libm::exp(best_ln);
    Ok(PmlSolution {
        distribution: dist,
        likelihood,
        method: PmlMethod::GridExact,
        certificate: Some(GridCertificate {
            resolution,
            grid_points: points as u64,
            best_grid_likelihood,
            gain_over_grid: likelihood - best_grid_likelihood,
        }),
        converged: ascent.converged,
        sweeps: ascent.sweeps,
    })
}

/// Ascent PML under the default budgets.
pub fn pml_approx(profile: &Profile) -> Result<PmlSolution> {
    pml_approx_with(profile, &Budgets::default())
}

/// Sorted empirical distribution with zeros lifted to `1/(2nk)`, renormalized.
fn smoothed_start(profile: &Profile) -> Result<Vec<f64>> {
    let n = profile.n().max(1) as f64;
    let k = profile.k() as f64;
    let floor = 1.0 / (2.0 * n * k);
    let raw: Vec<f64> = profile.multiplicities().iter().map(|&c| if c == 0 { floor } else { c as f64 / n }).collect();
    Ok(DiscreteDistribution::normalized(raw)?.into_probs())
}

pub fn pml_approx_with(profile: &Profile, budgets: &Budgets) -> Result<PmlSolution> {
    let k = profile.k();
    if k == 1 {
        return Ok(point_mass_solution(PmlMethod::AscentApprox));
    }
    let eval = ProfileEvaluator::new(profile);
    let initial_step = 0.5 / k as f64;

    let mut best: Option<(DiscreteDistribution, f64)> = None;
    let mut sweeps = 0;
    let mut converged = true;
    let starts = [smoothed_start(profile)?, vec![1.0 / k as f64; k]];
    for start in starts {
        let mut p = start;
        let ascent = pairwise_ascent(&eval, &mut p, initial_step, budgets.ascent_sweeps);
        sweeps += ascent.sweeps;
        converged &= ascent.converged;
        let candidate = finalize(&eval, p)?;
        if best.as_ref().is_none_or(|b| candidate.1 > b.1) {
            best = Some(candidate);
        }
    }
    // never below the unsmoothed sorted empirical distribution itself
    if profile.n() > 0 {
        let emp = profile.sorted_empirical()?;
        let ln = eval.ln_probability(emp.probs());
        if best.as_ref().is_none_or(|b| ln > b.1) {
            best = Some((emp, ln));
        }
    }
    let (distribution, ln) = best.expect("at least one start");
    Ok(PmlSolution {
        distribution,
        likelihood: libm::exp(ln),
        method: PmlMethod::AscentApprox,
        certificate: None,
        converged,
        sweeps,
    })
}

pub fn solve(profile: &Profile, solver: PmlSolver, budgets: &Budgets) -> Result<PmlSolution> {
    match solver {
        PmlSolver::Exact { resolution } => pml_exact_with(profile, resolution, budgets),
        PmlSolver::Approx => pml_approx_with(profile, budgets),
    }
}

/// The PML plug-in: counts → profile → PML solver → sorted distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmlPlugin {
    pub solver: PmlSolver,
    pub budgets: Budgets,
}

pub fn pml_plugin_estimator(solver: PmlSolver) -> PmlPlugin {
    PmlPlugin { solver, budgets: Budgets::default() }
}

impl Estimator for PmlPlugin {
    fn name(&self) -> String {
        match self.solver {
            PmlSolver::Exact { resolution } => format!("pml_exact_r{resolution}"),
            PmlSolver::Approx => "pml_approx".into(),
        }
    }

    fn estimate(&self, obs: &Observation<'_>) -> Result<DiscreteDistribution> {
        let profile = Profile::from_counts(obs.counts)?;
        Ok(solve(&profile, self.solver, &self.budgets)?.distribution)
    }

    fn label_invariant(&self) -> bool {
        true
    }
}
