//! Computational machinery for adaptive symmetric-property estimation.
//!
//! The crate covers the full pipeline used to study plug-in estimators of
//! symmetric properties `F(p) = Σ f(p_i)` of a discrete distribution:
//!
//! - [`dist`]: distributions on `[k]`, seeded sampling, TV/KL/χ² and the
//!   sorted-ℓ₁ (permutation-minimized) distance.
//! - [`profile`]: sample profiles (fingerprints), exhaustive enumeration of
//!   the profile space and exact profile probabilities.
//! - [`pml`]: profile maximum likelihood solvers (grid + polish, and
//!   pairwise-transfer ascent) and the PML plug-in estimator.
//! - [`property`]: symmetric properties, built-ins and the nearest-center
//!   adversarial properties.
//! - [`packing`]: the perturbed-center hypothesis family, its greedy
//!   Gilbert–Varshamov sign packing and the admissible action set.
//! - [`fano`]: the generalized Fano bound, exact mutual information and an
//!   end-to-end verifier for the bound.
//! - [`risk`]: estimators, Monte Carlo and exact risk, adaptive risk over a
//!   packing, the sorted-ℓ₁ risk check and the competitive tail check.
//!
//! Everything here is `no_std` (with `alloc`) and single-threaded; IO, file
//! formats and the CLI live in the `symprop` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod config;
pub mod dist;
mod error;
pub mod fano;
pub mod math;
pub mod packing;
pub mod pml;
pub mod profile;
pub mod property;
pub mod risk;
pub mod rng;

pub use config::{Budgets, Tolerances, TOLERANCES};
pub use dist::{chi2, kl, sample, sample_counts, sorted_l1, tv, DiscreteDistribution, SampleBatch};
pub use error::{Error, Result};
pub use fano::{fano_bound, FanoInputs, FiniteExperiment, LemmaReport};
pub use packing::{PackingInstance, PackingReport, SignVector};
pub use pml::{pml_approx, pml_exact, PmlSolution, PmlSolver};
pub use profile::{enumerate_profiles, profile_of, profile_probability, Profile, ProfileSpace};
pub use property::{Lipschitz, SymmetricProperty};
pub use risk::{Estimator, Observation, RiskMethod, RiskReport};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
