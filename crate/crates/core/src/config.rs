//! Tolerances and resource caps shared by every module.

/// Numeric tolerances. A single record so that every comparison in the crate
/// and in its tests draws from the same constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance on `Σ p_i = 1` when validating a distribution.
    pub simplex: f64,
    /// Standard-error multiplier for Monte Carlo assertions.
    pub mc_sigma: f64,
    /// Standard-error multiplier for the Monte Carlo form of the Fano check.
    pub fano_mc_sigma: f64,
    /// Slack allowed by exact-enumeration inequality checks.
    pub exact_slack: f64,
    /// Step size at which the pairwise-transfer line search stops.
    pub ascent_step: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    simplex: 1e-12,
    mc_sigma: 4.0,
    fano_mc_sigma: 3.0,
    exact_slack: 1e-10,
    ascent_step: 1e-8,
};

/// Resource caps. Operations that would exceed one of these return
/// [`crate::Error::BudgetExceeded`] instead of running.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of profiles `|Φ_{n,k}|` to enumerate.
    pub profiles: u64,
    /// Maximum number of points on a sorted-simplex grid.
    pub grid_points: u64,
    /// Maximum number of (count vector × hypothesis) states for exact sums.
    pub enumeration_states: u64,
    /// Maximum `2^{k0}` scanned by the greedy packing.
    pub packing_scan: u64,
    /// Maximum total rejections while sampling from the admissible set.
    pub rejections: u64,
    /// Sweep cap for the polishing stage of the grid solver.
    pub polish_sweeps: u32,
    /// Sweep cap for the ascent solver.
    pub ascent_sweeps: u32,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            profiles: 1_000_000,
            grid_points: 5_000_000,
            enumeration_states: 10_000_000,
            packing_scan: 1 << 22,
            rejections: 1_000_000,
            polish_sweeps: 500,
            ascent_sweeps: 5_000,
        }
    }
}
