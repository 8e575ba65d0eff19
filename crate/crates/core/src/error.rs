use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// `q_i = 0` while `p_i > 0`: the divergence is `+∞`, not a numeric failure.
    #[error("infinite divergence: q[{index}] = 0 but p[{index}] = {p_value}")]
    InfiniteDivergence { index: usize, p_value: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("budget exceeded for {what}: needs {required}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        required: f64,
        cap: u64,
    },

    #[error("unknown property: {0}")]
    UnknownProperty(String),

    #[error("sign vector {0} is not a member of the packing")]
    NotInPacking(String),

    #[error("action lies outside the admissible action set")]
    OutsideActionSet,

    #[error("rejection sampling gave up after {0} rejections")]
    RejectionLimit(u64),

    #[error("estimator failed on replicate stream {stream} (seed {seed}): {source}")]
    EstimatorFailed {
        seed: u64,
        stream: u64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for resource-cap errors, which callers usually report differently.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
