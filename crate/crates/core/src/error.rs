use thiserror::Error;

/// Errors produced by the labeling pipeline and its solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("separation vector must not be empty")]
    EmptyPVector,

    #[error("separation vector entry p{index} is zero; entries must be positive")]
    ZeroEntry { index: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("diameter {diameter} exceeds k={k}")]
    DiameterExceedsK { diameter: u32, k: usize },

    #[error("p_max={p_max} exceeds 2*p_min={}", 2 * .p_min)]
    RatioViolated { p_max: u32, p_min: u32 },

    #[error("instance with {n} vertices exceeds the solver cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },

    #[error("triangle inequality fails: w({u},{v}) > w({u},{via}) + w({via},{v})")]
    NonMetricInstance { u: usize, via: usize, v: usize },

    #[error("vertex {0} has no label")]
    MissingLabel(usize),

    #[error("label given for vertex {0}, which is not in the graph")]
    UnknownVertex(usize),

    #[error("not a permutation of 0..{n}: {order:?}")]
    InvalidPath { n: usize, order: Vec<usize> },

    #[error("bad tour: {0}")]
    BadTour(String),

    #[error("invalid weight matrix: {0}")]
    InvalidMatrix(String),

    #[error("edge weights too large for the solver's integer range")]
    WeightOverflow,

    #[error("graph generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that mean "the input is well formed but outside the
    /// solver's preconditions", as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Disconnected
                | Error::DiameterExceedsK { .. }
                | Error::RatioViolated { .. }
                | Error::InstanceTooLarge { .. }
                | Error::NonMetricInstance { .. }
                | Error::WeightOverflow
        )
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
