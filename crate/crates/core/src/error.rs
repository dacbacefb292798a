use thiserror::Error;

/// Errors shared across the crate. Everything that is a *value* in the
/// domain (e.g. a distance that exceeded its search limit) is modelled as a
/// return type, not an error; these are the genuinely exceptional paths.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unknown generator symbol `{0}`")]
    UnknownGenerator(String),

    #[error("budget exceeded while {what}: needed ~{needed}, budget {budget}")]
    BudgetExceeded {
        what: String,
        needed: u64,
        budget: u64,
    },

    #[error("support does not generate the group as a semigroup: {0}")]
    NotGenerating(String),

    #[error("step budget of {cap} exhausted before the stop rule fired")]
    StepBudgetExceeded { cap: u64 },

    #[error("trajectory never reached distance {radius} from the base point")]
    NeverExited { radius: u32 },

    #[error("word `{word}` lies outside the tabulated domain")]
    OutOfTabulatedRange { word: String },

    #[error("Martin ratio denominator {value} is below 10x its stderr {stderr}")]
    DivisionUnstable { value: f64, stderr: f64 },

    #[error("kernel values did not stabilize: successive deviation {deviation} > tol {tol}")]
    NotStabilized { deviation: f64, tol: f64 },

    #[error("transition row sum {0} is numerically degenerate")]
    DegenerateRow(f64),

    #[error("linear solver failed: {0}")]
    SolverFailure(String),

    #[error("operation requires a hyperbolic backend; got {0}")]
    NonHyperbolic(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
