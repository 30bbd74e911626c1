use thiserror::Error;

/// Errors raised by the staircase library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The jump coefficient is outside `(0, 1]`.
    #[error("jump coefficient {0} is outside (0, 1]")]
    OutOfRange(String),

    /// Exact mode was given something other than an integer ratio.
    #[error("exact mode requires an integer ratio `a/b`, got `{0}`")]
    NonRational(String),

    /// A literal could not be parsed as a number at all.
    #[error("cannot parse `{0}` as a number")]
    Parse(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The operation needs exact arithmetic but was invoked in float mode.
    #[error("operation `{0}` requires exact rational mode")]
    Mode(&'static str),

    /// The martingale representation is singular on the requested domain.
    #[error("singular domain: {0}")]
    SingularDomain(String),

    /// Adaptive quadrature ran out of panels before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {panels} panels")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        panels: usize,
    },

    /// A statistical gate cannot be evaluated with the given sample.
    #[error("insufficient sample: {0}")]
    InsufficientSample(String),

    /// Invalid tolerance configuration.
    #[error("invalid tolerance: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
