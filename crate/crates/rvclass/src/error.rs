use thiserror::Error;

/// Errors surfaced by the toolkit. Evaluation errors always name the
/// offending grid point so callers can report it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation of `{label}` returned a non-finite value at y = {y}")]
    NonFiniteEval { label: String, y: f64 },

    #[error("y = {y} is below the domain start y_min = {y_min} of `{label}`")]
    BelowDomain { label: String, y: f64, y_min: f64 },

    #[error("y = {y} is beyond the usable domain of `{label}` (limit {y_max})")]
    BeyondDomain { label: String, y: f64, y_max: f64 },

    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },

    #[error("unknown catalog entry `{name}`")]
    UnknownCatalogEntry { name: String },

    #[error("bad parameter for `{name}`: {reason}")]
    BadParameter { name: String, reason: String },

    #[error("quadrature failed to converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("samples are all equal; the empirical tail is degenerate")]
    DegenerateSamples,

    #[error("invalid threshold bracket: {reason}")]
    BadBracket { reason: String },

    #[error("scaled-ratio verdicts oscillate inside the bracket; threshold bisection not applicable")]
    ThresholdNotApplicable,

    #[error("representation check failed: {reason}")]
    BadRepresentation { reason: String },

    #[error("parse error in {path} at line {line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
