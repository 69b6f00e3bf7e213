use thiserror::Error;

/// Errors raised by the certification toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("model evaluation failed at omega = {omega} rad/s: {reason}")]
    Evaluation { omega: f64, reason: String },

    #[error("omega = {omega} rad/s lies outside the sampled range [{min}, {max}]")]
    OutOfRange { omega: f64, min: f64, max: f64 },

    #[error("matrix is near-singular (condition number {cond:e}){}", context_suffix(.context))]
    NearSingular { cond: f64, context: Option<String> },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigen-solver failed to converge at support angle phi = {phi}")]
    EigenFailure { phi: f64 },

    #[error("region boundary passes within {distance:e} of the origin; inversion is singular")]
    InversionSingularity { distance: f64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("phase step of {step} rad between {omega_lo} and {omega_hi} rad/s exceeds pi/2; refine the frequency grid")]
    GridTooCoarse {
        omega_lo: f64,
        omega_hi: f64,
        step: f64,
    },

    #[error("singular network block at omega = {omega} rad/s: {reason}")]
    SingularNetwork { omega: f64, reason: String },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" ({c})"),
        None => String::new(),
    }
}

impl Error {
    /// Attaches a frequency context to errors that carry one.
    pub fn at_omega(self, omega: f64) -> Self {
        match self {
            Error::NearSingular { cond, context: None } => Error::NearSingular {
                cond,
                context: Some(format!("omega = {omega} rad/s")),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
