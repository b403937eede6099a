//! Error type shared by every module.
//!
//! Each error records the module and operation that raised it so the CLI can
//! report a precise failure site and map the kind onto an exit code.

use thiserror::Error;

/// What went wrong, independent of where.
#[derive(Debug, Clone, Error)]
pub enum ErrorKind {
    /// A parameter failed validation before any computation started.
    #[error("configuration error: {0}")]
    Config(String),

    /// A prime table or cached resource is too small for the request.
    #[error("insufficient table: {0}")]
    InsufficientTable(String),

    /// Argument outside the supported evaluation window.
    #[error("out of range: {0}")]
    Range(String),

    /// Result would overflow f64; caller must switch to the log form.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Quadrature did not converge within its node budget.
    /// Carries the best estimate and its error estimate.
    #[error("quadrature failed to converge (best {best:e}, err {err_est:e})")]
    QuadratureFailure { best: f64, err_est: f64 },

    /// |zeta| (or |zeta - a|) fell below the resolvable threshold on a path.
    #[error("near-zero value on evaluation path: {0}")]
    NearZero(String),

    /// Too many samples were excluded from a line window.
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    /// The restricted set A(T) retained too few samples.
    #[error("degenerate restriction: {0}")]
    DegenerateRestriction(String),

    /// Sample cache file is corrupt or mismatched.
    #[error("cache error: {0}")]
    Cache(String),

    /// Difference step too large for the requested derivative.
    #[error("step error: {0}")]
    Step(String),

    /// A root sits on (or too close to) a counting contour after retries.
    #[error("root on contour: {0}")]
    OnContourRoot(String),

    /// Request exceeds a combinatorial guard (oracle sizes).
    #[error("complexity guard: {0}")]
    ComplexityGuard(String),

    #[error("io error: {0}")]
    Io(String),
}

/// Error carrying the failing module and operation name.
#[derive(Debug, Clone, Error)]
#[error("{module}::{op}: {kind}")]
pub struct Error {
    pub module: &'static str,
    pub op: &'static str,
    #[source]
    pub kind: ErrorKind,
}

impl Error {
    pub fn new(module: &'static str, op: &'static str, kind: ErrorKind) -> Self {
        Error { module, op, kind }
    }

    /// Process exit code the CLI maps this error onto.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config(_) | ErrorKind::InsufficientTable(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for constructing errors at a named site.
macro_rules! err {
    ($module:literal, $op:literal, $kind:expr) => {
        $crate::error::Error::new($module, $op, $kind)
    };
}
pub(crate) use err;
