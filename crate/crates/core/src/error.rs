use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("label error: row {row} has class {value}, expected 0 or 1")]
    Label { row: usize, value: i64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("attribute `{0}` has no observed cells")]
    DegenerateColumn(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("invalid missingness spec: {0}")]
    Spec(String),
    #[error("training diverged at epoch {epoch}")]
    Divergence { epoch: usize },
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("{context}: {source}")]
    InCell { context: String, source: Box<Error> },
}
