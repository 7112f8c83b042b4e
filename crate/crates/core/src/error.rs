use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested space does not exist (e.g. `p = inf` in the F family).
    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A generator was asked for frequency content the lattice cannot hold.
    #[error("frequency {required} on axis {axis} exceeds the lattice range (max {available})")]
    Nyquist {
        axis: usize,
        required: f64,
        available: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A least-squares fit was requested with too few or degenerate points.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed function file: {0}")]
    Format(String),
}
