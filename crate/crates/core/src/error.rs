use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum TpfaError {
    #[error("orthogonality violated on face {face}: {detail}")]
    OrthogonalityViolation { face: usize, detail: String },
    #[error("cell point of cell {cell} is not strictly inside the cell")]
    PointOutsideCell { cell: usize },
    #[error("face {face} is shared by {count} cells")]
    NonConformity { face: usize, count: usize },
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("generated triangle {triangle} has its circumcenter outside")]
    NonAcutePattern { triangle: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("data misaligned with mesh: {0}")]
    DataMisalignment(String),
    #[error("linear solver did not converge in {iterations} iterations (relative residual {residual:e})")]
    SolverDivergence { iterations: usize, residual: f64 },
    #[error("quadrature failed to reach tolerance: {0}")]
    QuadratureFailure(String),
    #[error("{what} did not converge within {terms} terms")]
    SeriesNonConvergence { what: &'static str, terms: usize },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("evaluation at the singular point")]
    SingularPoint,
    #[error("gradient requested on a diagonal through the singular point")]
    DiagonalPoint,
    #[error("function undefined at a required point: {0}")]
    UndefinedValue(String),
    #[error("oracle does not provide {0}")]
    OracleMissing(&'static str),
    #[error("fixed-point iteration stalled after {sweeps} sweeps (last change {change:e})")]
    FixedPointStall { sweeps: usize, change: f64 },
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, TpfaError>;
