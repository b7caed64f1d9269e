use thiserror::Error;

/// Errors surfaced by the library. Domain preconditions fail loudly and
/// carry enough context to locate the offending input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("images are not a bijection of 1..={0}")]
    NotBijection(usize),
    #[error("generator index {index} out of range 1..={max}")]
    GeneratorOutOfRange { index: usize, max: usize },
    #[error("word is not reduced")]
    NotReduced,
    #[error("multiplicity vector does not reconstruct a bijection")]
    BadMultVector,
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimMismatch(usize, usize, usize, usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not invertible")]
    Singular,
    #[error("northwest minor {index} not positive (pivot {pivot:e}): outside the chart domain")]
    ChartDomain { index: usize, pivot: f64 },
    #[error("matrix is not strictly lower triangular")]
    NotNilpotent,
    #[error("ring cannot represent {0}/{1}")]
    InexactRatio(i64, i64),
    #[error("zero polynomial has no root multiplicity")]
    ZeroPolynomial,
    #[error("rank {0} exceeds the Clifford oracle cap {1}")]
    OracleRank(usize, usize),
    #[error("degenerate pivot in column {col}: candidates {a:e} and {b:e} within the tolerance band")]
    DegeneratePivot { col: usize, a: f64, b: f64 },
    #[error("no pivot above tolerance in column {col}")]
    SingularColumn { col: usize },
    #[error("t1 + t3 = 0: braid transition undefined")]
    BraidPole,
    #[error("not in the expected cell: {0}")]
    CellMismatch(String),
    #[error("not totally positive for the given word: {0}")]
    NotPositive(String),
    #[error("angle must lie in (0, pi)")]
    AngleRange,
    #[error("time parameter must be nonzero")]
    ZeroTime,
    #[error("step must be positive")]
    BadStep,
    #[error("curvature coefficients must be strictly positive")]
    NonPositiveCoefficient,
    #[error("unresolved event in [{0}, {1}]: {2}")]
    UnresolvedEvent(f64, f64, String),
    #[error("noisy multiplicity fit: residual {0}")]
    NoisyFit(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
