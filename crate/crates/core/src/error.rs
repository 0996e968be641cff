use thiserror::Error;

/// Errors raised by the algebraic and quantization layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate dimension: {0}")]
    DegenerateDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element is not in {0}")]
    NotInSubspace(&'static str),

    #[error("Killing-dual basis pattern violated: {0}")]
    DualBasisPattern(String),

    #[error("Killing form is degenerate")]
    DegenerateKilling,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },

    #[error("unsupported representation descriptor: {0}")]
    UnsupportedDescriptor(String),

    #[error("representations are built over different algebras")]
    MixedAlgebra,

    #[error("matrix is not semisimple: minimal polynomial {0} is not squarefree")]
    NotSemisimple(String),

    #[error(
        "critical pair: eigenvalue factor {factor} of the degree-{degree} component \
         meets the spectrum on tree level {level}"
    )]
    CriticalPair {
        degree: usize,
        level: usize,
        factor: String,
    },

    #[error("degree or type mismatch: {0}")]
    Mismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
