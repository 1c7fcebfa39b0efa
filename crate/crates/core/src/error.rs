use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {operand} has length {found}, lattice rank is {expected}")]
    DimensionMismatch {
        operand: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("malformed gram matrix: {0}")]
    MalformedGram(String),

    #[error("lattice is not unimodular (det = {0})")]
    NotUnimodular(String),

    #[error("degenerate form")]
    DegenerateForm,

    #[error("indefinite lattice: exhaustive enumeration impossible; use bounded_square_classes")]
    IndefiniteLattice,

    #[error("square {square} is inconsistent with a {sign} definite form")]
    SquareSign { square: i64, sign: &'static str },

    #[error("class violates evenness of adjunction")]
    OddAdjunction,

    #[error("not a negative class")]
    NotNegativeClass,

    #[error("hypersurface violates adjunction: 2g - 2 = {lhs}, V.V + K.V = {rhs}")]
    AdjunctionMismatch { lhs: i64, rhs: i64 },

    #[error("hypotheses of area lemma not met: {0}")]
    AreaLemma(String),

    #[error("invalid initial data: {0}")]
    InvalidData(String),

    #[error("invalid assignment: {0}")]
    Assignment(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("theorem hypotheses not met: {0}")]
    TheoremHypotheses(String),

    #[error("qu entry requested for non-primitive class {0}")]
    NonPrimitiveQu(String),

    #[error("dependent basis")]
    DependentBasis,

    #[error("invalid period point: {0}")]
    InvalidPeriod(String),

    #[error("refined table mixes base classes {0} and {1}")]
    MixedBaseClasses(String, String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }
}
