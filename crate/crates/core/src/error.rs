use thiserror::Error;

/// Every failure the library can report.
///
/// Variant names are part of the command-line contract: the binary prints
/// [`Error::name`] on stderr so scripts can match on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial {0} is not irreducible over Q")]
    NotIrreducible(String),
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("polynomial {0} is not irreducible over the base field")]
    NotIrreducibleOverK(String),
    #[error("bad basis: {0}")]
    BadBasis(String),
    #[error("no differential operator of order <= {max_order} fits the samples: {reason}")]
    NoFit { max_order: usize, reason: String },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("characteristic polynomial does not split over the field: {0}")]
    DoesNotSplit(String),
    #[error("bad eigenvalue list: {0}")]
    BadEigenvalueList(String),
    #[error("similarity search exhausted its budget of {budget} candidates")]
    SimilarityUndecided { budget: usize },
    #[error("denominator {0} is not invertible at the generator image")]
    NonInvertibleDenominator(String),
    #[error("not a homomorphism: witness {0} does not vanish")]
    NotAHomomorphism(String),
    #[error("matrix is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("higher derivations are not composable: {0}")]
    NotComposable(String),
    #[error("Leibniz identity fails at order {order}: {witness}")]
    LeibnizViolation { order: usize, witness: String },
    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("homomorphism is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("superdiagonal proportionality fails at indices ({0}, {1})")]
    ProportionalityFailure(usize, usize),
    #[error("matrix is not upper triangular: nonzero entry at ({0}, {1})")]
    NotTriangular(usize, usize),
    #[error("matrix has more than one eigenvalue on its diagonal")]
    MultipleEigenvalues,
    #[error("matrix is not Jordan-ordered: {0}")]
    NotJordanOrdered(String),
    #[error("matrix is not in Jordan canonical form: {0}")]
    NotJCF(String),
    #[error("unknown orbit {0}")]
    UnknownOrbit(usize),
    #[error("degree cap exceeded: {0}")]
    DegreeCap(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    /// Stable variant name, printed by the command-line tool.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZeroPoly => "DivisionByZeroPoly",
            Error::BothZero => "BothZero",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::NotMonic(_) => "NotMonic",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::NotIrreducibleOverK(_) => "NotIrreducibleOverK",
            Error::BadBasis(_) => "BadBasis",
            Error::NoFit { .. } => "NoFit",
            Error::NotSquare { .. } => "NotSquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DoesNotSplit(_) => "DoesNotSplit",
            Error::BadEigenvalueList(_) => "BadEigenvalueList",
            Error::SimilarityUndecided { .. } => "SimilarityUndecided",
            Error::NonInvertibleDenominator(_) => "NonInvertibleDenominator",
            Error::NotAHomomorphism(_) => "NotAHomomorphism",
            Error::NotSemisimple(_) => "NotSemisimple",
            Error::NotComposable(_) => "NotComposable",
            Error::LeibnizViolation { .. } => "LeibnizViolation",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::NotHomogeneous(_) => "NotHomogeneous",
            Error::ProportionalityFailure(..) => "ProportionalityFailure",
            Error::NotTriangular(..) => "NotTriangular",
            Error::MultipleEigenvalues => "MultipleEigenvalues",
            Error::NotJordanOrdered(_) => "NotJordanOrdered",
            Error::NotJCF(_) => "NotJCF",
            Error::UnknownOrbit(_) => "UnknownOrbit",
            Error::DegreeCap(_) => "DegreeCap",
            Error::Parse { .. } => "ParseError",
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
