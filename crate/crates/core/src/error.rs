use thiserror::Error;

/// Errors raised while building objects. Identity failures are never errors;
/// they are recorded in a [`crate::report::ValidationReport`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("bad scalar literal `{0}`")]
    BadScalarLiteral(String),
    #[error("no solution")]
    NoSolution,
    #[error("invalid Hopf *-algebra: {0}")]
    InvalidHopf(String),
    #[error("no Haar integral exists")]
    NoHaar,
    #[error("Haar integral is not unique (solution space of dimension {0})")]
    NonUniqueHaar(usize),
    #[error("map is not a right coaction: {0}")]
    NotCoaction(String),
    #[error("coaction is not a *-homomorphism: {0}")]
    NotStarHom(String),
    #[error("not a quantum principal bundle: {0}")]
    NotPrincipal(String),
    #[error("tensor budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("structure group is not classical: {0}")]
    NotClassical(String),
    #[error("enumeration requires commutative algebras: {0}")]
    NotCommutative(String),
    #[error("irreducible corepresentations unavailable")]
    IrrepsUnavailable,
    #[error("ideal is not a right ideal of ker(counit): {0}")]
    NotIdeal(String),
    #[error("ideal is not ad-invariant: {0}")]
    NotAdInvariant(String),
    #[error("ideal is not *-compatible: {0}")]
    NotStarCompatible(String),
    #[error("Haar-orthogonal splitting is not compatible: {0}")]
    SplittingIncompatible(String),
    #[error("only product bundles support differential structure: {0}")]
    NotProductBundle(String),
    #[error("degree budget exceeded: {0}")]
    DegreeBudget(String),
    #[error("perturbation is not covariant: {0}")]
    NotCovariant(String),
    #[error("classicality tests disagree: {0}")]
    EquivalenceViolation(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown key: {0}")]
    UnknownKey(String),
    #[error("{line}:{column}: {error}")]
    Positioned { line: usize, column: usize, error: Box<Error> },
}

impl Error {
    /// The underlying error, without position.
    pub fn kind(&self) -> &Error {
        match self {
            Error::Positioned { error, .. } => error.kind(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
