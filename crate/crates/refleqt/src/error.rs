use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Arity,
    UnknownSymbol,
    Malformed,
}

/// Positioned error from any of the text readers. `pos` is a byte offset.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{kind:?} error at {pos}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, pos: usize, message: impl Into<String>) -> Self {
        ParseError { kind, pos, message: message.into() }
    }

    pub fn lexical(pos: usize, message: impl Into<String>) -> Self {
        Self::new(ParseErrorKind::Lexical, pos, message)
    }

    pub fn malformed(pos: usize, message: impl Into<String>) -> Self {
        Self::new(ParseErrorKind::Malformed, pos, message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("empty pattern in code substitution")]
    EmptyPattern,
    #[error("term is not a dyadic numeral: {0}")]
    NotANumeral(String),
    #[error("sentence outside the decidable fragment: {0}")]
    OutOfFragment(String),
    #[error("evaluation failed: {0}")]
    Eval(String),
    #[error("theory {0} has no arithmetic profile or base interpretation")]
    MissingArithmetization(String),
    #[error("theory {0} carries no base interpretation N")]
    MissingInterpretation(String),
    #[error("arity error: {0}")]
    Arity(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("ill-typed witness bundle: {0}")]
    IllTypedBundle(String),
    #[error("not eliminable: {0}")]
    NotEliminable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not a limit notation: {0}")]
    NotLimit(String),
    #[error("rule premise failed: {0}")]
    Premise(String),
    #[error("unregistered reduction witness: {0}")]
    UnregisteredWitness(String),
    #[error("empty list")]
    EmptyList,
    #[error("unknown theory {0}")]
    UnknownTheory(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
