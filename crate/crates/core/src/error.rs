use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for {what} of size {size}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("malformed category: {0}")]
    MalformedCategory(String),
    #[error("not a local-terminal choice: {0}")]
    NotLocalTerminal(String),
    #[error("functor does not preserve chosen local terminals: {0}")]
    NotTerminalPreserving(String),
    #[error("coalgebra condition violated: {0}")]
    CoalgebraCondition(String),
    #[error("structure is not unary: {0}")]
    NotUnary(String),
    #[error("structure carries relabelling data where none was expected")]
    UnexpectedRelabel,
    #[error("structure lacks relabelling data")]
    MissingRelabel,
    #[error("triangle is not strict: {0}")]
    NotStrict(String),
    #[error("no map makes the square commute: {0}")]
    NoFactorization(String),
    #[error("not a discrete opfibration: {0}")]
    NotDiscreteOpfibration(String),
    #[error("square does not lie over the element projections: {0}")]
    NotOverProjections(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("{}", format_parse_errors(.0))]
    Parse(Vec<ParseError>),
}

/// A problem found at a 1-based line of a text document; line 0 refers to
/// the document as a whole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn format_parse_errors(errs: &[ParseError]) -> String {
    errs.iter()
        .map(|e| format!("line {}: {}", e.line, e.message))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
