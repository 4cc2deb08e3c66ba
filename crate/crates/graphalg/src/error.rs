use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("undeclared endpoint `{0}`")]
    UndeclaredEndpoint(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("paths not composable: {0}")]
    NotComposable(String),
    #[error("not a subgraph: {0}")]
    NotSubgraph(String),
    #[error("vertex `{0}` is not in Sigma (finite nonzero out-valence)")]
    NotInSigma(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid basic set: {0}")]
    InvalidBasicSet(String),
    #[error("morphism undefined on {0}")]
    UndefinedMorphism(String),
    #[error("invalid invariant: {0}")]
    InvalidInvariant(String),
    #[error("cycle enumeration exceeded cap of {0}")]
    CycleCapExceeded(usize),
    #[error("graph too large: {0} vertices exceeds the enumeration limit")]
    TooLarge(usize),
    #[error("count overflow: {0}")]
    Overflow(String),
    #[error("terminal cycle present: {0}")]
    TerminalCycle(String),
    #[error("basis is not exact: {0}")]
    NonExactBasis(String),
    #[error("invalid limit chain: {0}")]
    InvalidChain(String),
    #[error("set expression: {0}")]
    Expression(String),
}

pub type Result<T> = std::result::Result<T, Error>;
