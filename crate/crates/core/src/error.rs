use thiserror::Error;

/// Errors raised by graph construction, game evaluation, and scenario loading.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown edge ({0}, {1})")]
    UnknownEdge(String, String),

    #[error("duplicate node `{0}`")]
    DuplicateNode(String),

    #[error("duplicate edge between `{0}` and `{1}`")]
    DuplicateEdge(String, String),

    #[error("invalid edge ({from}, {to}): {reason}")]
    InvalidEdge {
        from: String,
        to: String,
        reason: String,
    },

    #[error("empty node label")]
    EmptyLabel,

    #[error("graph has {0} nodes; at most 63 are supported")]
    TooManyNodes(usize),

    #[error("game has {players} players, above the exact-enumeration limit of {limit}")]
    Capacity { players: usize, limit: usize },

    #[error("characteristic function is not zero on the empty coalition")]
    NonZeroEmpty,

    #[error("route over {{{0}}} induces no edge")]
    DegenerateRoute(String),

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    #[error("worth of singleton {{{0}}} is not zero")]
    NotZeroNormalized(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("allocation has {actual} entries, game has {expected} players")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
