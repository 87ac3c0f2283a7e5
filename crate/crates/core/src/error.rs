use thiserror::Error;

/// Which group axiom a Cayley table violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupAxiom {
    Shape,
    LatinSquare,
    Identity,
    Inverse,
    Associativity,
}

impl std::fmt::Display for GroupAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GroupAxiom::Shape => "table shape",
            GroupAxiom::LatinSquare => "latin square",
            GroupAxiom::Identity => "identity",
            GroupAxiom::Inverse => "inverse",
            GroupAxiom::Associativity => "associativity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid element: {0}")]
    Element(String),

    #[error("expansion level {target} is below existing level {existing}")]
    LevelBelow { target: i64, existing: i64 },

    #[error("invalid window: from {lo} is above to {hi}")]
    Window { lo: i64, hi: i64 },

    #[error("vertex set is not hereditary")]
    NotHereditary,

    #[error("vertex set is hereditary but not saturated")]
    NotSaturated,

    #[error("quotient by the full vertex set leaves an empty graph")]
    QuotientByAll,

    #[error("graph has {0} vertices; the enumeration bound is {1}")]
    BoundExceeded(usize, usize),

    #[error("graph has a sink; this operation requires a sink-free graph")]
    SinksPresent,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid search bounds: {0}")]
    SearchBounds(String),

    #[error("invalid group: {axiom} violated ({detail})")]
    InvalidGroup { axiom: GroupAxiom, detail: String },

    #[error("unknown group element `{0}`")]
    UnknownElement(String),

    #[error("generator set is empty")]
    EmptyGenerators,

    #[error("generator set does not generate the group")]
    NotGenerating,

    #[error("invalid ramification data: {0}")]
    Ramification(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for malformed input, as opposed to well-formed input that
    /// fails a mathematical precondition.
    pub fn is_format_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Json(_) | Error::InvalidGraph(_) | Error::Element(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
