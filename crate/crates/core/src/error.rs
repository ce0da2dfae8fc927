use thiserror::Error;

/// Errors produced across the graph pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Path consistency emptied the relation between `from` and `to` while
    /// composing through `via`.
    #[error("inconsistent constraints: composing {from} -> {via} -> {to} leaves no relation")]
    Inconsistent { from: String, via: String, to: String },

    /// A cycle containing a strict precedence survived equality merging.
    #[error("inconsistent endpoint order: cycle through {0}")]
    CyclicOrder(String),

    #[error("relation {relation} between {from} and {to} is not convex")]
    NonConvex { from: String, to: String, relation: String },

    #[error("empty relation between {from} and {to}")]
    EmptyRelation { from: String, to: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown relation name {0:?}")]
    UnknownRelation(String),

    #[error("unknown TimeML relType {name:?} (accepted: {accepted})")]
    UnknownRelType { name: String, accepted: String },

    #[error("malformed XML: {0}")]
    Xml(String),

    #[error("reference graph has zero value")]
    DegenerateReference,

    #[error("candidate graph has zero value")]
    DegenerateCandidate,

    #[error("{side} graph is inconsistent: {source}")]
    SideInconsistent {
        side: Side,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown entity {0:?}")]
    UnknownEntity(String),

    #[error("i/o error: {0}")]
    Io(String),
}

/// Which input of a comparison an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Reference,
    Candidate,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Reference => f.write_str("reference"),
            Side::Candidate => f.write_str("candidate"),
        }
    }
}

impl Error {
    /// True for every flavour of logical inconsistency, including the ones
    /// wrapped with the side of a comparison.
    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            Error::Inconsistent { .. }
                | Error::CyclicOrder(_)
                | Error::EmptyRelation { .. }
                | Error::SideInconsistent { .. }
        )
    }

    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::UnknownRelation(_)
                | Error::UnknownRelType { .. }
                | Error::Xml(_)
                | Error::NonConvex { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
