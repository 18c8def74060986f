use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },

    #[error("edge ({u}, {u}) is a self-loop")]
    SelfLoop { u: usize },

    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported size {n}: {reason}")]
    UnsupportedSize { n: usize, reason: &'static str },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("mixed vertex counts in stream: expected {expected}, found {found} on line {line}")]
    MixedSizes {
        expected: usize,
        found: usize,
        line: usize,
    },

    #[error("vertex {vertex} is outside 0..{n}")]
    VertexIndex { vertex: usize, n: usize },

    #[error("invalid family parameters: {0}")]
    Family(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("graph list {path} does not match the enumeration oracle: {message}")]
    OracleMismatch { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
