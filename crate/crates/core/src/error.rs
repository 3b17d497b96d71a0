use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown wall `{0}`")]
    UnknownWall(String),
    #[error("invalid bit string `{0}`")]
    BadBitString(String),

    #[error("model has no vertices")]
    EmptyModel,
    #[error("vertex `{vertex}` has {found} coordinates, expected {expected}")]
    ArityMismatch {
        vertex: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("walls `{0}` and `{1}` induce the same partition")]
    ParallelWalls(String, String),
    #[error("wall `{0}` does not separate any vertices")]
    ConstantWall(String),
    #[error("not median-closed: median of ({a}, {b}, {c}) is {median}, which is not a vertex")]
    NotMedianClosed {
        a: String,
        b: String,
        c: String,
        median: String,
    },

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("not a median square: {0}")]
    NotASquare(String),
    #[error("tips {i} and {j} do not span a median square with the corner")]
    PrerequisiteSquareMissing { i: usize, j: usize },
    #[error("cube map is not a median embedding: {0}")]
    EmbeddingCheckFailed(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("orientation is not realized by a vertex (consistent: {consistent})")]
    NotRealized { consistent: bool },

    #[error("invalid count {0}")]
    InvalidCount(usize),
    #[error("vertex set is not convex: {0}")]
    NotConvex(String),
    #[error("ambient exhausted after {achieved} layers ({requested} requested)")]
    AmbientExhausted { requested: usize, achieved: usize },
    #[error("gate of {0} is not unique")]
    GateNotUnique(String),

    #[error("model too large: {0}")]
    TooLarge(String),
    #[error("edges do not form a tree: {0}")]
    NotATree(String),
}
