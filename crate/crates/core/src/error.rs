use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported format tag {0:?}, expected \"bnalg-v1\"")]
    Format(String),

    #[error("cycle detected involving node {0:?}")]
    Cycle(String),

    #[error("duplicate node name {0:?}")]
    DuplicateName(String),

    #[error("node {node:?} has cardinality {card}, at least 2 is required")]
    Cardinality { node: String, card: usize },

    #[error("node {node:?} lists unknown parent {parent:?}")]
    UnknownParent { node: String, parent: String },

    #[error("invalid conditional independence statement: {0}")]
    Statement(String),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    #[error("parameter entry for node {node}, parent configuration {config}, state {state} is not strictly positive")]
    NonPositiveParameter { node: usize, config: usize, state: usize },

    #[error("invalid table: {0}")]
    Table(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("determinant of a {0}x{0} matrix is not supported (maximum 4x4)")]
    DeterminantSize(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid marginal pattern: {0}")]
    Pattern(String),

    #[error("invalid bipartition: {0}")]
    Bipartition(String),

    #[error("invalid naive Bayes specification: {0}")]
    NaiveBayes(String),

    #[error("family does not apply to this network: {0}")]
    FamilyMismatch(String),

    #[error("at least one seed is required")]
    NoSeeds,

    #[error("exact rank {exact} and numeric rank {numeric} disagree")]
    RankDisagreement { exact: usize, numeric: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
