use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("failed to read specification: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse specification: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("unknown objective `{0}`")]
    UnknownObjective(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("envelope holds no cell at cell size {cell_size} m")]
    Empty { cell_size: f64 },
    #[error("cell ({col}, {row}) is outside the {columns}x{rows} grid")]
    OutOfRange {
        col: usize,
        row: usize,
        columns: usize,
        rows: usize,
    },
    #[error("entrance candidate {index} at ({x}, {y}) maps to no boundary cell")]
    UnmappedEntrance { index: usize, x: f64, y: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("active extent is only defined for upright fields (t = pi/4), got t = {0}")]
    NotUpright(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum CirculationError {
    #[error("cell {0} is not a node of the path graph")]
    NotANode(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum EvaluationError {
    #[error("light direction has zero length")]
    ZeroLight,
}

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("genome has {actual} genes, expected {expected}")]
    GenomeLength { expected: usize, actual: usize },
    #[error("invalid optimiser configuration: {0}")]
    Config(String),
    #[error("objective vectors have mixed lengths ({0} vs {1})")]
    MixedObjectiveLengths(usize, usize),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("spec fingerprint mismatch: document says {expected}, embedded spec hashes to {actual}")]
    Fingerprint { expected: String, actual: String },
    #[error("embedded spec is invalid: {0}")]
    Spec(#[from] SpecError),
    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Inconsistent(String),
}
