use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("{rows}x{cols} matrix needs {} entries, got {got}", rows * cols)]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("shape mismatch: {left:?} against {right:?}")]
    Shape { left: (usize, usize), right: (usize, usize) },
    #[error("matrix of shape {0:?} is not square")]
    NotSquare((usize, usize)),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SetError {
    #[error("no blocks given")]
    Empty,
    #[error("block {block} has size zero")]
    ZeroBlock { block: usize },
    #[error("block {block} declares size {n} but carries {got} weights")]
    WeightCount { block: usize, n: usize, got: usize },
    #[error("weight {index} of block {block} is {value}, must be strictly positive")]
    NonPositiveWeight { block: usize, index: usize, value: f64 },
    #[error("weights sum to {total}, not 1 (residual {residual:e})")]
    NotAState { total: f64, residual: f64 },
    #[error("block {block} has Tr(Q^-1) = {trace}, block 0 has {expected} (residual {residual:e})")]
    NotDeltaForm { block: usize, trace: f64, expected: f64, residual: f64 },
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("structure constant routes disagree by {residual:e}")]
    InternalMismatch { residual: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("adjacency is {got:?}, quantum set has dimension {dim}")]
    DimensionMismatch { dim: usize, got: (usize, usize) },
    #[error("classical graph requested on a set that is not a uniform commutative set")]
    KindMismatch,
    #[error("classical graph requested without an adjacency matrix")]
    MissingClassicalAdjacency,
    #[error("classical adjacency entry ({row}, {col}) is not 0 or 1")]
    NotZeroOne { row: usize, col: usize },
    #[error("adjacency is not Schur idempotent (residual {residual:e})")]
    NotSchurIdempotent { residual: f64 },
    #[error("cap pairing is not invertible")]
    SingularPairing,
    #[error("graph is not real and reflexive (real residual {real:e}, reflexive residual {reflexive:e})")]
    NotRealReflexive { real: f64, reflexive: f64 },
    #[error("graph is not in the required reflexivity class: {0}")]
    WrongReflexivityClass(&'static str),
    #[error("Choi criterion only handles a single matrix block, set has {blocks}")]
    MultiBlockUnsupported { blocks: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtlasError {
    #[error("degree {0} is not in 1..=4")]
    BadDegree(i64),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("quantum set is not a single 2x2 block")]
    NotM2,
    #[error("not classifiable: {0}")]
    NotClassifiable(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown representation {0:?}")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("invalid SO(3) point: {0}")]
    InvalidPoint(String),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}
