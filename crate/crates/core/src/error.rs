use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring Z/{p}^{e}: {reason}")]
    InvalidRing { p: u64, e: u32, reason: String },
    #[error("map does not respect orders: source coordinate {source_index} (Z/p^{source_exp}) -> target coordinate {target_index} (Z/p^{target_exp}) has entry {entry}")]
    OrderMismatch {
        source_index: usize,
        target_index: usize,
        source_exp: u32,
        target_exp: u32,
        entry: u64,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("not a normal subgroup: {0}")]
    NotNormal(String),
    #[error("subgroups are not nested: {0}")]
    NotNested(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("homotopy identity fails: {0}")]
    BadHomotopy(String),
    #[error("degree cap exceeded: requested {requested}, cap {cap}")]
    CapExceeded { requested: i64, cap: i64 },
    #[error("module carries no group-algebra action")]
    NoLambdaAction,
    #[error("pairing is not equivariant: {0}")]
    NonEquivariantPairing(String),
    #[error("incompatible pairings: {0}")]
    IncompatiblePairings(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("malformed triangle: {0}")]
    MalformedTriangle(String),
    #[error("malformed local datum: {0}")]
    MalformedDatum(String),
    #[error("trace datum is not a quasi-isomorphism: {0}")]
    TraceNotQuasiIso(String),
    #[error("tower level {level} out of range 1..={levels}")]
    LevelOutOfRange { level: usize, levels: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
