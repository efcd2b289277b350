use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table not closed: entry ({a}, {b}) = {value} is out of range")]
    NotClosed { a: usize, b: usize, value: usize },
    #[error("table not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("not a homomorphism: image of {a}*{b} differs from image({a})*image({b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal: {g} * {n} * {g}^-1 leaves the subgroup")]
    NotNormal { g: usize, n: usize },
    #[error("homomorphism is not injective")]
    NotInjective,
    #[error("homomorphism is not an isomorphism")]
    NotIso,
    #[error("subgroup does not live in the expected direct product")]
    NotSubgroupOfProduct,
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(usize),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("map is not equivariant at point {x}, element {g}")]
    NotEquivariant { x: usize, g: usize },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("base mismatch")]
    BaseMismatch,
    #[error("cell mismatch: {0}")]
    CellMismatch(String),
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("middle group mismatch")]
    MiddleGroupMismatch,
    #[error("biset is not transitive")]
    NotTransitive,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
