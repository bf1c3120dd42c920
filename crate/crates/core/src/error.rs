use thiserror::Error;

/// Errors raised by group construction and the analyses built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(
        "multiplication table is not square: row {row} has {len} entries, expected {expected}"
    )]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("table entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("empty multiplication table")]
    EmptyTable,
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("generator {index} is not a permutation of 0..{degree}")]
    InvalidPermutation { index: usize, degree: usize },
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("element index {idx} out of range for group of order {order}")]
    ElementOutOfRange { idx: usize, order: usize },
    #[error("map has length {len}, expected {expected}")]
    WrongLength { len: usize, expected: usize },
    #[error("map is not a bijection (image {0} repeated or out of range)")]
    NotBijective(usize),
    #[error("map is not multiplicative on ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("automorphism has order {0}, which does not divide 3")]
    OrderNotDividing3(usize),
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("translate tuple space |G|^n = {size} exceeds budget {budget}")]
    TupleSpaceTooLarge { size: u128, budget: u128 },
    #[error("function value at element {0} lies outside the unit ball")]
    UnitBallViolated(usize),
    #[error("base set has measure zero")]
    EmptyBase,
    #[error("search budget of {0} checks exceeded")]
    SearchBudgetExceeded(u64),
    #[error("target set is empty")]
    EmptyTarget,
    #[error("target set measure {measure} does not exceed threshold {threshold}")]
    BelowThreshold { measure: String, threshold: String },
    #[error("word set has kind {found}, expected {expected}")]
    WrongKind {
        found: &'static str,
        expected: &'static str,
    },
    #[error("group of order {order} exceeds the scan cap {cap}")]
    BudgetExceeded { order: usize, cap: usize },
    #[error("tower map {level} is not surjective (missing image {missing})")]
    NotSurjective { level: usize, missing: usize },
    #[error("tower map {level} is not multiplicative on ({x}, {y})")]
    TowerNotMultiplicative { level: usize, x: usize, y: usize },
    #[error("tower has {levels} levels but {maps} maps")]
    TowerShape { levels: usize, maps: usize },
    #[error("tower map {level} has image {value} out of range")]
    TowerMapOutOfRange { level: usize, value: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
