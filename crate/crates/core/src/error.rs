use thiserror::Error;

/// Errors raised by the group, search and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p and q must be distinct primes, got p = q = {0}")]
    EqualPrimes(u64),
    #[error("group order {order} exceeds the supported maximum of {max}")]
    GroupTooLarge { order: u64, max: usize },
    #[error("affine symmetry group has {size} elements, above the cap of {cap}")]
    SymmetryGroupTooLarge { size: u64, cap: u64 },
    #[error("group of order {order} exceeds the exhaustive cap of {cap}")]
    GroupTooLargeForExhaustive { order: usize, cap: usize },
    #[error("coefficient matrix does not vanish: entry ({row}, {col}) has defect {defect}")]
    NotVanishing { row: usize, col: usize, defect: i64 },
    #[error("set is not a subgroup")]
    NotASubgroup,
    #[error("sets do not tile the group")]
    NotATiling,
    #[error("matrix shape {rows}x{cols} is invalid: {reason}")]
    BadMatrix {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },
    #[error("projection direction must be nonzero: a = ({a1},{a2}), b = {b}")]
    ZeroDirection { a1: u32, a2: u32, b: u32 },
    #[error("size {size} is out of range for a group of order {order}")]
    BadSize { size: usize, order: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
