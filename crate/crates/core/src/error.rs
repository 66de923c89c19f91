use thiserror::Error;

use crate::field::Elem;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} does not fit in 63 bits")]
    FieldTooLarge { p: u64, m: usize },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element encoding {0} is out of range for a field of order {1}")]
    ElementOutOfRange(u64, u64),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("negative power of zero")]
    NegativePowerOfZero,
    #[error("{ell} does not divide q - 1 = {order}")]
    NotDivisor { ell: u64, order: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("table of {0} entries exceeds the dense-table limit")]
    TableTooLarge(u64),
    #[error("permutation table is not a bijection")]
    NotBijective,
    #[error("tables have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("permutations do not commute (first disagreement at {0})")]
    NotCommuting(u32),
    #[error("permutation order does not fit in 128 bits")]
    OrderOverflow,
    #[error("h vanishes at the subgroup element {0}")]
    HVanishes(Elem),
    #[error("value {0} left the subgroup of roots of unity")]
    NotInSubgroup(Elem),
    #[error("exponent (r^n - 1)/s requires r^n = 1 mod s (r = {r}, n = {n}, s = {s})")]
    CongruenceViolated { r: u64, n: u32, s: u64 },
    #[error("sigma is not a permutation of 0..{0}")]
    BadSigma(usize),
    #[error("sigma^{n} is not the identity")]
    SigmaOrder { n: u32 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}
