use crate::construction::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is even; an odd prime is required")]
    EvenPrime(u64),
    #[error("{0} is outside the supported range [3, 2^62)")]
    OutOfRange(u64),
    #[error("p = {p} is {actual} mod {modulus}, expected {expected} mod {modulus}")]
    WrongResidueClass {
        p: u64,
        modulus: u64,
        expected: u64,
        actual: u64,
    },
    #[error("residue must be nonzero")]
    ZeroResidue,
    #[error("{a} is not a primitive root mod {p}")]
    NotPrimitiveRoot { a: u64, p: u64 },
    #[error("a(a^2-a+1) is not a nonzero fourth power mod {p} for a = {a}")]
    QuarticConditionFails { a: u64, p: u64 },
    #[error("M = {0} must be a positive multiple of 4")]
    BadHalfOrder(u64),
    #[error("no qualifying 1-factor or primitive root exists for p = {0}")]
    NotFound(u64),
    #[error("p = {p} exceeds the enumeration cap {cap}")]
    CapExceeded { p: u64, cap: u64 },
    #[error("edge endpoints coincide: {0}")]
    DegenerateEdge(Vertex),
    #[error("vertex {vertex} is not an element of F_{p}")]
    VertexOutOfField { vertex: u64, p: u64 },
    #[error("{d} is not a square-free divisor of {n}")]
    NotSquareFreeDivisor { d: u64, n: u64 },
    #[error("1-factor fails verification: {0}")]
    FailedVerification(String),
    #[error("character power must be in 1..=3, got {0}")]
    BadCharacterPower(u32),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
