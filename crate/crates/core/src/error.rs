use alloc::string::String;

use thiserror::Error;

use crate::simplex::Simplex;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty simplex")]
    EmptySimplex,
    #[error("degenerate simplex")]
    DegenerateSimplex,
    #[error("vertex {vertex} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { vertex: u32, vertex_count: usize },
    #[error("F0 length mismatch: expected {expected} values, found {found}")]
    F0LengthMismatch { expected: usize, found: usize },
    #[error("non-finite F0 value at vertex {vertex}")]
    NonFiniteF0 { vertex: u32 },
    #[error("face dimension {k} out of range for a {dim}-simplex")]
    FaceDimensionOutOfRange { k: usize, dim: usize },
    #[error("unknown simplex {0}")]
    UnknownSimplex(Simplex),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("point {index}: {reason}")]
    InvalidPoint { index: usize, reason: String },
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(u32, u32),
    #[error("maximal clique cap exceeded ({cap} cliques)")]
    CliqueCapExceeded { cap: usize },
    #[error("top simplex dimension {dim} exceeds the bit-vector cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("containment violated: {0}")]
    NotContained(String),
    #[error("matching violation: {0} is already paired or critical")]
    MatchingViolation(Simplex),
    #[error("corrupt gradient encoding around {0}")]
    CorruptGradient(Simplex),
    #[error("{0} is not critical")]
    NotCritical(Simplex),
    #[error("invalid gradient: {0}")]
    InvalidGradient(String),
    #[error("V-path traversal from {0} exceeded the queue cap")]
    QueueCapExceeded(Simplex),
    #[error("boundary maps do not compose to zero mod 2 in dimension {0}")]
    BoundaryComposition(usize),
    #[error("oracle guard exceeded ({} simplices)", scientific(*limit))]
    OracleGuard { limit: usize },
    #[error("invalid removal sequence: {0}")]
    InvalidSequence(String),
}

/// `10^k` for exact powers of ten, the plain number otherwise.
fn scientific(n: usize) -> String {
    let mut k = 0;
    let mut m = n;
    while m >= 10 && m.is_multiple_of(10) {
        m /= 10;
        k += 1;
    }
    if m == 1 && k > 1 {
        alloc::format!("10^{k}")
    } else {
        alloc::format!("{n}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn guard_message() {
        assert_eq!(
            Error::OracleGuard { limit: 10_000_000 }.to_string(),
            "oracle guard exceeded (10^7 simplices)"
        );
        assert_eq!(
            Error::OracleGuard { limit: 1500 }.to_string(),
            "oracle guard exceeded (1500 simplices)"
        );
    }
}
