use core::fmt;

use crate::graph::Vertex;

/// Errors raised by generators, the runtime and the routing subroutines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A generator or algorithm parameter is outside its valid range.
    InvalidParameter(&'static str),
    /// A vertex id outside `1..=n`.
    VertexOutOfRange { vertex: Vertex, n: usize },
    /// More than one word (or more than `word_bits` bits in packed mode) was
    /// put on one ordered link in one round.
    Capacity {
        round: u32,
        src: Vertex,
        dst: Vertex,
        used: u32,
        limit: u32,
    },
    /// A payload wider than the clique's word size.
    OversizeWord { bits: u32, word_bits: u32 },
    /// The node programs did not all halt within the round limit.
    NonTermination { max_rounds: u32 },
    /// A node is the source of more messages than the scheme allows.
    SourceOverload { node: Vertex, count: usize, bound: usize },
    /// A node is the destination of more messages than the scheme allows.
    DestinationOverload { node: Vertex, count: usize, bound: usize },
    /// The bipartite multigraph handed to the labeling is not regular.
    NotRegular { vertex: Vertex, degree: usize, expected: usize },
    /// A routing scheme that needs globally known sources and destinations
    /// was handed a batch without that guarantee.
    NotGloballyKnown,
    /// High-degree nodes need more delegates than there are nodes.
    DelegateExhaustion { needed: usize, available: usize },
    /// The randomized relay gave up after its round limit.
    RelayStalled { rounds: u32, pending: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} outside 1..={n}")
            }
            Error::Capacity {
                round,
                src,
                dst,
                used,
                limit,
            } => write!(
                f,
                "capacity violation in round {round} on link {src}->{dst}: {used} > {limit}"
            ),
            Error::OversizeWord { bits, word_bits } => {
                write!(f, "payload of {bits} bits exceeds word size {word_bits}")
            }
            Error::NonTermination { max_rounds } => {
                write!(f, "programs still running after {max_rounds} rounds")
            }
            Error::SourceOverload { node, count, bound } => {
                write!(f, "node {node} sources {count} messages (bound {bound})")
            }
            Error::DestinationOverload { node, count, bound } => {
                write!(f, "node {node} receives {count} messages (bound {bound})")
            }
            Error::NotRegular {
                vertex,
                degree,
                expected,
            } => write!(
                f,
                "bipartite multigraph not regular: vertex {vertex} has degree {degree}, expected {expected}"
            ),
            Error::NotGloballyKnown => {
                f.write_str("batch sources and destinations are not globally known")
            }
            Error::DelegateExhaustion { needed, available } => write!(
                f,
                "{needed} delegates needed but only {available} nodes available"
            ),
            Error::RelayStalled { rounds, pending } => write!(
                f,
                "randomized relay still holds {pending} messages after {rounds} rounds"
            ),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
