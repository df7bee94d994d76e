//! Message-delivery subroutines.
//!
//! * [`two_round`]: labeling-based relay for batches whose sources and
//!   destinations every node knows in advance, two rounds per `n` messages
//!   per node.
//! * [`round_robin`]: three-round delivery when every source sends the same
//!   content to all of its recipients.
//! * [`randomized`]: randomized balanced relay with no global knowledge.
//! * [`learn`]: every node learns the whole graph.

pub mod learn;
pub mod matching;
pub mod randomized;
pub mod round_robin;
pub mod two_round;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::runtime::Word;

pub use learn::learn_full_graph;
pub use randomized::{randomized_delivery, relay_bulk};
pub use round_robin::{round_robin_chunked, round_robin_messaging, UniformBatch};
pub use two_round::{
    deterministic_message_passing, good_labeling, oblivious_schedule, GoodLabeling, RoutePlan,
};

/// One point-to-point message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Message {
    pub src: Vertex,
    pub dst: Vertex,
    pub word: Word,
}

/// A bulk of point-to-point messages to deliver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MessageBatch {
    n: usize,
    messages: Vec<Message>,
    globally_known: bool,
}

impl MessageBatch {
    pub fn new(n: usize) -> Self {
        MessageBatch {
            n,
            messages: Vec::new(),
            globally_known: false,
        }
    }

    /// Marks every message's source and destination as known to all nodes
    /// before the batch is sent.
    pub fn globally_known(mut self, known: bool) -> Self {
        self.globally_known = known;
        self
    }

    pub fn is_globally_known(&self) -> bool {
        self.globally_known
    }

    pub fn push(&mut self, src: Vertex, dst: Vertex, word: Word) {
        self.messages.push(Message { src, dst, word });
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn out_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.n];
        for m in &self.messages {
            loads[m.src as usize - 1] += 1;
        }
        loads
    }

    pub fn in_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.n];
        for m in &self.messages {
            loads[m.dst as usize - 1] += 1;
        }
        loads
    }

    /// Largest number of messages any node sends or receives.
    pub fn max_load(&self) -> usize {
        let out = self.out_loads().into_iter().max().unwrap_or(0);
        let inn = self.in_loads().into_iter().max().unwrap_or(0);
        out.max(inn)
    }

    pub(crate) fn check_vertices(&self) -> Result<()> {
        for m in &self.messages {
            for v in [m.src, m.dst] {
                if v == 0 || v as usize > self.n {
                    return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
                }
            }
        }
        Ok(())
    }
}

/// A message as it arrives: `index` identifies it within the batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delivered {
    pub index: usize,
    pub src: Vertex,
    pub word: Word,
}

/// Delivered messages per destination, `inboxes[v - 1]`.
pub type Deliveries = Vec<Vec<Delivered>>;

/// Checks that every node sends and receives at most `bound` of the given
/// `(src, dst)` pairs.
pub(crate) fn check_loads(n: usize, pairs: impl Iterator<Item = (Vertex, Vertex)>, bound: usize) -> Result<()> {
    let mut out = vec![0usize; n];
    let mut inn = vec![0usize; n];
    for (s, d) in pairs {
        out[s as usize - 1] += 1;
        inn[d as usize - 1] += 1;
    }
    for v in 0..n {
        if out[v] > bound {
            return Err(Error::SourceOverload {
                node: v as Vertex + 1,
                count: out[v],
                bound,
            });
        }
        if inn[v] > bound {
            return Err(Error::DestinationOverload {
                node: v as Vertex + 1,
                count: inn[v],
                bound,
            });
        }
    }
    Ok(())
}

/// Greedily splits `(src, dst)` pairs into groups in which no node sends or
/// receives more than `bound` messages. Returns the group of each pair.
pub fn split_admissible(n: usize, pairs: &[(Vertex, Vertex)], bound: usize) -> Vec<usize> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut inn: Vec<Vec<usize>> = Vec::new();
    let mut groups = Vec::with_capacity(pairs.len());
    for &(s, d) in pairs {
        let (s, d) = (s as usize - 1, d as usize - 1);
        let mut g = 0;
        loop {
            if g == out.len() {
                out.push(vec![0; n]);
                inn.push(vec![0; n]);
            }
            if out[g][s] < bound && inn[g][d] < bound {
                out[g][s] += 1;
                inn[g][d] += 1;
                groups.push(g);
                break;
            }
            g += 1;
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_respects_bound() {
        let pairs: Vec<(Vertex, Vertex)> = (0..20).map(|i| (1, 1 + (i % 3))).collect();
        let groups = split_admissible(3, &pairs, 3);
        let count = groups.iter().max().unwrap() + 1;
        assert_eq!(count, 7);
        for g in 0..count {
            let members = pairs
                .iter()
                .zip(&groups)
                .filter(|(_, &gg)| gg == g)
                .map(|(&p, _)| p);
            check_loads(3, members, 3).unwrap();
        }
    }
}
