use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::runtime::{broadcast_word, ceil_log2, Clique, Word};

/// How the low-degree threshold is chosen in each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdRule {
    /// `4A`.
    Fixed { a: usize },
    /// `max(4A, ceil(sqrt(n)))`.
    BaseChange { a: usize },
    /// `max(floor(2 * average active degree), ceil(sqrt(n)))`.
    Uniform,
}

pub(crate) fn ceil_sqrt(n: usize) -> usize {
    let mut r = libm::sqrt(n as f64) as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

impl ThresholdRule {
    pub fn threshold(&self, n: usize, active_degrees: &[usize]) -> usize {
        match *self {
            ThresholdRule::Fixed { a } => 4 * a.max(1),
            ThresholdRule::BaseChange { a } => (4 * a.max(1)).max(ceil_sqrt(n)),
            ThresholdRule::Uniform => {
                let sum: usize = active_degrees.iter().sum();
                let twice_average = (2 * sum).checked_div(active_degrees.len()).unwrap_or(0);
                twice_average.max(ceil_sqrt(n))
            }
        }
    }
}

/// One elimination step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    /// Active vertices, ascending.
    pub active: Vec<Vertex>,
    /// Degree within the active set, aligned with `active`.
    pub degrees: Vec<usize>,
    pub threshold: usize,
}

impl IterationTrace {
    pub fn degree(&self, v: Vertex) -> Option<usize> {
        self.active.binary_search(&v).ok().map(|i| self.degrees[i])
    }

    pub fn is_low(&self, v: Vertex) -> bool {
        self.degree(v).is_some_and(|d| d <= self.threshold)
    }

    pub fn is_high(&self, v: Vertex) -> bool {
        self.degree(v).is_some_and(|d| d > self.threshold)
    }

    pub fn low_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d <= self.threshold).count()
    }

    /// Sum of active degrees.
    pub fn degree_sum(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// The full elimination order, known to every node after the
/// announcements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTrace {
    n: usize,
    pub iterations: Vec<IterationTrace>,
    removed_in: Vec<usize>,
}

impl DecompositionTrace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }

    /// Iteration (0-based) in which `v` is low and leaves.
    pub fn removed_in(&self, v: Vertex) -> usize {
        self.removed_in[v as usize - 1]
    }

    /// `ceil(log2 n)`, at least one.
    pub fn iteration_bound(n: usize) -> usize {
        (ceil_log2(n) as usize).max(1)
    }

    /// Neighbors of `v` active in iteration `it`.
    pub fn active_neighbors(&self, g: &Graph, it: usize, v: Vertex) -> Vec<Vertex> {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.removed_in(u) >= it)
            .collect()
    }
}

/// Computes the trace locally from the graph; used by the distributed
/// version and by tests as an oracle.
pub fn decomposition_trace(g: &Graph, rule: ThresholdRule) -> Result<DecompositionTrace> {
    let n = g.n();
    let mut removed_in = vec![usize::MAX; n];
    let mut iterations = Vec::new();
    let mut active: Vec<Vertex> = g.vertices().collect();
    while !active.is_empty() {
        let it = iterations.len();
        let degrees: Vec<usize> = active
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&u| removed_in[u as usize - 1] >= it).count())
            .collect();
        let threshold = rule.threshold(n, &degrees);
        let mut rest = Vec::new();
        for (&v, &d) in active.iter().zip(&degrees) {
            if d <= threshold {
                removed_in[v as usize - 1] = it;
            } else {
                rest.push(v);
            }
        }
        if rest.len() == active.len() {
            return Err(Error::InvalidParameter("threshold eliminates no vertex"));
        }
        iterations.push(IterationTrace {
            active: core::mem::replace(&mut active, rest),
            degrees,
            threshold,
        });
    }
    Ok(DecompositionTrace { n, iterations, removed_in })
}

/// Repeated degree announcements: in every iteration each active node
/// broadcasts its active degree (one round) and all nodes with degree at
/// most the threshold leave.
pub fn quick_decomposition(clique: &mut Clique, g: &Graph, rule: ThresholdRule) -> Result<DecompositionTrace> {
    let trace = decomposition_trace(g, rule)?;
    let n = g.n();
    if clique.n() != n {
        return Err(Error::InvalidParameter("graph and clique sizes differ"));
    }
    for iteration in &trace.iterations {
        announce_degrees(clique, iteration)?;
    }
    Ok(trace)
}

/// One round in which every active node broadcasts its active degree.
pub(crate) fn announce_degrees(clique: &mut Clique, iteration: &IterationTrace) -> Result<()> {
    let n = clique.n();
    let mut sends = Vec::new();
    for (&v, &d) in iteration.active.iter().zip(&iteration.degrees) {
        let word = Word::new(d as u64, clique.id_bits())?;
        sends.extend(broadcast_word(v, n, clique.word_bits(), word)?);
    }
    let heard = clique.exchange(sends)?;
    // Every node rebuilds the same degree vector from what it heard.
    debug_assert_eq!(
        heard[0].iter().map(|e| e.word.value() as usize).collect::<Vec<_>>(),
        iteration.degrees
    );
    Ok(())
}

/// Delegates of one high-degree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Principal {
    pub node: Vertex,
    pub degree: usize,
    pub delegates: Vec<Vertex>,
}

/// Delegates for every node whose degree exceeds the threshold. Principal
/// `k`'s sorted active neighbor list is cut into runs of `threshold`, and
/// run `q` goes to its `q`-th delegate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelegateAssignment {
    pub threshold: usize,
    pub principals: Vec<Principal>,
    by_node: BTreeMap<Vertex, usize>,
    by_delegate: BTreeMap<Vertex, (usize, usize)>,
    next_offset: usize,
}

impl DelegateAssignment {
    pub fn delegate_count(&self) -> usize {
        self.by_delegate.len()
    }

    pub fn delegates_of(&self, principal: Vertex) -> Option<&[Vertex]> {
        self.by_node
            .get(&principal)
            .map(|&p| self.principals[p].delegates.as_slice())
    }

    /// Positions of the principal's neighbor list covered by run `q`.
    pub fn range(&self, degree: usize, q: usize) -> Range<usize> {
        q * self.threshold..((q + 1) * self.threshold).min(degree)
    }

    /// The principal `delegate` serves and the positions it covers.
    pub fn serving(&self, delegate: Vertex) -> Option<(Vertex, Range<usize>)> {
        self.by_delegate.get(&delegate).map(|&(p, q)| {
            let principal = &self.principals[p];
            (principal.node, self.range(principal.degree, q))
        })
    }

    /// Delegate of `principal` covering position `position` of its list.
    pub fn delegate_for(&self, principal: Vertex, position: usize) -> Option<Vertex> {
        self.delegates_of(principal)?.get(position / self.threshold).copied()
    }

    /// Pool position after the last delegate handed out.
    pub fn next_offset(&self) -> usize {
        self.next_offset
    }
}

/// Assigns delegates from the pool `1..=n` with pool position 0 first.
pub fn assign_delegates(n: usize, degrees: &[(Vertex, usize)], threshold: usize) -> Result<DelegateAssignment> {
    assign_delegates_from(n, degrees, threshold, 0)
}

/// Like [`assign_delegates`], with the pool read cyclically from
/// `offset`. High-degree nodes are served by descending degree, then
/// ascending id.
pub fn assign_delegates_from(
    n: usize,
    degrees: &[(Vertex, usize)],
    threshold: usize,
    offset: usize,
) -> Result<DelegateAssignment> {
    if threshold == 0 && degrees.iter().any(|&(_, d)| d > 0) {
        return Err(Error::InvalidParameter("threshold must be positive"));
    }
    let mut high: Vec<(Vertex, usize)> = degrees.iter().copied().filter(|&(_, d)| d > threshold).collect();
    high.sort_by_key(|&(v, d)| (core::cmp::Reverse(d), v));
    let needed: usize = high.iter().map(|&(_, d)| d.div_ceil(threshold)).sum();
    if needed > n {
        return Err(Error::DelegateExhaustion { needed, available: n });
    }
    let mut principals = Vec::with_capacity(high.len());
    let mut by_node = BTreeMap::new();
    let mut by_delegate = BTreeMap::new();
    let mut position = offset;
    for (p, &(node, degree)) in high.iter().enumerate() {
        let count = degree.div_ceil(threshold);
        let delegates: Vec<Vertex> = (0..count).map(|q| ((position + q) % n) as Vertex + 1).collect();
        for (q, &d) in delegates.iter().enumerate() {
            by_delegate.insert(d, (p, q));
        }
        position += count;
        by_node.insert(node, p);
        principals.push(Principal { node, degree, delegates });
    }
    Ok(DelegateAssignment {
        threshold,
        principals,
        by_node,
        by_delegate,
        next_offset: position % n.max(1),
    })
}
