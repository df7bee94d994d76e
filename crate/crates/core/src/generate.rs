//! Deterministic graph families used by the experiments.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::routing::{MessageBatch, UniformBatch};
use crate::runtime::Word;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Empty { n: usize },
    Complete { n: usize },
    Path { n: usize },
    Cycle { n: usize },
    /// Center 1, leaves `2..=n`.
    Star { n: usize },
    /// Random recursive tree: vertex `v` attaches to a uniform earlier vertex.
    Tree { n: usize },
    /// Erdős–Rényi `G(n, p)`.
    Gnp { n: usize, p: f64 },
    /// Edge `{1, 2}` plus triangles `{1, 2, k}` for `k = 3..t+2`.
    SharedEdge { n: usize, t: usize },
    /// Triangles `{3i+1, 3i+2, 3i+3}` for `i < t`.
    DisjointTriangles { n: usize, t: usize },
    /// Union of `k` random spanning trees; arboricity at most `k`.
    ForestUnion { n: usize, k: usize },
    /// Adjacent hubs 1 and 2, vertex 3 adjacent to both, remaining vertices
    /// hung alternately off the hubs. The only triangle has one low-degree
    /// corner.
    TwinHubs { n: usize },
}

impl Family {
    pub fn n(&self) -> usize {
        match *self {
            Family::Empty { n }
            | Family::Complete { n }
            | Family::Path { n }
            | Family::Cycle { n }
            | Family::Star { n }
            | Family::Tree { n }
            | Family::Gnp { n, .. }
            | Family::SharedEdge { n, .. }
            | Family::DisjointTriangles { n, .. }
            | Family::ForestUnion { n, .. }
            | Family::TwinHubs { n } => n,
        }
    }

    /// Whether the family consumes the seed.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Family::Tree { .. } | Family::Gnp { .. } | Family::ForestUnion { .. }
        )
    }
}

/// Builds the graph for `family`; `seed` is ignored by deterministic families.
pub fn generate(family: &Family, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = match *family {
        Family::Empty { n } => Graph::empty(n),
        Family::Complete { n } => {
            let mut edges = Vec::new();
            for u in 1..=n as Vertex {
                for v in u + 1..=n as Vertex {
                    edges.push((u, v));
                }
            }
            Graph::from_edges(n, edges)?
        }
        Family::Path { n } => Graph::from_edges(n, (1..n as Vertex).map(|v| (v, v + 1)))?,
        Family::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParameter("cycle needs n >= 3"));
            }
            let mut edges: Vec<_> = (1..n as Vertex).map(|v| (v, v + 1)).collect();
            edges.push((1, n as Vertex));
            Graph::from_edges(n, edges)?
        }
        Family::Star { n } => Graph::from_edges(n, (2..=n as Vertex).map(|v| (1, v)))?,
        Family::Tree { n } => Graph::from_edges(n, random_tree(n, &mut rng))?,
        Family::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter("gnp needs 0 <= p <= 1"));
            }
            let mut edges = Vec::new();
            for u in 1..=n as Vertex {
                for v in u + 1..=n as Vertex {
                    if p >= 1.0 || rng.gen::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)?
        }
        Family::SharedEdge { n, t } => {
            if n < 2 || t + 2 > n {
                return Err(Error::InvalidParameter("shared-edge family needs t <= n - 2"));
            }
            let mut edges = alloc::vec![(1, 2)];
            for k in 3..(t + 3) as Vertex {
                edges.push((1, k));
                edges.push((2, k));
            }
            Graph::from_edges(n, edges)?
        }
        Family::DisjointTriangles { n, t } => {
            if 3 * t > n {
                return Err(Error::InvalidParameter("disjoint-triangles family needs 3t <= n"));
            }
            let mut edges = Vec::new();
            for i in 0..t as Vertex {
                let a = 3 * i + 1;
                edges.extend([(a, a + 1), (a, a + 2), (a + 1, a + 2)]);
            }
            Graph::from_edges(n, edges)?
        }
        Family::ForestUnion { n, k } => {
            if k == 0 {
                return Err(Error::InvalidParameter("forest union needs k >= 1"));
            }
            let mut edges = Vec::new();
            for _ in 0..k {
                let mut perm: Vec<Vertex> = (1..=n as Vertex).collect();
                perm.shuffle(&mut rng);
                for (u, v) in random_tree(n, &mut rng) {
                    edges.push((perm[u as usize - 1], perm[v as usize - 1]));
                }
            }
            Graph::from_edges_dedup(n, edges)?
        }
        Family::TwinHubs { n } => {
            if n < 3 {
                return Err(Error::InvalidParameter("twin-hubs family needs n >= 3"));
            }
            let mut edges = alloc::vec![(1, 2), (1, 3), (2, 3)];
            for v in 4..=n as Vertex {
                edges.push((1 + (v % 2), v));
            }
            Graph::from_edges(n, edges)?
        }
    };
    debug_assert!(g.check_invariants());
    Ok(g)
}

/// A globally known batch in which every node sends and receives at most
/// `bound` messages: the union of `bound` random permutations, each pair
/// kept with probability `keep`. Payloads are random vertex ids.
pub fn random_batch(n: usize, bound: usize, keep: f64, seed: u64) -> MessageBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batch = MessageBatch::new(n).globally_known(true);
    let mut perm: Vec<Vertex> = (1..=n as Vertex).collect();
    for _ in 0..bound {
        perm.shuffle(&mut rng);
        for (s, &d) in perm.iter().enumerate() {
            if keep >= 1.0 || rng.gen::<f64>() < keep {
                let payload = rng.gen_range(1..=n as Vertex);
                batch.push(s as Vertex + 1, d, Word::vertex(payload, n));
            }
        }
    }
    batch
}

/// Every node sends one message to every node.
pub fn all_to_all_batch(n: usize) -> MessageBatch {
    let mut batch = MessageBatch::new(n).globally_known(true);
    for s in 1..=n as Vertex {
        for d in 1..=n as Vertex {
            batch.push(s, d, Word::vertex(s, n));
        }
    }
    batch
}

/// `n` messages per source, all of them to distinct destinations, with
/// each source's destinations a random shift of the others'.
pub fn shifted_batch(n: usize, seed: u64) -> MessageBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batch = MessageBatch::new(n);
    for s in 1..=n as Vertex {
        let shift = rng.gen_range(0..n as Vertex);
        for k in 0..n as Vertex {
            batch.push(s, (s + shift + k) % n as Vertex + 1, Word::vertex(k + 1, n));
        }
    }
    batch
}

/// A uniform-content batch in which no node receives more than `n` words.
pub fn random_uniform_batch(n: usize, seed: u64) -> UniformBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batch = UniformBatch::new(n);
    let mut load = alloc::vec![0usize; n];
    let mut order: Vec<Vertex> = (1..=n as Vertex).collect();
    order.shuffle(&mut rng);
    for &src in &order {
        let k = rng.gen_range(0..=n.min(4));
        let want = rng.gen_range(0..=n);
        let mut targets: Vec<Vertex> = (1..=n as Vertex).collect();
        targets.shuffle(&mut rng);
        let recipients: Vec<Vertex> = targets
            .into_iter()
            .filter(|&d| load[d as usize - 1] + k <= n)
            .take(want)
            .collect();
        for &d in &recipients {
            load[d as usize - 1] += k;
        }
        let contents = (0..k).map(|_| Word::vertex(rng.gen_range(1..=n as Vertex), n)).collect();
        batch.set(src, contents, recipients);
    }
    batch
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    (2..=n as Vertex)
        .map(|v| (rng.gen_range(1..v), v))
        .collect()
}
