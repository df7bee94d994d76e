use alloc::vec::Vec;

use super::round_robin::{round_robin_chunked, UniformBatch};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::runtime::Clique;

/// Every node learns the whole edge set. Node `i` spreads its
/// higher-numbered neighbors to everybody with chunked round-robin
/// messaging. Returns each node's reconstruction.
pub fn learn_full_graph(clique: &mut Clique, g: &Graph) -> Result<Vec<Graph>> {
    let n = g.n();
    if clique.n() != n {
        return Err(Error::InvalidParameter("graph and clique sizes differ"));
    }
    let everybody: Vec<Vertex> = (1..=n as Vertex).collect();
    let mut batch = UniformBatch::new(n);
    for v in g.vertices() {
        let up: Vec<_> = g
            .neighbors(v)
            .iter()
            .filter(|&&u| u > v)
            .map(|&u| clique.vertex_word(u))
            .collect();
        batch.set(v, up, everybody.clone());
    }
    let received = round_robin_chunked(clique, &batch)?;
    received
        .into_iter()
        .map(|sources| {
            let edges = sources
                .into_iter()
                .flat_map(|(src, words)| words.into_iter().map(move |w| (src, w.as_vertex())));
            Graph::from_edges(n, edges)
        })
        .collect()
}
