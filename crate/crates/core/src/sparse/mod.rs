//! Degree- and arboricity-sensitive deterministic detection.

pub mod arbor;
pub mod decomposition;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::general::Detection;
use crate::graph::{Graph, SubgraphPattern, Vertex};
use crate::local::{first_common_except, LocalGraph};
use crate::routing::round_robin::{round_robin_chunked, UniformBatch};
use crate::runtime::{broadcast_word, Clique, Word};

pub use arbor::{tri_arbor, ArborReport, ArborVariant, BranchCounters, PhaseRounds};
pub use decomposition::{
    assign_delegates, assign_delegates_from, decomposition_trace, quick_decomposition, DecompositionTrace, DelegateAssignment, IterationTrace, ThresholdRule,
};

/// Finders broadcast a flag; charges one round even when nobody found.
pub(crate) fn announce(clique: &mut Clique, finders: &[bool]) -> Result<()> {
    let senders: Vec<Vertex> = (1..=finders.len() as Vertex).filter(|&v| finders[v as usize - 1]).collect();
    clique.broadcast_flags(&senders, Word::flag())?;
    Ok(())
}

/// Every node sends its neighbor list to all its neighbors and looks for
/// a common neighbor.
pub fn tri_neighbors(clique: &mut Clique, g: &Graph) -> Result<Detection> {
    let n = g.n();
    if clique.n() != n {
        return Err(Error::InvalidParameter("graph and clique sizes differ"));
    }
    let mut batch = UniformBatch::new(n);
    for v in g.vertices() {
        let words = g.neighbors(v).iter().map(|&u| clique.vertex_word(u)).collect();
        batch.set(v, words, g.neighbors(v).to_vec());
    }
    let received = round_robin_chunked(clique, &batch)?;
    let mut result = Detection::none();
    let mut finders = vec![false; n];
    for (j, lists) in received.iter().enumerate() {
        let me = j as Vertex + 1;
        for (src, words) in lists {
            let list: Vec<Vertex> = words.iter().map(|w| w.as_vertex()).collect();
            if let Some(x) = first_common_except(g.neighbors(me), &list, &[me, *src]) {
                finders[j] = true;
                if !result.found {
                    result = Detection {
                        found: true,
                        witness: Some(vec![me, *src, x]),
                        finder: Some(me),
                    };
                }
                break;
            }
        }
    }
    announce(clique, &finders)?;
    Ok(result)
}

/// Writes adjacency runs as pieces of at most `n` words: `1 | u` opens
/// the list of `u`, `0 | v` adds the edge `(u, v)`. Every piece starts
/// with an opener so pieces decode independently.
fn encode_runs(runs: &[(Vertex, Vec<Vertex>)], n: usize) -> Vec<Vec<Word>> {
    let opener = |u| Word::flag().concat(Word::vertex(u, n)).expect("fits");
    let entry = |v| Word::new(0, 1).expect("fits").concat(Word::vertex(v, n)).expect("fits");
    let mut pieces: Vec<Vec<Word>> = Vec::new();
    for (u, list) in runs {
        let mut open = false;
        for &v in list {
            let need = if open { 1 } else { 2 };
            if pieces.last().is_none_or(|p| p.len() + need > n) {
                pieces.push(Vec::new());
                open = false;
            }
            let piece = pieces.last_mut().expect("just pushed");
            if !open {
                piece.push(opener(*u));
                open = true;
            }
            piece.push(entry(v));
        }
    }
    pieces
}

/// Runs keyed by the smaller endpoint of each edge.
fn runs_of(edges: &BTreeSet<(Vertex, Vertex)>) -> Vec<(Vertex, Vec<Vertex>)> {
    let mut runs: Vec<(Vertex, Vec<Vertex>)> = Vec::new();
    for &(u, v) in edges {
        match runs.last_mut() {
            Some((w, list)) if *w == u => list.push(v),
            _ => runs.push((u, vec![v])),
        }
    }
    runs
}

fn decode_edges(words: &[Word], out: &mut BTreeSet<(Vertex, Vertex)>) {
    let mut current = 0;
    for w in words {
        let (flag, id) = w.split(w.bits() - 1);
        if flag.value() == 1 {
            current = id.as_vertex();
        } else {
            let v = id.as_vertex();
            out.insert((current.min(v), current.max(v)));
        }
    }
}

/// Detects a connected pattern of diameter `D` by collecting every edge
/// within `D` hops: `D` repetitions of sending the known edge set to all
/// neighbors. From the second repetition on, each repetition starts with
/// one round in which every node broadcasts how many pieces of `n` words
/// it will send.
pub fn detect_diameter_d(clique: &mut Clique, g: &Graph, pattern: &SubgraphPattern) -> Result<Detection> {
    let n = g.n();
    if clique.n() != n {
        return Err(Error::InvalidParameter("graph and clique sizes differ"));
    }
    let diameter = pattern
        .diameter()
        .ok_or(Error::InvalidParameter("pattern must be connected"))?;
    let mut known: Vec<BTreeSet<(Vertex, Vertex)>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().map(|&u| (u.min(v), u.max(v))).collect())
        .collect();
    for repetition in 0..diameter {
        // The first repetition sends each node's own neighbor list, which
        // always fits one piece.
        let contents: Vec<Vec<Vec<Word>>> = if repetition == 0 {
            g.vertices()
                .map(|v| encode_runs(&[(v, g.neighbors(v).to_vec())], n))
                .collect()
        } else {
            known.iter().map(|k| encode_runs(&runs_of(k), n)).collect()
        };
        let pieces = if repetition == 0 {
            1
        } else {
            let mut sends = Vec::new();
            for (i, c) in contents.iter().enumerate() {
                let count = c.len() as u64;
                let word = Word::new(count, (64 - count.leading_zeros()).max(1))?;
                if count > 0 && !g.neighbors(i as Vertex + 1).is_empty() {
                    sends.extend(broadcast_word(i as Vertex + 1, n, clique.word_bits(), word)?);
                }
            }
            let heard = clique.exchange(sends)?;
            heard[0].iter().map(|e| e.word.value() as usize).max().unwrap_or(0)
        };
        let mut next = known.clone();
        for p in 0..pieces {
            let mut batch = UniformBatch::new(n);
            for (i, c) in contents.iter().enumerate() {
                let v = i as Vertex + 1;
                if let Some(piece) = c.get(p) {
                    batch.set(v, piece.clone(), g.neighbors(v).to_vec());
                }
            }
            let received = round_robin_chunked(clique, &batch)?;
            for (j, lists) in received.into_iter().enumerate() {
                for (_, words) in lists {
                    decode_edges(&words, &mut next[j]);
                }
            }
        }
        known = next;
    }
    let mut result = Detection::none();
    let mut finders = vec![false; n];
    for (i, k) in known.iter().enumerate() {
        let local = LocalGraph::from_edges(k.iter().copied());
        if let Some(copy) = local.find_pattern(pattern) {
            finders[i] = true;
            if !result.found {
                result = Detection {
                    found: true,
                    witness: Some(copy),
                    finder: Some(i as Vertex + 1),
                };
            }
        }
    }
    announce(clique, &finders)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::oracle_contains;

    #[test]
    fn triangle_in_eight() {
        let g = Graph::from_edges(8, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let mut c = Clique::new(8);
        assert!(tri_neighbors(&mut c, &g).unwrap().found);
        assert!(c.rounds() <= 4);
    }

    #[test]
    fn star_is_triangle_free() {
        let g = Graph::from_edges(8, (2..=8).map(|v| (1, v))).unwrap();
        let mut c = Clique::new(8);
        assert!(!tri_neighbors(&mut c, &g).unwrap().found);
    }

    #[test]
    fn four_cycle_needs_two_hops() {
        let g = Graph::from_edges(16, [(1, 2), (2, 3), (3, 4), (4, 1), (4, 9), (9, 10)]).unwrap();
        let pattern = SubgraphPattern::cycle(4);
        let mut c = Clique::new(16);
        let d = detect_diameter_d(&mut c, &g, &pattern).unwrap();
        assert!(d.found && oracle_contains(&g, &pattern));
        let tree = Graph::from_edges(16, (2..=16).map(|v| (v / 2, v))).unwrap();
        let mut c = Clique::new(16);
        assert!(!detect_diameter_d(&mut c, &tree, &pattern).unwrap().found);
    }

    #[test]
    fn pieces_decode_independently() {
        let edges: BTreeSet<(Vertex, Vertex)> = [(1, 2), (1, 3), (1, 4), (2, 5), (3, 4)].into_iter().collect();
        let pieces = encode_runs(&runs_of(&edges), 5);
        assert_eq!(pieces.len(), 2);
        assert!(pieces.iter().all(|p| p.len() <= 5));
        let mut out = BTreeSet::new();
        for p in &pieces {
            decode_edges(p, &mut out);
        }
        assert_eq!(out, edges);
    }
}
