//! Partition-based deterministic detection.
//!
//! The vertex set is padded to `n_eff = s^d` and cut into `s` contiguous
//! subsets. Slot `r` owns the ordered tuple given by the base-`s` digits of
//! `r` and is hosted by node `r mod n + 1`. Each slot gathers every edge
//! between each pair of its subsets and searches the gathered graph, so
//! every copy of a `d`-vertex pattern is seen by the slot of its subsets.
//!
//! The gathering traffic does not depend on the graph: the owner of vertex
//! `l` reserves `|S_b|` words (or `ceil(|S_b| / word_bits)` bit-array words
//! when packed) for the list of its neighbors in `S_b`, and unused
//! reservations stay silent. The schedule is therefore fixed per `n` and
//! runs through [`RoutePlan`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Graph, SubgraphPattern, Vertex};
use crate::local::LocalGraph;
use crate::routing::RoutePlan;
use crate::runtime::{word_bits, Clique, Word};

/// Outcome of a detection run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub found: bool,
    /// A copy of the pattern, pattern vertex `p` at entry `p - 1`.
    pub witness: Option<Vec<Vertex>>,
    /// Lowest node that found a copy.
    pub finder: Option<Vertex>,
}

impl Detection {
    pub fn none() -> Self {
        Detection {
            found: false,
            witness: None,
            finder: None,
        }
    }
}

/// Partition of `1..=n_eff` into `side` contiguous subsets of equal size,
/// with slot `r` assigned the base-`side` digits of `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionScheme {
    n: usize,
    d: usize,
    n_eff: usize,
    side: usize,
    size: usize,
}

/// Builds the scheme for `n` nodes and `d`-tuples.
pub fn build_partition(n: usize, d: usize) -> Result<PartitionScheme> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive"));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("d must be at least 2"));
    }
    let mut side = 1usize;
    while side.pow(d as u32) < n {
        side += 1;
    }
    let n_eff = side.pow(d as u32);
    Ok(PartitionScheme {
        n,
        d,
        n_eff,
        side,
        size: n_eff / side,
    })
}

impl PartitionScheme {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_effective(&self) -> usize {
        self.n_eff
    }

    /// Number of subsets.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn subset_size(&self) -> usize {
        self.size
    }

    /// Vertex ids of subset `a`, virtual ones included.
    pub fn subset(&self, a: usize) -> Range<Vertex> {
        (a * self.size) as Vertex + 1..((a + 1) * self.size) as Vertex + 1
    }

    /// Real vertex ids of subset `a`.
    pub fn real_subset(&self, a: usize) -> Range<Vertex> {
        let r = self.subset(a);
        r.start.min(self.n as Vertex + 1)..r.end.min(self.n as Vertex + 1)
    }

    pub fn subset_of(&self, v: Vertex) -> usize {
        (v as usize - 1) / self.size
    }

    /// Subset indices of slot `slot`, most significant digit first.
    pub fn tuple(&self, slot: usize) -> Vec<usize> {
        let mut digits = vec![0; self.d];
        let mut r = slot;
        for digit in digits.iter_mut().rev() {
            *digit = r % self.side;
            r /= self.side;
        }
        digits
    }

    pub fn slot_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &a| acc * self.side + a)
    }

    pub fn host(&self, slot: usize) -> Vertex {
        (slot % self.n) as Vertex + 1
    }

    /// Slot whose tuple lists the subsets of `vertices` in order.
    pub fn covering_slot(&self, vertices: &[Vertex]) -> usize {
        let tuple: Vec<usize> = vertices.iter().map(|&v| self.subset_of(v)).collect();
        self.slot_of(&tuple)
    }

    /// Unordered subset pairs whose edges slot `slot` gathers.
    pub fn pairs(&self, slot: usize) -> Vec<(usize, usize)> {
        let t = self.tuple(slot);
        let mut set = BTreeSet::new();
        for j in 0..t.len() {
            for k in j + 1..t.len() {
                set.insert((t[j].min(t[k]), t[j].max(t[k])));
            }
        }
        set.into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Reservation {
    slot: usize,
    owner: Vertex,
    target: usize,
    chunk: usize,
}

/// A fixed gathering schedule for one `(n, d, packed)` combination.
#[derive(Debug, Clone)]
pub struct PartitionPlan {
    scheme: PartitionScheme,
    packed: bool,
    word_bits: u32,
    reservations: Vec<Reservation>,
    route: RoutePlan,
}

impl PartitionPlan {
    pub fn new(n: usize, d: usize, packed: bool) -> Result<Self> {
        let scheme = build_partition(n, d)?;
        let wb = word_bits(n) as usize;
        let mut reservations = Vec::new();
        let mut pairs = Vec::new();
        // Slots needing the same pair of distinct subsets alternate which
        // side supplies the lists, which halves the busiest owner's load.
        let mut uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for slot in 0..scheme.n_eff {
            let host = scheme.host(slot);
            for (a, b) in scheme.pairs(slot) {
                let turn = uses.entry((a, b)).or_insert(0);
                let (a, b) = if turn.is_multiple_of(2) { (a, b) } else { (b, a) };
                *turn += 1;
                let width = scheme.real_subset(b).len();
                let words = if packed { width.div_ceil(wb) } else { width };
                for owner in scheme.real_subset(a) {
                    for chunk in 0..words {
                        reservations.push(Reservation {
                            slot,
                            owner,
                            target: b,
                            chunk,
                        });
                        pairs.push((owner, host));
                    }
                }
            }
        }
        let mut out = vec![0usize; n];
        let mut inn = vec![0usize; n];
        for &(s, d) in &pairs {
            out[s as usize - 1] += 1;
            inn[d as usize - 1] += 1;
        }
        let bound = out.iter().chain(&inn).copied().max().unwrap_or(0);
        let route = RoutePlan::new(n, pairs, bound)?;
        Ok(PartitionPlan {
            scheme,
            packed,
            word_bits: wb as u32,
            reservations,
            route,
        })
    }

    pub fn scheme(&self) -> &PartitionScheme {
        &self.scheme
    }

    pub fn is_packed(&self) -> bool {
        self.packed
    }

    /// Rounds charged by a run: the gathering stripes plus one broadcast.
    pub fn rounds(&self) -> usize {
        self.route.rounds() + 1
    }

    /// Largest number of words any node sends or receives in the schedule.
    pub fn reserved_load(&self) -> usize {
        let n = self.scheme.n;
        let mut out = vec![0usize; n];
        let mut inn = vec![0usize; n];
        for &(s, d) in self.route.slots() {
            out[s as usize - 1] += 1;
            inn[d as usize - 1] += 1;
        }
        out.into_iter().chain(inn).max().unwrap_or(0)
    }

    /// Gathers, searches every slot for `pattern`, and spends one final
    /// round on which finders announce success.
    pub fn detect(&self, clique: &mut Clique, g: &Graph, pattern: &SubgraphPattern) -> Result<Detection> {
        let scheme = &self.scheme;
        if g.n() != scheme.n || clique.n() != scheme.n {
            return Err(Error::InvalidParameter("graph, clique and plan sizes differ"));
        }
        if pattern.d() != scheme.d {
            return Err(Error::InvalidParameter("pattern size differs from plan"));
        }
        let wb = self.word_bits as usize;
        let payloads: Vec<Option<Word>> = self
            .reservations
            .iter()
            .map(|r| {
                let range = scheme.real_subset(r.target);
                let neighbors = g.neighbors(r.owner);
                let lo = neighbors.partition_point(|&u| u < range.start);
                let hi = neighbors.partition_point(|&u| u < range.end);
                let inside = &neighbors[lo..hi];
                if self.packed {
                    let first = range.start + (r.chunk * wb) as Vertex;
                    let width = (range.end - first).min(wb as Vertex);
                    let mut bits = 0u64;
                    for &u in inside.iter().filter(|&&u| u >= first && u < first + width) {
                        bits |= 1 << (u - first);
                    }
                    (bits != 0).then(|| Word::new(bits, width).expect("chunk fits"))
                } else {
                    inside.get(r.chunk).map(|&u| Word::vertex(u, scheme.n))
                }
            })
            .collect();
        let inboxes = self.route.execute(clique, &payloads)?;

        let mut gathered: Vec<LocalGraph> = vec![LocalGraph::new(); scheme.n_eff];
        for inbox in inboxes {
            for m in inbox {
                let r = self.reservations[m.index];
                let local = &mut gathered[r.slot];
                if self.packed {
                    let first = scheme.real_subset(r.target).start + (r.chunk * wb) as Vertex;
                    let mut bits = m.word.value();
                    while bits != 0 {
                        let offset = bits.trailing_zeros();
                        local.add_edge(r.owner, first + offset);
                        bits &= bits - 1;
                    }
                } else {
                    local.add_edge(r.owner, m.word.as_vertex());
                }
            }
        }
        let mut result = Detection::none();
        let mut finders = vec![false; scheme.n];
        for (slot, local) in gathered.iter_mut().enumerate() {
            local.finish();
            let copy = if scheme.d == 3 && pattern.edges().len() == 3 {
                local.find_triangle().map(|t| t.to_vec())
            } else {
                local.find_pattern(pattern)
            };
            if let Some(copy) = copy {
                let host = scheme.host(slot);
                finders[host as usize - 1] = true;
                if result.finder.is_none_or(|f| host < f) {
                    result = Detection {
                        found: true,
                        witness: Some(copy),
                        finder: Some(host),
                    };
                }
            }
        }
        let senders: Vec<Vertex> = (1..=scheme.n as Vertex).filter(|&v| finders[v as usize - 1]).collect();
        let heard = clique.broadcast_flags(&senders, Word::flag())?;
        debug_assert!(heard.iter().all(|&h| h == result.found));
        Ok(result)
    }
}

/// Triangle detection with a freshly built plan.
pub fn tri_partition(clique: &mut Clique, g: &Graph, packed: bool) -> Result<Detection> {
    PartitionPlan::new(g.n(), 3, packed)?.detect(clique, g, &SubgraphPattern::triangle())
}

/// Detection of an arbitrary `d`-vertex pattern with a freshly built plan.
pub fn d_clique0(clique: &mut Clique, g: &Graph, pattern: &SubgraphPattern, packed: bool) -> Result<Detection> {
    PartitionPlan::new(g.n(), pattern.d(), packed)?.detect(clique, g, pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::oracle_contains;

    #[test]
    fn scheme_shapes() {
        let s = build_partition(8, 3).unwrap();
        assert_eq!((s.n_effective(), s.side(), s.subset_size()), (8, 2, 4));
        assert_eq!(s.subset(1), 5..9);
        let s = build_partition(27, 3).unwrap();
        assert_eq!((s.side(), s.subset_size()), (3, 9));
        let s = build_partition(5, 3).unwrap();
        assert_eq!(s.n_effective(), 8);
        assert_eq!(s.real_subset(1), 5..6);
    }

    #[test]
    fn tuples_are_a_bijection() {
        let s = build_partition(27, 3).unwrap();
        let mut seen = BTreeSet::new();
        for slot in 0..27 {
            let t = s.tuple(slot);
            assert_eq!(s.slot_of(&t), slot);
            seen.insert(t);
        }
        assert_eq!(seen.len(), 27);
    }

    #[test]
    fn triangle_across_subsets() {
        let g = Graph::from_edges(8, [(1, 2), (2, 5), (1, 5)]).unwrap();
        for packed in [false, true] {
            let mut c = Clique::new(8);
            let d = tri_partition(&mut c, &g, packed).unwrap();
            assert!(d.found);
            let w = d.witness.unwrap();
            assert!(g.has_edge(w[0], w[1]) && g.has_edge(w[1], w[2]) && g.has_edge(w[0], w[2]));
        }
    }

    #[test]
    fn five_cycle_has_none() {
        let g = Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        let mut c = Clique::new(5);
        assert!(!tri_partition(&mut c, &g, false).unwrap().found);
        assert_eq!(c.rounds(), PartitionPlan::new(5, 3, false).unwrap().rounds() as u32);
    }

    #[test]
    fn round_counts_at_eight() {
        let unpacked = PartitionPlan::new(8, 3, false).unwrap();
        assert_eq!(unpacked.reserved_load(), 32);
        assert_eq!(unpacked.rounds(), 9);
        assert!(unpacked.rounds() <= 13);
        assert_eq!(PartitionPlan::new(8, 3, true).unwrap().rounds(), 3);
    }

    #[test]
    fn four_clique() {
        let k4 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        let g = Graph::from_edges(16, k4).unwrap();
        let mut c = Clique::new(16);
        assert!(d_clique0(&mut c, &g, &SubgraphPattern::clique(4), false).unwrap().found);
        let g = Graph::from_edges(16, k4[..5].iter().copied()).unwrap();
        let mut c = Clique::new(16);
        let pattern = SubgraphPattern::clique(4);
        assert!(!d_clique0(&mut c, &g, &pattern, true).unwrap().found);
        assert!(!oracle_contains(&g, &pattern));
    }
}
