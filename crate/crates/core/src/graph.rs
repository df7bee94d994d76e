//! Undirected simple graphs on vertices `1..=n`, subgraph patterns, and the
//! brute-force oracles every distributed detector is checked against.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Vertex ids are 1-based.
pub type Vertex = u32;

/// An undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, out-of-range
    /// ids and duplicate edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        g.sort();
        let mut seen_dup = false;
        for list in &g.adjacency {
            if list.windows(2).any(|w| w[0] == w[1]) {
                seen_dup = true;
                break;
            }
        }
        if seen_dup {
            return Err(Error::InvalidParameter("duplicate edge"));
        }
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but silently merges duplicate edges.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        g.sort();
        let mut count = 0;
        for list in &mut g.adjacency {
            list.dedup();
            count += list.len();
        }
        g.edge_count = count / 2;
        Ok(g)
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidParameter("self-loop"));
        }
        self.adjacency[u as usize - 1].push(v);
        self.adjacency[v as usize - 1].push(u);
        self.edge_count += 1;
        Ok(())
    }

    fn sort(&mut self) {
        for list in &mut self.adjacency {
            list.sort_unstable();
        }
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v as usize > self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == 0 || v == 0 || u as usize > self.n || v as usize > self.n {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Returns a copy with the extra edge `{u, v}` (no-op if present).
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidParameter("self-loop"));
        }
        let mut g = self.clone();
        if !g.has_edge(u, v) {
            for (a, b) in [(u, v), (v, u)] {
                let list = &mut g.adjacency[a as usize - 1];
                let pos = list.binary_search(&b).unwrap_err();
                list.insert(pos, b);
            }
            g.edge_count += 1;
        }
        Ok(g)
    }

    /// Pads the vertex set with isolated vertices up to `n`.
    pub fn padded(&self, n: usize) -> Graph {
        let mut g = self.clone();
        if n > g.n {
            g.adjacency.resize(n, Vec::new());
            g.n = n;
        }
        g
    }

    /// Checks symmetry, absence of self-loops, id ranges and sortedness.
    pub fn check_invariants(&self) -> bool {
        let mut half_edges = 0;
        for u in self.vertices() {
            let list = self.neighbors(u);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in list {
                if v == u || v == 0 || v as usize > self.n {
                    return false;
                }
                if self.neighbors(v).binary_search(&u).is_err() {
                    return false;
                }
            }
            half_edges += list.len();
        }
        half_edges == 2 * self.edge_count
    }
}

/// A small pattern graph `M_d` on vertices `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphPattern {
    d: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl SubgraphPattern {
    pub fn new(d: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("pattern needs at least one vertex"));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == 0 || v == 0 || u as usize > d || v as usize > d {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n: d,
                });
            }
            if u == v {
                return Err(Error::InvalidParameter("self-loop in pattern"));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(SubgraphPattern { d, edges: norm })
    }

    pub fn triangle() -> Self {
        Self::clique(3)
    }

    pub fn clique(d: usize) -> Self {
        let mut edges = Vec::new();
        for u in 1..=d as Vertex {
            for v in u + 1..=d as Vertex {
                edges.push((u, v));
            }
        }
        SubgraphPattern { d, edges }
    }

    pub fn cycle(d: usize) -> Self {
        let mut edges: Vec<_> = (1..d as Vertex).map(|u| (u, u + 1)).collect();
        if d >= 3 {
            edges.push((1, d as Vertex));
        }
        Self::new(d, &edges).expect("cycle edges are valid")
    }

    pub fn path(d: usize) -> Self {
        let edges: Vec<_> = (1..d as Vertex).map(|u| (u, u + 1)).collect();
        Self::new(d, &edges).expect("path edges are valid")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn as_graph(&self) -> Graph {
        Graph::from_edges(self.d, self.edges.iter().copied()).expect("pattern edges are valid")
    }

    /// Hop diameter, or `None` when the pattern is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let g = self.as_graph();
        let mut diameter = 0;
        for s in g.vertices() {
            let dist = bfs_distances(&g, s);
            for d in dist {
                diameter = diameter.max(d?);
            }
        }
        Some(diameter)
    }
}

fn bfs_distances(g: &Graph, source: Vertex) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = alloc::collections::VecDeque::new();
    dist[source as usize - 1] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize - 1].unwrap();
        for &v in g.neighbors(u) {
            if dist[v as usize - 1].is_none() {
                dist[v as usize - 1] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Exact triangle statistics of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCensus {
    pub t: u64,
    /// Triangles as sorted vertex triples, in lexicographic order.
    pub triangles: Vec<[Vertex; 3]>,
    /// Unordered triangle pairs spanning 4 vertices (sharing an edge).
    pub t4: u64,
    /// Pairs spanning 5 vertices (sharing one vertex).
    pub t5: u64,
    /// Pairs spanning 6 vertices (disjoint).
    pub t6: u64,
    /// Largest number of triangles through a single edge.
    pub delta_max: u64,
    /// Triangles through each edge `(u, v)`, `u < v`; edges in no triangle
    /// are omitted.
    pub per_edge: BTreeMap<(Vertex, Vertex), u64>,
}

/// Enumerates every triangle and classifies every unordered triangle pair by
/// the size of its vertex union. Quadratic in the triangle count.
pub fn census(g: &Graph) -> TriangleCensus {
    let triangles = list_triangles(g);
    let t = triangles.len() as u64;
    let (mut t4, mut t5, mut t6) = (0u64, 0u64, 0u64);
    for (a_idx, a) in triangles.iter().enumerate() {
        for b in &triangles[a_idx + 1..] {
            let shared = a.iter().filter(|x| b.contains(x)).count();
            match shared {
                2 => t4 += 1,
                1 => t5 += 1,
                0 => t6 += 1,
                _ => unreachable!("distinct triangles share at most two vertices"),
            }
        }
    }
    let mut per_edge = BTreeMap::new();
    for tri in &triangles {
        for (u, v) in [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])] {
            *per_edge.entry((u, v)).or_insert(0u64) += 1;
        }
    }
    let delta_max = per_edge.values().copied().max().unwrap_or(0);
    TriangleCensus {
        t,
        triangles,
        t4,
        t5,
        t6,
        delta_max,
        per_edge,
    }
}

/// All triangles `[a, b, c]` with `a < b < c`.
pub fn list_triangles(g: &Graph) -> Vec<[Vertex; 3]> {
    let mut out = Vec::new();
    for a in g.vertices() {
        let na = g.neighbors(a);
        for &b in na.iter().filter(|&&b| b > a) {
            for &c in na.iter().filter(|&&c| c > b) {
                if g.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn triangle_count(g: &Graph) -> u64 {
    list_triangles(g).len() as u64
}

/// Non-induced subgraph containment by exhaustive backtracking over
/// injective vertex maps.
pub fn oracle_contains(g: &Graph, pattern: &SubgraphPattern) -> bool {
    if pattern.d() > g.n() {
        return false;
    }
    let p = pattern.as_graph();
    let order = search_order(&p);
    let mut map = vec![0 as Vertex; pattern.d()];
    let mut used = vec![false; g.n()];
    extend(g, &p, &order, 0, &mut map, &mut used)
}

/// Pattern vertices in BFS order per component, so later vertices tend to
/// have an already-mapped neighbor.
fn search_order(p: &Graph) -> Vec<Vertex> {
    let mut order = Vec::with_capacity(p.n());
    let mut seen = vec![false; p.n()];
    let mut starts: Vec<Vertex> = p.vertices().collect();
    starts.sort_by_key(|&v| core::cmp::Reverse(p.degree(v)));
    for s in starts {
        if seen[s as usize - 1] {
            continue;
        }
        seen[s as usize - 1] = true;
        let mut queue = alloc::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in p.neighbors(u) {
                if !seen[v as usize - 1] {
                    seen[v as usize - 1] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

fn extend(
    g: &Graph,
    p: &Graph,
    order: &[Vertex],
    depth: usize,
    map: &mut [Vertex],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let pv = order[depth];
    let mapped_nbr = p
        .neighbors(pv)
        .iter()
        .copied()
        .find(|&q| map[q as usize - 1] != 0);
    let candidates: Vec<Vertex> = match mapped_nbr {
        Some(q) => g.neighbors(map[q as usize - 1]).to_vec(),
        None => g.vertices().collect(),
    };
    for c in candidates {
        if used[c as usize - 1] {
            continue;
        }
        let fits = p.neighbors(pv).iter().all(|&q| {
            let m = map[q as usize - 1];
            m == 0 || g.has_edge(c, m)
        });
        if !fits {
            continue;
        }
        map[pv as usize - 1] = c;
        used[c as usize - 1] = true;
        if extend(g, p, order, depth + 1, map, used) {
            return true;
        }
        used[c as usize - 1] = false;
        map[pv as usize - 1] = 0;
    }
    false
}

/// Degeneracy via minimum-degree peeling with degree buckets.
pub fn degeneracy(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let max_deg = g.max_degree();
    let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); max_deg + 1];
    for v in g.vertices() {
        buckets[degree[v as usize - 1]].push(v);
    }
    let mut removed = vec![false; n];
    let mut result = 0;
    let mut lowest = 0;
    let mut remaining = n;
    while remaining > 0 {
        // Buckets hold stale entries; skip them lazily.
        let v = loop {
            while buckets[lowest].is_empty() {
                lowest += 1;
            }
            let v = buckets[lowest].pop().unwrap();
            if !removed[v as usize - 1] && degree[v as usize - 1] == lowest {
                break v;
            }
        };
        result = result.max(lowest);
        removed[v as usize - 1] = true;
        remaining -= 1;
        for &w in g.neighbors(v) {
            let wi = w as usize - 1;
            if !removed[wi] {
                degree[wi] -= 1;
                buckets[degree[wi]].push(w);
                if degree[wi] < lowest {
                    lowest = degree[wi];
                }
            }
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=n as Vertex {
            for v in u + 1..=n as Vertex {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn k4_census() {
        let c = census(&k(4));
        assert_eq!(c.t, 4);
        assert_eq!((c.t4, c.t5, c.t6), (6, 0, 0));
        assert_eq!(c.delta_max, 2);
    }

    #[test]
    fn empty_census() {
        let c = census(&Graph::empty(5));
        assert_eq!(c.t, 0);
        assert_eq!(c.delta_max, 0);
    }

    #[test]
    fn containment_basics() {
        assert!(oracle_contains(&k(4), &SubgraphPattern::triangle()));
        let c4 = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert!(!oracle_contains(&c4, &SubgraphPattern::triangle()));
        assert!(oracle_contains(&c4, &SubgraphPattern::cycle(4)));
        assert!(!oracle_contains(&k(3), &SubgraphPattern::clique(4)));
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy(&k(4)), 3);
        let star = Graph::from_edges(9, (2..=9).map(|v| (1, v))).unwrap();
        assert_eq!(degeneracy(&star), 1);
        let path = Graph::from_edges(5, (1..5).map(|v| (v, v + 1))).unwrap();
        assert_eq!(degeneracy(&path), 1);
        assert_eq!(degeneracy(&Graph::empty(3)), 0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(1, 4)]).is_err());
        assert!(Graph::from_edges(3, [(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn pattern_diameter() {
        assert_eq!(SubgraphPattern::triangle().diameter(), Some(1));
        assert_eq!(SubgraphPattern::cycle(4).diameter(), Some(2));
        assert_eq!(SubgraphPattern::path(4).diameter(), Some(3));
        let split = SubgraphPattern::new(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(split.diameter(), None);
    }

    #[test]
    fn with_edge_keeps_invariants() {
        let g = Graph::empty(4).with_edge(1, 3).unwrap().with_edge(3, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.check_invariants());
    }
}
