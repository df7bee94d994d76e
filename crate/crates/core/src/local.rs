//! Node-local computation on the edges a node has collected.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::{SubgraphPattern, Vertex};

/// First common element of two sorted slices.
pub fn first_common(a: &[Vertex], b: &[Vertex]) -> Option<Vertex> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// First element common to `a` and `b` other than the excluded ids.
pub fn first_common_except(a: &[Vertex], b: &[Vertex], except: &[Vertex]) -> Option<Vertex> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                if !except.contains(&a[i]) {
                    return Some(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
    None
}

/// The partial view of `G` a node has assembled.
#[derive(Debug, Clone, Default)]
pub struct LocalGraph {
    adjacency: BTreeMap<Vertex, Vec<Vertex>>,
}

impl LocalGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (Vertex, Vertex)>>(edges: I) -> Self {
        let mut g = Self::new();
        g.extend(edges);
        g
    }

    /// Adds edges; call [`LocalGraph::finish`] afterwards (or use
    /// [`LocalGraph::from_edges`]).
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        if u == v {
            return;
        }
        self.adjacency.entry(u).or_default().push(v);
        self.adjacency.entry(v).or_default().push(u);
    }

    /// Registers `v` even if it has no collected edges, so isolated pattern
    /// vertices can map to it.
    pub fn add_vertex(&mut self, v: Vertex) {
        self.adjacency.entry(v).or_default();
    }

    pub fn extend<I: IntoIterator<Item = (Vertex, Vertex)>>(&mut self, edges: I) {
        for (u, v) in edges {
            self.add_edge(u, v);
        }
        self.finish();
    }

    pub fn finish(&mut self) {
        for list in self.adjacency.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum::<usize>() / 2
    }

    /// Some triangle `[a, b, c]`, `a < b < c`, if one exists.
    pub fn find_triangle(&self) -> Option<[Vertex; 3]> {
        for (&a, na) in &self.adjacency {
            for &b in na.iter().filter(|&&b| b > a) {
                let nb = self.neighbors(b);
                let lo_a = na.partition_point(|&x| x <= b);
                let lo_b = nb.partition_point(|&x| x <= b);
                if let Some(c) = first_common(&na[lo_a..], &nb[lo_b..]) {
                    return Some([a, b, c]);
                }
            }
        }
        None
    }

    /// Some embedding of `pattern` (pattern vertex `p` maps to entry
    /// `p - 1`), if one exists.
    pub fn find_pattern(&self, pattern: &SubgraphPattern) -> Option<Vec<Vertex>> {
        let d = pattern.d();
        let mut pattern_adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); d];
        for &(u, v) in pattern.edges() {
            pattern_adj[u as usize - 1].push(v as usize - 1);
            pattern_adj[v as usize - 1].push(u as usize - 1);
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&p| core::cmp::Reverse(pattern_adj[p].len()));
        // Make each later vertex adjacent to an earlier one where possible.
        let mut arranged = Vec::with_capacity(d);
        let mut placed = alloc::vec![false; d];
        while arranged.len() < d {
            let next = order
                .iter()
                .copied()
                .filter(|&p| !placed[p])
                .find(|&p| pattern_adj[p].iter().any(|&q| placed[q]))
                .or_else(|| order.iter().copied().find(|&p| !placed[p]))
                .unwrap();
            placed[next] = true;
            arranged.push(next);
        }
        let vertices: Vec<Vertex> = self.adjacency.keys().copied().collect();
        let mut map: Vec<Option<Vertex>> = alloc::vec![None; d];
        if self.embed(&pattern_adj, &arranged, 0, &vertices, &mut map) {
            Some(map.into_iter().map(Option::unwrap).collect())
        } else {
            None
        }
    }

    fn embed(
        &self,
        pattern_adj: &[Vec<usize>],
        order: &[usize],
        depth: usize,
        vertices: &[Vertex],
        map: &mut [Option<Vertex>],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let p = order[depth];
        let anchor = pattern_adj[p].iter().find_map(|&q| map[q]);
        let candidates: &[Vertex] = match anchor {
            Some(a) => self.neighbors(a),
            None => vertices,
        };
        for &c in candidates {
            if map.contains(&Some(c)) {
                continue;
            }
            if pattern_adj[p]
                .iter()
                .all(|&q| map[q].is_none_or(|m| self.has_edge(c, m)))
            {
                map[p] = Some(c);
                if self.embed(pattern_adj, order, depth + 1, vertices, map) {
                    return true;
                }
                map[p] = None;
            }
        }
        false
    }
}
