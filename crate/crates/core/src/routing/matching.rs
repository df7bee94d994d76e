//! Perfect matchings in regular bipartite multigraphs.
//!
//! A `d`-regular bipartite multigraph is a disjoint union of `d` perfect
//! matchings. [`decompose`] finds such a union deterministically: even
//! degrees are halved by splitting along closed trails of the odd-multiplicity
//! edges, odd degrees first peel off one perfect matching found by
//! Hopcroft–Karp with a fixed vertex scan order.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Left vertex `i` has `adj[i]`: `(right, multiplicity)` sorted by `right`.
pub type MultiAdjacency = Vec<Vec<(u32, u32)>>;

const FREE: u32 = u32::MAX;

/// Maximum matching over the edges with positive multiplicity. Returns
/// `mate[left] = right` or `FREE`.
pub fn hopcroft_karp(adj: &MultiAdjacency, right_count: usize) -> Vec<u32> {
    let left_count = adj.len();
    let mut mate_left = vec![FREE; left_count];
    let mut mate_right = vec![FREE; right_count];
    let mut dist = vec![0u32; left_count];
    // Greedy start in scan order.
    for (i, list) in adj.iter().enumerate() {
        if let Some(&(j, _)) = list
            .iter()
            .find(|&&(j, c)| c > 0 && mate_right[j as usize] == FREE)
        {
            mate_left[i] = j;
            mate_right[j as usize] = i as u32;
        }
    }
    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for i in 0..left_count {
            if mate_left[i] == FREE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &(j, c) in &adj[i] {
                if c == 0 {
                    continue;
                }
                let m = mate_right[j as usize];
                if m == FREE {
                    found = true;
                } else if dist[m as usize] == u32::MAX {
                    dist[m as usize] = dist[i] + 1;
                    queue.push_back(m as usize);
                }
            }
        }
        if !found {
            break;
        }
        let mut cursor = vec![0usize; left_count];
        let mut augmented = false;
        for i in 0..left_count {
            if mate_left[i] == FREE
                && augment(i, adj, &mut mate_left, &mut mate_right, &mut dist, &mut cursor)
            {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    mate_left
}

fn augment(
    root: usize,
    adj: &MultiAdjacency,
    mate_left: &mut [u32],
    mate_right: &mut [u32],
    dist: &mut [u32],
    cursor: &mut [usize],
) -> bool {
    // Iterative DFS along the BFS layers.
    let mut stack: Vec<(usize, u32)> = vec![(root, FREE)];
    while let Some(&(i, _)) = stack.last() {
        let mut advanced = false;
        while cursor[i] < adj[i].len() {
            let (j, c) = adj[i][cursor[i]];
            cursor[i] += 1;
            if c == 0 {
                continue;
            }
            let m = mate_right[j as usize];
            if m == FREE {
                // Flip the path.
                stack.last_mut().unwrap().1 = j;
                for &(li, rj) in stack.iter().rev() {
                    mate_left[li] = rj;
                    mate_right[rj as usize] = li as u32;
                }
                return true;
            }
            if dist[m as usize] == dist[i].wrapping_add(1) {
                stack.last_mut().unwrap().1 = j;
                stack.push((m as usize, FREE));
                advanced = true;
                break;
            }
        }
        if !advanced {
            dist[i] = u32::MAX;
            stack.pop();
        }
    }
    false
}

/// Splits a `d`-regular multigraph (`d` even) into two `d/2`-regular ones.
fn euler_split(adj: &MultiAdjacency, right_count: usize) -> (MultiAdjacency, MultiAdjacency) {
    let mut first: MultiAdjacency = Vec::with_capacity(adj.len());
    let mut second: MultiAdjacency = Vec::with_capacity(adj.len());
    let mut odd_edges: Vec<(u32, u32)> = Vec::new();
    for (i, list) in adj.iter().enumerate() {
        let mut a = Vec::with_capacity(list.len());
        let mut b = Vec::with_capacity(list.len());
        for &(j, c) in list {
            if c / 2 > 0 {
                a.push((j, c / 2));
                b.push((j, c / 2));
            }
            if c % 2 == 1 {
                odd_edges.push((i as u32, j));
            }
        }
        first.push(a);
        second.push(b);
    }
    // The odd-multiplicity edges form a simple graph with even degrees; walk
    // closed trails and alternate between the halves.
    let left_count = adj.len();
    let mut left_inc: Vec<Vec<u32>> = vec![Vec::new(); left_count];
    let mut right_inc: Vec<Vec<u32>> = vec![Vec::new(); right_count];
    for (e, &(i, j)) in odd_edges.iter().enumerate() {
        left_inc[i as usize].push(e as u32);
        right_inc[j as usize].push(e as u32);
    }
    let mut used = vec![false; odd_edges.len()];
    let mut left_ptr = vec![0usize; left_count];
    let mut right_ptr = vec![0usize; right_count];
    let mut to_first: Vec<(u32, u32)> = Vec::new();
    let mut to_second: Vec<(u32, u32)> = Vec::new();
    for start in 0..left_count {
        loop {
            // Walk one closed trail from `start`.
            let mut on_left = true;
            let mut at = start;
            let mut parity = 0u32;
            let mut walked = false;
            loop {
                let (inc, ptr) = if on_left {
                    (&left_inc[at], &mut left_ptr[at])
                } else {
                    (&right_inc[at], &mut right_ptr[at])
                };
                while *ptr < inc.len() && used[inc[*ptr] as usize] {
                    *ptr += 1;
                }
                if *ptr == inc.len() {
                    break;
                }
                let e = inc[*ptr] as usize;
                used[e] = true;
                walked = true;
                let (i, j) = odd_edges[e];
                if parity == 0 {
                    to_first.push((i, j));
                } else {
                    to_second.push((i, j));
                }
                parity ^= 1;
                if on_left {
                    at = j as usize;
                } else {
                    at = i as usize;
                }
                on_left = !on_left;
            }
            debug_assert!(on_left && at == start, "closed trail must end where it began");
            if !walked {
                break;
            }
        }
    }
    add_edges(&mut first, to_first);
    add_edges(&mut second, to_second);
    (first, second)
}

fn add_edges(adj: &mut MultiAdjacency, mut edges: Vec<(u32, u32)>) {
    edges.sort_unstable();
    for (i, j) in edges {
        let list = &mut adj[i as usize];
        match list.binary_search_by_key(&j, |&(r, _)| r) {
            Ok(pos) => list[pos].1 += 1,
            Err(pos) => list.insert(pos, (j, 1)),
        }
    }
}

/// Decomposes a `degree`-regular bipartite multigraph with equal sides into
/// `degree` perfect matchings, each given as `mate[left] = right`.
///
/// Panics if the input is not regular; callers validate regularity.
pub fn decompose(adj: MultiAdjacency, degree: usize) -> Vec<Vec<u32>> {
    let right_count = adj.len();
    let mut out = Vec::with_capacity(degree);
    decompose_into(adj, degree, right_count, &mut out);
    out
}

fn decompose_into(mut adj: MultiAdjacency, degree: usize, right_count: usize, out: &mut Vec<Vec<u32>>) {
    match degree {
        0 => {}
        1 => out.push(
            adj.iter()
                .map(|list| {
                    let &(j, c) = list
                        .iter()
                        .find(|&&(_, c)| c > 0)
                        .expect("1-regular graph has an edge at every vertex");
                    debug_assert_eq!(c, 1);
                    j
                })
                .collect(),
        ),
        d if d % 2 == 1 => {
            let mate = hopcroft_karp(&adj, right_count);
            assert!(
                mate.iter().all(|&m| m != FREE),
                "regular bipartite multigraph must have a perfect matching"
            );
            for (i, &j) in mate.iter().enumerate() {
                let list = &mut adj[i];
                let pos = list.binary_search_by_key(&j, |&(r, _)| r).unwrap();
                list[pos].1 -= 1;
                if list[pos].1 == 0 {
                    list.remove(pos);
                }
            }
            out.push(mate);
            decompose_into(adj, d - 1, right_count, out);
        }
        d => {
            let (a, b) = euler_split(&adj, right_count);
            drop(adj);
            decompose_into(a, d / 2, right_count, out);
            decompose_into(b, d / 2, right_count, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Union of `d` random permutations as a multigraph.
    fn random_regular(n: usize, d: usize, seed: u64) -> MultiAdjacency {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut adj: MultiAdjacency = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for _ in 0..d {
            let mut perm: Vec<u32> = (0..n as u32).collect();
            perm.shuffle(&mut rng);
            for (i, &j) in perm.iter().enumerate() {
                edges.push((i as u32, j));
            }
        }
        let _ = rng.gen::<u8>();
        add_edges(&mut adj, edges);
        adj
    }

    fn check(adj: &MultiAdjacency, d: usize) {
        let n = adj.len();
        let ms = decompose(adj.clone(), d);
        assert_eq!(ms.len(), d);
        let mut counts = vec![vec![0u32; n]; n];
        for m in &ms {
            let mut seen = vec![false; n];
            for (i, &j) in m.iter().enumerate() {
                assert!(!seen[j as usize], "not a perfect matching");
                seen[j as usize] = true;
                counts[i][j as usize] += 1;
            }
        }
        for (i, list) in adj.iter().enumerate() {
            for &(j, c) in list {
                assert_eq!(counts[i][j as usize], c);
            }
        }
    }

    #[test]
    fn decomposes_random_regular_multigraphs() {
        for (n, d, seed) in [(1, 1, 0), (2, 2, 1), (5, 3, 2), (8, 8, 3), (13, 7, 4), (30, 64, 5)] {
            check(&random_regular(n, d, seed), d);
        }
    }

    #[test]
    fn decomposition_is_deterministic() {
        let g = random_regular(12, 10, 9);
        assert_eq!(decompose(g.clone(), 10), decompose(g, 10));
    }

    #[test]
    fn hopcroft_karp_finds_maximum() {
        // Left 0 and 1 both only like right 0.
        let adj: MultiAdjacency = vec![vec![(0, 1)], vec![(0, 1)], vec![(1, 1), (2, 1)]];
        let mate = hopcroft_karp(&adj, 3);
        assert_eq!(mate.iter().filter(|&&m| m != FREE).count(), 2);
    }
}
