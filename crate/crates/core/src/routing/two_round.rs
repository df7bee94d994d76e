use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::matching::{decompose, MultiAdjacency};
use super::{check_loads, Deliveries, Delivered, MessageBatch};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::runtime::{Clique, Envelope, Word};

/// Relay index `k` (1-based) for every message of an `n`-regular batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodLabeling {
    labels: Vec<Vertex>,
}

impl GoodLabeling {
    pub fn label(&self, index: usize) -> Vertex {
        self.labels[index]
    }

    pub fn labels(&self) -> &[Vertex] {
        &self.labels
    }

    /// Checks that no source and no destination sees the same label twice.
    pub fn is_good(&self, batch: &MessageBatch) -> bool {
        let n = batch.n();
        if self.labels.len() != batch.len() {
            return false;
        }
        let mut by_src = vec![false; n * n];
        let mut by_dst = vec![false; n * n];
        for (m, &k) in batch.messages().iter().zip(&self.labels) {
            if k == 0 || k as usize > n {
                return false;
            }
            let k = k as usize - 1;
            let s = (m.src as usize - 1) * n + k;
            let d = (m.dst as usize - 1) * n + k;
            if by_src[s] || by_dst[d] {
                return false;
            }
            by_src[s] = true;
            by_dst[d] = true;
        }
        true
    }
}

/// Labels an exactly `n`-regular batch by peeling `n` perfect matchings.
pub fn good_labeling(batch: &MessageBatch) -> Result<GoodLabeling> {
    let n = batch.n();
    batch.check_vertices()?;
    let out = batch.out_loads();
    let inn = batch.in_loads();
    for v in 0..n {
        for degree in [out[v], inn[v]] {
            if degree != n {
                return Err(Error::NotRegular {
                    vertex: v as Vertex + 1,
                    degree,
                    expected: n,
                });
            }
        }
    }
    let mut counts: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); n];
    for m in batch.messages() {
        *counts[m.src as usize - 1].entry(m.dst - 1).or_insert(0) += 1;
    }
    let adj: MultiAdjacency = counts.into_iter().map(|c| c.into_iter().collect()).collect();
    let matchings = decompose(adj, n);
    let slots: Vec<(Vertex, Vertex)> = batch.messages().iter().map(|m| (m.src, m.dst)).collect();
    let assigned = assign(n, &slots, &matchings);
    Ok(GoodLabeling {
        labels: assigned.into_iter().map(|m| m + 1).collect(),
    })
}

/// Gives each slot its own matching index; slots of the same pair take the
/// pair's matchings in increasing order.
fn assign(n: usize, slots: &[(Vertex, Vertex)], matchings: &[Vec<u32>]) -> Vec<u32> {
    let mut per_source: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (m, mate) in matchings.iter().enumerate() {
        for (i, &j) in mate.iter().enumerate() {
            per_source[i].push((j, m as u32));
        }
    }
    for list in &mut per_source {
        list.sort_unstable();
    }
    // Cursor per source into its sorted (dst, matching) list, keyed by dst.
    let mut next: Vec<BTreeMap<u32, usize>> = vec![BTreeMap::new(); n];
    for (i, list) in per_source.iter().enumerate() {
        for (pos, &(j, _)) in list.iter().enumerate().rev() {
            next[i].insert(j, pos);
        }
    }
    slots
        .iter()
        .map(|&(s, d)| {
            let i = s as usize - 1;
            let pos = next[i].get_mut(&(d - 1)).expect("pair present in decomposition");
            let (j, m) = per_source[i][*pos];
            debug_assert_eq!(j, d - 1);
            *pos += 1;
            m
        })
        .collect()
}

/// A precomputed relay schedule for a fixed list of `(src, dst)` slots.
///
/// Slot pairs are padded with dummy pairs to an `n * stripes`-regular
/// multigraph and split into perfect matchings; matching `m` is carried in
/// stripe `m / n` through relay `m % n + 1`. Each stripe takes two rounds.
/// Slots whose payload is absent at execution time are simply not sent.
#[derive(Debug, Clone)]
pub struct RoutePlan {
    n: usize,
    slots: Vec<(Vertex, Vertex)>,
    stripes: usize,
    // Slot indices per stripe, with their relay.
    by_stripe: Vec<Vec<(usize, Vertex)>>,
}

impl RoutePlan {
    /// Plans `slots` with every node sending and receiving at most `bound`.
    pub fn new(n: usize, slots: Vec<(Vertex, Vertex)>, bound: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive"));
        }
        for &(s, d) in &slots {
            for v in [s, d] {
                if v == 0 || v as usize > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
        }
        check_loads(n, slots.iter().copied(), bound)?;
        if slots.is_empty() {
            return Ok(RoutePlan {
                n,
                slots,
                stripes: 0,
                by_stripe: Vec::new(),
            });
        }
        let stripes = bound.div_ceil(n).max(1);
        let degree = n * stripes;

        let mut counts: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); n];
        let mut out_def = vec![degree; n];
        let mut in_def = vec![degree; n];
        for &(s, d) in &slots {
            *counts[s as usize - 1].entry(d - 1).or_insert(0) += 1;
            out_def[s as usize - 1] -= 1;
            in_def[d as usize - 1] -= 1;
        }
        for v in 0..n {
            let c = out_def[v].min(in_def[v]);
            if c > 0 {
                *counts[v].entry(v as u32).or_insert(0) += c as u32;
                out_def[v] -= c;
                in_def[v] -= c;
            }
        }
        let (mut i, mut j) = (0, 0);
        while i < n && j < n {
            if out_def[i] == 0 {
                i += 1;
                continue;
            }
            if in_def[j] == 0 {
                j += 1;
                continue;
            }
            let c = out_def[i].min(in_def[j]);
            *counts[i].entry(j as u32).or_insert(0) += c as u32;
            out_def[i] -= c;
            in_def[j] -= c;
        }
        let adj: MultiAdjacency = counts.into_iter().map(|c| c.into_iter().collect()).collect();
        let matchings = decompose(adj, degree);
        let assigned = assign(n, &slots, &matchings);

        let mut by_stripe = vec![Vec::new(); stripes];
        for (idx, &m) in assigned.iter().enumerate() {
            let m = m as usize;
            by_stripe[m / n].push((idx, (m % n) as Vertex + 1));
        }
        Ok(RoutePlan {
            n,
            slots,
            stripes,
            by_stripe,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[(Vertex, Vertex)] {
        &self.slots
    }

    pub fn stripes(&self) -> usize {
        self.stripes
    }

    /// Rounds charged when at least one payload is present.
    pub fn rounds(&self) -> usize {
        2 * self.stripes
    }

    /// Relay of slot `index`.
    pub fn relay(&self, index: usize) -> Option<Vertex> {
        self.by_stripe
            .iter()
            .flat_map(|s| s.iter())
            .find(|&&(i, _)| i == index)
            .map(|&(_, k)| k)
    }

    /// Sends `payloads[i]` along slot `i`; `None` slots stay silent.
    pub fn execute(&self, clique: &mut Clique, payloads: &[Option<Word>]) -> Result<Deliveries> {
        self.execute_with_direct(clique, payloads, Vec::new()).map(|(d, _)| d)
    }

    /// Like [`RoutePlan::execute`], and also delivers one-hop `direct`
    /// words during the first round. A direct word sharing a link with a
    /// first-round relay word is concatenated with it.
    pub fn execute_with_direct(
        &self,
        clique: &mut Clique,
        payloads: &[Option<Word>],
        direct: Vec<Envelope>,
    ) -> Result<(Deliveries, Vec<Vec<Envelope>>)> {
        let n = self.n;
        if clique.n() != n || payloads.len() != self.slots.len() {
            return Err(Error::InvalidParameter("plan does not match clique or payloads"));
        }
        let mut inboxes: Deliveries = vec![Vec::new(); n];
        let mut direct_in: Vec<Vec<Envelope>> = vec![Vec::new(); n];
        let any_payload = payloads.iter().any(Option::is_some);
        if !any_payload && direct.is_empty() {
            return Ok((inboxes, direct_in));
        }
        if !any_payload {
            for (v, got) in clique.exchange(direct)?.into_iter().enumerate() {
                direct_in[v] = got;
            }
            return Ok((inboxes, direct_in));
        }

        let mut direct = Some(direct);
        for stripe in &self.by_stripe {
            // Stage 1: source -> relay.
            let mut sends = Vec::new();
            let mut held: Vec<Vec<usize>> = vec![Vec::new(); n];
            for &(idx, relay) in stripe {
                if let Some(w) = payloads[idx] {
                    let src = self.slots[idx].0;
                    sends.push(Envelope { src, dst: relay, word: w });
                }
                if payloads[idx].is_some() {
                    held[relay as usize - 1].push(idx);
                }
            }
            let mut merged: BTreeMap<(Vertex, Vertex), u32> = BTreeMap::new();
            if let Some(extra) = direct.take() {
                let mut link: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
                for (pos, e) in sends.iter().enumerate() {
                    link.insert((e.src, e.dst), pos);
                }
                for e in extra {
                    match link.get(&(e.src, e.dst)) {
                        Some(&pos) => {
                            let relay_word = sends[pos].word;
                            sends[pos].word = e.word.concat(relay_word)?;
                            merged.insert((e.src, e.dst), relay_word.bits());
                        }
                        None => {
                            merged.insert((e.src, e.dst), 0);
                            sends.push(e);
                        }
                    }
                }
            }
            let received = clique.exchange(sends)?;
            // Relay words keyed by (relay, src).
            let mut at_relay: BTreeMap<(Vertex, Vertex), Word> = BTreeMap::new();
            for (r, got) in received.into_iter().enumerate() {
                let relay = r as Vertex + 1;
                for e in got {
                    match merged.get(&(e.src, relay)) {
                        Some(&0) => direct_in[r].push(e),
                        Some(&low) => {
                            let (hi, lo) = e.word.split(low);
                            direct_in[r].push(Envelope { word: hi, ..e });
                            at_relay.insert((relay, e.src), lo);
                        }
                        None => {
                            at_relay.insert((relay, e.src), e.word);
                        }
                    }
                }
            }
            // Stage 2: relay -> destination.
            let mut forwards = Vec::new();
            let mut tags: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
            for (r, idxs) in held.iter().enumerate() {
                let relay = r as Vertex + 1;
                for &idx in idxs {
                    let (src, dst) = self.slots[idx];
                    let word = at_relay[&(relay, src)];
                    forwards.push(Envelope { src: relay, dst, word });
                    tags.insert((relay, dst), idx);
                }
            }
            for (d, got) in clique.exchange(forwards)?.into_iter().enumerate() {
                let dst = d as Vertex + 1;
                for e in got {
                    let idx = tags[&(e.src, dst)];
                    inboxes[d].push(Delivered {
                        index: idx,
                        src: self.slots[idx].0,
                        word: e.word,
                    });
                }
            }
        }
        for inbox in &mut inboxes {
            inbox.sort_by_key(|m| m.index);
        }
        Ok((inboxes, direct_in))
    }
}

/// Delivers a globally known batch in which no node sends or receives more
/// than `n` messages, in exactly two rounds (none if the batch is empty).
pub fn deterministic_message_passing(clique: &mut Clique, batch: &MessageBatch) -> Result<Deliveries> {
    oblivious_schedule(clique, batch, batch.n())
}

/// Delivers a globally known batch with per-node load at most `bound` in
/// at most `2 * ceil(bound / n)` rounds.
pub fn oblivious_schedule(clique: &mut Clique, batch: &MessageBatch, bound: usize) -> Result<Deliveries> {
    if !batch.is_globally_known() {
        return Err(Error::NotGloballyKnown);
    }
    batch.check_vertices()?;
    let slots = batch.messages().iter().map(|m| (m.src, m.dst)).collect();
    let plan = RoutePlan::new(batch.n(), slots, bound)?;
    let payloads: Vec<Option<Word>> = batch.messages().iter().map(|m| Some(m.word)).collect();
    plan.execute(clique, &payloads)
}
