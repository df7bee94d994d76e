use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::{check_loads, Deliveries, Delivered, MessageBatch};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::runtime::{id_bits, node_rng, Clique, Envelope, Word};

/// Give up after this many rounds times `n`.
const STALL_FACTOR: u32 = 4;

#[derive(Debug, Clone, Copy)]
struct Pending {
    index: usize,
    src: Vertex,
    dst: Vertex,
}

/// Delivers a batch with per-node load at most `n` without any global
/// knowledge.
///
/// Each round every holder sends, per destination, one pending message
/// straight to it. Sources also push every other message they still hold
/// to distinct, uniformly chosen relays over their unused links; relays
/// only send direct. A direct word is `0 | payload`; a relayed word carries
/// a marker bit and one id: the destination on the way to the relay, the
/// original source on the way out. Payloads may use
/// `word_bits - id_bits - 1` bits.
pub fn randomized_delivery(clique: &mut Clique, batch: &MessageBatch, seed: u64) -> Result<Deliveries> {
    check_loads(batch.n(), batch.messages().iter().map(|m| (m.src, m.dst)), batch.n())?;
    relay_bulk(clique, batch, seed)
}

/// The relay of [`randomized_delivery`] without the load precondition:
/// a node with more than `n` messages simply keeps pushing over later
/// rounds.
pub fn relay_bulk(clique: &mut Clique, batch: &MessageBatch, seed: u64) -> Result<Deliveries> {
    let n = batch.n();
    if clique.n() != n {
        return Err(Error::InvalidParameter("batch and clique sizes differ"));
    }
    batch.check_vertices()?;
    let ib = id_bits(n);
    let limit = clique.word_bits() - ib - 1;
    if let Some(m) = batch.messages().iter().find(|m| m.word.bits() > limit) {
        return Err(Error::OversizeWord { bits: m.word.bits(), word_bits: limit });
    }
    let heaviest = batch.max_load() as u32;

    let mut inboxes: Deliveries = vec![Vec::new(); n];
    let mut held: Vec<Vec<Pending>> = vec![Vec::new(); n];
    for (index, m) in batch.messages().iter().enumerate() {
        held[m.src as usize - 1].push(Pending { index, src: m.src, dst: m.dst });
    }
    let mut remaining = batch.len();
    let mut round = 0u32;
    let start = clique.rounds();
    while remaining > 0 {
        if round >= STALL_FACTOR * (n as u32 + heaviest) {
            return Err(Error::RelayStalled { rounds: round, pending: remaining });
        }
        round += 1;
        let mut sends = Vec::new();
        // (sender, receiver) -> message, for this round's envelopes.
        let mut carried: Vec<(Pending, bool)> = Vec::new();
        #[allow(clippy::needless_range_loop)]
        for h in 0..n {
            let holder = h as Vertex + 1;
            let list = core::mem::take(&mut held[h]);
            let mut link_used = vec![false; n];
            let mut overflow = Vec::new();
            for p in list {
                let d = p.dst as usize - 1;
                if !link_used[d] {
                    link_used[d] = true;
                    let word = if p.src == holder {
                        Word::new(0, 1)?.concat(batch.messages()[p.index].word)?
                    } else {
                        Word::new(1, 1)?
                            .concat(Word::vertex(p.src, n))?
                            .concat(batch.messages()[p.index].word)?
                    };
                    sends.push(Envelope::new(holder, p.dst, word));
                    carried.push((p, true));
                } else {
                    overflow.push(p);
                }
            }
            let (mut own, kept): (Vec<Pending>, Vec<Pending>) = overflow.into_iter().partition(|p| p.src == holder);
            overflow = kept;
            if !own.is_empty() {
                let mut free: Vec<usize> = (0..n).filter(|&v| !link_used[v] && v != h).collect();
                let mut rng = node_rng(seed, holder, round);
                free.shuffle(&mut rng);
                let spill = own.len().min(free.len());
                for (p, &relay) in own.drain(..spill).zip(&free) {
                    let word = Word::new(1, 1)?
                        .concat(Word::vertex(p.dst, n))?
                        .concat(batch.messages()[p.index].word)?;
                    sends.push(Envelope::new(holder, relay as Vertex + 1, word));
                    carried.push((p, false));
                }
                overflow.extend(own);
            }
            held[h] = overflow;
        }
        // Inboxes keep submission order per receiver; walk them in step.
        let mut order: Vec<Vec<(Pending, bool)>> = vec![Vec::new(); n];
        for (e, c) in sends.iter().zip(&carried) {
            order[e.dst as usize - 1].push(*c);
        }
        let received = clique.exchange(sends)?;
        for (r, inbox) in received.into_iter().enumerate() {
            for (e, &(p, direct)) in inbox.into_iter().zip(&order[r]) {
                let relay = r as Vertex + 1;
                let (marker, rest) = e.word.split(e.word.bits() - 1);
                if direct {
                    let (src, payload) = if marker.value() == 0 {
                        (e.src, rest)
                    } else {
                        let (id, payload) = rest.split(rest.bits() - ib);
                        (id.value() as Vertex + 1, payload)
                    };
                    debug_assert_eq!(src, p.src);
                    inboxes[r].push(Delivered { index: p.index, src, word: payload });
                    remaining -= 1;
                } else if p.dst == relay {
                    let (_, payload) = rest.split(rest.bits() - ib);
                    inboxes[r].push(Delivered { index: p.index, src: e.src, word: payload });
                    remaining -= 1;
                } else {
                    held[r].push(p);
                }
            }
        }
    }
    debug_assert!(clique.rounds() - start == round);
    for inbox in &mut inboxes {
        inbox.sort_unstable_by_key(|m| m.index);
    }
    Ok(inboxes)
}
