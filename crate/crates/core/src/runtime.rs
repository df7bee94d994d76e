//! The synchronous congested-clique engine.
//!
//! All `n` nodes are pairwise connected. In each round every ordered pair
//! `(src, dst)` carries at most one word of `word_bits` bits. In packed mode
//! a link may instead carry several envelopes as long as their payloads sum
//! to at most `word_bits` bits. Self-addressed envelopes are delivered
//! locally; they count as words sent and received but use no link.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Vertex;

/// Bits needed for a 0-based vertex id, at least one.
pub fn id_bits(n: usize) -> u32 {
    ceil_log2(n).max(1)
}

/// Word size for an `n`-node clique: one vertex id, one tag of the same
/// width, and four control bits.
pub fn word_bits(n: usize) -> u32 {
    2 * id_bits(n) + 4
}

pub fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// A payload of at most 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    value: u64,
    bits: u8,
}

impl Word {
    pub fn new(value: u64, bits: u32) -> Result<Word> {
        if bits > 64 || (bits < 64 && value >> bits != 0) {
            return Err(Error::OversizeWord { bits, word_bits: 64 });
        }
        Ok(Word {
            value,
            bits: bits as u8,
        })
    }

    /// A word holding a 1-based vertex id in `id_bits` bits.
    pub fn vertex(v: Vertex, n: usize) -> Word {
        debug_assert!(v >= 1 && (v as usize) <= n.max(1) << 1, "vertex {v} out of range for {n}");
        Word {
            value: u64::from(v - 1),
            bits: id_bits(n) as u8,
        }
    }

    /// A one-bit signal word.
    pub const fn flag() -> Word {
        Word { value: 1, bits: 1 }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn bits(self) -> u32 {
        u32::from(self.bits)
    }

    /// Decodes a word built by [`Word::vertex`].
    pub fn as_vertex(self) -> Vertex {
        self.value as Vertex + 1
    }

    /// Concatenates `self` (high bits) with `low`.
    pub fn concat(self, low: Word) -> Result<Word> {
        let bits = self.bits() + low.bits();
        if bits > 64 {
            return Err(Error::OversizeWord { bits, word_bits: 64 });
        }
        Word::new((self.value << low.bits()) | low.value, bits)
    }

    /// Splits off the low `low_bits` bits: returns `(high, low)`.
    pub fn split(self, low_bits: u32) -> (Word, Word) {
        let low_bits = low_bits.min(self.bits());
        let mask = if low_bits == 64 { u64::MAX } else { (1u64 << low_bits) - 1 };
        let high = Word {
            value: if low_bits == 64 { 0 } else { self.value >> low_bits },
            bits: (self.bits() - low_bits) as u8,
        };
        let low = Word {
            value: self.value & mask,
            bits: low_bits as u8,
        };
        (high, low)
    }
}

/// One message on the clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Envelope {
    pub src: Vertex,
    pub dst: Vertex,
    pub word: Word,
}

impl Envelope {
    pub fn new(src: Vertex, dst: Vertex, word: Word) -> Self {
        Envelope { src, dst, word }
    }
}

/// Traffic in a single round.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoundUsage {
    /// Envelopes delivered, including self-addressed ones.
    pub words: u64,
    /// Envelopes that crossed a link.
    pub link_words: u64,
    pub bits: u64,
    /// Largest number of envelopes on one ordered link.
    pub max_link_words: u32,
    /// Largest number of payload bits on one ordered link.
    pub max_link_bits: u32,
}

/// Cumulative measurements of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundLedger {
    /// Barrier crossings.
    pub rounds: u32,
    pub words: u64,
    pub link_words: u64,
    pub self_words: u64,
    /// Payload bits that crossed links.
    pub bits_sent: u64,
    pub per_node_sent: Vec<u64>,
    pub per_node_received: Vec<u64>,
    pub per_round: Vec<RoundUsage>,
}

impl RoundLedger {
    fn new(n: usize) -> Self {
        RoundLedger {
            per_node_sent: vec![0; n],
            per_node_received: vec![0; n],
            ..Default::default()
        }
    }

    /// Largest per-link word count over all rounds so far.
    pub fn max_link_words(&self) -> u32 {
        self.per_round.iter().map(|r| r.max_link_words).max().unwrap_or(0)
    }

    pub fn max_link_bits(&self) -> u32 {
        self.per_round.iter().map(|r| r.max_link_bits).max().unwrap_or(0)
    }
}

/// The execution engine. Algorithms drive it one round at a time through
/// [`Clique::exchange`]; node programs can also be run to completion with
/// [`run`].
#[derive(Debug, Clone)]
pub struct Clique {
    n: usize,
    word_bits: u32,
    packed: bool,
    ledger: RoundLedger,
    link_stamp: Vec<u32>,
    link_load: Vec<u32>,
    link_words: Vec<u32>,
}

impl Clique {
    pub fn new(n: usize) -> Self {
        Clique {
            n,
            word_bits: word_bits(n),
            packed: false,
            ledger: RoundLedger::new(n),
            link_stamp: Vec::new(),
            link_load: Vec::new(),
            link_words: Vec::new(),
        }
    }

    /// Enables packed mode: up to `word_bits` bits per link per round,
    /// split over any number of envelopes.
    pub fn packed(mut self, packed: bool) -> Self {
        self.packed = packed;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn id_bits(&self) -> u32 {
        id_bits(self.n)
    }

    pub fn is_packed(&self) -> bool {
        self.packed
    }

    pub fn ledger(&self) -> &RoundLedger {
        &self.ledger
    }

    pub fn rounds(&self) -> u32 {
        self.ledger.rounds
    }

    pub fn vertex_word(&self, v: Vertex) -> Word {
        Word::vertex(v, self.n)
    }

    /// Runs one synchronous round: checks capacity, charges the ledger and
    /// returns each node's inbox (index `v - 1`), in submission order.
    pub fn exchange(&mut self, envelopes: Vec<Envelope>) -> Result<Vec<Vec<Envelope>>> {
        let n = self.n;
        if self.link_stamp.is_empty() && n > 0 {
            self.link_stamp = vec![0; n * n];
            self.link_load = vec![0; n * n];
            self.link_words = vec![0; n * n];
        }
        let round = self.ledger.rounds + 1;
        let limit = if self.packed { self.word_bits } else { 1 };
        let mut usage = RoundUsage::default();
        let mut inboxes: Vec<Vec<Envelope>> = vec![Vec::new(); n];
        for env in envelopes {
            for v in [env.src, env.dst] {
                if v == 0 || v as usize > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            let bits = env.word.bits();
            if bits > self.word_bits {
                return Err(Error::OversizeWord {
                    bits,
                    word_bits: self.word_bits,
                });
            }
            let (s, d) = (env.src as usize - 1, env.dst as usize - 1);
            if s == d {
                self.ledger.self_words += 1;
            } else {
                let link = s * n + d;
                if self.link_stamp[link] != round {
                    self.link_stamp[link] = round;
                    self.link_load[link] = 0;
                    self.link_words[link] = 0;
                }
                self.link_load[link] += if self.packed { bits } else { 1 };
                self.link_words[link] += 1;
                if self.link_load[link] > limit {
                    return Err(Error::Capacity {
                        round,
                        src: env.src,
                        dst: env.dst,
                        used: self.link_load[link],
                        limit,
                    });
                }
                usage.link_words += 1;
                usage.bits += u64::from(bits);
                usage.max_link_words = usage.max_link_words.max(self.link_words[link]);
                usage.max_link_bits = usage.max_link_bits.max(if self.packed {
                    self.link_load[link]
                } else {
                    bits
                });
            }
            usage.words += 1;
            self.ledger.per_node_sent[s] += 1;
            self.ledger.per_node_received[d] += 1;
            inboxes[d].push(env);
        }
        self.ledger.rounds = round;
        self.ledger.words += usage.words;
        self.ledger.link_words += usage.link_words;
        self.ledger.bits_sent += usage.bits;
        self.ledger.per_round.push(usage);
        Ok(inboxes)
    }

    /// Broadcast round: every node in `senders` sends `word` to all nodes.
    /// Returns the set of nodes that heard at least one flag.
    pub fn broadcast_flags(&mut self, senders: &[Vertex], word: Word) -> Result<Vec<bool>> {
        let mut out = Vec::with_capacity(senders.len() * self.n);
        for &s in senders {
            out.extend(broadcast_word(s, self.n, self.word_bits, word)?);
        }
        let inboxes = self.exchange(out)?;
        Ok(inboxes.iter().map(|inbox| !inbox.is_empty()).collect())
    }
}

/// One identical envelope from `src` to every node `1..=n`, `src` included.
pub fn broadcast_word(src: Vertex, n: usize, word_bits: u32, word: Word) -> Result<Vec<Envelope>> {
    if word.bits() > word_bits {
        return Err(Error::OversizeWord {
            bits: word.bits(),
            word_bits,
        });
    }
    Ok((1..=n as Vertex).map(|dst| Envelope::new(src, dst, word)).collect())
}

/// The deterministic random stream of `node` for a given global seed and
/// stream tag (for example an iteration number).
pub fn node_rng(seed: u64, node: Vertex, stream: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(node) << 32) | u64::from(stream));
    rng
}

/// What a node sees while taking a step.
pub struct NodeContext<'a> {
    pub id: Vertex,
    pub n: usize,
    /// 0 for the initial step, then the number of completed rounds.
    pub round: u32,
    pub word_bits: u32,
    pub rng: &'a mut ChaCha8Rng,
}

impl NodeContext<'_> {
    pub fn broadcast(&self, word: Word) -> Result<Vec<Envelope>> {
        broadcast_word(self.id, self.n, self.word_bits, word)
    }

    pub fn send(&self, dst: Vertex, word: Word) -> Envelope {
        Envelope::new(self.id, dst, word)
    }
}

/// Result of one node step.
#[derive(Debug, Clone, Default)]
pub struct Step {
    pub outbox: Vec<Envelope>,
    pub halt: bool,
}

/// Per-node behavior: consume the inbox, update local state, emit an outbox.
pub trait NodeProgram {
    type Output;

    fn step(&mut self, ctx: &mut NodeContext<'_>, inbox: &[Envelope]) -> Result<Step>;

    fn output(&self) -> Self::Output;
}

/// Runs `programs[v - 1]` at node `v` in lock-step until every node has
/// halted and nothing is in flight. A halted node is not stepped again;
/// envelopes addressed to it are still delivered and charged.
pub fn run<P: NodeProgram>(
    clique: &mut Clique,
    programs: &mut [P],
    seed: u64,
    max_rounds: u32,
) -> Result<Vec<P::Output>> {
    let n = clique.n();
    if programs.len() != n {
        return Err(Error::InvalidParameter("need exactly one program per node"));
    }
    if max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be positive"));
    }
    let mut rngs: Vec<ChaCha8Rng> = (1..=n as Vertex).map(|v| node_rng(seed, v, 0)).collect();
    let mut halted = vec![false; n];
    let mut inboxes: Vec<Vec<Envelope>> = vec![Vec::new(); n];
    let mut completed = 0u32;
    loop {
        let mut outgoing = Vec::new();
        for (i, program) in programs.iter_mut().enumerate() {
            if halted[i] {
                continue;
            }
            let id = i as Vertex + 1;
            let mut ctx = NodeContext {
                id,
                n,
                round: completed,
                word_bits: clique.word_bits(),
                rng: &mut rngs[i],
            };
            let step = program.step(&mut ctx, &inboxes[i])?;
            if step.outbox.iter().any(|e| e.src != id) {
                return Err(Error::InvalidParameter("envelope source must be the sending node"));
            }
            halted[i] = step.halt;
            outgoing.extend(step.outbox);
        }
        if outgoing.is_empty() && halted.iter().all(|&h| h) {
            break;
        }
        if completed == max_rounds {
            return Err(Error::NonTermination { max_rounds });
        }
        inboxes = clique.exchange(outgoing)?;
        completed += 1;
    }
    Ok(programs.iter().map(NodeProgram::output).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_sizes() {
        assert_eq!(word_bits(8), 10);
        assert_eq!(word_bits(1024), 24);
        assert_eq!(word_bits(1025), 26);
        assert_eq!(word_bits(1), 6);
        for n in [2usize, 3, 100, 4096] {
            assert!(word_bits(n) >= ceil_log2(n) + 4);
        }
    }

    #[test]
    fn word_concat_split() {
        let a = Word::new(5, 3).unwrap();
        let b = Word::new(1, 4).unwrap();
        let c = a.concat(b).unwrap();
        assert_eq!(c.bits(), 7);
        assert_eq!(c.split(4), (a, b));
        assert!(Word::new(8, 3).is_err());
    }

    #[test]
    fn two_words_on_one_link_is_rejected() {
        let mut c = Clique::new(3);
        let w = Word::flag();
        let err = c
            .exchange(alloc::vec![Envelope::new(1, 2, w), Envelope::new(1, 2, w)])
            .unwrap_err();
        assert!(matches!(err, Error::Capacity { round: 1, src: 1, dst: 2, .. }));
    }

    #[test]
    fn packed_mode_counts_bits() {
        let mut c = Clique::new(8).packed(true);
        let five = Word::new(0, 5).unwrap();
        c.exchange(alloc::vec![Envelope::new(1, 2, five), Envelope::new(1, 2, five)])
            .unwrap();
        assert_eq!(c.ledger().max_link_bits(), 10);
        let err = c
            .exchange(alloc::vec![
                Envelope::new(1, 2, five),
                Envelope::new(1, 2, five),
                Envelope::new(1, 2, Word::flag())
            ])
            .unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn oversize_payload_is_rejected() {
        let big = Word::new(0, 11).unwrap();
        assert!(broadcast_word(5, 8, word_bits(8), big).is_err());
        let mut c = Clique::new(8);
        assert!(matches!(
            c.exchange(alloc::vec![Envelope::new(1, 2, big)]),
            Err(Error::OversizeWord { .. })
        ));
    }

    #[test]
    fn broadcast_reaches_everyone() {
        let envs = broadcast_word(5, 8, word_bits(8), Word::flag()).unwrap();
        assert_eq!(envs.len(), 8);
        assert!(envs.iter().all(|e| e.word == Word::flag()));
        let mut c = Clique::new(8);
        let heard = c.broadcast_flags(&[5], Word::flag()).unwrap();
        assert!(heard.iter().all(|&h| h));
        assert_eq!(c.rounds(), 1);
    }
}
