use alloc::vec;
use alloc::vec::Vec;

use super::matching::{hopcroft_karp, MultiAdjacency};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::runtime::{id_bits, Clique, Envelope, Word};

/// Every source sends the same word list to each of its recipients.
/// Recipients need not be known to anybody but the source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UniformBatch {
    n: usize,
    contents: Vec<Vec<Word>>,
    recipients: Vec<Vec<Vertex>>,
}

impl UniformBatch {
    pub fn new(n: usize) -> Self {
        UniformBatch {
            n,
            contents: vec![Vec::new(); n],
            recipients: vec![Vec::new(); n],
        }
    }

    pub fn set(&mut self, src: Vertex, contents: Vec<Word>, recipients: Vec<Vertex>) {
        self.contents[src as usize - 1] = contents;
        self.recipients[src as usize - 1] = recipients;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contents(&self, src: Vertex) -> &[Word] {
        &self.contents[src as usize - 1]
    }

    pub fn recipients(&self, src: Vertex) -> &[Vertex] {
        &self.recipients[src as usize - 1]
    }

    /// Words each node must receive in total.
    pub fn in_words(&self) -> Vec<usize> {
        let mut load = vec![0; self.n];
        for (c, r) in self.contents.iter().zip(&self.recipients) {
            for &d in r {
                load[d as usize - 1] += c.len();
            }
        }
        load
    }

    fn is_silent(&self) -> bool {
        self.contents
            .iter()
            .zip(&self.recipients)
            .all(|(c, r)| c.is_empty() || r.is_empty())
    }
}

/// Per destination, `(source, content)` for every non-empty source that
/// addressed it, by ascending source.
pub type Received = Vec<Vec<(Vertex, Vec<Word>)>>;

fn validate(clique: &Clique, batch: &UniformBatch) -> Result<()> {
    let n = batch.n;
    if clique.n() != n {
        return Err(Error::InvalidParameter("batch and clique sizes differ"));
    }
    let data_limit = clique.word_bits() - 1 - id_bits(n);
    for (i, (c, r)) in batch.contents.iter().zip(&batch.recipients).enumerate() {
        let node = i as Vertex + 1;
        if c.len() > n {
            return Err(Error::SourceOverload { node, count: c.len(), bound: n });
        }
        if r.len() > n {
            return Err(Error::SourceOverload { node, count: r.len(), bound: n });
        }
        let mut seen = vec![false; n];
        for &d in r {
            if d == 0 || d as usize > n {
                return Err(Error::VertexOutOfRange { vertex: d, n });
            }
            if core::mem::replace(&mut seen[d as usize - 1], true) {
                return Err(Error::InvalidParameter("duplicate recipient"));
            }
        }
        if let Some(w) = c.iter().find(|w| w.bits() > data_limit) {
            return Err(Error::OversizeWord { bits: w.bits(), word_bits: data_limit });
        }
    }
    Ok(())
}

/// Holder contents and announcements produced by [`distribute`].
type Placement = (Vec<Vec<Option<Word>>>, Vec<Vec<(Vertex, usize)>>);

/// Round 1: source `i` with `k` words sends word `(h - 1) mod k` to every
/// node `h`; recipients additionally get `k - 1` behind a one-bit marker.
/// Returns, per holder, the words it holds (`held[h][i]`), and per
/// destination the announced `(source, k)` pairs.
fn distribute(clique: &mut Clique, batch: &UniformBatch) -> Result<Placement> {
    let n = batch.n;
    let ib = id_bits(n);
    let mut sends = Vec::new();
    for (i, (c, r)) in batch.contents.iter().zip(&batch.recipients).enumerate() {
        let k = c.len();
        if k == 0 || r.is_empty() {
            continue;
        }
        let mut is_recipient = vec![false; n];
        for &d in r {
            is_recipient[d as usize - 1] = true;
        }
        let notify = Word::new(1, 1)?.concat(Word::new(k as u64 - 1, ib)?)?;
        let plain = Word::new(0, 1)?;
        for h in 0..n {
            let head = if is_recipient[h] { notify } else { plain };
            sends.push(Envelope::new(i as Vertex + 1, h as Vertex + 1, head.concat(c[h % k])?));
        }
    }
    let mut held = vec![vec![None; n]; n];
    let mut announced = vec![Vec::new(); n];
    for (h, inbox) in clique.exchange(sends)?.into_iter().enumerate() {
        for e in inbox {
            let (flag_bits, rest) = (e.word.bits(), e.word);
            // The first bit tells whether a count field follows.
            let (marker, body) = rest.split(flag_bits - 1);
            let data = if marker.value() == 1 {
                let (count, data) = body.split(body.bits() - ib);
                announced[h].push((e.src, count.value() as usize + 1));
                data
            } else {
                body
            };
            held[h][e.src as usize - 1] = Some(data);
        }
    }
    Ok((held, announced))
}

/// Delivers a uniform-content batch in exactly three rounds (none if no
/// source has both content and recipients).
///
/// Needs every source to hold at most `n` words, of at most
/// `word_bits - id_bits - 1` bits each, and every node to receive at most
/// `n` words in total.
pub fn round_robin_messaging(clique: &mut Clique, batch: &UniformBatch) -> Result<Received> {
    validate(clique, batch)?;
    let n = batch.n;
    for (d, &load) in batch.in_words().iter().enumerate() {
        if load > n {
            return Err(Error::DestinationOverload { node: d as Vertex + 1, count: load, bound: n });
        }
    }
    let mut received: Received = vec![Vec::new(); n];
    if batch.is_silent() {
        return Ok(received);
    }
    let (held, announced) = distribute(clique, batch)?;

    // Destination j asks holders 1..k1 for the first source, the next k2
    // for the second, and so on. Any k consecutive holders without
    // wrap-around cover all residues mod k.
    let mut requests = Vec::new();
    let mut plan: Vec<Vec<(Vertex, Vertex, usize)>> = vec![Vec::new(); n];
    for (j, list) in announced.iter().enumerate() {
        let mut next = 0usize;
        for &(src, k) in list {
            for h in next..next + k {
                requests.push(Envelope::new(j as Vertex + 1, h as Vertex + 1, clique.vertex_word(src)));
                plan[j].push((src, h as Vertex + 1, h % k));
            }
            next += k;
        }
    }
    let asked = clique.exchange(requests)?;
    let mut replies = Vec::new();
    for (h, inbox) in asked.into_iter().enumerate() {
        for e in inbox {
            let src = e.word.as_vertex();
            let word = held[h][src as usize - 1].ok_or(Error::InvalidParameter("request for a word not held"))?;
            replies.push(Envelope::new(h as Vertex + 1, e.src, word));
        }
    }
    let answers = clique.exchange(replies)?;
    for (j, inbox) in answers.into_iter().enumerate() {
        let mut by_holder = vec![None; n];
        for e in inbox {
            by_holder[e.src as usize - 1] = Some(e.word);
        }
        for &(src, k) in &announced[j] {
            let mut content = vec![None; k];
            for &(s, h, t) in &plan[j] {
                if s == src {
                    content[t] = by_holder[h as usize - 1];
                }
            }
            let content: Option<Vec<Word>> = content.into_iter().collect();
            received[j].push((src, content.expect("all residues requested")));
        }
        received[j].sort_by_key(|&(s, _)| s);
    }
    Ok(received)
}

/// Round-robin delivery without the per-destination load limit.
///
/// After the distribution round each destination computes how many
/// request rounds `R_j` it needs and `R = max R_j` request/reply round
/// pairs follow; every node learns `R` during the first request round. In
/// each request round a destination asks a maximum matching of its
/// outstanding words to distinct holders. Costs `1 + 2R` rounds.
pub fn round_robin_chunked(clique: &mut Clique, batch: &UniformBatch) -> Result<Received> {
    validate(clique, batch)?;
    let n = batch.n;
    let mut received: Received = vec![Vec::new(); n];
    if batch.is_silent() {
        return Ok(received);
    }
    let (held, announced) = distribute(clique, batch)?;

    // Per destination, request rounds as lists of (source, holder, residue).
    let mut schedules: Vec<Vec<Vec<(Vertex, Vertex, usize)>>> = Vec::with_capacity(n);
    for list in &announced {
        schedules.push(request_schedule(n, list));
    }
    // The first request round also tells every node each destination's
    // number of request rounds: `1 | source | R_j` on a link carrying a
    // request, `0 | 0 | R_j` otherwise.
    let ib = id_bits(n);
    let count_bits = ib + 1;
    let mut rounds = 1usize;
    let mut parts: Vec<Vec<(Vertex, usize, Word)>> = vec![Vec::new(); n];
    let mut r = 0;
    while r < rounds {
        let mut requests = Vec::new();
        for (j, s) in schedules.iter().enumerate() {
            let step = s.get(r).map(Vec::as_slice).unwrap_or(&[]);
            if r == 0 {
                let count = Word::new(s.len() as u64, count_bits)?;
                let mut asked = vec![None; n];
                for &(src, h, _) in step {
                    asked[h as usize - 1] = Some(src);
                }
                for (h, src) in asked.into_iter().enumerate() {
                    let head = match src {
                        Some(src) => Word::new(1, 1)?.concat(clique.vertex_word(src))?,
                        None => Word::new(0, 1 + ib)?,
                    };
                    requests.push(Envelope::new(j as Vertex + 1, h as Vertex + 1, head.concat(count)?));
                }
            } else {
                for &(src, h, _) in step {
                    requests.push(Envelope::new(j as Vertex + 1, h, clique.vertex_word(src)));
                }
            }
        }
        let asked = clique.exchange(requests)?;
        let mut replies = Vec::new();
        for (h, inbox) in asked.into_iter().enumerate() {
            for e in inbox {
                let src = if r == 0 {
                    let (head, count) = e.word.split(count_bits);
                    rounds = rounds.max(count.value() as usize);
                    let (flag, src) = head.split(ib);
                    if flag.value() == 0 {
                        continue;
                    }
                    src.as_vertex()
                } else {
                    e.word.as_vertex()
                };
                let word = held[h][src as usize - 1].ok_or(Error::InvalidParameter("request for a word not held"))?;
                replies.push(Envelope::new(h as Vertex + 1, e.src, word));
            }
        }
        for (j, inbox) in clique.exchange(replies)?.into_iter().enumerate() {
            for e in inbox {
                let &(src, _, t) = schedules[j][r].iter().find(|&&(_, h, _)| h == e.src).expect("reply matches a request");
                parts[j].push((src, t, e.word));
            }
        }
        r += 1;
    }
    debug_assert_eq!(rounds, schedules.iter().map(Vec::len).max().unwrap_or(0).max(1));
    for j in 0..n {
        for &(src, k) in &announced[j] {
            let mut content = vec![None; k];
            for &(s, t, w) in &parts[j] {
                if s == src {
                    content[t] = Some(w);
                }
            }
            let content: Option<Vec<Word>> = content.into_iter().collect();
            received[j].push((src, content.expect("every residue fetched")));
        }
        received[j].sort_by_key(|&(s, _)| s);
    }
    Ok(received)
}

/// Splits the words announced to one destination into request rounds.
/// Residue `t` of a `k`-word source is held by every node `h` with
/// `(h - 1) mod k = t`.
fn request_schedule(n: usize, announced: &[(Vertex, usize)]) -> Vec<Vec<(Vertex, Vertex, usize)>> {
    let mut pending: Vec<(Vertex, usize, usize)> = announced
        .iter()
        .flat_map(|&(src, k)| (0..k).map(move |t| (src, k, t)))
        .collect();
    let mut rounds = Vec::new();
    while !pending.is_empty() {
        let adj: MultiAdjacency = pending
            .iter()
            .map(|&(_, k, t)| (t..n).step_by(k).map(|h| (h as u32, 1)).collect())
            .collect();
        let mate = hopcroft_karp(&adj, n);
        let mut step = Vec::new();
        let mut rest = Vec::new();
        for (&(src, k, t), &h) in pending.iter().zip(&mate) {
            if h == u32::MAX {
                rest.push((src, k, t));
            } else {
                step.push((src, h as Vertex + 1, t));
            }
        }
        rounds.push(step);
        pending = rest;
    }
    rounds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize, vs: &[Vertex]) -> Vec<Word> {
        vs.iter().map(|&v| Word::vertex(v, n)).collect()
    }

    #[test]
    fn star_leaves_get_all_words() {
        let n = 8;
        let mut b = UniformBatch::new(n);
        b.set(1, ids(n, &[5, 6, 7]), vec![2, 3, 4]);
        let mut c = Clique::new(n);
        let got = round_robin_messaging(&mut c, &b).unwrap();
        assert_eq!(c.rounds(), 3);
        for leaf in 2..=4 {
            assert_eq!(got[leaf - 1], vec![(1, ids(n, &[5, 6, 7]))]);
        }
        assert!(got[4].is_empty());
    }

    #[test]
    fn full_content_to_one_destination() {
        let n = 6;
        let mut b = UniformBatch::new(n);
        b.set(2, ids(n, &[1, 2, 3, 4, 5, 6]), vec![5]);
        let mut c = Clique::new(n);
        let got = round_robin_messaging(&mut c, &b).unwrap();
        assert_eq!(c.rounds(), 3);
        assert_eq!(got[4][0].1.len(), 6);
        assert_eq!(c.ledger().per_round[2].max_link_words, 1);
    }

    #[test]
    fn overloaded_destination_is_rejected() {
        let n = 3;
        let mut b = UniformBatch::new(n);
        b.set(1, ids(n, &[1, 2]), vec![3]);
        b.set(2, ids(n, &[1, 2]), vec![3]);
        let mut c = Clique::new(n);
        assert!(matches!(round_robin_messaging(&mut c, &b), Err(Error::DestinationOverload { .. })));
        let mut c = Clique::new(n);
        let got = round_robin_chunked(&mut c, &b).unwrap();
        assert_eq!(got[2].len(), 2);
    }

    #[test]
    fn silent_batch_is_free() {
        let mut c = Clique::new(4);
        round_robin_messaging(&mut c, &UniformBatch::new(4)).unwrap();
        assert_eq!(c.rounds(), 0);
    }
}
