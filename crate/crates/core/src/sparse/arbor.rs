use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::announce;
use super::decomposition::{
    announce_degrees, assign_delegates_from, decomposition_trace, DecompositionTrace, DelegateAssignment,
    ThresholdRule,
};
use crate::error::{Error, Result};
use crate::general::Detection;
use crate::graph::{Graph, Vertex};
use crate::local::first_common_except;
use crate::routing::round_robin::{round_robin_chunked, UniformBatch};
use crate::routing::RoutePlan;
use crate::runtime::{Clique, Envelope, Word};

/// Which TriArbor schedule to run. `a` is the arboricity bound in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArborVariant {
    /// Iterations one after another with threshold `4A`.
    Sequential { a: usize },
    /// Decomposition first, then all iterations' traffic at once.
    Parallelized { a: usize },
    /// As parallelized, with threshold `max(4A, ceil(sqrt(n)))`.
    BaseChange { a: usize },
    /// As parallelized, with threshold from the active average degree.
    Uniform,
}

impl ArborVariant {
    pub fn rule(&self) -> ThresholdRule {
        match *self {
            ArborVariant::Sequential { a } | ArborVariant::Parallelized { a } => ThresholdRule::Fixed { a },
            ArborVariant::BaseChange { a } => ThresholdRule::BaseChange { a },
            ArborVariant::Uniform => ThresholdRule::Uniform,
        }
    }

    pub fn is_merged(&self) -> bool {
        !matches!(self, ArborVariant::Sequential { .. })
    }
}

/// Rounds spent per phase. Sequential runs have one entry per iteration;
/// merged runs have a single entry whose `announce` covers the whole
/// decomposition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseRounds {
    pub iteration: Option<usize>,
    pub threshold: usize,
    pub announce: u32,
    pub high: u32,
    pub delegate: u32,
    pub low: u32,
    pub broadcast: u32,
}

/// How often each detection branch fired.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BranchCounters {
    /// A low-degree node saw a common neighbor with a low-degree neighbor.
    pub low_low: u64,
    /// A delegate saw an edge inside its principal's neighborhood.
    pub delegate: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArborReport {
    pub detection: Detection,
    pub trace: DecompositionTrace,
    pub phases: Vec<PhaseRounds>,
    pub counters: BranchCounters,
    /// Delegates handed out per iteration.
    pub delegates_per_iteration: Vec<usize>,
    /// Largest number of iterations in which one node acts as delegate.
    pub max_delegate_roles: usize,
}

struct Ctx<'a> {
    g: &'a Graph,
    trace: &'a DecompositionTrace,
    assignments: &'a [DelegateAssignment],
}

impl Ctx<'_> {
    fn neighbors(&self, it: usize, v: Vertex) -> Vec<Vertex> {
        self.trace.active_neighbors(self.g, it, v)
    }
}

/// Triangle detection by repeated elimination of low-degree nodes, with
/// delegates sharing the load of high-degree neighborhoods.
pub fn tri_arbor(clique: &mut Clique, g: &Graph, variant: ArborVariant) -> Result<ArborReport> {
    let n = g.n();
    if clique.n() != n {
        return Err(Error::InvalidParameter("graph and clique sizes differ"));
    }
    let trace = decomposition_trace(g, variant.rule())?;
    let mut assignments = Vec::with_capacity(trace.iteration_count());
    let mut offset = 0;
    for iteration in &trace.iterations {
        let degrees: Vec<(Vertex, usize)> = iteration
            .active
            .iter()
            .copied()
            .zip(iteration.degrees.iter().copied())
            .collect();
        let start = if variant.is_merged() { offset } else { 0 };
        let a = assign_delegates_from(n, &degrees, iteration.threshold, start)?;
        offset = a.next_offset();
        assignments.push(a);
    }
    let mut roles = vec![0usize; n];
    for a in &assignments {
        for p in &a.principals {
            for &d in &p.delegates {
                roles[d as usize - 1] += 1;
            }
        }
    }
    let ctx = Ctx {
        g,
        trace: &trace,
        assignments: &assignments,
    };
    let mut state = Search::new(n);
    let mut phases = Vec::new();
    if variant.is_merged() {
        let before = clique.rounds();
        for iteration in &trace.iterations {
            announce_degrees(clique, iteration)?;
        }
        let announce_rounds = clique.rounds() - before;
        let all: Vec<usize> = (0..trace.iteration_count()).collect();
        let mut p = run_phases(clique, &ctx, &all, &mut state)?;
        p.announce = announce_rounds;
        p.threshold = trace.iterations.iter().map(|i| i.threshold).max().unwrap_or(0);
        phases.push(p);
    } else {
        for it in 0..trace.iteration_count() {
            let before = clique.rounds();
            announce_degrees(clique, &trace.iterations[it])?;
            let mut p = run_phases(clique, &ctx, &[it], &mut state)?;
            p.announce = clique.rounds() - before - p.high - p.delegate - p.low - p.broadcast;
            p.iteration = Some(it);
            p.threshold = trace.iterations[it].threshold;
            phases.push(p);
            if state.detection.found {
                break;
            }
        }
    }
    Ok(ArborReport {
        detection: state.detection,
        counters: state.counters,
        delegates_per_iteration: assignments.iter().map(DelegateAssignment::delegate_count).collect(),
        max_delegate_roles: roles.into_iter().max().unwrap_or(0),
        trace,
        phases,
    })
}

struct Search {
    detection: Detection,
    counters: BranchCounters,
    finders: Vec<bool>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            detection: Detection::none(),
            counters: BranchCounters::default(),
            finders: vec![false; n],
        }
    }

    fn record(&mut self, finder: Vertex, triangle: [Vertex; 3]) {
        self.finders[finder as usize - 1] = true;
        if self.detection.finder.is_none_or(|f| finder < f) {
            self.detection = Detection {
                found: true,
                witness: Some(triangle.to_vec()),
                finder: Some(finder),
            };
        }
    }
}

/// High-degree distribution, delegate exchange, low-degree distribution,
/// local checks and the final broadcast for the given iterations.
fn run_phases(clique: &mut Clique, ctx: &Ctx<'_>, its: &[usize], state: &mut Search) -> Result<PhaseRounds> {
    let n = ctx.g.n();
    let mut rounds = PhaseRounds::default();

    // High-degree nodes hand their sorted active neighbor list to their
    // delegates, run by run, and tell each low-degree neighbor which
    // delegate covers it; the notices ride on the first relay round.
    let mut slots = Vec::new();
    let mut payloads = Vec::new();
    // (iteration, delegate) for every slot.
    let mut slot_owner = Vec::new();
    let mut notices = Vec::new();
    for &it in its {
        let a = &ctx.assignments[it];
        let level = &ctx.trace.iterations[it];
        for p in &a.principals {
            let list = ctx.neighbors(it, p.node);
            debug_assert_eq!(list.len(), p.degree);
            for (q, &d) in p.delegates.iter().enumerate() {
                for &u in &list[a.range(p.degree, q)] {
                    slots.push((p.node, d));
                    payloads.push(Some(Word::vertex(u, n)));
                    slot_owner.push((it, d));
                }
            }
            for (pos, &j) in list.iter().enumerate() {
                if level.is_low(j) {
                    let d = a.delegate_for(p.node, pos).expect("position covered");
                    notices.push(Envelope::new(p.node, j, Word::vertex(d, n)));
                }
            }
        }
    }
    let before = clique.rounds();
    let bound = load_bound(n, &slots);
    let plan = RoutePlan::new(n, slots, bound)?;
    let (inboxes, notified) = plan.execute_with_direct(clique, &payloads, notices)?;
    rounds.high = clique.rounds() - before;
    // Sublist held by each (iteration, delegate).
    let mut sublist: BTreeMap<(usize, Vertex), Vec<Vertex>> = BTreeMap::new();
    for inbox in inboxes {
        for m in inbox {
            sublist.entry(slot_owner[m.index]).or_default().push(m.word.as_vertex());
        }
    }
    // Delegate a low-degree node must use for each high-degree neighbor.
    let mut delegate_of: BTreeMap<(Vertex, Vertex), Vertex> = BTreeMap::new();
    for (j, got) in notified.into_iter().enumerate() {
        for e in got {
            delegate_of.insert((j as Vertex + 1, e.src), e.word.as_vertex());
        }
    }

    // Delegates of one principal share their runs with each other.
    let mut slots = Vec::new();
    let mut payloads = Vec::new();
    let mut slot_owner = Vec::new();
    for &it in its {
        for p in &ctx.assignments[it].principals {
            for &d in &p.delegates {
                let own = sublist.get(&(it, d)).map(Vec::as_slice).unwrap_or(&[]);
                for &other in p.delegates.iter().filter(|&&o| o != d) {
                    for &u in own {
                        slots.push((d, other));
                        payloads.push(Some(Word::vertex(u, n)));
                        slot_owner.push((it, other));
                    }
                }
            }
        }
    }
    let before = clique.rounds();
    let bound = load_bound(n, &slots);
    let plan = RoutePlan::new(n, slots, bound)?;
    let inboxes = plan.execute(clique, &payloads)?;
    rounds.delegate = clique.rounds() - before;
    let mut principal_list: BTreeMap<(usize, Vertex), Vec<Vertex>> = sublist.clone();
    for inbox in inboxes {
        for m in inbox {
            principal_list.entry(slot_owner[m.index]).or_default().push(m.word.as_vertex());
        }
    }
    for list in principal_list.values_mut() {
        list.sort_unstable();
    }

    // Low-degree nodes send their active neighbor list to low-degree
    // neighbors and to the notified delegate of each high-degree neighbor.
    let mut batch = UniformBatch::new(n);
    for &it in its {
        let level = &ctx.trace.iterations[it];
        for &i in &level.active {
            if !level.is_low(i) {
                continue;
            }
            let list = ctx.neighbors(it, i);
            let mut recipients = BTreeSet::new();
            for &j in &list {
                if level.is_low(j) {
                    recipients.insert(j);
                } else {
                    recipients.insert(delegate_of[&(i, j)]);
                }
            }
            let words = list.iter().map(|&u| Word::vertex(u, n)).collect();
            batch.set(i, words, recipients.into_iter().collect());
        }
    }
    let before = clique.rounds();
    let received = round_robin_chunked(clique, &batch)?;
    rounds.low = clique.rounds() - before;

    for (x, lists) in received.into_iter().enumerate() {
        let me = x as Vertex + 1;
        for (j, words) in lists {
            let list: Vec<Vertex> = words.iter().map(|w| w.as_vertex()).collect();
            let it = ctx.trace.removed_in(j);
            let level = &ctx.trace.iterations[it];
            // Only a neighbor may test its own list against the sender's;
            // a delegate that is not adjacent to `j` would otherwise report
            // a common neighbor of two non-adjacent nodes.
            if level.is_low(me) {
                let mine = ctx.neighbors(it, me);
                if mine.binary_search(&j).is_ok() {
                    if let Some(w) = first_common_except(&mine, &list, &[me, j]) {
                        state.counters.low_low += 1;
                        state.record(me, [me, j, w]);
                        continue;
                    }
                }
            }
            if let Some((k, _)) = ctx.assignments[it].serving(me) {
                let covers = sublist.get(&(it, me)).is_some_and(|s| s.contains(&j));
                if covers {
                    let full = &principal_list[&(it, me)];
                    if let Some(w) = first_common_except(full, &list, &[k, j]) {
                        state.counters.delegate += 1;
                        state.record(me, [j, k, w]);
                    }
                }
            }
        }
    }

    let before = clique.rounds();
    announce(clique, &state.finders)?;
    rounds.broadcast = clique.rounds() - before;
    Ok(rounds)
}

fn load_bound(n: usize, slots: &[(Vertex, Vertex)]) -> usize {
    let mut out = vec![0usize; n];
    let mut inn = vec![0usize; n];
    for &(s, d) in slots {
        out[s as usize - 1] += 1;
        inn[d as usize - 1] += 1;
    }
    out.into_iter().chain(inn).max().unwrap_or(0).max(1)
}
