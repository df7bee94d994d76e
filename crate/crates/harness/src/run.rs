//! Executes one algorithm on one graph for one seed.

use std::collections::BTreeMap;

use clique_core::general::{d_clique0, tri_partition, Detection, PartitionPlan};
use clique_core::graph::{degeneracy, oracle_contains};
use clique_core::random::{distinguisher, run_sampling, sampling_outcome, SampleConfig, Verdict};
use clique_core::routing::learn_full_graph;
use clique_core::sparse::{detect_diameter_d, tri_arbor, tri_neighbors};
use clique_core::{Clique, Graph, SubgraphPattern, Vertex};
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub found: bool,
    /// Ground truth for the same question.
    pub oracle: bool,
    pub witness: Option<Vec<Vertex>>,
    pub rounds: u32,
    pub words: u64,
    pub bits: u64,
    pub iterations: Option<usize>,
    pub success_iteration: Option<u32>,
    pub success_s: Option<usize>,
    pub fell_back: bool,
    pub counters: BTreeMap<String, u64>,
}

impl RunRecord {
    fn new(seed: u64, oracle: bool, clique: &Clique) -> RunRecord {
        let ledger = clique.ledger();
        RunRecord {
            seed,
            found: false,
            oracle,
            witness: None,
            rounds: ledger.rounds,
            words: ledger.link_words,
            bits: ledger.bits_sent,
            iterations: None,
            success_iteration: None,
            success_s: None,
            fell_back: false,
            counters: BTreeMap::new(),
        }
    }

    fn detection(mut self, d: Detection) -> RunRecord {
        self.found = d.found;
        self.witness = d.witness;
        self
    }
}

/// Whether `record` is consistent with the ground truth. Exact algorithms
/// must match the oracle; the one-sided ones must only never claim a copy
/// that is not there. A claimed copy must come with a valid witness.
pub fn agrees(algorithm: Algorithm, g: &Graph, pattern: &SubgraphPattern, record: &RunRecord) -> bool {
    if algorithm == Algorithm::LearnGraph {
        return record.found == record.oracle;
    }
    if record.found {
        let witness_ok = record.witness.as_ref().is_some_and(|w| {
            w.len() == pattern.d()
                && w.iter().all(|&v| v >= 1 && v as usize <= g.n())
                && pattern.edges().iter().all(|&(a, b)| g.has_edge(w[a as usize - 1], w[b as usize - 1]))
        });
        witness_ok && record.oracle
    } else {
        !record.oracle || matches!(algorithm, Algorithm::Distinguisher | Algorithm::Tightness)
    }
}

/// Plans reused across the seeds of one experiment.
#[derive(Default)]
pub struct Cache {
    fallback: Option<PartitionPlan>,
}

pub fn run_once(config: &ExperimentConfig, g: &Graph, seed: u64, cache: &mut Cache) -> Result<RunRecord> {
    let n = g.n();
    let algo = config.flags.algo.clone().unwrap_or_default();
    let ctx = |what: &str| HarnessError::runtime(format!("{algo} seed {seed}: {what}"));
    let mut clique = Clique::new(n);
    let pattern = &config.pattern;
    let oracle = match config.algorithm {
        Algorithm::LearnGraph => true,
        _ => oracle_contains(g, pattern),
    };
    let record = match config.algorithm {
        Algorithm::TriPartition => {
            let d = tri_partition(&mut clique, g, config.flags.packed).map_err(ctx("run"))?;
            RunRecord::new(seed, oracle, &clique).detection(d)
        }
        Algorithm::DClique0 => {
            let d = d_clique0(&mut clique, g, pattern, config.flags.packed).map_err(ctx("run"))?;
            RunRecord::new(seed, oracle, &clique).detection(d)
        }
        Algorithm::TriNeighbors => {
            let d = tri_neighbors(&mut clique, g).map_err(ctx("run"))?;
            RunRecord::new(seed, oracle, &clique).detection(d)
        }
        Algorithm::DiameterD => {
            let d = detect_diameter_d(&mut clique, g, pattern).map_err(ctx("run"))?;
            RunRecord::new(seed, oracle, &clique).detection(d)
        }
        Algorithm::TriArbor(kind) => {
            let a = config.flags.a.unwrap_or_else(|| degeneracy(g)).max(1);
            let r = tri_arbor(&mut clique, g, kind.variant(a)).map_err(ctx("run"))?;
            let mut rec = RunRecord::new(seed, oracle, &clique).detection(r.detection);
            rec.iterations = Some(r.trace.iteration_count());
            rec.counters.insert("a".into(), a as u64);
            rec.counters.insert("low_low".into(), r.counters.low_low);
            rec.counters.insert("delegate".into(), r.counters.delegate);
            rec.counters.insert("delegates".into(), r.delegates_per_iteration.iter().sum::<usize>() as u64);
            rec.counters.insert("max_delegate_roles".into(), r.max_delegate_roles as u64);
            rec
        }
        Algorithm::TriSample => {
            let sample = SampleConfig::tri_sample(n);
            let plan = if sample.fallback {
                if cache.fallback.is_none() {
                    cache.fallback = Some(PartitionPlan::new(n, 3, sample.packed_fallback).map_err(ctx("plan"))?);
                }
                cache.fallback.as_ref()
            } else {
                None
            };
            let r = run_sampling(&mut clique, g, seed, &sample, plan).map_err(ctx("run"))?;
            let mut rec = RunRecord::new(seed, oracle, &clique).detection(r.detection);
            rec.iterations = Some(r.rounds.len());
            rec.success_iteration = r.success_iteration;
            rec.success_s = r.rounds.iter().find(|x| x.found).map(|x| x.s);
            rec.fell_back = r.fell_back;
            rec.counters.insert("wall_hit".into(), r.wall_hit as u64);
            rec
        }
        Algorithm::Distinguisher => {
            let t0 = config.flags.t0.unwrap_or(1);
            let (verdict, r) = distinguisher(&mut clique, g, t0, config.eps, seed).map_err(ctx("run"))?;
            let mut rec = RunRecord::new(seed, oracle, &clique).detection(r.detection);
            rec.found = verdict == Verdict::HasTriangle;
            rec.iterations = Some(r.rounds.len());
            rec.success_iteration = r.success_iteration;
            rec.success_s = r.rounds.iter().find(|x| x.found).map(|x| x.s);
            rec
        }
        Algorithm::Tightness => {
            let s = config.flags.s.unwrap_or(1);
            if s == 0 || s > n {
                return Err(HarnessError::Config(format!("--s must lie in 1..={n}")));
            }
            let mut rec = RunRecord::new(seed, oracle, &clique);
            if let Some((_, t)) = sampling_outcome(g, seed, 1, s) {
                rec.found = true;
                rec.witness = Some(t.to_vec());
                rec.success_iteration = Some(1);
                rec.success_s = Some(s);
            }
            rec.iterations = Some(1);
            rec
        }
        Algorithm::LearnGraph => {
            let views = learn_full_graph(&mut clique, g).map_err(ctx("run"))?;
            let mut rec = RunRecord::new(seed, oracle, &clique);
            rec.found = views.iter().all(|v| v == g);
            rec
        }
    };
    if let Some(limit) = config.flags.max_rounds {
        if record.rounds > limit {
            return Err(HarnessError::Runtime {
                context: format!("{algo} seed {seed}: {} rounds over --max-rounds {limit}", record.rounds),
                source: clique_core::Error::NonTermination { max_rounds: limit },
            });
        }
    }
    Ok(record)
}
