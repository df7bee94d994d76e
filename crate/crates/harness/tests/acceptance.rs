//! One PASS/FAIL line per acceptance criterion. Pass substrings as
//! arguments to run a subset, e.g. `cargo test --test acceptance -- 4 9`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use clique_core::general::{Detection, PartitionPlan};
use clique_core::generate::{all_to_all_batch, generate, random_batch, random_uniform_batch, shifted_batch, Family};
use clique_core::graph::{census, degeneracy, oracle_contains};
use clique_core::random::{m_threshold, run_sampling, tightness_experiment, SampleConfig};
use clique_core::routing::{
    deterministic_message_passing, learn_full_graph, oblivious_schedule, randomized_delivery, round_robin_messaging,
    Deliveries, MessageBatch,
};
use clique_core::runtime::node_rng;
use clique_core::sparse::{tri_arbor, ArborVariant, DecompositionTrace};
use clique_core::{Clique, Graph, SubgraphPattern, Vertex};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [Criterion; 11] = [
        ("1", "routing exactness", routing_exactness),
        ("2", "oblivious scheduling", oblivious_scheduling),
        ("3", "partition correctness", partition_correctness),
        ("4", "partition round scaling", partition_scaling),
        ("5", "arboricity family", arbor_family),
        ("6", "triangle pair census", census_lemma),
        ("7", "sampling success", sampling_success),
        ("8", "sampling one-sidedness and fallback", sampling_fallback),
        ("9", "sampling tightness", tightness),
        ("10", "full-graph learning", full_graph_learning),
        ("11", "randomized delivery budget", randomized_budget),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {detail} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn multiset(batch: &MessageBatch) -> BTreeMap<(Vertex, Vertex, u64), usize> {
    let mut m = BTreeMap::new();
    for x in batch.messages() {
        *m.entry((x.src, x.dst, x.word.value())).or_insert(0) += 1;
    }
    m
}

fn delivered(out: &Deliveries) -> BTreeMap<(Vertex, Vertex, u64), usize> {
    let mut m = BTreeMap::new();
    for (d, inbox) in out.iter().enumerate() {
        for x in inbox {
            *m.entry((x.src, d as Vertex + 1, x.word.value())).or_insert(0) += 1;
        }
    }
    m
}

fn routing_exactness() -> Outcome {
    let mut batches = 0;
    for n in [4usize, 8, 16, 32] {
        for i in 0..200u64 {
            let seed = i * 97 + n as u64;
            let keep = 0.25 + 0.75 * (i % 4) as f64 / 3.0;
            let batch = random_batch(n, n, keep, seed);
            if batch.is_empty() {
                continue;
            }
            let mut c = Clique::new(n);
            let out = deterministic_message_passing(&mut c, &batch).map_err(|e| e.to_string())?;
            ensure!(c.rounds() == 2, "n={n} seed={seed}: two-round scheme took {}", c.rounds());
            ensure!(delivered(&out) == multiset(&batch), "n={n} seed={seed}: two-round delivery differs");
            ensure!(c.ledger().max_link_words() <= 1, "n={n}: link overload");

            let mut u = random_uniform_batch(n, seed);
            if (1..=n as Vertex).all(|s| u.contents(s).is_empty() || u.recipients(s).is_empty()) {
                u.set(1, vec![clique_core::Word::vertex(1, n)], vec![n as Vertex]);
            }
            let mut c = Clique::new(n);
            let got = round_robin_messaging(&mut c, &u).map_err(|e| e.to_string())?;
            ensure!(c.rounds() == 3, "n={n} seed={seed}: round robin took {}", c.rounds());
            ensure!(c.ledger().max_link_words() <= 1, "n={n}: link overload");
            for d in 1..=n as Vertex {
                let want: Vec<_> = (1..=n as Vertex)
                    .filter(|&s| !u.contents(s).is_empty() && u.recipients(s).contains(&d))
                    .map(|s| (s, u.contents(s).to_vec()))
                    .collect();
                ensure!(got[d as usize - 1] == want, "n={n} seed={seed}: round robin delivery differs at {d}");
            }
            batches += 1;
        }
    }
    Ok(format!("{batches} batches, two-round = 2 rounds, round robin = 3 rounds, all delivered"))
}

fn oblivious_scheduling() -> Outcome {
    let mut cases = 0;
    let mut worst = 0.0f64;
    for n in [4usize, 8, 16, 32] {
        for bound in [1, n / 2, n, n + 1, 2 * n, 3 * n - 1, 5 * n] {
            for seed in 0..10u64 {
                let batch = random_batch(n, bound, 0.9, seed * 13 + bound as u64);
                let mut c = Clique::new(n);
                let out = oblivious_schedule(&mut c, &batch, bound).map_err(|e| e.to_string())?;
                let limit = 2 * bound.div_ceil(n);
                ensure!(c.rounds() as usize <= limit, "n={n} T={bound}: {} rounds > {limit}", c.rounds());
                ensure!(delivered(&out) == multiset(&batch), "n={n} T={bound}: delivery differs");
                worst = worst.max(c.rounds() as f64 / limit as f64);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} batches, max rounds / 2ceil(T/n) = {worst:.2}"))
}

fn witness_ok(g: &Graph, p: &SubgraphPattern, d: &Detection) -> bool {
    match &d.witness {
        None => !d.found,
        Some(w) => {
            d.found
                && w.len() == p.d()
                && p.edges().iter().all(|&(a, b)| g.has_edge(w[a as usize - 1], w[b as usize - 1]))
        }
    }
}

fn check_plan(plan: &PartitionPlan, g: &Graph, p: &SubgraphPattern, what: &str) -> Result<bool, String> {
    let mut c = Clique::new(g.n());
    let d = plan.detect(&mut c, g, p).map_err(|e| format!("{what}: {e}"))?;
    let truth = oracle_contains(g, p);
    ensure!(d.found == truth, "{what}: found={} oracle={truth}", d.found);
    ensure!(witness_ok(g, p, &d), "{what}: bad witness {:?}", d.witness);
    Ok(truth)
}

fn partition_correctness() -> Outcome {
    let tri = SubgraphPattern::triangle();
    let mut summary = Vec::new();
    for n in [8usize, 27, 64] {
        let plans = [PartitionPlan::new(n, 3, false), PartitionPlan::new(n, 3, true)];
        let plans: Vec<PartitionPlan> = plans.into_iter().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let mut positive = 0;
        for i in 0..300u64 {
            let p = (0.2 + 3.0 * (i % 10) as f64 / 10.0) / n as f64 * if n == 8 { 2.0 } else { 1.0 };
            let g = generate(&Family::Gnp { n, p: p.min(1.0) }, i).map_err(|e| e.to_string())?;
            let plan = &plans[(i % 2) as usize];
            positive += check_plan(plan, &g, &tri, &format!("n={n} graph {i}"))? as usize;
        }
        summary.push(format!("n={n}: 300 agree ({positive} with triangles)"));
    }
    let patterns = [SubgraphPattern::clique(4), SubgraphPattern::cycle(4), SubgraphPattern::path(4)];
    let mut positive = 0;
    for n in [16usize, 27] {
        let plan = PartitionPlan::new(n, 4, false).map_err(|e| e.to_string())?;
        for i in 0..50u64 {
            let pattern = &patterns[(i % 3) as usize];
            let p = [0.08, 0.15, 0.3, 0.5][(i % 4) as usize];
            let g = generate(&Family::Gnp { n, p }, 1000 + i).map_err(|e| e.to_string())?;
            positive += check_plan(&plan, &g, pattern, &format!("d=4 n={n} graph {i}"))? as usize;
        }
    }
    summary.push(format!("d=4: 100 agree ({positive} containing the pattern)"));
    Ok(summary.join("; "))
}

fn partition_scaling() -> Outcome {
    let mut rows = Vec::new();
    for n in [8usize, 27, 64, 125, 216] {
        let g = generate(&Family::Gnp { n, p: 0.5 }, n as u64).map_err(|e| e.to_string())?;
        let mut rounds = [0u32; 2];
        for (k, packed) in [false, true].into_iter().enumerate() {
            let mut c = Clique::new(n);
            clique_core::general::tri_partition(&mut c, &g, packed).map_err(|e| e.to_string())?;
            rounds[k] = c.rounds();
        }
        let bound = 2 * (3.0 * (n as f64).cbrt() - 1e-9).ceil() as u32 + 1;
        ensure!(rounds[0] <= bound, "n={n}: unpacked {} > {bound}", rounds[0]);
        if n >= 64 {
            ensure!(rounds[1] < rounds[0], "n={n}: packed {} not below unpacked {}", rounds[1], rounds[0]);
        }
        rows.push(format!("n={n} {}/{} (bound {bound})", rounds[0], rounds[1]));
    }
    Ok(format!("unpacked/packed rounds: {}", rows.join(", ")))
}

/// Bounded-arboricity graphs, about half with a few planted triangles.
fn sparse_corpus() -> Vec<Graph> {
    let mut out = Vec::with_capacity(200);
    for i in 0..200u64 {
        let n = [16usize, 32, 48, 64][(i % 4) as usize];
        let family = match i % 5 {
            0 => Family::ForestUnion { n, k: 1 + (i / 5 % 3) as usize },
            1 => Family::Tree { n },
            2 => Family::Star { n },
            3 => Family::TwinHubs { n },
            _ => Family::Gnp { n, p: 2.5 / n as f64 },
        };
        let mut g = generate(&family, i).unwrap();
        if i % 2 == 1 {
            let mut rng = node_rng(i, 1, 0);
            for _ in 0..rng.gen_range(1..4) {
                let u = rng.gen_range(1..=n as Vertex);
                let Some(&v) = g.neighbors(u).first() else { continue };
                let w = rng.gen_range(1..=n as Vertex);
                for (a, b) in [(u, w), (v, w)] {
                    if a != b && !g.has_edge(a, b) {
                        g = g.with_edge(a, b).unwrap();
                    }
                }
            }
        }
        out.push(g);
    }
    out
}

fn halving(trace: &DecompositionTrace, n: usize, what: &str) -> Result<(), String> {
    let bound = DecompositionTrace::iteration_bound(n);
    ensure!(trace.iteration_count() <= bound, "{what}: {} iterations > {bound}", trace.iteration_count());
    for (k, it) in trace.iterations.iter().enumerate() {
        ensure!(2 * it.low_count() >= it.active.len(), "{what}: iteration {k} removes {} of {}", it.low_count(), it.active.len());
    }
    Ok(())
}

fn arbor_family() -> Outcome {
    let tri = SubgraphPattern::triangle();
    let corpus = sparse_corpus();
    let mut positive = 0;
    let mut max_roles = 0;
    let mut max_delegates = 0.0f64;
    let mut branches = [0u64; 2];
    for (i, g) in corpus.iter().enumerate() {
        let n = g.n();
        let a = degeneracy(g).max(1);
        let truth = oracle_contains(g, &tri);
        positive += truth as usize;
        for variant in [
            ArborVariant::Sequential { a },
            ArborVariant::Parallelized { a },
            ArborVariant::BaseChange { a },
            ArborVariant::Uniform,
        ] {
            let what = format!("graph {i} (n={n}) {variant:?}");
            let mut c = Clique::new(n);
            let r = tri_arbor(&mut c, g, variant).map_err(|e| format!("{what}: {e}"))?;
            ensure!(r.detection.found == truth, "{what}: found={} oracle={truth}", r.detection.found);
            ensure!(witness_ok(g, &tri, &r.detection), "{what}: bad witness");
            halving(&r.trace, n, &what)?;
            let iterations = r.trace.iteration_count().max(1) as u32;
            for p in &r.phases {
                // Merged schedules carry every iteration's traffic at once.
                let k = if p.iteration.is_some() { 1 } else { iterations };
                let t = p.threshold;
                let low = 3 * (32 * t * t).div_ceil(n) as u32;
                ensure!(p.announce <= k, "{what}: announce {} > {k}", p.announce);
                ensure!(p.high <= 2 * k, "{what}: high phase {} > {}", p.high, 2 * k);
                ensure!(p.delegate <= 4 * k, "{what}: delegate phase {} > {}", p.delegate, 4 * k);
                ensure!(p.low <= low * k, "{what}: low phase {} > {}", p.low, low * k);
            }
            for (k, &count) in r.delegates_per_iteration.iter().enumerate() {
                let active = r.trace.iterations[k].active.len();
                ensure!(count <= active, "{what}: {count} delegates for {active} active nodes");
            }
            let total: usize = r.delegates_per_iteration.iter().sum();
            ensure!(total <= 2 * n, "{what}: {total} delegates > 2n");
            max_delegates = max_delegates.max(total as f64 / n as f64);
            if matches!(variant, ArborVariant::Parallelized { .. }) {
                ensure!(r.max_delegate_roles <= 2, "{what}: a node is delegate {} times", r.max_delegate_roles);
                max_roles = max_roles.max(r.max_delegate_roles);
            }
            branches[0] += r.counters.low_low;
            branches[1] += r.counters.delegate;
        }
    }
    Ok(format!(
        "{} graphs ({positive} with triangles) x 4 variants agree; max delegates/n {max_delegates:.2}, max roles {max_roles}; branch hits low/delegate {}/{}",
        corpus.len(),
        branches[0],
        branches[1]
    ))
}

fn brute_t4(g: &Graph) -> u64 {
    let n = g.n() as Vertex;
    let mut tris = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                    tris.push([a, b, c]);
                }
            }
        }
    }
    let mut t4 = 0;
    for (i, x) in tris.iter().enumerate() {
        for y in &tris[i + 1..] {
            if x.iter().filter(|v| y.contains(v)).count() == 2 {
                t4 += 1;
            }
        }
    }
    t4
}

fn census_lemma() -> Outcome {
    let mut graphs: Vec<Graph> = sparse_corpus();
    for i in 0..100u64 {
        let n = [6usize, 8, 10, 24][(i % 4) as usize];
        graphs.push(generate(&Family::Gnp { n, p: 0.2 + 0.6 * (i % 5) as f64 / 4.0 }, i).unwrap());
    }
    graphs.push(generate(&Family::SharedEdge { n: 40, t: 30 }, 0).unwrap());
    graphs.push(generate(&Family::DisjointTriangles { n: 30, t: 10 }, 0).unwrap());
    let (mut with_t, mut small) = (0, 0);
    let mut tightest = f64::INFINITY;
    for (i, g) in graphs.iter().enumerate() {
        let c = census(g);
        if c.t > 0 {
            with_t += 1;
            ensure!(3 * c.t * c.delta_max >= 2 * c.t4, "graph {i}: delta_max {} below 2 t4 / 3t", c.delta_max);
            if c.t4 > 0 {
                tightest = tightest.min(3.0 * c.t as f64 * c.delta_max as f64 / (2.0 * c.t4 as f64));
            }
        }
        if g.n() <= 10 {
            small += 1;
            let identity: u64 = c.per_edge.values().map(|&x| x * x.saturating_sub(1) / 2).sum();
            let t4 = brute_t4(g);
            ensure!(c.t4 == t4 && identity == t4, "graph {i}: t4 {} / identity {identity} / brute {t4}", c.t4);
        }
    }
    Ok(format!("lemma on {with_t} graphs (min ratio {tightest:.2}), identity on {small} graphs with n <= 10"))
}

struct SampleRun {
    family: &'static str,
    seed: u64,
    success_iteration: Option<u32>,
    fell_back: bool,
    found: bool,
    oracle: bool,
    witness_ok: bool,
}

fn sample_runs(label: &'static str, g: &Graph, seeds: std::ops::Range<u64>, plan: &PartitionPlan) -> Result<Vec<SampleRun>, String> {
    let tri = SubgraphPattern::triangle();
    let truth = oracle_contains(g, &tri);
    let config = SampleConfig::tri_sample(g.n());
    seeds
        .map(|seed| {
            let mut c = Clique::new(g.n());
            let r = run_sampling(&mut c, g, seed, &config, Some(plan)).map_err(|e| format!("{label} seed {seed}: {e}"))?;
            Ok(SampleRun {
                family: label,
                seed,
                success_iteration: r.success_iteration,
                fell_back: r.fell_back,
                found: r.detection.found,
                oracle: truth,
                witness_ok: witness_ok(g, &tri, &r.detection),
            })
        })
        .collect()
}

static BIG_PLAN: std::sync::OnceLock<PartitionPlan> = std::sync::OnceLock::new();
static MAIN_RUNS: std::sync::OnceLock<Result<Vec<SampleRun>, String>> = std::sync::OnceLock::new();

fn big_plan() -> &'static PartitionPlan {
    BIG_PLAN.get_or_init(|| PartitionPlan::new(1024, 3, true).unwrap())
}

const EPS: f64 = 0.1;

fn main_families() -> [(&'static str, Family); 2] {
    [
        ("shared-edge t=512", Family::SharedEdge { n: 1024, t: 512 }),
        ("disjoint t=64", Family::DisjointTriangles { n: 1024, t: 64 }),
    ]
}

fn main_runs() -> Result<&'static Vec<SampleRun>, String> {
    MAIN_RUNS
        .get_or_init(|| {
            let mut all = Vec::new();
            for (label, family) in main_families() {
                let g = generate(&family, 0).unwrap();
                all.extend(sample_runs(label, &g, 0..300, big_plan())?);
            }
            Ok(all)
        })
        .as_ref()
        .map_err(Clone::clone)
}

fn sampling_success() -> Outcome {
    let runs = main_runs()?;
    let mut parts = Vec::new();
    for (label, family) in main_families() {
        let g = generate(&family, 0).unwrap();
        let t = census(&g).t as usize;
        let m = m_threshold(1024, t, EPS).map_err(|e| e.to_string())?;
        let mine: Vec<&SampleRun> = runs.iter().filter(|r| r.family == label).collect();
        let hits = mine.iter().filter(|r| r.success_iteration.is_some_and(|i| i as usize <= m)).count();
        let freq = hits as f64 / mine.len() as f64;
        let mut by_iteration = BTreeMap::new();
        for r in &mine {
            *by_iteration.entry(r.success_iteration.unwrap_or(0)).or_insert(0) += 1;
        }
        ensure!(freq >= 0.85, "{label}: success by iteration {m} in {hits}/{} runs", mine.len());
        parts.push(format!("{label}: {hits}/{} by m={m} (success iteration counts {by_iteration:?}, 0 = none)", mine.len()));
    }
    Ok(parts.join("; "))
}

fn sampling_fallback() -> Outcome {
    let mut runs: Vec<SampleRun> = Vec::new();
    for r in main_runs()? {
        runs.push(SampleRun { family: r.family, ..*r });
    }
    let single = generate(&Family::SharedEdge { n: 1024, t: 1 }, 0).unwrap();
    runs.extend(sample_runs("single triangle n=1024", &single, 0..2, big_plan())?);
    let free = generate(&Family::Path { n: 1024 }, 0).unwrap();
    runs.extend(sample_runs("path n=1024", &free, 0..2, big_plan())?);
    let small_plan = PartitionPlan::new(216, 3, true).map_err(|e| e.to_string())?;
    let single = generate(&Family::SharedEdge { n: 216, t: 1 }, 0).unwrap();
    runs.extend(sample_runs("single triangle n=216", &single, 0..20, &small_plan)?);
    for seed in 0..20 {
        let g = generate(&Family::Tree { n: 216 }, seed).unwrap();
        runs.extend(sample_runs("tree n=216", &g, seed..seed + 1, &small_plan)?);
    }
    let false_pos = runs.iter().filter(|r| r.found && (!r.oracle || !r.witness_ok)).count();
    let false_neg = runs.iter().filter(|r| !r.found && r.oracle).count();
    let fell_back = runs.iter().filter(|r| r.fell_back).count();
    if let Some(r) = runs.iter().find(|r| r.found != r.oracle || (r.found && !r.witness_ok)) {
        return Err(format!("{} seed {}: found={} oracle={}", r.family, r.seed, r.found, r.oracle));
    }
    Ok(format!("{} runs, {fell_back} fell back, {false_pos} false positives, {false_neg} false negatives", runs.len()))
}

fn tightness() -> Outcome {
    let (n, s) = (1024usize, 32usize);
    let seeds: Vec<u64> = (0..500).collect();
    // Analytic targets: vertices 1 and 2 both land in a sample with
    // probability s(s-1)/(n(n-1)); disjoint triangles are hit about
    // n t (s/n)^3 times per run.
    let pair = (s * (s - 1)) as f64 / (n * (n - 1)) as f64;
    let expected = (1.0 - pair).powi(n as i32);
    let shared = generate(&Family::SharedEdge { n, t: 512 }, 0).unwrap();
    let a = tightness_experiment(&shared, s, &seeds, false).map_err(|e| e.to_string())?;
    ensure!((0.28..=0.48).contains(&a.frequency()), "shared-edge all-miss {:.3} (analytic {expected:.3})", a.frequency());
    let disjoint = generate(&Family::DisjointTriangles { n, t: 4 }, 0).unwrap();
    let hits = (n * 4) as f64 * (s as f64 / n as f64).powi(3);
    let b = tightness_experiment(&disjoint, s, &seeds, false).map_err(|e| e.to_string())?;
    ensure!(b.frequency() >= 0.75, "disjoint all-miss {:.3} (expected hits {hits:.3})", b.frequency());
    let over = tightness_experiment(&shared, 128, &seeds[..5], true).map_err(|e| e.to_string())?;
    ensure!(over.all_miss == 0, "fallback missed");
    Ok(format!(
        "shared-edge all-miss {:.3} (analytic {expected:.3}), disjoint t=4 all-miss {:.3} (expected hits {hits:.3}), fallback misses 0",
        a.frequency(),
        b.frequency()
    ))
}

fn full_graph_learning() -> Outcome {
    let mut worst = i64::MIN;
    for i in 0..50u64 {
        let n = if i % 2 == 0 { 16 } else { 64 };
        let p = [0.05, 0.1, 0.3, 0.6, 1.0][(i / 2 % 5) as usize];
        let g = generate(&Family::Gnp { n, p }, i).unwrap();
        let mut c = Clique::new(n);
        let views = learn_full_graph(&mut c, &g).map_err(|e| e.to_string())?;
        ensure!(views.iter().all(|v| *v == g), "graph {i}: reconstruction differs");
        let base = 3 * (2 * g.edge_count()).div_ceil(n) as i64;
        let extra = c.rounds() as i64 - base;
        ensure!(extra <= 3, "graph {i}: {} rounds, {base} + {extra}", c.rounds());
        worst = worst.max(extra);
    }
    Ok(format!("50 graphs reconstructed, rounds <= 3ceil(2|E|/n) + {worst}"))
}

/// Sources in blocks of four, each sending `n / 4` messages to each member
/// of its block.
fn block_batch(n: usize) -> MessageBatch {
    let mut batch = MessageBatch::new(n);
    for s in 0..n {
        let block = s / 4 * 4;
        for k in 0..n {
            let d = block + k % 4;
            batch.push(s as Vertex + 1, d as Vertex + 1, clique_core::Word::vertex(k as Vertex % n as Vertex + 1, n));
        }
    }
    batch
}

fn randomized_budget() -> Outcome {
    let mut worst = BTreeMap::new();
    for n in [64usize, 256] {
        for seed in 0..50u64 {
            let batches = [
                ("all-to-all", all_to_all_batch(n)),
                ("shifted", shifted_batch(n, seed)),
                ("random", random_batch(n, n, 1.0, seed)),
                ("blocks", block_batch(n)),
            ];
            for (label, batch) in batches {
                let mut c = Clique::new(n);
                let out = randomized_delivery(&mut c, &batch, seed).map_err(|e| e.to_string())?;
                ensure!(delivered(&out) == multiset(&batch), "{label} n={n} seed={seed}: delivery differs");
                ensure!(c.rounds() <= 8, "{label} n={n} seed={seed}: {} rounds", c.rounds());
                let w = worst.entry(format!("{label} n={n}")).or_insert(0);
                *w = (*w).max(c.rounds());
            }
        }
    }
    let list: Vec<String> = worst.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    Ok(format!("max rounds over 50 seeds: {}", list.join(", ")))
}
