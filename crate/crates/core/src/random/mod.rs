//! Randomized triangle detection by sampling induced subgraphs.
//!
//! In iteration `m` every node draws a uniform set `C_i` of `s_m` vertices,
//! sends the member list to each member, gets back each member's neighbors
//! inside `C_i` and looks for a triangle in the induced subgraph. `s`
//! starts at `ceil(sqrt(n))` and doubles; past the cap the deterministic
//! partition algorithm takes over.

pub mod stats;

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::general::{Detection, PartitionPlan};
use crate::graph::{Graph, SubgraphPattern, Vertex};
use crate::local::LocalGraph;
use crate::routing::{relay_bulk, MessageBatch};
use crate::runtime::{node_rng, Clique, Word};
use crate::sparse::announce;

fn check_eps(eps: f64, upper: f64) -> Result<()> {
    if eps.is_nan() || eps <= 0.0 || eps >= upper {
        return Err(Error::InvalidParameter("epsilon outside its domain"));
    }
    Ok(())
}

/// Critical sample size
/// `max(2 n^(2/3) t^(-1/3) ln^(1/3)(2/eps), 2 sqrt(n ln(2/eps)))`.
pub fn s_threshold(n: usize, t: usize, eps: f64) -> Result<f64> {
    if n < 2 || t == 0 {
        return Err(Error::InvalidParameter("need n >= 2 and t >= 1"));
    }
    check_eps(eps, 2.0)?;
    let n = n as f64;
    let l = libm::log(2.0 / eps);
    let scattered = 2.0 * libm::cbrt(n * n) * libm::cbrt(l / t as f64);
    let clustered = 2.0 * libm::sqrt(n * l);
    Ok(scattered.max(clustered))
}

/// First iteration whose sample size reaches [`s_threshold`].
pub fn m_threshold(n: usize, t: usize, eps: f64) -> Result<usize> {
    let s = s_threshold(n, t, eps)?;
    let ratio = (s / initial_sample_size(n) as f64).max(1.0);
    Ok(libm::ceil(libm::log2(ratio)) as usize + 1)
}

/// Sample-size cap of the distinguisher,
/// `2 max(2 n^(2/3) t0^(-1/3) ln^(1/3)(1/eps), 2 sqrt(n ln(1/eps)))`.
pub fn distinguisher_cap(n: usize, t0: usize, eps: f64) -> Result<f64> {
    if n < 2 || t0 == 0 {
        return Err(Error::InvalidParameter("need n >= 2 and t0 >= 1"));
    }
    check_eps(eps, 1.0)?;
    let n = n as f64;
    let l = libm::log(1.0 / eps);
    let scattered = 2.0 * libm::cbrt(n * n) * libm::cbrt(l / t0 as f64);
    let clustered = 2.0 * libm::sqrt(n * l);
    Ok(2.0 * scattered.max(clustered))
}

pub fn initial_sample_size(n: usize) -> usize {
    crate::sparse::decomposition::ceil_sqrt(n).max(1)
}

/// Round wall: the unpacked partition algorithm's round bound
/// `2 ceil(3 n_eff^(1/3)) + 1`.
pub fn default_wall(n: usize) -> u32 {
    let mut side = 1usize;
    while side * side * side < n {
        side += 1;
    }
    (2 * 3 * side + 1) as u32
}

/// The sample of `node` in iteration `m`, ascending.
pub fn draw_sample(seed: u64, node: Vertex, m: u32, n: usize, s: usize) -> Vec<Vertex> {
    let mut rng = node_rng(seed, node, m);
    let mut c: Vec<Vertex> = sample(&mut rng, n, s.min(n)).into_iter().map(|v| v as Vertex + 1).collect();
    c.sort_unstable();
    c
}

/// A triangle inside the subgraph of `g` induced by `c`.
pub fn induced_triangle(g: &Graph, c: &[Vertex]) -> Option<[Vertex; 3]> {
    let mut local = LocalGraph::new();
    for &j in c {
        for &k in g.neighbors(j) {
            if k > j && c.binary_search(&k).is_ok() {
                local.add_edge(j, k);
            }
        }
    }
    local.finish();
    local.find_triangle()
}

/// Outcome of iteration `m` at sample size `s` without any communication:
/// the lowest node whose induced sample holds a triangle, with it.
pub fn sampling_outcome(g: &Graph, seed: u64, m: u32, s: usize) -> Option<(Vertex, [Vertex; 3])> {
    let n = g.n();
    g.vertices()
        .find_map(|i| induced_triangle(g, &draw_sample(seed, i, m, n, s)).map(|t| (i, t)))
}

/// How the sampling loop is bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    /// Largest sample size that is still sampled.
    pub cap: f64,
    /// Stop sampling once this many rounds are spent.
    pub wall: Option<u32>,
    /// Run the partition algorithm when sampling stops without success.
    pub fallback: bool,
    /// Use bit arrays in the fallback.
    pub packed_fallback: bool,
}

impl SampleConfig {
    /// Cap `n^(2/3)`, the default wall, packed fallback.
    pub fn tri_sample(n: usize) -> Self {
        SampleConfig {
            cap: libm::cbrt((n * n) as f64),
            wall: Some(default_wall(n)),
            fallback: true,
            packed_fallback: true,
        }
    }

    pub fn distinguisher(n: usize, t0: usize, eps: f64) -> Result<Self> {
        Ok(SampleConfig {
            cap: distinguisher_cap(n, t0, eps)?.min(n as f64),
            wall: None,
            fallback: false,
            packed_fallback: false,
        })
    }
}

/// One sampling iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleRound {
    /// 1-based.
    pub iteration: u32,
    pub s: usize,
    pub rounds: u32,
    pub found: bool,
    /// Largest number of samples any single vertex belongs to.
    pub max_membership: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub detection: Detection,
    pub rounds: Vec<SampleRound>,
    /// Iteration in which sampling found a triangle.
    pub success_iteration: Option<u32>,
    pub fell_back: bool,
    pub wall_hit: bool,
}

/// Sampling with the default configuration.
pub fn tri_sample(clique: &mut Clique, g: &Graph, seed: u64) -> Result<SampleReport> {
    run_sampling(clique, g, seed, &SampleConfig::tri_sample(g.n()), None)
}

/// The sampling loop. `plan` may supply a prebuilt fallback schedule.
pub fn run_sampling(
    clique: &mut Clique,
    g: &Graph,
    seed: u64,
    config: &SampleConfig,
    plan: Option<&PartitionPlan>,
) -> Result<SampleReport> {
    let n = g.n();
    if clique.n() != n {
        return Err(Error::InvalidParameter("graph and clique sizes differ"));
    }
    let start = clique.rounds();
    let mut report = SampleReport {
        detection: Detection::none(),
        rounds: Vec::new(),
        success_iteration: None,
        fell_back: false,
        wall_hit: false,
    };
    let mut s = initial_sample_size(n);
    let mut m = 1u32;
    while s as f64 <= config.cap {
        if let Some(wall) = config.wall {
            if clique.rounds() - start >= wall {
                report.wall_hit = true;
                break;
            }
        }
        let before = clique.rounds();
        let (detection, max_membership) = sampling_iteration(clique, g, seed, m, s)?;
        let found = detection.found;
        report.rounds.push(SampleRound {
            iteration: m,
            s,
            rounds: clique.rounds() - before,
            found,
            max_membership,
        });
        if found {
            report.detection = detection;
            report.success_iteration = Some(m);
            return Ok(report);
        }
        s *= 2;
        m += 1;
    }
    if config.fallback {
        report.fell_back = true;
        let built;
        let plan = match plan {
            Some(p) => p,
            None => {
                built = PartitionPlan::new(n, 3, config.packed_fallback)?;
                &built
            }
        };
        report.detection = plan.detect(clique, g, &SubgraphPattern::triangle())?;
    }
    Ok(report)
}

/// One iteration: member lists out, induced neighbor lists back, local
/// search, one announcement round.
fn sampling_iteration(clique: &mut Clique, g: &Graph, seed: u64, m: u32, s: usize) -> Result<(Detection, usize)> {
    let n = g.n();
    let samples: Vec<Vec<Vertex>> = g.vertices().map(|i| draw_sample(seed, i, m, n, s)).collect();
    let mut membership = vec![0usize; n];
    let mut lists = MessageBatch::new(n);
    for (i, c) in samples.iter().enumerate() {
        for &j in c {
            membership[j as usize - 1] += 1;
            for &k in c {
                lists.push(i as Vertex + 1, j, Word::vertex(k, n));
            }
        }
    }
    let relay_seed = seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(u64::from(2 * m + 1));
    let got = relay_bulk(clique, &lists, relay_seed)?;

    // Member j answers sample C_i with its neighbors inside C_i.
    let mut replies = MessageBatch::new(n);
    for (j, inbox) in got.iter().enumerate() {
        let me = j as Vertex + 1;
        let mut by_source: Vec<(Vertex, Vertex)> = inbox.iter().map(|d| (d.src, d.word.as_vertex())).collect();
        by_source.sort_unstable();
        for &(i, k) in &by_source {
            if g.has_edge(me, k) {
                replies.push(me, i, Word::vertex(k, n));
            }
        }
    }
    let back = relay_bulk(clique, &replies, relay_seed.rotate_left(17))?;

    let mut detection = Detection::none();
    let mut finders = vec![false; n];
    for (i, inbox) in back.iter().enumerate() {
        let mut local = LocalGraph::new();
        for d in inbox {
            local.add_edge(d.src, d.word.as_vertex());
        }
        local.finish();
        if let Some(t) = local.find_triangle() {
            finders[i] = true;
            if !detection.found {
                detection = Detection {
                    found: true,
                    witness: Some(t.to_vec()),
                    finder: Some(i as Vertex + 1),
                };
            }
        }
    }
    announce(clique, &finders)?;
    Ok((detection, membership.into_iter().max().unwrap_or(0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    HasTriangle,
    TriangleFree,
}

/// Tells triangle-free graphs from graphs with at least `t0` triangles;
/// wrong with probability at most `eps`, and only towards
/// [`Verdict::TriangleFree`].
pub fn distinguisher(clique: &mut Clique, g: &Graph, t0: usize, eps: f64, seed: u64) -> Result<(Verdict, SampleReport)> {
    let config = SampleConfig::distinguisher(g.n(), t0, eps)?;
    let report = run_sampling(clique, g, seed, &config, None)?;
    let verdict = if report.detection.found {
        Verdict::HasTriangle
    } else {
        Verdict::TriangleFree
    };
    Ok((verdict, report))
}

/// Fraction of seeds in which a single iteration at sample size `s` finds
/// nothing at any node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tightness {
    pub runs: usize,
    pub all_miss: usize,
}

impl Tightness {
    pub fn frequency(&self) -> f64 {
        self.all_miss as f64 / self.runs.max(1) as f64
    }
}

/// Runs one sampling iteration at `s` for every seed. Above the
/// `n^(2/3)` cap the deterministic fallback answers instead when
/// `fallback` is set; it is deterministic, so it runs once.
pub fn tightness_experiment(g: &Graph, s: usize, seeds: &[u64], fallback: bool) -> Result<Tightness> {
    let n = g.n();
    if s == 0 || s > n {
        return Err(Error::InvalidParameter("sample size must be in 1..=n"));
    }
    if s as f64 > libm::cbrt((n * n) as f64) {
        if !fallback {
            return Err(Error::InvalidParameter("sample size above the sampling cap"));
        }
        let mut clique = Clique::new(n);
        let found = PartitionPlan::new(n, 3, true)?
            .detect(&mut clique, g, &SubgraphPattern::triangle())?
            .found;
        return Ok(Tightness {
            runs: seeds.len(),
            all_miss: if found { 0 } else { seeds.len() },
        });
    }
    let all_miss = seeds
        .iter()
        .filter(|&&seed| sampling_outcome(g, seed, 1, s).is_none())
        .count();
    Ok(Tightness {
        runs: seeds.len(),
        all_miss,
    })
}
