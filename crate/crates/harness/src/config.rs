//! Experiment settings. The TOML file format uses the same keys as the
//! command-line flags (with `-` spelled `_`), and flags override the file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use clique_core::generate::Family;
use clique_core::sparse::ArborVariant;
use clique_core::SubgraphPattern;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// Algorithm id, e.g. tri-partition or tri-arbor:uniform.
    #[arg(long)]
    pub algo: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Generator family: empty, complete, path, cycle, star, tree, gnp,
    /// shared-edge, disjoint, forest, twin-hubs.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Forest count for the forest family.
    #[arg(long)]
    pub k: Option<usize>,
    /// Arboricity bound for tri-arbor; defaults to the degeneracy.
    #[arg(long)]
    pub a: Option<usize>,
    /// Fixed sample size for the tightness experiment.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated seeds, or a range `a..b`.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub t0: Option<usize>,
    /// triangle, clique:D, cycle:D or path:D.
    #[arg(long)]
    pub pattern: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub packed: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub max_rounds: Option<u32>,
}

impl Flags {
    pub fn load(path: &Path) -> Result<Flags> {
        let text = fs::read_to_string(path).map_err(HarnessError::io(path))?;
        toml::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` win.
    pub fn merged(self, over: Flags) -> Flags {
        Flags {
            algo: over.algo.or(self.algo),
            graph: over.graph.or(self.graph),
            family: over.family.or(self.family),
            n: over.n.or(self.n),
            t: over.t.or(self.t),
            p: over.p.or(self.p),
            k: over.k.or(self.k),
            a: over.a.or(self.a),
            s: over.s.or(self.s),
            seed: over.seed.or(self.seed),
            seeds: over.seeds.or(self.seeds),
            eps: over.eps.or(self.eps),
            t0: over.t0.or(self.t0),
            pattern: over.pattern.or(self.pattern),
            packed: over.packed || self.packed,
            out: over.out.or(self.out),
            max_rounds: over.max_rounds.or(self.max_rounds),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArborKind {
    Seq,
    Par,
    Base,
    Uniform,
}

impl ArborKind {
    pub fn variant(self, a: usize) -> ArborVariant {
        match self {
            ArborKind::Seq => ArborVariant::Sequential { a },
            ArborKind::Par => ArborVariant::Parallelized { a },
            ArborKind::Base => ArborVariant::BaseChange { a },
            ArborKind::Uniform => ArborVariant::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    TriPartition,
    DClique0,
    TriNeighbors,
    DiameterD,
    TriArbor(ArborKind),
    TriSample,
    Distinguisher,
    Tightness,
    LearnGraph,
}

impl Algorithm {
    pub fn parse(id: &str) -> Result<Algorithm> {
        Ok(match id {
            "tri-partition" => Algorithm::TriPartition,
            "d-clique0" => Algorithm::DClique0,
            "tri-neighbors" => Algorithm::TriNeighbors,
            "diameter-d" => Algorithm::DiameterD,
            "tri-arbor:seq" => Algorithm::TriArbor(ArborKind::Seq),
            "tri-arbor:par" => Algorithm::TriArbor(ArborKind::Par),
            "tri-arbor:base" => Algorithm::TriArbor(ArborKind::Base),
            "tri-arbor:uniform" => Algorithm::TriArbor(ArborKind::Uniform),
            "tri-sample" => Algorithm::TriSample,
            "distinguisher" => Algorithm::Distinguisher,
            "tightness" => Algorithm::Tightness,
            "learn-graph" => Algorithm::LearnGraph,
            other => return Err(HarnessError::Config(format!("unknown algorithm {other:?}"))),
        })
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Algorithm::TriSample | Algorithm::Distinguisher | Algorithm::Tightness)
    }

    /// Whether the run looks for a pattern other than a triangle.
    pub fn takes_pattern(self) -> bool {
        matches!(self, Algorithm::DClique0 | Algorithm::DiameterD)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Family(Family),
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub flags: Flags,
    pub algorithm: Algorithm,
    pub source: GraphSource,
    pub seeds: Vec<u64>,
    pub pattern: SubgraphPattern,
    pub eps: f64,
}

fn need<T: Copy>(value: Option<T>, what: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| HarnessError::Config(format!("family {family} needs --{what}")))
}

pub fn parse_family(flags: &Flags) -> Result<Family> {
    let name = flags.family.as_deref().unwrap_or_default();
    let n = need(flags.n, "n", name)?;
    Ok(match name {
        "empty" => Family::Empty { n },
        "complete" => Family::Complete { n },
        "path" => Family::Path { n },
        "cycle" => Family::Cycle { n },
        "star" => Family::Star { n },
        "tree" => Family::Tree { n },
        "gnp" => Family::Gnp { n, p: need(flags.p, "p", name)? },
        "shared-edge" => Family::SharedEdge { n, t: need(flags.t, "t", name)? },
        "disjoint" => Family::DisjointTriangles { n, t: need(flags.t, "t", name)? },
        "forest" => Family::ForestUnion { n, k: need(flags.k, "k", name)? },
        "twin-hubs" => Family::TwinHubs { n },
        other => return Err(HarnessError::Config(format!("unknown family {other:?}"))),
    })
}

pub fn parse_pattern(spec: &str) -> Result<SubgraphPattern> {
    let bad = || HarnessError::Config(format!("bad pattern {spec:?}"));
    if spec == "triangle" {
        return Ok(SubgraphPattern::triangle());
    }
    let (kind, d) = spec.split_once(':').ok_or_else(bad)?;
    let d: usize = d.parse().map_err(|_| bad())?;
    if !(2..=8).contains(&d) {
        return Err(bad());
    }
    Ok(match kind {
        "clique" => SubgraphPattern::clique(d),
        "cycle" if d >= 3 => SubgraphPattern::cycle(d),
        "path" => SubgraphPattern::path(d),
        _ => return Err(bad()),
    })
}

pub fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let bad = || HarnessError::Config(format!("bad seed list {spec:?}"));
    if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..b).collect());
    }
    spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

impl ExperimentConfig {
    pub fn from_flags(flags: Flags) -> Result<ExperimentConfig> {
        let algo = flags.algo.as_deref().ok_or_else(|| HarnessError::Config("missing --algo".into()))?;
        let algorithm = Algorithm::parse(algo)?;
        let source = match (&flags.graph, &flags.family) {
            (Some(path), None) => {
                if !path.is_file() {
                    return Err(HarnessError::Config(format!("graph file {} not found", path.display())));
                }
                GraphSource::File(path.clone())
            }
            (None, Some(_)) => GraphSource::Family(parse_family(&flags)?),
            _ => return Err(HarnessError::Config("give exactly one of --graph and --family".into())),
        };
        let mut seeds = match (&flags.seeds, flags.seed) {
            (Some(list), _) => parse_seeds(list)?,
            (None, Some(s)) => vec![s],
            (None, None) => Vec::new(),
        };
        if seeds.is_empty() {
            if algorithm.is_randomized() {
                return Err(HarnessError::Config(format!("{algo} needs --seed or --seeds")));
            }
            seeds.push(0);
        }
        let pattern = match &flags.pattern {
            Some(p) => parse_pattern(p)?,
            None if algorithm == Algorithm::DClique0 => SubgraphPattern::clique(4),
            None => SubgraphPattern::triangle(),
        };
        if !algorithm.takes_pattern() && pattern != SubgraphPattern::triangle() {
            return Err(HarnessError::Config(format!("{algo} only detects triangles")));
        }
        let eps = flags.eps.unwrap_or(0.1);
        if !(eps > 0.0 && eps < 1.0) {
            return Err(HarnessError::Config("--eps must lie in (0, 1)".into()));
        }
        match algorithm {
            Algorithm::Distinguisher if flags.t0.is_none() => {
                return Err(HarnessError::Config("distinguisher needs --t0".into()));
            }
            Algorithm::Tightness if flags.s.is_none() => {
                return Err(HarnessError::Config("tightness needs --s".into()));
            }
            _ => {}
        }
        Ok(ExperimentConfig {
            flags,
            algorithm,
            source,
            seeds,
            pattern,
            eps,
        })
    }
}
