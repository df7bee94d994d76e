use clique_core::general::{d_clique0, tri_partition, Detection};
use clique_core::generate::{generate, Family};
use clique_core::graph::{degeneracy, oracle_contains};
use clique_core::random::stats::{all_fail_bound, simulate_all_fail, subset_choice_bounds, subset_choice_probability};
use clique_core::random::{draw_sample, run_sampling, tri_sample, SampleConfig};
use clique_core::sparse::{decomposition_trace, detect_diameter_d, tri_arbor, tri_neighbors, ArborVariant, DecompositionTrace};
use clique_core::{Clique, Graph, SubgraphPattern};
use proptest::prelude::*;

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    generate(&Family::Gnp { n, p }, seed).unwrap()
}

fn witness_ok(g: &Graph, p: &SubgraphPattern, d: &Detection) -> bool {
    if !d.found {
        return d.witness.is_none();
    }
    let w = d.witness.as_ref().unwrap();
    w.len() == p.d() && p.edges().iter().all(|&(a, b)| g.has_edge(w[a as usize - 1], w[b as usize - 1]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_agrees_with_oracle(n in 4usize..30, p in 0.0f64..0.4, seed: u64, packed: bool) {
        let g = gnp(n, p, seed);
        let tri = SubgraphPattern::triangle();
        let d = tri_partition(&mut Clique::new(n), &g, packed).unwrap();
        prop_assert_eq!(d.found, oracle_contains(&g, &tri));
        prop_assert!(witness_ok(&g, &tri, &d));
    }

    #[test]
    fn four_vertex_patterns_agree(n in 4usize..20, p in 0.1f64..0.6, seed: u64, which in 0usize..3) {
        let g = gnp(n, p, seed);
        let pat = [SubgraphPattern::clique(4), SubgraphPattern::cycle(4), SubgraphPattern::path(4)][which].clone();
        let d = d_clique0(&mut Clique::new(n), &g, &pat, false).unwrap();
        prop_assert_eq!(d.found, oracle_contains(&g, &pat));
        prop_assert!(witness_ok(&g, &pat, &d));
        let d = detect_diameter_d(&mut Clique::new(n), &g, &pat).unwrap();
        prop_assert_eq!(d.found, oracle_contains(&g, &pat));
        prop_assert!(witness_ok(&g, &pat, &d));
    }

    #[test]
    fn neighborhood_exchange_agrees(n in 3usize..30, p in 0.0f64..0.3, seed: u64) {
        let g = gnp(n, p, seed);
        let tri = SubgraphPattern::triangle();
        let d = tri_neighbors(&mut Clique::new(n), &g).unwrap();
        prop_assert_eq!(d.found, oracle_contains(&g, &tri));
        prop_assert!(witness_ok(&g, &tri, &d));
    }

    #[test]
    fn arbor_variants_agree(n in 4usize..40, k in 1usize..4, extra in 0usize..3, seed: u64) {
        let mut g = generate(&Family::ForestUnion { n, k }, seed).unwrap();
        for i in 0..extra as u32 {
            let (u, v) = (1 + i, n as u32 - i);
            if u < v && !g.has_edge(u, v) {
                g = g.with_edge(u, v).unwrap();
            }
        }
        let a = degeneracy(&g);
        let tri = SubgraphPattern::triangle();
        let truth = oracle_contains(&g, &tri);
        for variant in [
            ArborVariant::Sequential { a },
            ArborVariant::Parallelized { a },
            ArborVariant::BaseChange { a },
            ArborVariant::Uniform,
        ] {
            let r = tri_arbor(&mut Clique::new(n), &g, variant).unwrap();
            prop_assert_eq!(r.detection.found, truth);
            prop_assert!(witness_ok(&g, &tri, &r.detection));
            halving_holds(&r.trace, n)?;
            prop_assert!(r.delegates_per_iteration.iter().sum::<usize>() <= 2 * n);
            if variant.is_merged() {
                prop_assert!(r.max_delegate_roles <= 2);
            }
        }
    }
}

fn halving_holds(trace: &DecompositionTrace, n: usize) -> Result<(), TestCaseError> {
    prop_assert!(trace.iteration_count() <= DecompositionTrace::iteration_bound(n));
    for it in &trace.iterations {
        prop_assert!(2 * it.low_count() >= it.active.len());
    }
    Ok(())
}

#[test]
fn local_trace_halves() {
    let g = generate(&Family::Star { n: 64 }, 0).unwrap();
    let t = decomposition_trace(&g, ArborVariant::Uniform.rule()).unwrap();
    halving_holds(&t, 64).unwrap();
}

#[test]
fn sampling_is_one_sided() {
    for seed in 0..20 {
        let g = gnp(64, 0.05, seed);
        let tri = SubgraphPattern::triangle();
        let r = tri_sample(&mut Clique::new(64), &g, seed).unwrap();
        assert_eq!(r.detection.found, oracle_contains(&g, &tri));
        assert!(witness_ok(&g, &tri, &r.detection));
    }
}

#[test]
fn sampling_without_fallback_never_lies() {
    let g = generate(&Family::Cycle { n: 50 }, 0).unwrap();
    let config = SampleConfig { cap: 50.0, wall: None, fallback: false, packed_fallback: false };
    let r = run_sampling(&mut Clique::new(50), &g, 4, &config, None).unwrap();
    assert!(!r.detection.found && !r.fell_back);
}

#[test]
fn subset_frequencies_respect_the_upper_bound() {
    let (n, s, trials) = (40usize, 10usize, 20_000u64);
    for r in 1..=3usize {
        let exact = subset_choice_probability(n, s, r);
        let (_, upper) = subset_choice_bounds(n, s, r);
        let hits = (0..trials)
            .filter(|&t| draw_sample(t, 1, 1, n, s).iter().take_while(|&&v| v as usize <= r).count() == r)
            .count() as f64;
        let freq = hits / trials as f64;
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!((freq - exact).abs() <= 3.0 * se + 1e-9, "r={r} freq={freq} exact={exact}");
        assert!(freq <= upper + 3.0 * se);
    }
}

#[test]
fn printed_lower_bound_fails_above_r() {
    let (lower, _) = subset_choice_bounds(100, 10, 1);
    assert!(lower > subset_choice_probability(100, 10, 1));
}

#[test]
fn node_successes_amplify() {
    let (n, eps) = (200usize, 0.1f64);
    let p = (2.0 / eps).ln() / n as f64;
    assert!(all_fail_bound(n, p) <= eps / 2.0);
    let freq = simulate_all_fail(n, p, 20_000, 9);
    assert!(freq <= eps / 2.0 + 3.0 * (eps / 2.0 / 20_000.0f64).sqrt());
}
