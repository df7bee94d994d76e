//! Probability helpers for the sampling analysis.

use rand::Rng;

use crate::runtime::node_rng;

/// Probability that a fixed `r`-set lies inside a uniform `s`-subset of
/// `n` vertices: `prod_{q < r} (s - q) / (n - q)`.
pub fn subset_choice_probability(n: usize, s: usize, r: usize) -> f64 {
    if r > s {
        return 0.0;
    }
    (0..r).map(|q| (s - q) as f64 / (n - q) as f64).product()
}

/// The interval `[(s / (n - s + r))^r, (s / (n - s))^r]` commonly quoted
/// for the probability above. The upper end holds for `s < n`; the lower
/// end exceeds the exact value as soon as `s > r`, so it is not a bound.
pub fn subset_choice_bounds(n: usize, s: usize, r: usize) -> (f64, f64) {
    let lower = libm::pow(s as f64 / (n - s + r) as f64, r as f64);
    let upper = libm::pow(s as f64 / (n - s) as f64, r as f64);
    (lower, upper)
}

/// Upper bound `(1 - p)^n` on the chance that none of `n` independent
/// nodes succeeds when each succeeds with probability `p`.
pub fn all_fail_bound(n: usize, p: f64) -> f64 {
    libm::pow(1.0 - p, n as f64)
}

/// Fraction of `trials` in which none of `n` independent Bernoulli(`p`)
/// nodes succeeds.
pub fn simulate_all_fail(n: usize, p: f64, trials: usize, seed: u64) -> f64 {
    let mut rng = node_rng(seed, 0, 0);
    let failures = (0..trials)
        .filter(|_| (0..n).all(|_| !rng.gen_bool(p)))
        .count();
    failures as f64 / trials as f64
}
