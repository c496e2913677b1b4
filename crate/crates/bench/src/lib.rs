//! Fixtures shared by the benchmarks.

use tropid_core::{MatrixClass, SamplerConfig, TropMatrix};

/// `len` seeded random matrices of dimension `n` in `class`.
pub fn factors(class: MatrixClass, n: usize, len: usize, seed: u64) -> Vec<TropMatrix> {
    let cfg = SamplerConfig::with_seed(seed);
    let mut rng = cfg.trial_rng(0);
    (0..len)
        .map(|_| cfg.sample_from(&mut rng, class, n))
        .collect()
}
