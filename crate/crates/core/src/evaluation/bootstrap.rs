//! Paired bootstrap resampling over per-segment BLEU statistics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bleu::{sum_stats, BleuStats};
use super::EvalError;

pub const MIN_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapResult {
    pub bleu_a: f64,
    pub bleu_b: f64,
    pub n_resamples: usize,
    /// Resamples where B scored at least as high as A.
    pub b_at_least_a: usize,
    pub p_value: f64,
    pub seed: u64,
}

/// One-sided test of "A is better than B". Resample `i` draws its segment
/// indices from a ChaCha8 stream seeded with `seed + i`, so the result does
/// not depend on how resamples are scheduled.
pub fn paired_bootstrap(
    a: &[BleuStats],
    b: &[BleuStats],
    n_resamples: usize,
    seed: u64,
) -> Result<BootstrapResult, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    if n_resamples < MIN_RESAMPLES {
        return Err(EvalError::TooFewResamples {
            n: n_resamples,
            min: MIN_RESAMPLES,
        });
    }
    let n = a.len();
    let b_at_least_a = (0..n_resamples)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let (mut sa, mut sb) = (BleuStats::default(), BleuStats::default());
            for _ in 0..n {
                let j = rng.gen_range(0..n);
                sa += a[j];
                sb += b[j];
            }
            sb.score() >= sa.score()
        })
        .count();
    Ok(BootstrapResult {
        bleu_a: sum_stats(a).score(),
        bleu_b: sum_stats(b).score(),
        n_resamples,
        b_at_least_a,
        p_value: b_at_least_a as f64 / n_resamples as f64,
        seed,
    })
}
