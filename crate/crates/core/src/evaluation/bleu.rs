//! Corpus-level BLEU-4 over pre-tokenized segments, single reference.

use std::collections::HashMap;

use serde::Serialize;

use super::EvalError;

pub const MAX_ORDER: usize = 4;

/// Splits on whitespace, then separates every character that is neither
/// alphanumeric nor whitespace into its own token.
pub fn tokenize_simple(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let mut cur = String::new();
        for ch in word.chars() {
            if ch.is_alphanumeric() {
                cur.push(ch);
            } else {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

pub fn tokenize_whitespace(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

/// Sufficient statistics of one or more segments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BleuStats {
    pub matches: [u64; MAX_ORDER],
    pub totals: [u64; MAX_ORDER],
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl std::ops::AddAssign for BleuStats {
    fn add_assign(&mut self, o: Self) {
        for n in 0..MAX_ORDER {
            self.matches[n] += o.matches[n];
            self.totals[n] += o.totals[n];
        }
        self.hyp_len += o.hyp_len;
        self.ref_len += o.ref_len;
    }
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts
                .entry(w.iter().map(AsRef::as_ref).collect())
                .or_insert(0) += 1;
        }
    }
    counts
}

impl BleuStats {
    pub fn segment<S: AsRef<str>>(hyp: &[S], reference: &[S]) -> Self {
        let mut stats = BleuStats {
            hyp_len: hyp.len() as u64,
            ref_len: reference.len() as u64,
            ..Default::default()
        };
        for n in 1..=MAX_ORDER {
            let h = ngram_counts(hyp, n);
            let r = ngram_counts(reference, n);
            stats.totals[n - 1] = h.values().sum();
            stats.matches[n - 1] = h
                .iter()
                .map(|(g, &c)| c.min(r.get(g).copied().unwrap_or(0)))
                .sum();
        }
        stats
    }

    /// Orders with at least one hypothesis n-gram.
    pub fn effective_order(&self) -> usize {
        self.totals.iter().take_while(|&&t| t > 0).count()
    }

    pub fn brevity_penalty(&self) -> f64 {
        if self.hyp_len == 0 {
            0.0
        } else if self.hyp_len < self.ref_len {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        } else {
            1.0
        }
    }

    /// BLEU in [0, 100]. Orders longer than every hypothesis segment are
    /// left out of the geometric mean; any other zero precision gives 0.
    pub fn score(&self) -> f64 {
        let order = self.effective_order();
        if order == 0 || self.matches[..order].contains(&0) {
            return 0.0;
        }
        let log_mean = (0..order)
            .map(|n| (self.matches[n] as f64 / self.totals[n] as f64).ln())
            .sum::<f64>()
            / order as f64;
        100.0 * self.brevity_penalty() * log_mean.exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BleuReport {
    pub score: f64,
    /// Modified precisions p1..p4; 0 where no hypothesis n-grams exist.
    pub precisions: [f64; MAX_ORDER],
    pub brevity_penalty: f64,
    pub hyp_len: u64,
    pub ref_len: u64,
    pub effective_order: usize,
    pub stats: BleuStats,
}

impl From<BleuStats> for BleuReport {
    fn from(stats: BleuStats) -> Self {
        let precisions = std::array::from_fn(|n| {
            if stats.totals[n] == 0 {
                0.0
            } else {
                stats.matches[n] as f64 / stats.totals[n] as f64
            }
        });
        BleuReport {
            score: stats.score(),
            precisions,
            brevity_penalty: stats.brevity_penalty(),
            hyp_len: stats.hyp_len,
            ref_len: stats.ref_len,
            effective_order: stats.effective_order(),
            stats,
        }
    }
}

pub fn segment_stats<S: AsRef<str> + Sync>(
    hypotheses: &[Vec<S>],
    references: &[Vec<S>],
) -> Result<Vec<BleuStats>, EvalError> {
    use rayon::prelude::*;
    if hypotheses.len() != references.len() {
        return Err(EvalError::LengthMismatch {
            left: hypotheses.len(),
            right: references.len(),
        });
    }
    if hypotheses.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    Ok(hypotheses
        .par_iter()
        .zip(references)
        .map(|(h, r)| BleuStats::segment(h, r))
        .collect())
}

pub fn sum_stats<'a>(stats: impl IntoIterator<Item = &'a BleuStats>) -> BleuStats {
    let mut total = BleuStats::default();
    for s in stats {
        total += *s;
    }
    total
}

pub fn bleu<S: AsRef<str> + Sync>(
    hypotheses: &[Vec<S>],
    references: &[Vec<S>],
) -> Result<BleuReport, EvalError> {
    Ok(sum_stats(&segment_stats(hypotheses, references)?).into())
}
