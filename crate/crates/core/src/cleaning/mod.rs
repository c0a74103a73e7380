//! Cleaning cascade applied to extracted paragraph pairs: language filter,
//! minimum length, then near-duplicate removal.

pub mod langid;
pub mod overlap;

use rayon::prelude::*;

pub use langid::{Classification, LangIdError, LanguageIdentifier, LanguageProfile};
pub use overlap::{jaccard, shingle_set, OverlapFilter, OverlapMethod, PairShingles};

use crate::config::PipelineConfig;
use crate::paragraph_alignment::{FunnelCounters, ParagraphPair};

/// Whitespace-delimited token count.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Stateless per-pair filters.
#[derive(Debug, Clone)]
pub struct Cleaner {
    langid: LanguageIdentifier,
    expected_src: String,
    expected_tgt: String,
    min_words: usize,
}

impl Cleaner {
    pub fn new(cfg: &PipelineConfig, langid: LanguageIdentifier) -> Self {
        Self {
            langid,
            expected_src: cfg.expected_src_lang.clone(),
            expected_tgt: cfg.expected_tgt_lang.clone(),
            min_words: cfg.min_words,
        }
    }

    pub fn langid(&self) -> &LanguageIdentifier {
        &self.langid
    }

    fn wrong_language(&self, text: &str, expected: &str) -> bool {
        matches!(self.langid.classify(text).lang, Some(l) if l != expected)
    }

    /// Removes sentence pairs where either side is confidently in another
    /// language. Returns `None` when fewer than two sentence pairs remain.
    pub fn filter_language(&self, mut pair: ParagraphPair) -> Option<ParagraphPair> {
        pair.sentence_pairs.retain(|sp| {
            !self.wrong_language(&sp.src_text, &self.expected_src)
                && !self.wrong_language(&sp.tgt_text, &self.expected_tgt)
        });
        (pair.len() >= 2).then_some(pair)
    }

    /// Both sides must have at least `min_words` words.
    pub fn filter_length(&self, pair: &ParagraphPair) -> bool {
        let src: usize = pair.src_texts().map(word_count).sum();
        let tgt: usize = pair.tgt_texts().map(word_count).sum();
        src >= self.min_words && tgt >= self.min_words
    }
}

/// Language → length → overlap, updating the cleaning counters.
///
/// The two stateless filters and shingle preparation run on the current
/// rayon pool; overlap admission runs sequentially in input order.
pub fn clean_pipeline(
    pairs: Vec<ParagraphPair>,
    cleaner: &Cleaner,
    overlap: &mut OverlapFilter,
    counters: &mut FunnelCounters,
) -> Vec<ParagraphPair> {
    let after_language: Vec<ParagraphPair> = pairs
        .into_par_iter()
        .filter_map(|p| cleaner.filter_language(p))
        .collect();
    counters.pairs_after_language += after_language.len() as u64;
    counters.sentence_pairs_after_language +=
        after_language.iter().map(|p| p.len() as u64).sum::<u64>();

    let after_length: Vec<ParagraphPair> = after_language
        .into_par_iter()
        .filter(|p| cleaner.filter_length(p))
        .collect();
    counters.pairs_after_length += after_length.len() as u64;

    let prepared: Vec<_> = after_length
        .par_iter()
        .map(|p| overlap.prepare(p))
        .collect();
    let kept: Vec<ParagraphPair> = after_length
        .into_iter()
        .zip(prepared)
        .filter_map(|(pair, prep)| overlap.admit(prep).then_some(pair))
        .collect();
    counters.pairs_after_overlap += kept.len() as u64;
    counters.sentence_pairs_cleaned += kept.iter().map(|p| p.len() as u64).sum::<u64>();
    kept
}
