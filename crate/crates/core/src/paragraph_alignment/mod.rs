//! Consolidation of sentence alignments into parallel paragraphs.
//!
//! Extraction runs, in order: one-to-one link filter → paragraph
//! consolidation under mutual exclusivity → monotonicity veto → repeated-pair
//! removal → singleton removal. The [`oracle`] module re-derives the same
//! output by exhaustive enumeration.

mod extract;
pub mod oracle;
mod types;

pub use extract::{
    admit_candidates, check_monotonic, consolidate, dedup_key, dedupe, drop_singletons,
    extract_candidates, extract_pipeline, filter_one_to_one, Deduper, OneToOneLink,
};
pub use oracle::oracle_extract;
pub use types::{FunnelCounters, ParagraphPair, ParagraphRecord, SentencePair};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlignError {
    #[error("pair {pair_id}: {side} sentence index {index} out of range ({len} sentences)")]
    IndexOutOfRange {
        pair_id: String,
        side: &'static str,
        index: usize,
        len: usize,
    },
    #[error("{side} side has {sentences} sentences, oracle limit is {max}")]
    InstanceTooLarge {
        side: &'static str,
        sentences: usize,
        max: usize,
    },
}

/// Direct check of every [`ParagraphPair`] invariant plus exclusivity
/// against the retained one-to-one links. Returns a description of the first
/// violation.
pub fn check_pair_invariants(
    pair: &ParagraphPair,
    src: &crate::segmentation::SegmentedDocument,
    tgt: &crate::segmentation::SegmentedDocument,
    one_to_one: &[OneToOneLink],
) -> Result<(), String> {
    if pair.len() < 2 {
        return Err(format!("{}: fewer than 2 sentence pairs", pair.id()));
    }
    for w in pair.sentence_pairs.windows(2) {
        if w[0].src_idx >= w[1].src_idx || w[0].tgt_idx >= w[1].tgt_idx {
            return Err(format!("{}: not strictly monotonic", pair.id()));
        }
    }
    let mut src_seen = std::collections::HashSet::new();
    let mut tgt_seen = std::collections::HashSet::new();
    for sp in &pair.sentence_pairs {
        if !src_seen.insert(sp.src_idx) || !tgt_seen.insert(sp.tgt_idx) {
            return Err(format!("{}: duplicate sentence index", pair.id()));
        }
        if sp.src_text.trim().is_empty() || sp.tgt_text.trim().is_empty() {
            return Err(format!("{}: empty sentence text", pair.id()));
        }
    }
    for link in one_to_one {
        let in_p = src.para_of(link.src) == Some(pair.src_para);
        let in_q = tgt.para_of(link.tgt) == Some(pair.tgt_para);
        if in_p != in_q {
            return Err(format!(
                "{}: link ({}, {}) leaves the pair",
                pair.id(),
                link.src,
                link.tgt
            ));
        }
    }
    Ok(())
}
