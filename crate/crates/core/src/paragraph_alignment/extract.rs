use std::collections::{BTreeMap, HashSet};

use sha2::{Digest, Sha256};

use super::{AlignError, FunnelCounters, ParagraphPair, SentencePair};
use crate::ingest::AlignmentLink;
use crate::segmentation::SegmentedDocument;

/// A link with exactly one sentence on each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneToOneLink {
    pub src: usize,
    pub tgt: usize,
    pub score: f64,
}

/// Keeps links with exactly one source and one target sentence, in order.
pub fn filter_one_to_one(links: &[AlignmentLink]) -> Vec<OneToOneLink> {
    links
        .iter()
        .filter(|l| l.is_one_to_one())
        .map(|l| OneToOneLink {
            src: l.src_indices[0],
            tgt: l.tgt_indices[0],
            score: l.score,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Touch {
    None,
    One(usize),
    Many,
}

impl Touch {
    fn add(&mut self, para: usize) {
        *self = match *self {
            Touch::None => Touch::One(para),
            Touch::One(p) if p == para => Touch::One(p),
            _ => Touch::Many,
        };
    }
}

/// Groups one-to-one links into paragraph pairs under mutual exclusivity.
///
/// `(P, Q)` is emitted iff every link leaving P lands in Q and every link
/// entering Q comes from P. Sentences of P or Q without a link are left out
/// of the pair. Pairs come out ordered by `(src_para, tgt_para)`, sentence
/// pairs ordered by `(src_idx, tgt_idx)`.
pub fn consolidate(
    pair_id: &str,
    src: &SegmentedDocument,
    tgt: &SegmentedDocument,
    links: &[OneToOneLink],
) -> Result<Vec<ParagraphPair>, AlignError> {
    let mut src_touch = vec![Touch::None; src.paragraphs.len()];
    let mut tgt_touch = vec![Touch::None; tgt.paragraphs.len()];
    let mut groups: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for link in links {
        let p = src
            .para_of(link.src)
            .ok_or_else(|| AlignError::IndexOutOfRange {
                pair_id: pair_id.to_string(),
                side: "source",
                index: link.src,
                len: src.num_sentences(),
            })?;
        let q = tgt
            .para_of(link.tgt)
            .ok_or_else(|| AlignError::IndexOutOfRange {
                pair_id: pair_id.to_string(),
                side: "target",
                index: link.tgt,
                len: tgt.num_sentences(),
            })?;
        src_touch[p].add(q);
        tgt_touch[q].add(p);
        groups.entry((p, q)).or_default().push((link.src, link.tgt));
    }

    let mut out = Vec::new();
    for ((p, q), mut members) in groups {
        if src_touch[p] != Touch::One(q) || tgt_touch[q] != Touch::One(p) {
            continue;
        }
        members.sort_unstable();
        let sentence_pairs = members
            .into_iter()
            .map(|(s, t)| SentencePair {
                src_idx: s,
                tgt_idx: t,
                src_text: src.sentence(s).expect("index checked").to_string(),
                tgt_text: tgt.sentence(t).expect("index checked").to_string(),
            })
            .collect();
        out.push(ParagraphPair {
            pair_id: pair_id.to_string(),
            src_para: src.paragraphs[p].index,
            tgt_para: tgt.paragraphs[q].index,
            sentence_pairs,
        });
    }
    Ok(out)
}

/// True iff both source and target indices strictly increase.
///
/// Pairs are built sorted by source index, so this is the crossing check;
/// requiring the source side to be strict as well rejects a sentence that
/// appears in two links.
pub fn check_monotonic(pair: &ParagraphPair) -> bool {
    pair.sentence_pairs
        .windows(2)
        .all(|w| w[0].src_idx < w[1].src_idx && w[0].tgt_idx < w[1].tgt_idx)
}

/// Lowercased, whitespace-collapsed `src TAB tgt` text of a pair.
pub fn dedup_key(pair: &ParagraphPair) -> String {
    fn side<'a>(texts: impl Iterator<Item = &'a str>) -> String {
        let joined = texts.collect::<Vec<_>>().join(" ").to_lowercase();
        joined.split_whitespace().collect::<Vec<_>>().join(" ")
    }
    format!("{}\t{}", side(pair.src_texts()), side(pair.tgt_texts()))
}

/// Corpus-wide seen-set for repeated paragraph pairs. Keys are stored as
/// truncated SHA-256 digests of [`dedup_key`].
#[derive(Debug, Default)]
pub struct Deduper {
    seen: HashSet<[u8; 16]>,
}

impl Deduper {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true the first time a key is seen.
    pub fn admit(&mut self, pair: &ParagraphPair) -> bool {
        let digest = Sha256::digest(dedup_key(pair).as_bytes());
        let mut key = [0u8; 16];
        key.copy_from_slice(&digest[..16]);
        self.seen.insert(key)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

/// Drops repeated pairs; the first occurrence wins.
pub fn dedupe(pairs: Vec<ParagraphPair>, seen: &mut Deduper) -> Vec<ParagraphPair> {
    pairs.into_iter().filter(|p| seen.admit(p)).collect()
}

/// Keeps pairs with at least two sentence pairs.
pub fn drop_singletons(pairs: Vec<ParagraphPair>) -> Vec<ParagraphPair> {
    pairs.into_iter().filter(|p| p.len() >= 2).collect()
}

/// The per-document, stateless half of extraction: one-to-one filter,
/// consolidation and the monotonicity veto.
pub fn extract_candidates(
    src: &SegmentedDocument,
    tgt: &SegmentedDocument,
    pair_id: &str,
    links: &[AlignmentLink],
    counters: &mut FunnelCounters,
) -> Result<Vec<ParagraphPair>, AlignError> {
    counters.links_input += links.len() as u64;
    let one_to_one = filter_one_to_one(links);
    counters.links_one_to_one += one_to_one.len() as u64;
    let candidates = consolidate(pair_id, src, tgt, &one_to_one)?;
    counters.pairs_candidate += candidates.len() as u64;
    let monotonic: Vec<_> = candidates.into_iter().filter(check_monotonic).collect();
    counters.pairs_after_monotonic += monotonic.len() as u64;
    Ok(monotonic)
}

/// The stateful half: repeated-pair removal then the singleton rule.
/// Callers must feed candidates in a fixed global order.
pub fn admit_candidates(
    candidates: Vec<ParagraphPair>,
    seen: &mut Deduper,
    counters: &mut FunnelCounters,
) -> Vec<ParagraphPair> {
    let unique = dedupe(candidates, seen);
    counters.pairs_after_dedup += unique.len() as u64;
    let kept = drop_singletons(unique);
    counters.pairs_after_singleton += kept.len() as u64;
    counters.sentence_pairs_surviving += kept.iter().map(|p| p.len() as u64).sum::<u64>();
    kept
}

/// Full extraction for one document pair.
pub fn extract_pipeline(
    src: &SegmentedDocument,
    tgt: &SegmentedDocument,
    pair_id: &str,
    links: &[AlignmentLink],
    seen: &mut Deduper,
    counters: &mut FunnelCounters,
) -> Result<Vec<ParagraphPair>, AlignError> {
    let candidates = extract_candidates(src, tgt, pair_id, links, counters)?;
    Ok(admit_candidates(candidates, seen, counters))
}
