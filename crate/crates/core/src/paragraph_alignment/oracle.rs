//! Brute-force reference for [`super::extract_pipeline`].
//!
//! Enumerates every (source paragraph, target paragraph) combination and
//! checks the extraction rules with plain set scans. Slow by construction;
//! only meant for small instances in tests.

use std::collections::BTreeSet;

use super::{AlignError, ParagraphPair, SentencePair};
use crate::ingest::AlignmentLink;
use crate::segmentation::SegmentedDocument;

pub const MAX_SENTENCES: usize = 64;

fn members(doc: &SegmentedDocument, para: usize) -> BTreeSet<usize> {
    doc.paragraphs[para]
        .sentences
        .iter()
        .map(|s| s.index)
        .collect()
}

fn text_of(doc: &SegmentedDocument, index: usize) -> Option<String> {
    for para in &doc.paragraphs {
        for s in &para.sentences {
            if s.index == index {
                return Some(s.text.clone());
            }
        }
    }
    None
}

fn normalize(texts: &[&str]) -> String {
    let mut words = Vec::new();
    for t in texts {
        for w in t.to_lowercase().split_whitespace() {
            words.push(w.to_string());
        }
    }
    words.join(" ")
}

/// Exhaustive extraction for one document pair, output in canonical order.
pub fn oracle_extract(
    src: &SegmentedDocument,
    tgt: &SegmentedDocument,
    pair_id: &str,
    links: &[AlignmentLink],
) -> Result<Vec<ParagraphPair>, AlignError> {
    for (side, doc) in [("source", src), ("target", tgt)] {
        if doc.num_sentences() > MAX_SENTENCES {
            return Err(AlignError::InstanceTooLarge {
                side,
                sentences: doc.num_sentences(),
                max: MAX_SENTENCES,
            });
        }
    }

    let mut one_to_one: Vec<(usize, usize)> = Vec::new();
    for link in links {
        if link.src_indices.len() == 1 && link.tgt_indices.len() == 1 {
            let (s, t) = (link.src_indices[0], link.tgt_indices[0]);
            if text_of(src, s).is_none() {
                return Err(AlignError::IndexOutOfRange {
                    pair_id: pair_id.to_string(),
                    side: "source",
                    index: s,
                    len: src.num_sentences(),
                });
            }
            if text_of(tgt, t).is_none() {
                return Err(AlignError::IndexOutOfRange {
                    pair_id: pair_id.to_string(),
                    side: "target",
                    index: t,
                    len: tgt.num_sentences(),
                });
            }
            one_to_one.push((s, t));
        }
    }

    let mut found = Vec::new();
    for p in 0..src.paragraphs.len() {
        let p_set = members(src, p);
        for q in 0..tgt.paragraphs.len() {
            let q_set = members(tgt, q);
            let from_p: Vec<(usize, usize)> = one_to_one
                .iter()
                .copied()
                .filter(|(s, _)| p_set.contains(s))
                .collect();
            let into_q: Vec<(usize, usize)> = one_to_one
                .iter()
                .copied()
                .filter(|(_, t)| q_set.contains(t))
                .collect();
            if from_p.is_empty() {
                continue;
            }
            let exclusive = from_p.iter().all(|(_, t)| q_set.contains(t))
                && into_q.iter().all(|(s, _)| p_set.contains(s));
            if !exclusive {
                continue;
            }
            let mut links = from_p;
            links.sort();
            let mut monotonic = true;
            for i in 1..links.len() {
                if links[i].0 <= links[i - 1].0 || links[i].1 <= links[i - 1].1 {
                    monotonic = false;
                }
            }
            if !monotonic {
                continue;
            }
            found.push(ParagraphPair {
                pair_id: pair_id.to_string(),
                src_para: src.paragraphs[p].index,
                tgt_para: tgt.paragraphs[q].index,
                sentence_pairs: links
                    .iter()
                    .map(|&(s, t)| SentencePair {
                        src_idx: s,
                        tgt_idx: t,
                        src_text: text_of(src, s).unwrap(),
                        tgt_text: text_of(tgt, t).unwrap(),
                    })
                    .collect(),
            });
        }
    }

    // repeated pairs: first in (src_para, tgt_para) order wins, then singletons go
    found.sort_by_key(|p| (p.src_para, p.tgt_para));
    let mut seen: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for pair in found {
        let src_texts: Vec<&str> = pair
            .sentence_pairs
            .iter()
            .map(|x| x.src_text.as_str())
            .collect();
        let tgt_texts: Vec<&str> = pair
            .sentence_pairs
            .iter()
            .map(|x| x.tgt_text.as_str())
            .collect();
        let key = format!("{}\t{}", normalize(&src_texts), normalize(&tgt_texts));
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        if pair.sentence_pairs.len() >= 2 {
            out.push(pair);
        }
    }
    out.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    Ok(out)
}
