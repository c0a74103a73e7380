use serde::{Deserialize, Serialize};

/// A retained one-to-one sentence link with both texts attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub src_idx: usize,
    pub tgt_idx: usize,
    pub src_text: String,
    pub tgt_text: String,
}

/// An aligned paragraph pair built from one-to-one sentence links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParagraphPair {
    pub pair_id: String,
    pub src_para: usize,
    pub tgt_para: usize,
    pub sentence_pairs: Vec<SentencePair>,
}

impl ParagraphPair {
    /// `<pair_id>:<src_para>:<tgt_para>`
    pub fn id(&self) -> String {
        format!("{}:{}:{}", self.pair_id, self.src_para, self.tgt_para)
    }

    pub fn len(&self) -> usize {
        self.sentence_pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentence_pairs.is_empty()
    }

    pub fn src_texts(&self) -> impl Iterator<Item = &str> {
        self.sentence_pairs.iter().map(|p| p.src_text.as_str())
    }

    pub fn tgt_texts(&self) -> impl Iterator<Item = &str> {
        self.sentence_pairs.iter().map(|p| p.tgt_text.as_str())
    }

    /// Sort key for the canonical corpus order.
    pub fn canonical_key(&self) -> (&str, usize, usize) {
        (&self.pair_id, self.src_para, self.tgt_para)
    }

    pub fn to_record(&self) -> ParagraphRecord {
        ParagraphRecord {
            id: self.id(),
            src: self.src_texts().map(str::to_string).collect(),
            tgt: self.tgt_texts().map(str::to_string).collect(),
            src_para: self.src_para,
            tgt_para: self.tgt_para,
            pair_id: self.pair_id.clone(),
        }
    }
}

/// The JSONL output form of a [`ParagraphPair`]. Field order is fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParagraphRecord {
    pub id: String,
    pub src: Vec<String>,
    pub tgt: Vec<String>,
    pub src_para: usize,
    pub tgt_para: usize,
    pub pair_id: String,
}

impl ParagraphRecord {
    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.src.is_empty()
    }

    pub fn canonical_key(&self) -> (&str, usize, usize) {
        (&self.pair_id, self.src_para, self.tgt_para)
    }
}

/// Stage-by-stage survivor counts for one run.
///
/// Link and pair counters shrink along the pipeline; the `sentence_pairs_*`
/// counters give the sentence-pair totals behind the summary funnel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunnelCounters {
    pub docs_input: u64,
    pub docs_skipped: u64,
    pub docs_without_alignments: u64,
    pub alignment_lines_skipped: u64,
    pub links_input: u64,
    pub links_one_to_one: u64,
    pub pairs_candidate: u64,
    pub pairs_after_monotonic: u64,
    pub pairs_after_dedup: u64,
    pub pairs_after_singleton: u64,
    pub sentence_pairs_surviving: u64,
    pub pairs_after_language: u64,
    pub sentence_pairs_after_language: u64,
    pub pairs_after_length: u64,
    pub pairs_after_overlap: u64,
    pub sentence_pairs_cleaned: u64,
}

impl std::ops::AddAssign for FunnelCounters {
    fn add_assign(&mut self, o: Self) {
        self.docs_input += o.docs_input;
        self.docs_skipped += o.docs_skipped;
        self.docs_without_alignments += o.docs_without_alignments;
        self.alignment_lines_skipped += o.alignment_lines_skipped;
        self.links_input += o.links_input;
        self.links_one_to_one += o.links_one_to_one;
        self.pairs_candidate += o.pairs_candidate;
        self.pairs_after_monotonic += o.pairs_after_monotonic;
        self.pairs_after_dedup += o.pairs_after_dedup;
        self.pairs_after_singleton += o.pairs_after_singleton;
        self.sentence_pairs_surviving += o.sentence_pairs_surviving;
        self.pairs_after_language += o.pairs_after_language;
        self.sentence_pairs_after_language += o.sentence_pairs_after_language;
        self.pairs_after_length += o.pairs_after_length;
        self.pairs_after_overlap += o.pairs_after_overlap;
        self.sentence_pairs_cleaned += o.sentence_pairs_cleaned;
    }
}

impl FunnelCounters {
    /// Checks every subset relation between stages. Returns the first
    /// violated relation as `(larger, smaller)` counter names.
    pub fn check_monotone(&self) -> Result<(), (&'static str, &'static str)> {
        let pairs = [
            ("pairs_candidate", self.pairs_candidate),
            ("pairs_after_monotonic", self.pairs_after_monotonic),
            ("pairs_after_dedup", self.pairs_after_dedup),
            ("pairs_after_singleton", self.pairs_after_singleton),
            ("pairs_after_language", self.pairs_after_language),
            ("pairs_after_length", self.pairs_after_length),
            ("pairs_after_overlap", self.pairs_after_overlap),
        ];
        let sentences = [
            ("links_input", self.links_input),
            ("links_one_to_one", self.links_one_to_one),
            ("sentence_pairs_surviving", self.sentence_pairs_surviving),
            (
                "sentence_pairs_after_language",
                self.sentence_pairs_after_language,
            ),
            ("sentence_pairs_cleaned", self.sentence_pairs_cleaned),
        ];
        for chain in [&pairs[..], &sentences[..]] {
            for w in chain.windows(2) {
                if w[1].1 > w[0].1 {
                    return Err((w[0].0, w[1].0));
                }
            }
        }
        Ok(())
    }
}
