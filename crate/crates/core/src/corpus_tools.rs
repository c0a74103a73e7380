//! Train/dev/test splitting and corpus statistics.

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cleaning::word_count;
use crate::paragraph_alignment::{FunnelCounters, ParagraphRecord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("dev ({dev}) + test ({test}) exceeds corpus size {total}")]
    SplitTooLarge {
        dev: usize,
        test: usize,
        total: usize,
    },
    #[error("duplicate paragraph id {0:?}")]
    DuplicateId(String),
    #[error("length distribution of an empty corpus is undefined")]
    EmptyCorpus,
    #[error("paragraph {id:?} has {len} sentence pairs, at least 2 expected")]
    ShortParagraph { id: String, len: usize },
    #[error("record line {line}: {reason}")]
    Record { line: usize, reason: String },
}

/// Reads paragraph records, one JSON object per line. Blank lines are ignored.
pub fn read_records(reader: impl BufRead) -> Result<Vec<ParagraphRecord>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let bad = |reason: String| CorpusError::Record {
            line: i + 1,
            reason,
        };
        let line = line.map_err(|e| bad(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ParagraphRecord = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        if rec.src.len() != rec.tgt.len() {
            return Err(bad(format!(
                "{} source vs {} target sentences",
                rec.src.len(),
                rec.tgt.len()
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_records<'a>(
    mut out: impl Write,
    records: impl IntoIterator<Item = &'a ParagraphRecord>,
) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Split {
    pub train: Vec<ParagraphRecord>,
    pub dev: Vec<ParagraphRecord>,
    pub test: Vec<ParagraphRecord>,
}

fn canonical_sort(records: &mut [ParagraphRecord]) {
    records.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
}

/// Seeded random split at paragraph-pair granularity.
///
/// Records are put in canonical order, shuffled with a ChaCha8 Fisher–Yates
/// shuffle, and cut into dev, test and train in that order. Each part is
/// returned in canonical order.
pub fn split_corpus(
    mut records: Vec<ParagraphRecord>,
    dev: usize,
    test: usize,
    seed: u64,
) -> Result<Split, CorpusError> {
    let total = records.len();
    if dev + test > total {
        return Err(CorpusError::SplitTooLarge { dev, test, total });
    }
    canonical_sort(&mut records);
    let mut ids = HashSet::new();
    for r in &records {
        if !ids.insert(r.id.as_str()) {
            return Err(CorpusError::DuplicateId(r.id.clone()));
        }
    }
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut slots: Vec<Option<ParagraphRecord>> = records.into_iter().map(Some).collect();
    let mut take = |range: std::ops::Range<usize>| {
        let mut part: Vec<ParagraphRecord> = order[range]
            .iter()
            .map(|&i| slots[i].take().expect("each index drawn once"))
            .collect();
        canonical_sort(&mut part);
        part
    };
    let dev_part = take(0..dev);
    let test_part = take(dev..dev + test);
    let train_part = take(dev + test..total);
    Ok(Split {
        train: train_part,
        dev: dev_part,
        test: test_part,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub paragraph_pairs: u64,
    pub sentence_pairs: u64,
    pub words_src: u64,
    pub words_tgt: u64,
}

impl std::ops::Add for CorpusStats {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            paragraph_pairs: self.paragraph_pairs + o.paragraph_pairs,
            sentence_pairs: self.sentence_pairs + o.sentence_pairs,
            words_src: self.words_src + o.words_src,
            words_tgt: self.words_tgt + o.words_tgt,
        }
    }
}

pub fn compute_stats<'a>(records: impl IntoIterator<Item = &'a ParagraphRecord>) -> CorpusStats {
    records
        .into_iter()
        .map(|r| CorpusStats {
            paragraph_pairs: 1,
            sentence_pairs: r.src.len() as u64,
            words_src: r.src.iter().map(|s| word_count(s) as u64).sum(),
            words_tgt: r.tgt.iter().map(|s| word_count(s) as u64).sum(),
        })
        .fold(CorpusStats::default(), |a, b| a + b)
}

pub const BUCKET_LABELS: [&str; 5] = ["2", "3", "4", "5~10", ">10"];

/// Paragraph counts per length bucket (sentence pairs per paragraph).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LengthHistogram {
    pub counts: [u64; 5],
}

impl LengthHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn percentages(&self) -> [f64; 5] {
        let total = self.total() as f64;
        self.counts.map(|c| 100.0 * c as f64 / total)
    }
}

impl Serialize for LengthHistogram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Bucket<'a> {
            sentences: &'a str,
            paragraphs: u64,
            percent: f64,
        }
        let pct = self.percentages();
        let buckets: Vec<Bucket> = BUCKET_LABELS
            .iter()
            .zip(self.counts.iter().zip(pct))
            .map(|(label, (&paragraphs, percent))| Bucket {
                sentences: label,
                paragraphs,
                percent,
            })
            .collect();
        buckets.serialize(s)
    }
}

fn bucket(len: usize) -> Option<usize> {
    match len {
        2 => Some(0),
        3 => Some(1),
        4 => Some(2),
        5..=10 => Some(3),
        n if n > 10 => Some(4),
        _ => None,
    }
}

pub fn length_distribution<'a>(
    records: impl IntoIterator<Item = &'a ParagraphRecord>,
) -> Result<LengthHistogram, CorpusError> {
    let mut hist = LengthHistogram::default();
    for r in records {
        let b = bucket(r.len()).ok_or_else(|| CorpusError::ShortParagraph {
            id: r.id.clone(),
            len: r.len(),
        })?;
        hist.counts[b] += 1;
    }
    if hist.total() == 0 {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(hist)
}

/// Compact count rendering: plain below 10 000, whole thousands with `K`
/// below one million, millions with `M` (one decimal below 100M).
pub fn human_count(n: u64) -> String {
    if n < 10_000 {
        n.to_string()
    } else if n < 999_500 {
        format!("{}K", (n as f64 / 1e3).round() as u64)
    } else if n < 100_000_000 {
        let s = format!("{:.1}", n as f64 / 1e6);
        format!("{}M", s.strip_suffix(".0").unwrap_or(&s))
    } else {
        format!("{}M", (n as f64 / 1e6).round() as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunnelRow {
    pub stage: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunnelReport {
    pub rows: Vec<FunnelRow>,
}

impl FunnelReport {
    fn from_rows(rows: &[(&str, u64)]) -> Self {
        Self {
            rows: rows
                .iter()
                .map(|&(stage, count)| FunnelRow {
                    stage: stage.to_string(),
                    count,
                })
                .collect(),
        }
    }

    /// Sentence pairs remaining after alignment, extraction and cleaning.
    pub fn summary(c: &FunnelCounters) -> Self {
        Self::from_rows(&[
            ("Original vecalign", c.links_input),
            (
                "After parallel paragraph extraction",
                c.sentence_pairs_surviving,
            ),
            ("After cleaning", c.sentence_pairs_cleaned),
        ])
    }

    /// Every stage counter in pipeline order.
    pub fn detailed(c: &FunnelCounters) -> Self {
        Self::from_rows(&[
            ("Alignment links", c.links_input),
            ("One-to-one links", c.links_one_to_one),
            ("Candidate paragraph pairs", c.pairs_candidate),
            ("After monotonicity filter", c.pairs_after_monotonic),
            ("After repeated-paragraph removal", c.pairs_after_dedup),
            ("After single-sentence removal", c.pairs_after_singleton),
            ("Sentence pairs extracted", c.sentence_pairs_surviving),
            ("After language filter", c.pairs_after_language),
            (
                "Sentence pairs after language filter",
                c.sentence_pairs_after_language,
            ),
            ("After length filter", c.pairs_after_length),
            ("After overlap filter", c.pairs_after_overlap),
            ("Sentence pairs after cleaning", c.sentence_pairs_cleaned),
        ])
    }

    pub fn render(&self) -> String {
        render_table(
            None,
            self.rows
                .iter()
                .map(|r| vec![r.stage.clone(), human_count(r.count)])
                .collect(),
        )
    }
}

/// Plain-text table with ` | ` column separators and a rule under the header.
pub fn render_table(header: Option<Vec<String>>, rows: Vec<Vec<String>>) -> String {
    let all: Vec<&Vec<String>> = header.iter().chain(rows.iter()).collect();
    let cols = all.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            all.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |r: &Vec<String>| {
        let cells: Vec<String> = (0..cols)
            .map(|c| {
                let s = r.get(c).map(String::as_str).unwrap_or("");
                format!("{s:<w$}", w = widths[c])
            })
            .collect();
        format!("{}\n", cells.join(" | ").trim_end())
    };
    let mut out = String::new();
    if let Some(h) = &header {
        out.push_str(&line(h));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&format!("{}\n", rule.join("-+-")));
    }
    for r in &rows {
        out.push_str(&line(r));
    }
    out
}

/// Paragraph/sentence/word counts per named split.
pub fn render_stats_table(
    rows: &[(String, CorpusStats)],
    src_lang: &str,
    tgt_lang: &str,
) -> String {
    let title = |l: &str| {
        let mut c = l.chars();
        c.next()
            .map(|f| f.to_uppercase().chain(c).collect())
            .unwrap_or_default()
    };
    render_table(
        Some(vec![
            String::new(),
            "Paragraphs".into(),
            "Sentences".into(),
            format!("Words {}", title(src_lang)),
            format!("Words {}", title(tgt_lang)),
        ]),
        rows.iter()
            .map(|(name, s)| {
                vec![
                    title(name),
                    human_count(s.paragraph_pairs),
                    human_count(s.sentence_pairs),
                    human_count(s.words_src),
                    human_count(s.words_tgt),
                ]
            })
            .collect(),
    )
}

pub fn render_histogram(hist: &LengthHistogram) -> String {
    render_table(
        Some(vec!["Sentences".into(), "Distribution".into()]),
        BUCKET_LABELS
            .iter()
            .zip(hist.percentages())
            .map(|(label, pct)| vec![label.to_string(), format!("{pct:.2}%")])
            .collect(),
    )
}
