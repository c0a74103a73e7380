//! Paragraph and sentence segmentation with global sentence indexing.
//!
//! Alignment links refer to sentences by their 0-based position in the whole
//! document, so every [`SegmentedDocument`] numbers its sentences
//! contiguously in reading order and keeps the sentence → paragraph map.

mod sentences;

use serde::{Deserialize, Serialize};

pub use sentences::SentenceSplitter;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    /// Global index within the document side.
    pub index: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paragraph {
    pub index: usize,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedDocument {
    pub id: String,
    pub paragraphs: Vec<Paragraph>,
    sent_to_para: Vec<usize>,
}

impl SegmentedDocument {
    /// Builds a document from already-split paragraphs. Empty sentences and
    /// paragraphs left empty after that are dropped.
    pub fn from_paragraphs<P, S>(id: impl Into<String>, paragraphs: P) -> Self
    where
        P: IntoIterator,
        P::Item: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Vec::new();
        let mut sent_to_para = Vec::new();
        for para in paragraphs {
            let para_index = out.len();
            let sentences: Vec<Sentence> = para
                .into_iter()
                .map(Into::into)
                .map(|s: String| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .map(|text| {
                    sent_to_para.push(para_index);
                    Sentence {
                        index: sent_to_para.len() - 1,
                        text,
                    }
                })
                .collect();
            if !sentences.is_empty() {
                out.push(Paragraph {
                    index: para_index,
                    sentences,
                });
            }
        }
        Self {
            id: id.into(),
            paragraphs: out,
            sent_to_para,
        }
    }

    pub fn num_sentences(&self) -> usize {
        self.sent_to_para.len()
    }

    /// Paragraph index of a global sentence index.
    pub fn para_of(&self, sentence: usize) -> Option<usize> {
        self.sent_to_para.get(sentence).copied()
    }

    pub fn sent_to_para(&self) -> &[usize] {
        &self.sent_to_para
    }

    pub fn sentence(&self, index: usize) -> Option<&str> {
        let para = &self.paragraphs[self.para_of(index)?];
        let first = para.sentences[0].index;
        Some(&para.sentences[index - first].text)
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.paragraphs.iter().flat_map(|p| p.sentences.iter())
    }

    /// Raw-mode rendering: one paragraph per line, sentences joined by a space.
    pub fn render_raw(&self) -> String {
        self.paragraphs
            .iter()
            .map(|p| {
                p.sentences
                    .iter()
                    .map(|s| s.text.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Presegmented rendering: one sentence per line, blank line between paragraphs.
    pub fn render_presegmented(&self) -> String {
        self.paragraphs
            .iter()
            .map(|p| {
                p.sentences
                    .iter()
                    .map(|s| s.text.as_str())
                    .collect::<Vec<_>>()
                    .join("\n")
            })
            .collect::<Vec<_>>()
            .join("\n\n")
    }
}

/// How document text is turned into sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentMode {
    /// Paragraph per line, split into sentences here.
    Raw,
    /// Sentence per line, blank line between paragraphs.
    #[default]
    Presegmented,
}

impl std::str::FromStr for SegmentMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(SegmentMode::Raw),
            "presegmented" => Ok(SegmentMode::Presegmented),
            other => Err(format!(
                "unknown mode {other:?} (expected raw|presegmented)"
            )),
        }
    }
}

impl std::fmt::Display for SegmentMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SegmentMode::Raw => "raw",
            SegmentMode::Presegmented => "presegmented",
        })
    }
}

/// Splits text on LF, trims each piece and drops empty pieces.
pub fn split_paragraphs(text: &str) -> Vec<&str> {
    text.split('\n')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .collect()
}

/// Splits presegmented text: sentences per line, blank lines between paragraphs.
pub fn split_presegmented(text: &str) -> Vec<Vec<&str>> {
    let mut paragraphs = Vec::new();
    let mut current = Vec::new();
    for line in text.split('\n') {
        let line = line.trim();
        if line.is_empty() {
            if !current.is_empty() {
                paragraphs.push(std::mem::take(&mut current));
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current);
    }
    paragraphs
}

/// Raw-mode segmentation: paragraphs by newline, then sentences.
pub fn segment_document(
    id: impl Into<String>,
    text: &str,
    splitter: &SentenceSplitter,
) -> SegmentedDocument {
    SegmentedDocument::from_paragraphs(
        id,
        split_paragraphs(text)
            .into_iter()
            .map(|p| splitter.split(p)),
    )
}

/// Segments one side of a document pair according to `mode`.
pub fn segment(
    id: impl Into<String>,
    text: &str,
    mode: SegmentMode,
    splitter: &SentenceSplitter,
) -> SegmentedDocument {
    match mode {
        SegmentMode::Raw => segment_document(id, text, splitter),
        SegmentMode::Presegmented => {
            SegmentedDocument::from_paragraphs(id, split_presegmented(text))
        }
    }
}
