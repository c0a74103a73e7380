//! Readers for the two on-disk inputs: document-pair records and
//! sentence-alignment blocks.
//!
//! Document pairs are one record per line, five tab-separated fields:
//! `pair_id`, `src_url`, `tgt_url`, `base64(src_text)`, `base64(tgt_text)`.
//! Alignment files hold `#pair <pair_id>` headers followed by vecalign-style
//! `[i, j]:[k]:score` lines.

mod alignments;
mod docs;

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

pub use alignments::{parse_alignments, parse_link, AlignmentLink, AlignmentMap};
pub use docs::{normalize_newlines, parse_document_pairs, parse_record, DocPairReader, RawDocPair};

/// What to do with a malformed record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OnError {
    Abort,
    #[default]
    Skip,
}

impl std::str::FromStr for OnError {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "abort" => Ok(OnError::Abort),
            "skip" => Ok(OnError::Skip),
            other => Err(format!(
                "unknown error policy {other:?} (expected abort|skip)"
            )),
        }
    }
}

impl std::fmt::Display for OnError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OnError::Abort => "abort",
            OnError::Skip => "skip",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}: field count {found}, expected 5")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: empty pair_id")]
    EmptyPairId { line: usize },
    #[error("line {line}: invalid base64 in {field}: {reason}")]
    Base64 {
        line: usize,
        field: String,
        reason: String,
    },
    #[error("line {line}: invalid UTF-8 in {field}: {reason}")]
    Utf8 {
        line: usize,
        field: String,
        reason: String,
    },
    #[error("line {line}: duplicate pair_id {pair_id:?}")]
    DuplicatePairId { line: usize, pair_id: String },
    #[error("line {line}: {reason}")]
    Alignment { line: usize, reason: String },
    #[error("line {line}: duplicate '#pair {pair_id}' header")]
    DuplicateHeader { line: usize, pair_id: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Opens a file for buffered reading, decompressing `.gz` and `.xz`
/// transparently based on the extension.
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    let file = File::open(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    Ok(match ext {
        "gz" => Box::new(BufReader::new(flate2::read::MultiGzDecoder::new(file))),
        "xz" => Box::new(BufReader::new(xz2::read::XzDecoder::new_multi_decoder(
            file,
        ))),
        _ => Box::new(BufReader::new(file)),
    })
}
