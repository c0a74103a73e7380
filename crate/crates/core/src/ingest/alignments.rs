use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{IngestError, OnError};

/// One vecalign-style record: source sentence indices, target sentence
/// indices and the aligner's cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentLink {
    pub src_indices: Vec<usize>,
    pub tgt_indices: Vec<usize>,
    pub score: f64,
}

impl AlignmentLink {
    pub fn new(src_indices: Vec<usize>, tgt_indices: Vec<usize>, score: f64) -> Self {
        Self {
            src_indices,
            tgt_indices,
            score,
        }
    }

    pub fn is_one_to_one(&self) -> bool {
        self.src_indices.len() == 1 && self.tgt_indices.len() == 1
    }

    /// Renders the link in `[i, j]:[k]:score` form.
    pub fn to_line(&self) -> String {
        fn list(idx: &[usize]) -> String {
            let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            format!("[{}]", parts.join(", "))
        }
        format!(
            "{}:{}:{}",
            list(&self.src_indices),
            list(&self.tgt_indices),
            self.score
        )
    }
}

/// Alignment links grouped per document pair, in file order.
pub type AlignmentMap = HashMap<String, Vec<AlignmentLink>>;

const HEADER: &str = "#pair";

fn parse_index_list(line: usize, s: &str) -> Result<Vec<usize>, IngestError> {
    let malformed = |reason: &str| IngestError::Alignment {
        line,
        reason: format!("malformed index list {s:?}: {reason}"),
    };
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| malformed("expected brackets"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in inner.split(',') {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|_| malformed("not a non-negative integer"))?;
        if let Some(&prev) = out.last() {
            if idx <= prev {
                return Err(malformed("indices not strictly increasing"));
            }
        }
        out.push(idx);
    }
    Ok(out)
}

/// Parses one `[...]:[...]:score` line.
pub fn parse_link(line: usize, text: &str) -> Result<AlignmentLink, IngestError> {
    let text = text.trim();
    // the lists contain no ':' so the first two separators are unambiguous
    let mut parts = text.splitn(3, ':');
    let (src, tgt, score) = match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => {
            return Err(IngestError::Alignment {
                line,
                reason: format!("expected '[...]:[...]:score', got {text:?}"),
            })
        }
    };
    let src_indices = parse_index_list(line, src)?;
    let tgt_indices = parse_index_list(line, tgt)?;
    let score: f64 = score.trim().parse().map_err(|_| IngestError::Alignment {
        line,
        reason: format!("score {:?} is not a number", score.trim()),
    })?;
    if score.is_nan() {
        return Err(IngestError::Alignment {
            line,
            reason: "score is NaN".into(),
        });
    }
    if src_indices.is_empty() && tgt_indices.is_empty() {
        return Err(IngestError::Alignment {
            line,
            reason: "both index lists are empty".into(),
        });
    }
    Ok(AlignmentLink {
        src_indices,
        tgt_indices,
        score,
    })
}

/// Parses an alignment file made of `#pair <id>` blocks.
///
/// Malformed link lines follow `policy`; structural problems (links before
/// any header, a repeated header) are always fatal. Returns the map and the
/// number of skipped link lines.
pub fn parse_alignments<R: BufRead>(
    reader: R,
    policy: OnError,
) -> Result<(AlignmentMap, usize), IngestError> {
    let mut map = AlignmentMap::new();
    let mut current: Option<String> = None;
    let mut skipped = 0;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix(HEADER) {
            let id = rest.trim();
            if id.is_empty() || !rest.starts_with(char::is_whitespace) {
                return Err(IngestError::Alignment {
                    line: line_no,
                    reason: format!("malformed header {trimmed:?}"),
                });
            }
            if map.contains_key(id) {
                return Err(IngestError::DuplicateHeader {
                    line: line_no,
                    pair_id: id.to_string(),
                });
            }
            map.insert(id.to_string(), Vec::new());
            current = Some(id.to_string());
            continue;
        }
        let Some(id) = current.as_ref() else {
            return Err(IngestError::Alignment {
                line: line_no,
                reason: "alignment line before any '#pair' header".into(),
            });
        };
        match parse_link(line_no, trimmed) {
            Ok(link) => map.get_mut(id).expect("header inserted").push(link),
            Err(e) => match policy {
                OnError::Abort => return Err(e),
                OnError::Skip => {
                    log::warn!("skipping alignment line: {e}");
                    skipped += 1;
                }
            },
        }
    }
    Ok((map, skipped))
}
