use std::collections::HashSet;
use std::io::BufRead;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;

use super::{IngestError, OnError};

/// One aligned webpage pair with decoded, LF-normalized texts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocPair {
    pub pair_id: String,
    pub src_url: String,
    pub tgt_url: String,
    pub src_text: String,
    pub tgt_text: String,
}

impl RawDocPair {
    /// Renders the pair as one record line (without the trailing LF).
    pub fn to_record_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.pair_id,
            self.src_url,
            self.tgt_url,
            STANDARD.encode(self.src_text.as_bytes()),
            STANDARD.encode(self.tgt_text.as_bytes()),
        )
    }
}

pub fn normalize_newlines(text: &str) -> String {
    if !text.contains('\r') {
        return text.to_string();
    }
    text.replace("\r\n", "\n").replace('\r', "\n")
}

fn decode_field(line_no: usize, field: &str, payload: &str) -> Result<String, IngestError> {
    let bytes = STANDARD
        .decode(payload.trim())
        .map_err(|e| IngestError::Base64 {
            line: line_no,
            field: field.to_string(),
            reason: e.to_string(),
        })?;
    let text = String::from_utf8(bytes).map_err(|e| IngestError::Utf8 {
        line: line_no,
        field: field.to_string(),
        reason: e.to_string(),
    })?;
    Ok(normalize_newlines(&text))
}

/// Parses a single record line. `line_no` is 1-based and only used for errors.
pub fn parse_record(line_no: usize, line: &str) -> Result<RawDocPair, IngestError> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 5 {
        return Err(IngestError::FieldCount {
            line: line_no,
            found: fields.len(),
        });
    }
    if fields[0].is_empty() {
        return Err(IngestError::EmptyPairId { line: line_no });
    }
    Ok(RawDocPair {
        pair_id: fields[0].to_string(),
        src_url: fields[1].to_string(),
        tgt_url: fields[2].to_string(),
        src_text: decode_field(line_no, "src_text", fields[3])?,
        tgt_text: decode_field(line_no, "tgt_text", fields[4])?,
    })
}

/// Streaming reader over a document-pair file.
///
/// Under [`OnError::Skip`] malformed records are logged and counted, and the
/// iterator moves on. Under [`OnError::Abort`] the first error is yielded and
/// iteration stops.
pub struct DocPairReader<R> {
    reader: R,
    policy: OnError,
    line_no: usize,
    skipped: usize,
    seen: HashSet<String>,
    buf: Vec<u8>,
    done: bool,
}

impl<R: BufRead> DocPairReader<R> {
    pub fn new(reader: R, policy: OnError) -> Self {
        Self {
            reader,
            policy,
            line_no: 0,
            skipped: 0,
            seen: HashSet::new(),
            buf: Vec::new(),
            done: false,
        }
    }

    /// Number of lines rejected so far under the skip policy.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// Number of lines consumed so far.
    pub fn lines_read(&self) -> usize {
        self.line_no
    }

    fn next_record(&mut self) -> Option<Result<RawDocPair, IngestError>> {
        self.buf.clear();
        match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => return None,
            Ok(_) => {}
            Err(e) => return Some(Err(IngestError::Io(e))),
        }
        self.line_no += 1;
        let line_no = self.line_no;
        let mut raw = &self.buf[..];
        if raw.last() == Some(&b'\n') {
            raw = &raw[..raw.len() - 1];
        }
        if raw.last() == Some(&b'\r') {
            raw = &raw[..raw.len() - 1];
        }
        let line = match std::str::from_utf8(raw) {
            Ok(l) => l,
            Err(e) => {
                return Some(Err(IngestError::Utf8 {
                    line: line_no,
                    field: "line".into(),
                    reason: e.to_string(),
                }))
            }
        };
        let parsed = parse_record(line_no, line).and_then(|pair| {
            if self.seen.insert(pair.pair_id.clone()) {
                Ok(pair)
            } else {
                Err(IngestError::DuplicatePairId {
                    line: line_no,
                    pair_id: pair.pair_id,
                })
            }
        });
        Some(parsed)
    }
}

impl<R: BufRead> Iterator for DocPairReader<R> {
    type Item = Result<RawDocPair, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            match self.next_record()? {
                Ok(pair) => return Some(Ok(pair)),
                Err(e @ IngestError::Io(_)) => {
                    self.done = true;
                    return Some(Err(e));
                }
                Err(e) => match self.policy {
                    OnError::Abort => {
                        self.done = true;
                        return Some(Err(e));
                    }
                    OnError::Skip => {
                        log::warn!("skipping document record: {e}");
                        self.skipped += 1;
                    }
                },
            }
        }
    }
}

/// Parses a whole stream, returning the records and the skip count.
pub fn parse_document_pairs<R: BufRead>(
    reader: R,
    policy: OnError,
) -> Result<(Vec<RawDocPair>, usize), IngestError> {
    let mut it = DocPairReader::new(reader, policy);
    let mut out = Vec::new();
    for rec in it.by_ref() {
        out.push(rec?);
    }
    Ok((out, it.skipped()))
}
