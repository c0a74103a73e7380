//! End-to-end extraction: ingest, segment, extract, clean, write.
//!
//! Documents are read in fixed-size chunks. Segmentation, candidate
//! extraction and the stateless cleaning filters run on the current rayon
//! pool; repeated-pair and overlap admission run sequentially in input
//! order, so the output does not depend on the number of threads.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cleaning::{clean_pipeline, Cleaner, LangIdError, LanguageIdentifier, OverlapFilter};
use crate::config::PipelineConfig;
use crate::ingest::{
    open_input, parse_alignments, AlignmentLink, AlignmentMap, DocPairReader, IngestError, OnError,
    RawDocPair,
};
use crate::paragraph_alignment::{
    admit_candidates, extract_candidates, AlignError, Deduper, FunnelCounters, ParagraphPair,
};
use crate::segmentation::{segment, SentenceSplitter};

pub const FORMAT_VERSION: u32 = 1;
pub const CHUNK_SIZE: usize = 512;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Open { path: String, source: io::Error },
    #[error("documents: {0}")]
    Docs(IngestError),
    #[error("alignments: {0}")]
    Alignments(IngestError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error("language profiles: {0}")]
    LangId(#[from] LangIdError),
    #[error("abbreviation list: {0}")]
    Abbreviations(io::Error),
    #[error("writing output: {0}")]
    Write(io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputDigest {
    pub records: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Runtime {
    pub workers: usize,
    pub stage_seconds: BTreeMap<String, f64>,
    pub total_seconds: f64,
}

/// Everything needed to verify a rerun. All fields except `runtime` are
/// deterministic for fixed inputs and config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub format_version: u32,
    pub config: BTreeMap<String, String>,
    pub inputs: Vec<InputDigest>,
    pub output: OutputDigest,
    pub counters: FunnelCounters,
    pub runtime: Runtime,
}

/// Sizes the global rayon pool. Must be called before any parallel work.
pub fn configure_workers(workers: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| e.to_string())
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

#[derive(Default)]
struct Timings(BTreeMap<&'static str, Duration>);

impl Timings {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.entry(stage).or_default() += start.elapsed();
        out
    }
}

/// Shared read-only state for the parallel stages.
pub struct Resources {
    pub src_splitter: SentenceSplitter,
    pub tgt_splitter: SentenceSplitter,
    pub cleaner: Cleaner,
}

impl Resources {
    pub fn load(cfg: &PipelineConfig) -> Result<Self, PipelineError> {
        let dir = cfg.abbreviations_dir.as_deref();
        let splitter = |lang: &str| {
            SentenceSplitter::for_language_in(dir, lang).map_err(PipelineError::Abbreviations)
        };
        let langid = match &cfg.profiles_dir {
            Some(d) => LanguageIdentifier::from_dir(d, cfg.langid_min_chars)?,
            None => LanguageIdentifier::shipped(cfg.langid_min_chars),
        };
        Ok(Self {
            src_splitter: splitter(&cfg.expected_src_lang)?,
            tgt_splitter: splitter(&cfg.expected_tgt_lang)?,
            cleaner: Cleaner::new(cfg, langid),
        })
    }
}

type DocResult = Result<(Vec<ParagraphPair>, FunnelCounters), AlignError>;

fn extract_doc(
    cfg: &PipelineConfig,
    res: &Resources,
    doc: &RawDocPair,
    links: &[AlignmentLink],
) -> DocResult {
    let src = segment(&doc.pair_id, &doc.src_text, cfg.mode, &res.src_splitter);
    let tgt = segment(&doc.pair_id, &doc.tgt_text, cfg.mode, &res.tgt_splitter);
    let mut counters = FunnelCounters::default();
    let pairs = extract_candidates(&src, &tgt, &doc.pair_id, links, &mut counters)?;
    Ok((pairs, counters))
}

/// Stateful part of a run; feed document chunks in input order.
pub struct Extractor<'a> {
    cfg: &'a PipelineConfig,
    res: &'a Resources,
    alignments: AlignmentMap,
    deduper: Deduper,
    overlap: OverlapFilter,
    pub counters: FunnelCounters,
    timings: Timings,
}

impl<'a> Extractor<'a> {
    pub fn new(cfg: &'a PipelineConfig, res: &'a Resources, alignments: AlignmentMap) -> Self {
        Self {
            cfg,
            res,
            alignments,
            deduper: Deduper::new(),
            overlap: OverlapFilter::new(
                cfg.overlap_threshold,
                cfg.shingle_size,
                cfg.overlap_method,
            ),
            counters: FunnelCounters::default(),
            timings: Timings::default(),
        }
    }

    /// Processes one chunk of documents and returns the cleaned pairs in
    /// input order.
    pub fn process_chunk(
        &mut self,
        docs: Vec<RawDocPair>,
    ) -> Result<Vec<ParagraphPair>, PipelineError> {
        self.counters.docs_input += docs.len() as u64;
        let mut jobs = Vec::with_capacity(docs.len());
        for doc in docs {
            match self.alignments.remove(&doc.pair_id) {
                Some(links) => jobs.push((doc, links)),
                None => {
                    log::debug!("no alignments for {}", doc.pair_id);
                    self.counters.docs_without_alignments += 1;
                }
            }
        }
        let (cfg, res) = (self.cfg, self.res);
        let results: Vec<DocResult> = self.timings.time("segment_extract", || {
            jobs.par_iter()
                .map(|(doc, links)| extract_doc(cfg, res, doc, links))
                .collect()
        });

        let mut admitted = Vec::new();
        let start = Instant::now();
        for ((doc, _), result) in jobs.iter().zip(results) {
            match result {
                Ok((candidates, local)) => {
                    self.counters += local;
                    admitted.extend(admit_candidates(
                        candidates,
                        &mut self.deduper,
                        &mut self.counters,
                    ));
                }
                Err(e) => match cfg.on_error {
                    OnError::Abort => return Err(e.into()),
                    OnError::Skip => {
                        log::warn!("skipping document {}: {e}", doc.pair_id);
                        self.counters.docs_skipped += 1;
                    }
                },
            }
        }
        *self.timings.0.entry("admit").or_default() += start.elapsed();

        let (cleaner, overlap, counters) = (&res.cleaner, &mut self.overlap, &mut self.counters);
        Ok(self.timings.time("clean", || {
            clean_pipeline(admitted, cleaner, overlap, counters)
        }))
    }

    /// Alignment blocks never matched by a document.
    pub fn unmatched_alignments(&self) -> usize {
        self.alignments.len()
    }
}

/// Runs the whole pipeline, writing one JSON record per line to `out`.
pub fn run_extract(
    cfg: &PipelineConfig,
    docs_path: &Path,
    alignments_path: &Path,
    out: impl Write,
) -> Result<RunManifest, PipelineError> {
    let started = Instant::now();
    let open = |p: &Path| {
        open_input(p).map_err(|source| PipelineError::Open {
            path: p.display().to_string(),
            source,
        })
    };
    let digest = |role: &str, p: &Path| -> Result<InputDigest, PipelineError> {
        Ok(InputDigest {
            role: role.into(),
            path: p.display().to_string(),
            sha256: sha256_file(p).map_err(|source| PipelineError::Open {
                path: p.display().to_string(),
                source,
            })?,
        })
    };
    let inputs = vec![
        digest("docs", docs_path)?,
        digest("alignments", alignments_path)?,
    ];

    let mut load_timings = Timings::default();
    let res = load_timings.time("load_resources", || Resources::load(cfg))?;
    let (alignments, skipped_links) = load_timings.time("read_alignments", || {
        parse_alignments(open(alignments_path)?, cfg.on_error).map_err(PipelineError::Alignments)
    })?;

    let mut ex = Extractor::new(cfg, &res, alignments);
    ex.counters.alignment_lines_skipped = skipped_links as u64;
    let mut writer = HashingWriter {
        inner: io::BufWriter::new(out),
        hasher: Sha256::new(),
    };
    let mut records = 0u64;
    let mut reader = DocPairReader::new(open(docs_path)?, cfg.on_error);
    loop {
        let chunk: Vec<RawDocPair> = load_timings
            .time("read_docs", || {
                reader.by_ref().take(CHUNK_SIZE).collect::<Result<_, _>>()
            })
            .map_err(PipelineError::Docs)?;
        if chunk.is_empty() {
            break;
        }
        let pairs = ex.process_chunk(chunk)?;
        load_timings
            .time("write", || -> io::Result<()> {
                for p in &pairs {
                    serde_json::to_writer(&mut writer, &p.to_record())?;
                    writer.write_all(b"\n")?;
                }
                Ok(())
            })
            .map_err(PipelineError::Write)?;
        records += pairs.len() as u64;
    }
    writer.flush().map_err(PipelineError::Write)?;
    ex.counters.docs_input += reader.skipped() as u64;
    ex.counters.docs_skipped += reader.skipped() as u64;
    if ex.unmatched_alignments() > 0 {
        log::warn!(
            "{} alignment block(s) had no matching document",
            ex.unmatched_alignments()
        );
    }

    let mut stage_seconds: BTreeMap<String, f64> = BTreeMap::new();
    for (k, v) in load_timings.0.iter().chain(ex.timings.0.iter()) {
        *stage_seconds.entry(k.to_string()).or_default() += v.as_secs_f64();
    }
    Ok(RunManifest {
        tool: "docpara".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        format_version: FORMAT_VERSION,
        config: cfg
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        inputs,
        output: OutputDigest {
            records,
            sha256: hex::encode(writer.hasher.finalize()),
        },
        counters: ex.counters,
        runtime: Runtime {
            workers: rayon::current_num_threads(),
            stage_seconds,
            total_seconds: started.elapsed().as_secs_f64(),
        },
    })
}
