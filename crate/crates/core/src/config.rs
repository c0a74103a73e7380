//! Run configuration: defaults, `key = value` files, and per-key overrides.

use std::path::PathBuf;

use serde::Serialize;

use crate::cleaning::OverlapMethod;
use crate::ingest::OnError;
use crate::segmentation::SegmentMode;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("invalid value {value:?} for {key}: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub min_words: usize,
    pub overlap_threshold: f64,
    pub shingle_size: usize,
    pub langid_min_chars: usize,
    pub expected_src_lang: String,
    pub expected_tgt_lang: String,
    pub dev_count: usize,
    pub test_count: usize,
    pub seed: u64,
    pub mode: SegmentMode,
    pub on_error: OnError,
    pub overlap_method: OverlapMethod,
    pub profiles_dir: Option<PathBuf>,
    pub abbreviations_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            min_words: 30,
            overlap_threshold: 0.5,
            shingle_size: 5,
            langid_min_chars: 20,
            expected_src_lang: "en".into(),
            expected_tgt_lang: "de".into(),
            dev_count: 402,
            test_count: 411,
            seed: 42,
            mode: SegmentMode::Presegmented,
            on_error: OnError::Skip,
            overlap_method: OverlapMethod::Lsh,
            profiles_dir: None,
            abbreviations_dir: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl PipelineConfig {
    pub const KEYS: &'static [&'static str] = &[
        "min_words",
        "overlap_threshold",
        "shingle_size",
        "langid_min_chars",
        "expected_src_lang",
        "expected_tgt_lang",
        "dev_count",
        "test_count",
        "seed",
        "mode",
        "on_error",
        "overlap_method",
        "profiles_dir",
        "abbreviations_dir",
    ];

    /// Sets one key. Dashes in the key are read as underscores so flag
    /// spellings (`min-words`) are accepted too.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "min_words" => self.min_words = parse(&key, value)?,
            "overlap_threshold" => self.overlap_threshold = parse(&key, value)?,
            "shingle_size" => self.shingle_size = parse(&key, value)?,
            "langid_min_chars" => self.langid_min_chars = parse(&key, value)?,
            "expected_src_lang" => self.expected_src_lang = value.to_string(),
            "expected_tgt_lang" => self.expected_tgt_lang = value.to_string(),
            "dev_count" => self.dev_count = parse(&key, value)?,
            "test_count" => self.test_count = parse(&key, value)?,
            "seed" => self.seed = parse(&key, value)?,
            "mode" => self.mode = parse(&key, value)?,
            "on_error" => self.on_error = parse(&key, value)?,
            "overlap_method" => self.overlap_method = parse(&key, value)?,
            "profiles_dir" => self.profiles_dir = Some(PathBuf::from(value)),
            "abbreviations_dir" => self.abbreviations_dir = Some(PathBuf::from(value)),
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Applies a config file body on top of the current values.
    /// Blank lines and `#` comments are ignored.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(key, value)?;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, value: String, reason: &str| {
            Err(ConfigError::Value {
                key: key.into(),
                value,
                reason: reason.into(),
            })
        };
        if !(self.overlap_threshold > 0.0 && self.overlap_threshold <= 1.0) {
            return bad(
                "overlap_threshold",
                self.overlap_threshold.to_string(),
                "must be in (0, 1]",
            );
        }
        if self.min_words < 1 {
            return bad(
                "min_words",
                self.min_words.to_string(),
                "must be at least 1",
            );
        }
        if self.shingle_size < 1 {
            return bad(
                "shingle_size",
                self.shingle_size.to_string(),
                "must be at least 1",
            );
        }
        Ok(())
    }

    /// Every key with its current value, in [`Self::KEYS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        vec![
            ("min_words", self.min_words.to_string()),
            ("overlap_threshold", self.overlap_threshold.to_string()),
            ("shingle_size", self.shingle_size.to_string()),
            ("langid_min_chars", self.langid_min_chars.to_string()),
            ("expected_src_lang", self.expected_src_lang.clone()),
            ("expected_tgt_lang", self.expected_tgt_lang.clone()),
            ("dev_count", self.dev_count.to_string()),
            ("test_count", self.test_count.to_string()),
            ("seed", self.seed.to_string()),
            ("mode", self.mode.to_string()),
            ("on_error", self.on_error.to_string()),
            ("overlap_method", self.overlap_method.to_string()),
            ("profiles_dir", path(&self.profiles_dir)),
            ("abbreviations_dir", path(&self.abbreviations_dir)),
        ]
    }
}
