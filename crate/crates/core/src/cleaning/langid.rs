//! Character n-gram language identification with the out-of-place measure.
//!
//! Text is lowercased and cut into letter-only words; each word is padded
//! with one space on both sides and contributes all of its 1- to 5-grams.
//! A profile is the list of the most frequent grams, most frequent first.
//! The distance between a text and a language is the sum of rank
//! displacements of the text's grams in the language profile, with a fixed
//! penalty for grams the profile lacks.

use rustc_hash::FxHashMap as HashMap;
use std::fs;
use std::io;
use std::path::Path;

pub const PROFILE_SIZE: usize = 400;
pub const MAX_NGRAM: usize = 5;
pub const MIN_SAMPLE_CHARS: usize = 10_000;

const CHAR_BITS: u32 = 21;
const LEN_SHIFT: u32 = CHAR_BITS * MAX_NGRAM as u32;

#[derive(Debug, thiserror::Error)]
pub enum LangIdError {
    #[error("sample for {lang:?} has {chars} characters, at least {min} required")]
    InsufficientSample {
        lang: String,
        chars: usize,
        min: usize,
    },
    #[error("profile {lang:?} line {line}: {reason}")]
    BadProfile {
        lang: String,
        line: usize,
        reason: String,
    },
    #[error("at least two language profiles are required, got {0}")]
    TooFewProfiles(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A character n-gram of length 1..=5, packed into an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Gram(u128);

impl Gram {
    fn new(chars: &[char]) -> Self {
        debug_assert!(!chars.is_empty() && chars.len() <= MAX_NGRAM);
        let mut v = 0u128;
        for &c in chars {
            v = (v << CHAR_BITS) | c as u128;
        }
        Gram(v | ((chars.len() as u128) << LEN_SHIFT))
    }

    fn parse(s: &str) -> Option<Self> {
        let chars: Vec<char> = s.chars().collect();
        (!chars.is_empty() && chars.len() <= MAX_NGRAM).then(|| Gram::new(&chars))
    }

    fn render(self) -> String {
        let len = (self.0 >> LEN_SHIFT) as usize;
        let mask = (1u128 << CHAR_BITS) - 1;
        (0..len)
            .rev()
            .map(|i| {
                char::from_u32(((self.0 >> (i as u32 * CHAR_BITS)) & mask) as u32)
                    .unwrap_or('\u{fffd}')
            })
            .collect()
    }
}

fn count_grams(text: &str) -> HashMap<Gram, u32> {
    let mut counts = HashMap::default();
    let lower = text.to_lowercase();
    let mut padded: Vec<char> = Vec::with_capacity(32);
    for word in lower
        .split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty())
    {
        padded.clear();
        padded.push(' ');
        padded.extend(word.chars());
        padded.push(' ');
        for n in 1..=MAX_NGRAM.min(padded.len()) {
            for w in padded.windows(n) {
                *counts.entry(Gram::new(w)).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Most frequent grams first; ties broken by the packed gram value.
fn rank(counts: HashMap<Gram, u32>, limit: usize) -> Vec<Gram> {
    let mut grams: Vec<(Gram, u32)> = counts.into_iter().collect();
    grams.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    grams.truncate(limit);
    grams.into_iter().map(|(g, _)| g).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageProfile {
    pub lang: String,
    ranked: Vec<Gram>,
    ranks: HashMap<Gram, usize>,
}

impl LanguageProfile {
    fn from_ranked(lang: String, ranked: Vec<Gram>) -> Self {
        let ranks = ranked.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        Self {
            lang,
            ranked,
            ranks,
        }
    }

    /// Builds a profile from sample text of at least [`MIN_SAMPLE_CHARS`] characters.
    pub fn train(lang: &str, sample: &str) -> Result<Self, LangIdError> {
        let chars = sample.chars().count();
        if chars < MIN_SAMPLE_CHARS {
            return Err(LangIdError::InsufficientSample {
                lang: lang.to_string(),
                chars,
                min: MIN_SAMPLE_CHARS,
            });
        }
        Ok(Self::from_ranked(
            lang.to_string(),
            rank(count_grams(sample), PROFILE_SIZE),
        ))
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    /// Grams in rank order, as strings.
    pub fn ngrams(&self) -> Vec<String> {
        self.ranked.iter().map(|g| g.render()).collect()
    }

    /// `<ngram>\t<rank>` lines, ranks starting at 1.
    pub fn to_tsv(&self) -> String {
        self.ranked
            .iter()
            .enumerate()
            .map(|(i, g)| format!("{}\t{}\n", g.render(), i + 1))
            .collect()
    }

    pub fn from_tsv(lang: &str, text: &str) -> Result<Self, LangIdError> {
        let bad = |line: usize, reason: String| LangIdError::BadProfile {
            lang: lang.to_string(),
            line,
            reason,
        };
        let mut ranked = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (gram, rank) = line
                .rsplit_once('\t')
                .ok_or_else(|| bad(i + 1, "expected '<ngram>\\t<rank>'".into()))?;
            let rank: usize = rank
                .trim()
                .parse()
                .map_err(|_| bad(i + 1, format!("rank {rank:?} is not an integer")))?;
            if rank != ranked.len() + 1 {
                return Err(bad(
                    i + 1,
                    format!("rank {rank}, expected {}", ranked.len() + 1),
                ));
            }
            let gram = Gram::parse(gram)
                .ok_or_else(|| bad(i + 1, format!("n-gram {gram:?} must have 1..=5 characters")))?;
            if ranked.contains(&gram) {
                return Err(bad(
                    i + 1,
                    format!("duplicate n-gram {gram:?}", gram = gram.render()),
                ));
            }
            ranked.push(gram);
        }
        Ok(Self::from_ranked(lang.to_string(), ranked))
    }

    fn distance(&self, doc: &[Gram]) -> usize {
        doc.iter()
            .enumerate()
            .map(|(i, g)| match self.ranks.get(g) {
                Some(&r) => r.abs_diff(i),
                None => PROFILE_SIZE,
            })
            .sum()
    }
}

const SHIPPED: &[(&str, &str, &str)] = &[
    (
        "de",
        include_str!("../../data/langid/profiles/de.tsv"),
        include_str!("../../data/langid/samples/de.txt"),
    ),
    (
        "en",
        include_str!("../../data/langid/profiles/en.tsv"),
        include_str!("../../data/langid/samples/en.txt"),
    ),
    (
        "fr",
        include_str!("../../data/langid/profiles/fr.tsv"),
        include_str!("../../data/langid/samples/fr.txt"),
    ),
];

/// The shipped training samples as `(lang, text)`.
pub fn shipped_samples() -> impl Iterator<Item = (&'static str, &'static str)> {
    SHIPPED.iter().map(|(lang, _, sample)| (*lang, *sample))
}

/// Result of classifying one text.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// `None` when the text is too short or has no letters.
    pub lang: Option<String>,
    /// Distance of the runner-up minus distance of the winner.
    pub margin: usize,
}

/// A set of profiles plus the minimum text length to attempt a decision.
#[derive(Debug, Clone)]
pub struct LanguageIdentifier {
    profiles: Vec<LanguageProfile>,
    min_chars: usize,
}

impl LanguageIdentifier {
    pub fn new(mut profiles: Vec<LanguageProfile>, min_chars: usize) -> Result<Self, LangIdError> {
        if profiles.len() < 2 {
            return Err(LangIdError::TooFewProfiles(profiles.len()));
        }
        profiles.sort_by(|a, b| a.lang.cmp(&b.lang));
        Ok(Self {
            profiles,
            min_chars,
        })
    }

    /// The shipped profiles (de, en, fr).
    pub fn shipped(min_chars: usize) -> Self {
        let profiles = SHIPPED
            .iter()
            .map(|(lang, tsv, _)| LanguageProfile::from_tsv(lang, tsv).expect("shipped profile"))
            .collect();
        Self::new(profiles, min_chars).expect("shipped profiles")
    }

    /// Loads every `<lang>.tsv` file from `dir`.
    pub fn from_dir(dir: &Path, min_chars: usize) -> Result<Self, LangIdError> {
        let mut profiles = Vec::new();
        let mut entries: Vec<_> = fs::read_dir(dir)?.collect::<Result<_, _>>()?;
        entries.sort_by_key(|e| e.path());
        for entry in entries {
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) != Some("tsv") {
                continue;
            }
            let lang = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default();
            profiles.push(LanguageProfile::from_tsv(
                lang,
                &fs::read_to_string(&path)?,
            )?);
        }
        Self::new(profiles, min_chars)
    }

    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.profiles.iter().map(|p| p.lang.as_str())
    }

    pub fn min_chars(&self) -> usize {
        self.min_chars
    }

    pub fn classify(&self, text: &str) -> Classification {
        let unknown = Classification {
            lang: None,
            margin: 0,
        };
        if text.trim().chars().count() < self.min_chars {
            return unknown;
        }
        let doc = rank(count_grams(text), PROFILE_SIZE);
        if doc.is_empty() {
            return unknown;
        }
        let mut scored: Vec<(usize, &str)> = self
            .profiles
            .iter()
            .map(|p| (p.distance(&doc), p.lang.as_str()))
            .collect();
        scored.sort();
        Classification {
            lang: Some(scored[0].1.to_string()),
            margin: scored[1].0 - scored[0].0,
        }
    }
}
