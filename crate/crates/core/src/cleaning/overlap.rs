//! Near-duplicate removal over word shingles.
//!
//! A pair is dropped when, on either side, the Jaccard similarity of its
//! shingle set with some already retained pair exceeds the threshold.
//! Both methods confirm with exact Jaccard; they differ only in how the
//! retained pairs to compare against are found.

use std::collections::HashMap;

use serde::Serialize;

use crate::paragraph_alignment::ParagraphPair;

pub const NUM_PERM: usize = 128;
pub const BANDS: usize = 32;
pub const ROWS: usize = 4;

const MINHASH_SEED: u64 = 0x5_eed0_fd0c_9a7a;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMethod {
    /// Inverted shingle index; finds every retained pair sharing a shingle.
    Exact,
    /// MinHash signatures with banded LSH buckets.
    #[default]
    Lsh,
}

impl std::str::FromStr for OverlapMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(OverlapMethod::Exact),
            "lsh" => Ok(OverlapMethod::Lsh),
            other => Err(format!(
                "unknown overlap method {other:?} (expected exact|lsh)"
            )),
        }
    }
}

impl std::fmt::Display for OverlapMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OverlapMethod::Exact => "exact",
            OverlapMethod::Lsh => "lsh",
        })
    }
}

#[inline]
fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    mix64(h)
}

/// Hashed shingles of `size` consecutive lowercased whitespace tokens,
/// sorted and deduplicated. Texts shorter than `size` tokens yield one
/// shingle covering all tokens; empty texts yield none.
pub fn shingle_set<'a>(texts: impl IntoIterator<Item = &'a str>, size: usize) -> Vec<u64> {
    let lowered: Vec<String> = texts.into_iter().map(str::to_lowercase).collect();
    let tokens: Vec<&str> = lowered.iter().flat_map(|t| t.split_whitespace()).collect();
    if tokens.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<u64> = if tokens.len() < size {
        vec![fnv1a(tokens.join(" ").as_bytes())]
    } else {
        tokens
            .windows(size)
            .map(|w| fnv1a(w.join(" ").as_bytes()))
            .collect()
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// |a ∩ b| / |a ∪ b| over sorted, deduplicated sets; 0 when both are empty.
pub fn jaccard(a: &[u64], b: &[u64]) -> f64 {
    let (mut i, mut j, mut inter) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairShingles {
    pub src: Vec<u64>,
    pub tgt: Vec<u64>,
}

impl PairShingles {
    pub fn of(pair: &ParagraphPair, size: usize) -> Self {
        Self {
            src: shingle_set(pair.src_texts(), size),
            tgt: shingle_set(pair.tgt_texts(), size),
        }
    }

    /// The larger of the per-side Jaccard similarities.
    pub fn similarity(&self, other: &PairShingles) -> f64 {
        jaccard(&self.src, &other.src).max(jaccard(&self.tgt, &other.tgt))
    }
}

#[derive(Debug, Clone)]
pub struct MinHasher {
    seeds: Vec<u64>,
}

impl Default for MinHasher {
    fn default() -> Self {
        let mut state = MINHASH_SEED;
        let seeds = (0..NUM_PERM)
            .map(|_| {
                state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
                mix64(state)
            })
            .collect();
        Self { seeds }
    }
}

impl MinHasher {
    pub fn signature(&self, set: &[u64]) -> Vec<u64> {
        let mut sig = vec![u64::MAX; NUM_PERM];
        for &x in set {
            for (slot, &seed) in sig.iter_mut().zip(&self.seeds) {
                let h = mix64(x ^ seed);
                if h < *slot {
                    *slot = h;
                }
            }
        }
        sig
    }

    /// One bucket key per band.
    pub fn band_keys(&self, sig: &[u64]) -> Vec<u64> {
        sig.chunks(ROWS)
            .enumerate()
            .map(|(band, rows)| {
                rows.iter()
                    .fold(mix64(band as u64 + 1), |acc, &r| mix64(acc ^ r))
            })
            .collect()
    }
}

/// Per-pair work that does not depend on admission state; safe to compute
/// in parallel before [`OverlapFilter::admit`].
#[derive(Debug, Clone)]
pub struct Prepared {
    shingles: PairShingles,
    src_bands: Vec<u64>,
    tgt_bands: Vec<u64>,
}

#[derive(Debug, Default)]
struct Buckets(HashMap<u64, Vec<u32>>);

impl Buckets {
    fn insert(&mut self, keys: &[u64], id: u32) {
        for &k in keys {
            self.0.entry(k).or_default().push(id);
        }
    }

    fn collect(&self, keys: &[u64], out: &mut Vec<u32>) {
        for k in keys {
            if let Some(ids) = self.0.get(k) {
                out.extend_from_slice(ids);
            }
        }
    }
}

/// Admission state for overlap filtering. Pairs must be admitted in a fixed
/// order for the output to be deterministic.
#[derive(Debug)]
pub struct OverlapFilter {
    threshold: f64,
    shingle_size: usize,
    method: OverlapMethod,
    hasher: MinHasher,
    retained: Vec<PairShingles>,
    src_index: Buckets,
    tgt_index: Buckets,
}

impl OverlapFilter {
    pub fn new(threshold: f64, shingle_size: usize, method: OverlapMethod) -> Self {
        Self {
            threshold,
            shingle_size,
            method,
            hasher: MinHasher::default(),
            retained: Vec::new(),
            src_index: Buckets::default(),
            tgt_index: Buckets::default(),
        }
    }

    pub fn method(&self) -> OverlapMethod {
        self.method
    }

    pub fn retained(&self) -> usize {
        self.retained.len()
    }

    pub fn prepare(&self, pair: &ParagraphPair) -> Prepared {
        let shingles = PairShingles::of(pair, self.shingle_size);
        let (src_bands, tgt_bands) = match self.method {
            OverlapMethod::Exact => (shingles.src.clone(), shingles.tgt.clone()),
            OverlapMethod::Lsh => {
                let keys = |set: &[u64]| {
                    if set.is_empty() {
                        Vec::new()
                    } else {
                        self.hasher.band_keys(&self.hasher.signature(set))
                    }
                };
                (keys(&shingles.src), keys(&shingles.tgt))
            }
        };
        Prepared {
            shingles,
            src_bands,
            tgt_bands,
        }
    }

    /// Returns true and records the pair if it is kept.
    pub fn admit(&mut self, prepared: Prepared) -> bool {
        let mut candidates = Vec::new();
        self.src_index.collect(&prepared.src_bands, &mut candidates);
        self.tgt_index.collect(&prepared.tgt_bands, &mut candidates);
        candidates.sort_unstable();
        candidates.dedup();
        let duplicate = candidates
            .iter()
            .any(|&id| self.retained[id as usize].similarity(&prepared.shingles) > self.threshold);
        if duplicate {
            return false;
        }
        let id = self.retained.len() as u32;
        self.src_index.insert(&prepared.src_bands, id);
        self.tgt_index.insert(&prepared.tgt_bands, id);
        self.retained.push(prepared.shingles);
        true
    }

    pub fn check(&mut self, pair: &ParagraphPair) -> bool {
        let prepared = self.prepare(pair);
        self.admit(prepared)
    }
}
