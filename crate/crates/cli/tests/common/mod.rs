//! Deterministic synthetic inputs shared by the CLI test targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use docpara_core::ingest::AlignmentLink;
use docpara_core::paragraph_alignment::{ParagraphPair, SentencePair};
use docpara_core::segmentation::SegmentedDocument;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub const EN_WORDS: &[&str] = &[
    "the",
    "house",
    "river",
    "city",
    "people",
    "water",
    "morning",
    "evening",
    "little",
    "old",
    "new",
    "long",
    "small",
    "great",
    "garden",
    "window",
    "street",
    "market",
    "children",
    "friends",
    "walked",
    "talked",
    "looked",
    "found",
    "made",
    "brought",
    "heard",
    "thought",
    "seemed",
    "turned",
    "quickly",
    "slowly",
    "always",
    "never",
    "often",
    "together",
    "again",
    "almost",
    "really",
    "still",
    "and",
    "but",
    "with",
    "from",
    "about",
    "through",
    "after",
    "before",
    "because",
    "while",
    "their",
    "there",
    "where",
    "which",
    "would",
    "could",
    "should",
    "every",
    "other",
    "another",
    "bridge",
    "mountain",
    "forest",
    "village",
    "station",
    "letter",
    "story",
    "question",
    "answer",
    "reason",
    "teacher",
    "doctor",
    "farmer",
    "brother",
    "sister",
    "mother",
    "father",
    "neighbour",
    "stranger",
    "visitor",
    "weather",
    "winter",
    "summer",
    "autumn",
    "spring",
    "holiday",
    "journey",
    "kitchen",
    "library",
    "harbour",
    "bright",
    "quiet",
    "heavy",
    "warm",
    "cold",
    "early",
    "late",
    "happy",
    "tired",
    "careful",
];

pub const DE_WORDS: &[&str] = &[
    "der",
    "die",
    "das",
    "und",
    "nicht",
    "mit",
    "auf",
    "für",
    "ist",
    "sich",
    "Haus",
    "Fluss",
    "Stadt",
    "Leute",
    "Wasser",
    "Morgen",
    "Abend",
    "kleine",
    "alte",
    "neue",
    "lange",
    "große",
    "Garten",
    "Fenster",
    "Straße",
    "Markt",
    "Kinder",
    "Freunde",
    "ging",
    "sprach",
    "schaute",
    "fand",
    "machte",
    "brachte",
    "hörte",
    "dachte",
    "schien",
    "drehte",
    "schnell",
    "langsam",
    "immer",
    "niemals",
    "oft",
    "zusammen",
    "wieder",
    "fast",
    "wirklich",
    "noch",
    "aber",
    "durch",
    "nach",
    "bevor",
    "weil",
    "während",
    "ihre",
    "dort",
    "welche",
    "würde",
    "könnte",
    "sollte",
    "Brücke",
    "Berg",
    "Wald",
    "Dorf",
    "Bahnhof",
    "Brief",
    "Geschichte",
    "Frage",
    "Antwort",
    "Grund",
    "Lehrer",
    "Ärztin",
    "Bauer",
    "Bruder",
    "Schwester",
    "Mutter",
    "Vater",
    "Nachbar",
    "Fremde",
    "Besucher",
    "Wetter",
    "Winter",
    "Sommer",
    "Herbst",
    "Frühling",
    "Urlaub",
    "Reise",
    "Küche",
    "Bücherei",
    "Hafen",
    "hell",
    "ruhig",
    "schwer",
    "warm",
    "kalt",
    "früh",
    "spät",
    "glücklich",
    "müde",
    "vorsichtig",
];

pub const FR_SENTENCES: &[&str] = &[
    "Les enfants jouent dans le jardin pendant que leurs parents préparent le repas du soir.",
    "Nous avons visité le vieux château qui se trouve au sommet de la colline près du village.",
    "Elle a toujours voulu apprendre à jouer du piano mais elle n'a jamais trouvé le temps.",
    "Le marché du samedi attire beaucoup de monde grâce à ses fromages et ses légumes frais.",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sentence(rng: &mut impl Rng, words: &[&str]) -> String {
    let n = rng.gen_range(8..=16);
    let mut toks: Vec<String> = (0..n)
        .map(|_| words.choose(rng).unwrap().to_string())
        .collect();
    let mut first = toks[0].chars();
    toks[0] = first
        .next()
        .map(|c| c.to_uppercase().chain(first).collect())
        .unwrap_or_default();
    format!("{}.", toks.join(" "))
}

fn b64(s: &str) -> String {
    STANDARD.encode(s.as_bytes())
}

fn render(paras: &[Vec<String>]) -> String {
    paras
        .iter()
        .map(|p| p.join("\n"))
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Document-pair TSV and alignment file contents.
pub struct Corpus {
    pub docs: String,
    pub alignments: String,
    pub n_docs: usize,
}

impl Corpus {
    pub fn write(&self, dir: &Path) -> (PathBuf, PathBuf) {
        let docs = dir.join("docs.tsv");
        let aligns = dir.join("alignments.txt");
        std::fs::write(&docs, &self.docs).unwrap();
        std::fs::write(&aligns, &self.alignments).unwrap();
        (docs, aligns)
    }
}

/// Synthetic web-document pairs with mostly diagonal alignments and a
/// controlled amount of noise: many-to-one links, unaligned sentences,
/// cross-paragraph links, boilerplate paragraphs repeated across documents
/// and the odd French sentence on the source side.
pub fn synthetic_corpus(n_docs: usize, seed: u64) -> Corpus {
    let mut r = rng(seed);
    let boilerplate: Vec<(Vec<String>, Vec<String>)> = (0..5)
        .map(|_| {
            let n = r.gen_range(3..=4);
            (
                (0..n).map(|_| sentence(&mut r, EN_WORDS)).collect(),
                (0..n).map(|_| sentence(&mut r, DE_WORDS)).collect(),
            )
        })
        .collect();
    let mut docs = String::new();
    let mut aligns = String::new();
    for d in 0..n_docs {
        let id = format!("doc{d:06}");
        let n_paras = r.gen_range(4..=10);
        let mut src_paras: Vec<Vec<String>> = Vec::new();
        let mut tgt_paras: Vec<Vec<String>> = Vec::new();
        for _ in 0..n_paras {
            if r.gen_bool(0.08) {
                let (s, t) = boilerplate.choose(&mut r).unwrap().clone();
                src_paras.push(s);
                tgt_paras.push(t);
                continue;
            }
            let n = r.gen_range(1..=6);
            let mut s: Vec<String> = (0..n).map(|_| sentence(&mut r, EN_WORDS)).collect();
            if r.gen_bool(0.03) {
                let i = r.gen_range(0..n);
                s[i] = FR_SENTENCES.choose(&mut r).unwrap().to_string();
            }
            src_paras.push(s);
            tgt_paras.push((0..n).map(|_| sentence(&mut r, DE_WORDS)).collect());
        }
        let total: usize = src_paras.iter().map(Vec::len).sum();
        let mut links = Vec::new();
        let mut i = 0;
        while i < total {
            let roll: f64 = r.gen();
            if roll < 0.04 && i + 1 < total {
                links.push(format!("[{}, {}]:[{}]:0.4", i, i + 1, i));
                links.push(format!("[]:[{}]:0.0", i + 1));
                i += 2;
                continue;
            }
            if roll < 0.07 {
                links.push(format!("[{i}]:[]:0.0"));
            } else if roll < 0.085 {
                let j = r.gen_range(0..total);
                links.push(format!("[{i}]:[{j}]:0.6"));
            } else {
                links.push(format!("[{i}]:[{i}]:{:.3}", r.gen_range(0.0..0.5)));
            }
            i += 1;
        }
        docs.push_str(&format!(
            "{id}\thttps://example.org/en/{d}\thttps://example.org/de/{d}\t{}\t{}\n",
            b64(&render(&src_paras)),
            b64(&render(&tgt_paras)),
        ));
        aligns.push_str(&format!("#pair {id}\n"));
        for l in links {
            aligns.push_str(&l);
            aligns.push('\n');
        }
    }
    Corpus {
        docs,
        alignments: aligns,
        n_docs,
    }
}

/// A random extraction instance: up to 10 paragraphs and 30 sentences per
/// side, a diagonal backbone with gaps, plus random one-to-one, many-to-one
/// and crossing links. Texts come from a tiny pool so repeats occur.
pub fn random_instance(
    r: &mut impl Rng,
) -> (SegmentedDocument, SegmentedDocument, Vec<AlignmentLink>) {
    const POOL: [&str; 5] = [
        "Ja bitte",
        "ja  BITTE",
        "Nein danke",
        "Guten Tag",
        "Bis bald",
    ];
    let side = |r: &mut dyn rand::RngCore| {
        let n_paras = r.gen_range(1..=10);
        let mut budget = 30usize;
        let mut paras = Vec::new();
        for _ in 0..n_paras {
            if budget == 0 {
                break;
            }
            let n = r.gen_range(1..=budget.min(6));
            budget -= n;
            paras.push(
                (0..n)
                    .map(|_| POOL[r.gen_range(0..POOL.len())].to_string())
                    .collect::<Vec<_>>(),
            );
        }
        SegmentedDocument::from_paragraphs("d", paras.iter().map(|p| p.iter().map(String::as_str)))
    };
    let src = side(r);
    let tgt = side(r);
    let (ns, nt) = (src.num_sentences(), tgt.num_sentences());
    let mut links = Vec::new();
    for i in 0..ns.min(nt) {
        if r.gen_bool(0.8) {
            links.push(AlignmentLink::new(vec![i], vec![i], 0.5));
        }
    }
    for _ in 0..r.gen_range(0..8) {
        let pick = |r: &mut dyn rand::RngCore, n: usize| -> Vec<usize> {
            let k = r.gen_range(0..=2usize).min(n);
            let mut v: Vec<usize> = (0..n)
                .collect::<Vec<_>>()
                .choose_multiple(r, k)
                .copied()
                .collect();
            v.sort_unstable();
            v
        };
        let (s, t) = (pick(r, ns), pick(r, nt));
        if !(s.is_empty() && t.is_empty()) {
            links.push(AlignmentLink::new(s, t, r.gen_range(-1.0..1.0)));
        }
    }
    links.shuffle(r);
    (src, tgt, links)
}

/// A paragraph pair whose source and target are the given word lists.
pub fn pair_of(id: &str, src: &[String], tgt: &[String]) -> ParagraphPair {
    ParagraphPair {
        pair_id: id.into(),
        src_para: 0,
        tgt_para: 0,
        sentence_pairs: vec![SentencePair {
            src_idx: 0,
            tgt_idx: 0,
            src_text: src.join(" "),
            tgt_text: tgt.join(" "),
        }],
    }
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_docpara"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// The manifest with its timing section removed.
pub fn manifest_without_runtime(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("runtime");
    v
}
