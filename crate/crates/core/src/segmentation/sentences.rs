use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::Path;

const EN_ABBREVIATIONS: &str = include_str!("../../data/abbrev/en.txt");
const DE_ABBREVIATIONS: &str = include_str!("../../data/abbrev/de.txt");

fn is_terminal(c: char) -> bool {
    matches!(
        c,
        '.' | '!' | '?' | '…' | '‼' | '⁇' | '⁈' | '⁉' | '。' | '！' | '？' | '؟'
    )
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | '”' | '’' | '“' | '»' | '›' | ')' | ']')
}

fn is_opening_quote(c: char) -> bool {
    matches!(
        c,
        '"' | '\'' | '“' | '„' | '«' | '‹' | '‘' | '‚' | '¿' | '¡'
    )
}

/// Rule-based sentence splitter.
///
/// A boundary is a run of terminal punctuation, optionally followed by closing
/// quotes or brackets, then whitespace, then an uppercase letter or an
/// opening quote. A lone `.` after a listed abbreviation is not a boundary.
/// Abbreviations match case-sensitively and are stored without the final
/// period.
#[derive(Debug, Clone, Default)]
pub struct SentenceSplitter {
    abbreviations: HashSet<String>,
}

impl SentenceSplitter {
    pub fn new<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let abbreviations = abbreviations
            .into_iter()
            .filter_map(|a| {
                let a = a.as_ref().trim();
                let a = a.strip_suffix('.').unwrap_or(a);
                (!a.is_empty()).then(|| a.to_string())
            })
            .collect();
        Self { abbreviations }
    }

    /// Parses an abbreviation list: one entry per line, `#` starts a comment.
    pub fn from_list(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_file(path: &Path) -> io::Result<Self> {
        Ok(Self::from_list(&fs::read_to_string(path)?))
    }

    /// The shipped list for `lang`, or an empty list for unknown languages.
    pub fn for_language(lang: &str) -> Self {
        match lang {
            "en" => Self::from_list(EN_ABBREVIATIONS),
            "de" => Self::from_list(DE_ABBREVIATIONS),
            _ => Self::default(),
        }
    }

    /// Loads `<dir>/<lang>.txt` when present, the shipped list otherwise.
    pub fn for_language_in(dir: Option<&Path>, lang: &str) -> io::Result<Self> {
        if let Some(dir) = dir {
            let path = dir.join(format!("{lang}.txt"));
            if path.exists() {
                return Self::from_file(&path);
            }
        }
        Ok(Self::for_language(lang))
    }

    pub fn is_abbreviation(&self, token: &str) -> bool {
        self.abbreviations.contains(token)
    }

    fn preceding_token(text: &str, end: usize) -> &str {
        let start = text[..end]
            .rfind(char::is_whitespace)
            .map(|i| i + text[i..].chars().next().map_or(1, char::len_utf8))
            .unwrap_or(0);
        text[start..end].trim_start_matches(|c: char| is_opening_quote(c) || c == '(' || c == '[')
    }

    /// Splits a trimmed paragraph into sentences. Never returns empty strings.
    pub fn split<'a>(&self, text: &'a str) -> Vec<&'a str> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
        let mut out = Vec::new();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            if !is_terminal(chars[i].1) {
                i += 1;
                continue;
            }
            let punct_start = i;
            let mut j = i;
            while j < chars.len() && is_terminal(chars[j].1) {
                j += 1;
            }
            let lone_period = j - punct_start == 1 && chars[punct_start].1 == '.';
            while j < chars.len() && is_closing(chars[j].1) {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            let boundary = k > j
                && k < chars.len()
                && (chars[k].1.is_uppercase() || is_opening_quote(chars[k].1))
                && !(lone_period
                    && self.is_abbreviation(Self::preceding_token(text, chars[punct_start].0)));
            if boundary {
                let sentence = text[byte_at(start)..byte_at(j)].trim();
                if !sentence.is_empty() {
                    out.push(sentence);
                }
                start = k;
                i = k;
            } else {
                i = j.max(i + 1);
            }
        }
        let rest = text[byte_at(start)..].trim();
        if !rest.is_empty() {
            out.push(rest);
        }
        out
    }
}
