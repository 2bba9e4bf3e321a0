//! Text loading and deterministic tokenization.
//!
//! Words are maximal runs of Latin-range letters, lowercased; everything else
//! (digits, punctuation, apostrophes, hyphens, em-dashes) separates tokens.
//! Han-script text is tokenized one character per token. Both tokenizers are
//! pure functions of their input, so token sequences are reproducible
//! byte-for-byte.

use std::fmt;
use std::path::Path;

use crate::rng::{chacha8, uniform_u64};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("input is not valid {encoding}")]
    InvalidEncoding { encoding: String },

    #[error("unsupported encoding {0:?} (only utf-8)")]
    UnsupportedEncoding(String),

    #[error("fraction denominator must be >= 1")]
    ZeroDenominator,
}

/// Decoded text plus an opaque label of where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawText {
    pub content: String,
    pub source_id: String,
}

/// Script family a corpus was tokenized under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Script {
    Alphabetic,
    Cjk,
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Script::Alphabetic => write!(f, "alphabetic"),
            Script::Cjk => write!(f, "cjk"),
        }
    }
}

/// Tokenizer knobs. The word rule itself is fixed (see module docs); the
/// struct exists so configs serialize and future options have a home.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenizerConfig {}

/// An ordered token sequence. `M = len()` is the total token count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    tokens: Vec<String>,
    script: Script,
}

impl Corpus {
    pub fn new(tokens: Vec<String>, script: Script) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.is_empty()));
        Corpus { tokens, script }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Total token count (the corpus M).
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn script(&self) -> Script {
        self.script
    }
}

/// Decode `bytes` as text. Only UTF-8 is supported; invalid byte sequences
/// are an error, never repaired. Line endings are normalized to `\n`.
pub fn decode_text(
    bytes: &[u8],
    encoding: &str,
    source_id: impl Into<String>,
) -> Result<RawText, CorpusError> {
    match encoding.to_ascii_lowercase().as_str() {
        "utf-8" | "utf8" => {}
        other => return Err(CorpusError::UnsupportedEncoding(other.to_string())),
    }
    let s = std::str::from_utf8(bytes).map_err(|_| CorpusError::InvalidEncoding {
        encoding: "utf-8".to_string(),
    })?;
    let content = s.replace("\r\n", "\n").replace('\r', "\n");
    Ok(RawText {
        content,
        source_id: source_id.into(),
    })
}

/// Read and decode a UTF-8 text file.
pub fn load_text(path: impl AsRef<Path>) -> Result<RawText, CorpusError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode_text(&bytes, "utf-8", path.display().to_string())
}

/// A word character: ASCII letters plus the Latin-1/Latin-Extended letter
/// ranges. Apostrophes and hyphens are separators, so "don't" tokenizes as
/// ["don", "t"].
fn is_latin_letter(c: char) -> bool {
    c.is_ascii_alphabetic() || (('\u{00C0}'..='\u{024F}').contains(&c) && c.is_alphabetic())
}

/// Split text into lowercased words: maximal runs of Latin letters.
pub fn tokenize_words(text: &RawText, _config: &TokenizerConfig) -> Corpus {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.content.chars() {
        if is_latin_letter(c) {
            current.extend(c.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    Corpus::new(tokens, Script::Alphabetic)
}

/// Unicode Han blocks (unified ideographs, extensions, compatibility).
const HAN_RANGES: &[(u32, u32)] = &[
    (0x3400, 0x4DBF),   // CJK Unified Ideographs Extension A
    (0x4E00, 0x9FFF),   // CJK Unified Ideographs
    (0xF900, 0xFAFF),   // CJK Compatibility Ideographs
    (0x20000, 0x2A6DF), // Extension B
    (0x2A700, 0x2EE5F), // Extensions C through I (contiguous blocks)
    (0x2F800, 0x2FA1F), // CJK Compatibility Ideographs Supplement
    (0x30000, 0x323AF), // Extensions G and H
];

fn is_han(c: char) -> bool {
    let cp = c as u32;
    HAN_RANGES.iter().any(|&(lo, hi)| (lo..=hi).contains(&cp))
}

/// One token per Han code point; every other code point is dropped.
pub fn tokenize_chars(text: &RawText) -> Corpus {
    let tokens = text
        .content
        .chars()
        .filter(|&c| is_han(c))
        .map(String::from)
        .collect();
    Corpus::new(tokens, Script::Cjk)
}

/// How [`take_fraction`] places the extracted window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FractionMode {
    /// The first ⌊M/denominator⌋ tokens.
    #[default]
    Prefix,
    /// A contiguous window of the same length at a seeded random offset.
    Window,
}

/// Extract a 1/denominator part of the corpus. A denominator larger than M
/// yields an empty corpus.
pub fn take_fraction(
    corpus: &Corpus,
    denominator: u64,
    mode: FractionMode,
    seed: u64,
) -> Result<Corpus, CorpusError> {
    if denominator == 0 {
        return Err(CorpusError::ZeroDenominator);
    }
    let len = corpus.len() as u64 / denominator;
    let start = match mode {
        FractionMode::Prefix => 0,
        FractionMode::Window => {
            let slack = corpus.len() as u64 - len;
            if slack == 0 {
                0
            } else {
                uniform_u64(&mut chacha8(seed), slack + 1)
            }
        }
    };
    let (start, len) = (start as usize, len as usize);
    Ok(Corpus::new(
        corpus.tokens[start..start + len].to_vec(),
        corpus.script,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(s: &str) -> RawText {
        RawText {
            content: s.to_string(),
            source_id: "test".to_string(),
        }
    }

    fn words(s: &str) -> Vec<String> {
        tokenize_words(&raw(s), &TokenizerConfig::default())
            .tokens()
            .to_vec()
    }

    #[test]
    fn decode_is_identity_on_plain_ascii() {
        let t = decode_text(b"call me", "utf-8", "t").unwrap();
        assert_eq!(t.content, "call me");
    }

    #[test]
    fn decode_rejects_invalid_utf8() {
        // 0xC3 starts a two-byte sequence; 0x28 is not a continuation byte.
        let err = decode_text(&[0x63, 0xC3, 0x28], "utf-8", "t").unwrap_err();
        assert!(matches!(err, CorpusError::InvalidEncoding { .. }));
    }

    #[test]
    fn decode_normalizes_line_endings() {
        let t = decode_text(b"Call\r\nme", "utf-8", "t").unwrap();
        assert_eq!(t.content, "Call\nme");
    }

    #[test]
    fn decode_rejects_other_encodings() {
        let err = decode_text(b"abc", "latin-1", "t").unwrap_err();
        assert!(matches!(err, CorpusError::UnsupportedEncoding(_)));
    }

    #[test]
    fn tokenizes_opening_sentence() {
        assert_eq!(words("Call me Ishmael."), ["call", "me", "ishmael"]);
    }

    #[test]
    fn empty_text_gives_empty_corpus() {
        assert_eq!(words(""), Vec::<String>::new());
        assert_eq!(tokenize_words(&raw(""), &TokenizerConfig::default()).len(), 0);
    }

    #[test]
    fn apostrophes_are_separators() {
        assert_eq!(words("don't stop"), ["don", "t", "stop"]);
    }

    #[test]
    fn punctuation_digits_and_dashes_separate() {
        assert_eq!(words("ab12cd ef—gh i-j"), ["ab", "cd", "ef", "gh", "i", "j"]);
    }

    #[test]
    fn han_tokenizer_keeps_only_han() {
        let t = raw("白鯨記，第一章，abc");
        let c = tokenize_chars(&t);
        assert_eq!(c.len(), 5);
        assert_eq!(c.script(), Script::Cjk);

        assert_eq!(tokenize_chars(&raw("pure latin text")).len(), 0);
    }

    #[test]
    fn han_count_matches_independent_table() {
        let text = "字word字2字，\u{3400}\u{20000}x";
        let c = tokenize_chars(&raw(text));
        assert_eq!(c.len(), crate::testkit::han_count_oracle(text));
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn fraction_denominator_one_is_identity() {
        let c = Corpus::new(vec!["a".into(), "b".into(), "c".into()], Script::Alphabetic);
        let f = take_fraction(&c, 1, FractionMode::Prefix, 0).unwrap();
        assert_eq!(f, c);
    }

    #[test]
    fn fraction_prefix_takes_first_tokens() {
        let tokens: Vec<String> = (0..1000).map(|i| format!("w{i}")).collect();
        let c = Corpus::new(tokens.clone(), Script::Alphabetic);
        let f = take_fraction(&c, 100, FractionMode::Prefix, 0).unwrap();
        assert_eq!(f.tokens(), &tokens[..10]);
    }

    #[test]
    fn fraction_floor_division_at_novel_scale() {
        let c = Corpus::new(vec!["a".to_string(); 214_675], Script::Alphabetic);
        let f = take_fraction(&c, 10, FractionMode::Prefix, 0).unwrap();
        assert_eq!(f.len(), 21_467);
    }

    #[test]
    fn fraction_larger_than_corpus_is_empty() {
        let c = Corpus::new(vec!["a".into()], Script::Alphabetic);
        assert_eq!(take_fraction(&c, 5, FractionMode::Prefix, 0).unwrap().len(), 0);
    }

    #[test]
    fn fraction_zero_denominator_is_an_error() {
        let c = Corpus::new(vec!["a".into()], Script::Alphabetic);
        assert!(take_fraction(&c, 0, FractionMode::Prefix, 0).is_err());
    }

    #[test]
    fn fraction_window_is_seeded_and_contiguous() {
        let tokens: Vec<String> = (0..100).map(|i| format!("w{i}")).collect();
        let c = Corpus::new(tokens.clone(), Script::Alphabetic);
        let a = take_fraction(&c, 4, FractionMode::Window, 9).unwrap();
        let b = take_fraction(&c, 4, FractionMode::Window, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 25);
        // contiguity: the window appears verbatim in the source
        let start: usize = a.tokens()[0][1..].parse().unwrap();
        assert_eq!(a.tokens(), &tokens[start..start + 25]);
    }
}
