//! Coding schemes that map a word corpus to a code corpus while keeping the
//! code → source-word alignment, so that the number of distinct meanings per
//! code stays measurable.

use std::fmt;

use crate::corpus::{Corpus, Script};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodingError {
    #[error("cannot encode an empty word")]
    EmptyWord,

    #[error("prefix length must be >= 1")]
    ZeroPrefix,

    #[error("scheme {scheme} does not apply to a {script} corpus")]
    SchemeScriptMismatch { scheme: CodingScheme, script: Script },

    #[error("{0} applies at corpus level, not to single words")]
    CorpusLevelScheme(CodingScheme),
}

/// How words become codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodingScheme {
    /// Every word is its own code.
    Identity,
    /// A word is represented by its first L letters.
    PrefixL(u32),
    /// A word is split into consecutive 3-letter chunks with a final
    /// remainder chunk of 1-3 letters; each chunk is a separate code.
    Chunk321,
    /// Han corpora: every character token is its own code.
    CharIdentity,
}

impl fmt::Display for CodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodingScheme::Identity => write!(f, "identity"),
            CodingScheme::PrefixL(l) => write!(f, "prefix:{l}"),
            CodingScheme::Chunk321 => write!(f, "chunk321"),
            CodingScheme::CharIdentity => write!(f, "chars"),
        }
    }
}

/// Where a code occurrence came from: token position in the source corpus
/// plus the chunk index within that word (always 0 except for Chunk321).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceRef {
    pub token_index: u32,
    pub chunk_index: u16,
}

/// The coded corpus: ordered code occurrences aligned to their source words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedCorpus {
    codes: Vec<String>,
    alignment: Vec<SourceRef>,
    scheme: CodingScheme,
    source_tokens: Vec<String>,
}

impl CodedCorpus {
    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    /// Total code occurrences (the coded-corpus M).
    pub fn code_count(&self) -> usize {
        self.codes.len()
    }

    pub fn scheme(&self) -> CodingScheme {
        self.scheme
    }

    pub fn alignment(&self) -> &[SourceRef] {
        &self.alignment
    }

    pub fn source_tokens(&self) -> &[String] {
        &self.source_tokens
    }

    /// Iterate `(code, source word, chunk index)` over all occurrences.
    pub fn occurrences(&self) -> impl Iterator<Item = (&str, &str, u16)> {
        self.codes.iter().zip(&self.alignment).map(|(code, src)| {
            (
                code.as_str(),
                self.source_tokens[src.token_index as usize].as_str(),
                src.chunk_index,
            )
        })
    }
}

/// Greedy 3-letter chunking: full chunks of 3, then a remainder of 1-3.
/// Words of length <= 3 are a single chunk.
fn chunk321(word: &str) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let mut out = Vec::with_capacity(chars.len() / 3 + 1);
    let full = chars.len() / 3;
    let rem = chars.len() % 3;
    for j in 0..full {
        out.push(chars[3 * j..3 * j + 3].iter().collect());
    }
    if rem > 0 {
        out.push(chars[3 * full..].iter().collect());
    }
    out
}

/// Encode one word. `Identity` returns the word, `PrefixL(l)` its first
/// `min(l, len)` letters, `Chunk321` the chunk sequence.
pub fn encode_token(word: &str, scheme: &CodingScheme) -> Result<Vec<String>, CodingError> {
    if word.is_empty() {
        return Err(CodingError::EmptyWord);
    }
    match scheme {
        CodingScheme::Identity => Ok(vec![word.to_string()]),
        CodingScheme::PrefixL(0) => Err(CodingError::ZeroPrefix),
        CodingScheme::PrefixL(l) => Ok(vec![word.chars().take(*l as usize).collect()]),
        CodingScheme::Chunk321 => Ok(chunk321(word)),
        CodingScheme::CharIdentity => Err(CodingError::CorpusLevelScheme(CodingScheme::CharIdentity)),
    }
}

/// Encode a corpus, order-preserving. `CharIdentity` requires a Han corpus;
/// the other schemes require an alphabetic one.
pub fn encode_corpus(corpus: &Corpus, scheme: CodingScheme) -> Result<CodedCorpus, CodingError> {
    let compatible = match scheme {
        CodingScheme::CharIdentity => corpus.script() == Script::Cjk,
        _ => corpus.script() == Script::Alphabetic,
    };
    if !compatible {
        return Err(CodingError::SchemeScriptMismatch {
            scheme,
            script: corpus.script(),
        });
    }
    if let CodingScheme::PrefixL(0) = scheme {
        return Err(CodingError::ZeroPrefix);
    }

    let mut codes = Vec::with_capacity(corpus.len());
    let mut alignment = Vec::with_capacity(corpus.len());
    for (i, word) in corpus.tokens().iter().enumerate() {
        let token_index = i as u32;
        match scheme {
            CodingScheme::Identity | CodingScheme::CharIdentity => {
                codes.push(word.clone());
                alignment.push(SourceRef { token_index, chunk_index: 0 });
            }
            CodingScheme::PrefixL(l) => {
                codes.push(word.chars().take(l as usize).collect());
                alignment.push(SourceRef { token_index, chunk_index: 0 });
            }
            CodingScheme::Chunk321 => {
                for (j, chunk) in chunk321(word).into_iter().enumerate() {
                    codes.push(chunk);
                    alignment.push(SourceRef {
                        token_index,
                        chunk_index: j as u16,
                    });
                }
            }
        }
    }
    Ok(CodedCorpus {
        codes,
        alignment,
        scheme,
        source_tokens: corpus.tokens().to_vec(),
    })
}
