//! Candidate simile extraction over tagged sentences.
//!
//! A candidate is a verb or adjective head, optionally followed by `se` when
//! the head is a verb, then a connector, then a run of adjectives/nouns that
//! ends in a noun. Matching is leftmost; the right side extends to the last
//! noun before the first token that is neither adjective nor noun. After a
//! match, scanning resumes past its last token.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::tagger::{segment, tag_tokens, transliterate_cyrillic, Lexicon, Tag, TaggedToken};
use crate::text::{fold_case, is_connector};

pub const CANONICAL_CONNECTOR: &str = "kao";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateKind {
    Adjectival,
    Verbal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSimile {
    pub left: String,
    pub connector: String,
    pub connector_surface: String,
    pub right: String,
    pub phrase: String,
    pub kind: CandidateKind,
    #[serde(default)]
    pub doc_url: String,
    pub sentence_index: usize,
    /// Inclusive token positions of the first and last matched token.
    pub span: (usize, usize),
    /// Occurrences of this exact phrase within its document.
    #[serde(default = "one")]
    pub count: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotAConnector(pub String);

impl fmt::Display for NotAConnector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} is not a connector (expected kao, ko or k'o)", self.0)
    }
}

impl core::error::Error for NotAConnector {}

/// Map any connector form to `kao`.
pub fn normalize_connector(surface: &str) -> Result<&'static str, NotAConnector> {
    if is_connector(&fold_case(surface)) {
        Ok(CANONICAL_CONNECTOR)
    } else {
        Err(NotAConnector(surface.to_string()))
    }
}

/// Where the left part and connector of a pattern starting at `head` sit.
/// Returns the connector position if the prefix `(V|A|V se) C` matches.
fn prefix_at(tokens: &[TaggedToken], head: usize) -> Option<usize> {
    let head_tag = tokens.get(head)?.tag;
    let mut next = head + 1;
    match head_tag {
        Tag::Adjective => {}
        Tag::Verb => {
            if tokens.get(next)?.tag == Tag::Particle {
                next += 1;
            }
        }
        _ => return None,
    }
    let conn = tokens.get(next)?;
    (conn.tag == Tag::Connector && is_connector(&conn.lower)).then_some(next)
}

fn build(tokens: &[TaggedToken], head: usize, conn: usize, last: usize) -> CandidateSimile {
    let join = |range: core::ops::Range<usize>| {
        let mut s = String::new();
        for t in &tokens[range] {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(&t.surface);
        }
        s
    };
    let left = join(head..conn);
    let right = join(conn + 1..last + 1);
    let connector_surface = tokens[conn].surface.clone();
    let phrase = alloc::format!("{left} {connector_surface} {right}");
    let kind = if tokens[head].tag == Tag::Adjective {
        CandidateKind::Adjectival
    } else {
        CandidateKind::Verbal
    };
    CandidateSimile {
        left,
        connector: CANONICAL_CONNECTOR.to_string(),
        connector_surface,
        right,
        phrase,
        kind,
        doc_url: String::new(),
        sentence_index: tokens[head].sentence_index,
        span: (tokens[head].token_index, tokens[last].token_index),
        count: 1,
    }
}

/// All leftmost, longest-right, non-overlapping matches in one sentence.
pub fn match_candidates(sentence: &[TaggedToken]) -> Vec<CandidateSimile> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sentence.len() {
        let Some(conn) = prefix_at(sentence, i) else {
            i += 1;
            continue;
        };
        let last_noun = sentence[conn + 1..]
            .iter()
            .take_while(|t| t.tag.is_nominal())
            .enumerate()
            .filter(|(_, t)| t.tag == Tag::Noun)
            .map(|(k, _)| conn + 1 + k)
            .last();
        match last_noun {
            Some(last) => {
                out.push(build(sentence, i, conn, last));
                i = last + 1;
            }
            None => i += 1,
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractOptions {
    pub transliterate: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            transliterate: true,
        }
    }
}

/// Tokenize, tag and match one document. Matches never cross punctuation.
/// Exact-duplicate phrases collapse into the first occurrence with a count.
pub fn extract_document(
    text: &str,
    doc_url: &str,
    lex: &Lexicon,
    opts: ExtractOptions,
) -> Vec<CandidateSimile> {
    let owned;
    let text = if opts.transliterate {
        owned = transliterate_cyrillic(text);
        owned.as_str()
    } else {
        text
    };
    let mut out: Vec<CandidateSimile> = Vec::new();
    for (sentence_index, sentence) in segment(text).into_iter().enumerate() {
        let tagged = tag_tokens(&sentence.tokens, lex, sentence_index);
        for clause in &sentence.clauses {
            for mut cand in match_candidates(&tagged[clause.clone()]) {
                if let Some(seen) = out.iter_mut().find(|c| c.phrase == cand.phrase) {
                    seen.count += 1;
                    continue;
                }
                cand.doc_url = doc_url.to_string();
                out.push(cand);
            }
        }
    }
    out
}
