//! Externally tagged text: `surface<TAB>tag` per line, a blank line between
//! sentences. Lets any outside tagger stand in for the built-in one.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use simile_core::tagger::{Tag, TaggedToken};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaggedText {
    pub sentences: Vec<Vec<TaggedToken>>,
    /// Tokens whose tag was not one of V A N C P O; they were tagged O.
    pub unknown_tags: usize,
    /// Lines without a tab or with an empty surface; they were skipped.
    pub malformed_lines: usize,
}

pub fn parse_tagged(text: &str) -> TaggedText {
    let mut out = TaggedText::default();
    let mut current: Vec<TaggedToken> = Vec::new();
    let flush = |current: &mut Vec<TaggedToken>, out: &mut TaggedText| {
        if !current.is_empty() {
            out.sentences.push(std::mem::take(current));
        }
    };
    for line in text.lines() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&mut current, &mut out);
            continue;
        }
        let Some((surface, tag)) = line.split_once('\t') else {
            out.malformed_lines += 1;
            continue;
        };
        let surface = surface.trim();
        if surface.is_empty() {
            out.malformed_lines += 1;
            continue;
        }
        let tag = tag.trim().parse::<Tag>().unwrap_or_else(|_| {
            out.unknown_tags += 1;
            Tag::Other
        });
        let sentence_index = out.sentences.len();
        current.push(TaggedToken::new(surface, tag, sentence_index, current.len()));
    }
    flush(&mut current, &mut out);
    out
}

pub fn load_tagged(path: &Path) -> io::Result<TaggedText> {
    let parsed = parse_tagged(&std::fs::read_to_string(path)?);
    if parsed.unknown_tags > 0 || parsed.malformed_lines > 0 {
        tracing::warn!(
            path = %path.display(),
            unknown_tags = parsed.unknown_tags,
            malformed_lines = parsed.malformed_lines,
            "tagged file had problems"
        );
    }
    Ok(parsed)
}

pub fn export_tagged(sentences: &[Vec<TaggedToken>]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        for t in sentence {
            let _ = writeln!(out, "{}\t{}", t.surface, t.tag.as_str());
        }
        out.push('\n');
    }
    out
}
