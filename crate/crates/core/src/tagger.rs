//! Segmentation and coarse part-of-speech tagging.
//!
//! The tag set is deliberately small: the extractor only needs to tell verbs,
//! adjectives and nouns apart from the connector and the reflexive particle.
//! Tags come from an exact-form lexicon, then from a suffix table, then from a
//! default. Connector forms (`kao`, `ko`, `k'o`) and `se` are fixed regardless
//! of the lexicon.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::text::{fold_case, is_apostrophe, is_connector, REFLEXIVE};

const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.tsv");
const DEFAULT_SUFFIXES: &str = include_str!("../data/suffixes.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "V")]
    Verb,
    #[serde(rename = "A")]
    Adjective,
    #[serde(rename = "N")]
    Noun,
    #[serde(rename = "C")]
    Connector,
    #[serde(rename = "P")]
    Particle,
    #[serde(rename = "O")]
    #[default]
    Other,
}

impl Tag {
    pub const ALL: [Tag; 6] = [
        Tag::Verb,
        Tag::Adjective,
        Tag::Noun,
        Tag::Connector,
        Tag::Particle,
        Tag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Verb => "V",
            Tag::Adjective => "A",
            Tag::Noun => "N",
            Tag::Connector => "C",
            Tag::Particle => "P",
            Tag::Other => "O",
        }
    }

    /// True for the tags allowed inside the right-hand noun phrase.
    pub fn is_nominal(self) -> bool {
        matches!(self, Tag::Adjective | Tag::Noun)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown tag {:?}", self.0)
    }
}

impl core::error::Error for UnknownTag {}

impl FromStr for Tag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub lower: String,
    pub tag: Tag,
    pub sentence_index: usize,
    pub token_index: usize,
}

impl TaggedToken {
    /// Build a token with the connector/particle overrides applied to `tag`.
    pub fn new(surface: &str, tag: Tag, sentence_index: usize, token_index: usize) -> Self {
        let lower = fold_case(surface);
        let tag = forced_tag(&lower).unwrap_or(tag);
        TaggedToken {
            surface: surface.to_string(),
            lower,
            tag,
            sentence_index,
            token_index,
        }
    }
}

fn forced_tag(lower: &str) -> Option<Tag> {
    if is_connector(lower) {
        Some(Tag::Connector)
    } else if lower == REFLEXIVE {
        Some(Tag::Particle)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconError {
    Malformed { line: usize },
    UnknownTag { line: usize, tag: String },
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::Malformed { line } => {
                write!(f, "line {line}: expected two tab-separated fields")
            }
            LexiconError::UnknownTag { line, tag } => write!(f, "line {line}: unknown tag {tag:?}"),
        }
    }
}

impl core::error::Error for LexiconError {}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Tag>,
    /// Sorted longest suffix first; equal lengths keep insertion order.
    suffix_rules: Vec<(String, Tag)>,
    default_tag: Tag,
}


impl Lexicon {
    pub fn new(
        entries: impl IntoIterator<Item = (String, Tag)>,
        suffix_rules: impl IntoIterator<Item = (String, Tag)>,
        default_tag: Tag,
    ) -> Self {
        let entries = entries
            .into_iter()
            .map(|(form, tag)| (fold_case(&form), tag))
            .collect();
        let mut suffix_rules: Vec<(String, Tag)> = suffix_rules
            .into_iter()
            .map(|(suffix, tag)| (fold_case(&suffix), tag))
            .collect();
        suffix_rules.sort_by_key(|r| core::cmp::Reverse(r.0.chars().count()));
        Lexicon {
            entries,
            suffix_rules,
            default_tag,
        }
    }

    /// Parse a `form<TAB>tag` lexicon and a `suffix<TAB>tag` rule table.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(lexicon: &str, suffixes: &str) -> Result<Self, LexiconError> {
        Ok(Lexicon::new(
            parse_pairs(lexicon)?,
            parse_pairs(suffixes)?,
            Tag::Other,
        ))
    }

    /// The starter lexicon and suffix table shipped with the crate.
    pub fn default_serbian() -> Self {
        Lexicon::parse(DEFAULT_LEXICON, DEFAULT_SUFFIXES).expect("bundled lexicon is well-formed")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, form: &str, tag: Tag) {
        self.entries.insert(fold_case(form), tag);
    }

    pub fn suffix_rules(&self) -> &[(String, Tag)] {
        &self.suffix_rules
    }

    pub fn default_tag(&self) -> Tag {
        self.default_tag
    }

    /// Tag a single case-folded form.
    pub fn lookup(&self, lower: &str) -> Tag {
        if let Some(tag) = forced_tag(lower) {
            return tag;
        }
        if let Some(&tag) = self.entries.get(lower) {
            return tag;
        }
        self.suffix_rules
            .iter()
            .find(|(suffix, _)| lower.len() > suffix.len() && lower.ends_with(suffix.as_str()))
            .map(|&(_, tag)| tag)
            .unwrap_or(self.default_tag)
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(String, Tag)>, LexiconError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(form), Some(tag), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(LexiconError::Malformed { line: i + 1 });
        };
        let tag = tag.trim().parse().map_err(|UnknownTag(tag)| LexiconError::UnknownTag {
            line: i + 1,
            tag,
        })?;
        out.push((form.trim().to_string(), tag));
    }
    Ok(out)
}

/// A sentence as produced by [`segment`]: its tokens plus the punctuation-free
/// clauses they fall into.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub clauses: Vec<Range<usize>>,
}

/// Split text into sentences and tokens, remembering where punctuation
/// separated tokens so that matches never straddle it.
///
/// `!` and `?` always end a sentence; `.` ends one when followed by
/// whitespace or end of input. Apostrophes between letters stay inside the
/// token (`k'o`); all other punctuation is dropped.
pub fn segment(text: &str) -> Vec<Sentence> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut sentence = Sentence::default();
    let mut clause_start = 0;
    let mut word = String::new();

    fn close_word(word: &mut String, sentence: &mut Sentence) {
        if !word.is_empty() {
            sentence.tokens.push(core::mem::take(word));
        }
    }
    fn close_clause(sentence: &mut Sentence, clause_start: &mut usize) {
        if sentence.tokens.len() > *clause_start {
            sentence.clauses.push(*clause_start..sentence.tokens.len());
        }
        *clause_start = sentence.tokens.len();
    }

    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            word.push(c);
            continue;
        }
        if is_apostrophe(c)
            && !word.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphabetic())
        {
            word.push(c);
            continue;
        }
        close_word(&mut word, &mut sentence);
        if c.is_whitespace() {
            continue;
        }
        close_clause(&mut sentence, &mut clause_start);
        let ends_sentence = match c {
            '!' | '?' => true,
            '.' => chars.get(i + 1).is_none_or(|n| n.is_whitespace()),
            _ => false,
        };
        if ends_sentence && !sentence.tokens.is_empty() {
            sentences.push(core::mem::take(&mut sentence));
            clause_start = 0;
        }
    }
    close_word(&mut word, &mut sentence);
    close_clause(&mut sentence, &mut clause_start);
    if !sentence.tokens.is_empty() {
        sentences.push(sentence);
    }
    sentences
}

/// Sentences of tokens, punctuation dropped.
pub fn tokenize(text: &str) -> Vec<Vec<String>> {
    segment(text).into_iter().map(|s| s.tokens).collect()
}

/// Tag one sentence. Output has exactly one token per input token.
pub fn tag_tokens<S: AsRef<str>>(
    sentence: &[S],
    lex: &Lexicon,
    sentence_index: usize,
) -> Vec<TaggedToken> {
    sentence
        .iter()
        .enumerate()
        .map(|(token_index, surface)| {
            let surface = surface.as_ref();
            let lower = fold_case(surface);
            let tag = lex.lookup(&lower);
            TaggedToken {
                surface: surface.to_string(),
                lower,
                tag,
                sentence_index,
                token_index,
            }
        })
        .collect()
}

/// Serbian Cyrillic to Latin, letter by letter. Characters outside the
/// 30-letter alphabet pass through unchanged.
pub fn transliterate_cyrillic(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    for (i, &c) in chars.iter().enumerate() {
        let lower = c.to_lowercase().next().unwrap_or(c);
        let latin = match lower {
            'а' => "a",
            'б' => "b",
            'в' => "v",
            'г' => "g",
            'д' => "d",
            'ђ' => "đ",
            'е' => "e",
            'ж' => "ž",
            'з' => "z",
            'и' => "i",
            'ј' => "j",
            'к' => "k",
            'л' => "l",
            'љ' => "lj",
            'м' => "m",
            'н' => "n",
            'њ' => "nj",
            'о' => "o",
            'п' => "p",
            'р' => "r",
            'с' => "s",
            'т' => "t",
            'ћ' => "ć",
            'у' => "u",
            'ф' => "f",
            'х' => "h",
            'ц' => "c",
            'ч' => "č",
            'џ' => "dž",
            'ш' => "š",
            _ => {
                out.push(c);
                continue;
            }
        };
        if lower == c {
            out.push_str(latin);
            continue;
        }
        // Uppercase digraph letters: all caps when the neighbour is uppercase too.
        let shout = chars
            .get(i + 1)
            .or_else(|| i.checked_sub(1).and_then(|p| chars.get(p)))
            .is_some_and(|n| n.is_uppercase());
        let mut letters = latin.chars();
        if let Some(first) = letters.next() {
            out.extend(first.to_uppercase());
        }
        for rest in letters {
            if shout {
                out.extend(rest.to_uppercase());
            } else {
                out.push(rest);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn owned(words: &[&[&str]]) -> Vec<Vec<String>> {
        words
            .iter()
            .map(|s| s.iter().map(|w| w.to_string()).collect())
            .collect()
    }

    #[test]
    fn tokenize_two_sentences() {
        assert_eq!(
            tokenize("Radi kao konj. Spava."),
            owned(&[&["Radi", "kao", "konj"], &["Spava"]])
        );
    }

    #[test]
    fn tokenize_keeps_k_apostrophe_o() {
        assert_eq!(
            tokenize("Hladan k'o krastavac"),
            owned(&[&["Hladan", "k'o", "krastavac"]])
        );
    }

    #[test]
    fn tokenize_punctuation_mix() {
        assert_eq!(tokenize("a,b!c?"), owned(&[&["a", "b"], &["c"]]));
        assert!(tokenize("").is_empty());
        assert!(tokenize(" ... !? ").is_empty());
    }

    #[test]
    fn period_inside_token_run_does_not_end_sentence() {
        assert_eq!(tokenize("verzija 3.5 radi"), owned(&[&["verzija", "3", "5", "radi"]]));
    }

    #[test]
    fn clauses_split_on_commas() {
        let s = segment("radi, kao konj");
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].clauses, vec![0..1, 1..3]);
    }

    #[test]
    fn tag_with_lexicon() {
        let mut lex = Lexicon::default();
        lex.insert("radi", Tag::Verb);
        lex.insert("konj", Tag::Noun);
        let tags: Vec<Tag> = tag_tokens(&["radi", "kao", "konj"], &lex, 0)
            .iter()
            .map(|t| t.tag)
            .collect();
        assert_eq!(tags, vec![Tag::Verb, Tag::Connector, Tag::Noun]);
    }

    #[test]
    fn connector_override_with_empty_lexicon() {
        let lex = Lexicon::default();
        assert_eq!(tag_tokens(&["kao"], &lex, 0)[0].tag, Tag::Connector);
        assert_eq!(tag_tokens(&["K'o"], &lex, 0)[0].tag, Tag::Connector);
        assert_eq!(tag_tokens(&["Se"], &lex, 0)[0].tag, Tag::Particle);
    }

    #[test]
    fn overrides_beat_lexicon_entries() {
        let mut lex = Lexicon::default();
        lex.insert("ko", Tag::Noun);
        lex.insert("se", Tag::Verb);
        let tagged = tag_tokens(&["ko", "se"], &lex, 0);
        assert_eq!(tagged[0].tag, Tag::Connector);
        assert_eq!(tagged[1].tag, Tag::Particle);
    }

    #[test]
    fn suffix_rules_longest_first_then_file_order() {
        let lex = Lexicon::new(
            [],
            [
                ("a".to_string(), Tag::Adjective),
                ("ka".to_string(), Tag::Noun),
                ("b".to_string(), Tag::Verb),
                ("a".to_string(), Tag::Verb),
            ],
            Tag::Other,
        );
        assert_eq!(lex.lookup("lepa"), Tag::Adjective);
        assert_eq!(lex.lookup("ruka"), Tag::Noun);
        assert_eq!(lex.lookup("xyz"), Tag::Other);
    }

    #[test]
    fn suffix_rule_needs_a_nonempty_stem() {
        let lex = Lexicon::new([], [("a".to_string(), Tag::Adjective)], Tag::Other);
        assert_eq!(lex.lookup("a"), Tag::Other);
    }

    #[test]
    fn parse_rejects_unknown_tag() {
        assert_eq!(
            Lexicon::parse("konj\tX\n", ""),
            Err(LexiconError::UnknownTag {
                line: 1,
                tag: "X".to_string()
            })
        );
        assert_eq!(
            Lexicon::parse("konj\n", ""),
            Err(LexiconError::Malformed { line: 1 })
        );
    }

    #[test]
    fn bundled_lexicon_loads() {
        let lex = Lexicon::default_serbian();
        assert!(lex.len() > 2000);
        assert_eq!(lex.lookup("radi"), Tag::Verb);
        assert_eq!(lex.lookup("lep"), Tag::Adjective);
        assert_eq!(lex.lookup("cvet"), Tag::Noun);
        assert_eq!(lex.lookup("u"), Tag::Other);
    }

    #[test]
    fn cyrillic_transliteration() {
        assert_eq!(transliterate_cyrillic("бео као снег"), "beo kao sneg");
        assert_eq!(transliterate_cyrillic("Љубав и ЉУТ џеп"), "Ljubav i LJUT džep");
        assert_eq!(transliterate_cyrillic("Ђак ћути"), "Đak ćuti");
    }
}
