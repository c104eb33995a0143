use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::extractor::CANONICAL_CONNECTOR;
use crate::stemmer::{stem, StemRuleSet};
use crate::tagger::transliterate_cyrillic;
use crate::text::{fold_case, fold_diacritics, is_connector, phrase_words};

use super::CorpusError;

/// Case-folded Latin words of a phrase with every connector form mapped to
/// `kao`, plus whether a connector was seen.
pub(crate) fn normalized_words(phrase: &str) -> (Vec<String>, bool) {
    let folded = fold_case(&transliterate_cyrillic(phrase));
    let mut has_connector = false;
    let words = phrase_words(&folded)
        .into_iter()
        .map(|w| {
            if is_connector(&w) {
                has_connector = true;
                CANONICAL_CONNECTOR.to_string()
            } else {
                w
            }
        })
        .collect();
    (words, has_connector)
}

/// The stem key under which inflectional variants of a simile collide.
pub fn canonical_key(phrase: &str, rules: &StemRuleSet) -> Result<String, CorpusError> {
    let (words, has_connector) = normalized_words(phrase);
    if words.is_empty() {
        return Err(CorpusError::EmptyPhrase);
    }
    if !has_connector {
        return Err(CorpusError::NotASimile("no connector (kao, ko, k'o)"));
    }
    if words.len() < 2 {
        return Err(CorpusError::NotASimile("nothing besides the connector"));
    }
    let mut key = String::new();
    for w in &words {
        if !key.is_empty() {
            key.push(' ');
        }
        key.push_str(&stem(w, rules).map_err(|_| CorpusError::EmptyPhrase)?);
    }
    Ok(key)
}

/// Stemmed (and optionally diacritic-folded) query tokens.
pub(crate) fn query_tokens(query: &str, rules: &StemRuleSet, fold: bool) -> Vec<String> {
    let (words, _) = normalized_words(query);
    words
        .iter()
        .filter_map(|w| stem(w, rules).ok())
        .map(|s| if fold { fold_diacritics(&s) } else { s })
        .collect()
}

pub(crate) fn key_tokens(key: &str, fold: bool) -> Vec<String> {
    key.split(' ')
        .map(|s| if fold { fold_diacritics(s) } else { s.to_string() })
        .collect()
}

/// Does `needle` occur as a contiguous run inside `hay`?
pub(crate) fn contains_run(hay: &[String], needle: &[String]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

const ALPHABET: [&str; 30] = [
    "a", "b", "c", "č", "ć", "d", "dž", "đ", "e", "f", "g", "h", "i", "j", "k", "l", "lj", "m", "n",
    "nj", "o", "p", "r", "s", "š", "t", "u", "v", "z", "ž",
];

/// Sort key following the Serbian Latin alphabet (digraphs dž, lj, nj are
/// single letters). Characters outside the alphabet sort after it by code
/// point; whitespace sorts first.
pub fn collation_key(s: &str) -> Vec<u32> {
    let folded = fold_case(s);
    let mut rest = folded.as_str();
    let mut key = Vec::with_capacity(rest.len());
    while let Some(c) = rest.chars().next() {
        if c.is_whitespace() {
            key.push(0);
            rest = &rest[c.len_utf8()..];
            continue;
        }
        let hit = ALPHABET
            .iter()
            .enumerate()
            .filter(|(_, letter)| rest.starts_with(*letter))
            .max_by_key(|(_, letter)| letter.len());
        match hit {
            Some((rank, letter)) => {
                key.push(rank as u32 + 1);
                rest = &rest[letter.len()..];
            }
            None => {
                key.push(1000 + c as u32);
                rest = &rest[c.len_utf8()..];
            }
        }
    }
    key
}
