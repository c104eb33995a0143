//! Table-driven suffix stripping.
//!
//! A word goes through at most one pre-stem rewrite (first matching pattern)
//! and at most one strip. Strips are tried longest suffix first and a strip is
//! only taken when its result would be left alone by the whole table; if no
//! strip qualifies the (rewritten) word is returned when it is itself stable,
//! otherwise the input is returned untouched. Either way the output is a fixed
//! point, so stemming is idempotent for any rule table.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

const DEFAULT_RULES: &str = include_str!("../data/stem_rules.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StemRule {
    pub suffix: String,
    pub replacement: String,
    pub min_stem_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewrite {
    pub pattern: String,
    pub rewrite: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StemRuleSet {
    rules: Vec<StemRule>,
    prestem_rewrites: Vec<Rewrite>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StemError {
    EmptyWord,
    EmptyPhrase,
    Malformed { line: usize, reason: &'static str },
}

impl fmt::Display for StemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StemError::EmptyWord => f.write_str("cannot stem an empty word"),
            StemError::EmptyPhrase => f.write_str("cannot stem an empty phrase"),
            StemError::Malformed { line, reason } => write!(f, "line {line}: {reason}"),
        }
    }
}

impl core::error::Error for StemError {}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

impl StemRuleSet {
    /// Build a rule set. Rules are ordered longest suffix first, ties keep
    /// the given order.
    pub fn new(rules: Vec<StemRule>, prestem_rewrites: Vec<Rewrite>) -> Result<Self, StemError> {
        for r in &rules {
            if r.suffix.is_empty() {
                return Err(StemError::Malformed {
                    line: 0,
                    reason: "empty suffix",
                });
            }
            if char_len(&r.replacement) > char_len(&r.suffix) {
                return Err(StemError::Malformed {
                    line: 0,
                    reason: "replacement longer than suffix",
                });
            }
        }
        for r in &prestem_rewrites {
            if r.pattern.is_empty() || char_len(&r.rewrite) > char_len(&r.pattern) {
                return Err(StemError::Malformed {
                    line: 0,
                    reason: "rewrite must be non-empty and no longer than its pattern",
                });
            }
        }
        let mut rules = rules;
        rules.sort_by_key(|r| core::cmp::Reverse(char_len(&r.suffix)));
        Ok(StemRuleSet {
            rules,
            prestem_rewrites,
        })
    }

    /// Parse the rule-file format: a `[prestem]` section of
    /// `pattern<TAB>rewrite` lines and a `[rules]` section of
    /// `suffix<TAB>replacement<TAB>min_stem_len` lines. A replacement of `-`
    /// means the empty string. `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, StemError> {
        #[derive(PartialEq)]
        enum Section {
            Rules,
            Prestem,
        }
        let mut section = Section::Rules;
        let mut rules = Vec::new();
        let mut rewrites = Vec::new();
        let empty_marker = |s: &str| if s == "-" { String::new() } else { s.to_string() };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            let malformed = |reason| StemError::Malformed { line: i + 1, reason };
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            match line.trim() {
                "[prestem]" => {
                    section = Section::Prestem;
                    continue;
                }
                "[rules]" => {
                    section = Section::Rules;
                    continue;
                }
                _ => {}
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            match section {
                Section::Prestem => {
                    let [pattern, rewrite] = fields[..] else {
                        return Err(malformed("prestem lines need pattern and rewrite"));
                    };
                    rewrites.push(Rewrite {
                        pattern: pattern.to_string(),
                        rewrite: empty_marker(rewrite),
                    });
                }
                Section::Rules => {
                    let [suffix, replacement, min] = fields[..] else {
                        return Err(malformed("rule lines need suffix, replacement and min_stem_len"));
                    };
                    let min_stem_len = min
                        .parse()
                        .map_err(|_| malformed("min_stem_len is not an integer"))?;
                    rules.push(StemRule {
                        suffix: suffix.to_string(),
                        replacement: empty_marker(replacement),
                        min_stem_len,
                    });
                }
            }
        }
        StemRuleSet::new(rules, rewrites).map_err(|e| match e {
            StemError::Malformed { reason, .. } => StemError::Malformed { line: 0, reason },
            other => other,
        })
    }

    pub fn default_serbian() -> Self {
        StemRuleSet::parse(DEFAULT_RULES).expect("bundled stem rules are well-formed")
    }

    pub fn rules(&self) -> &[StemRule] {
        &self.rules
    }

    pub fn prestem_rewrites(&self) -> &[Rewrite] {
        &self.prestem_rewrites
    }

    fn rewrite(&self, word: &str) -> Option<String> {
        self.prestem_rewrites
            .iter()
            .find(|r| word.len() > r.pattern.len() && word.ends_with(r.pattern.as_str()))
            .map(|r| {
                let mut out = word[..word.len() - r.pattern.len()].to_string();
                out.push_str(&r.rewrite);
                out
            })
    }

    fn strip(&self, word: &str, rule: &StemRule) -> Option<String> {
        if !word.ends_with(rule.suffix.as_str()) {
            return None;
        }
        let mut out = word[..word.len() - rule.suffix.len()].to_string();
        out.push_str(&rule.replacement);
        (char_len(&out) >= rule.min_stem_len.max(1)).then_some(out)
    }

    /// No rewrite and no strip would change `word`.
    fn is_stable(&self, word: &str) -> bool {
        self.rewrite(word).is_none() && self.rules.iter().all(|r| self.strip(word, r).is_none())
    }
}

/// Stem one case-folded word.
pub fn stem(word: &str, rules: &StemRuleSet) -> Result<String, StemError> {
    if word.is_empty() {
        return Err(StemError::EmptyWord);
    }
    let rewritten = rules.rewrite(word);
    let base = rewritten.as_deref().unwrap_or(word);
    for rule in &rules.rules {
        if let Some(stemmed) = rules.strip(base, rule) {
            if rules.is_stable(&stemmed) {
                return Ok(stemmed);
            }
        }
    }
    if rewritten.is_some() && rules.is_stable(base) {
        return Ok(base.to_string());
    }
    Ok(word.to_string())
}

/// Stem every whitespace-separated token and re-join with single spaces.
pub fn stem_phrase(phrase: &str, rules: &StemRuleSet) -> Result<String, StemError> {
    let mut out = String::new();
    for word in phrase.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&stem(word, rules)?);
    }
    if out.is_empty() {
        return Err(StemError::EmptyPhrase);
    }
    Ok(out)
}
