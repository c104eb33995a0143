use alloc::string::String;

/// Connector forms recognized in case-folded text.
pub(crate) const CONNECTORS: [&str; 3] = ["kao", "ko", "k'o"];

pub(crate) const REFLEXIVE: &str = "se";

pub(crate) fn is_connector(lower: &str) -> bool {
    CONNECTORS.contains(&lower)
}

pub(crate) fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02BC}')
}

/// Case fold under Unicode rules (covers š, č, ć, đ, ž and the dž/lj/nj
/// ligature letters) and unify apostrophe variants to `'`.
pub(crate) fn fold_case(s: &str) -> String {
    s.chars()
        .flat_map(char::to_lowercase)
        .map(|c| if is_apostrophe(c) { '\'' } else { c })
        .collect()
}

/// ASCII-ish fold used for diacritic-insensitive search.
pub(crate) fn fold_diacritics(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'š' => out.push('s'),
            'č' | 'ć' => out.push('c'),
            'ž' => out.push('z'),
            'đ' => out.push_str("dj"),
            'ǆ' => out.push_str("dz"),
            'Š' => out.push('S'),
            'Č' | 'Ć' => out.push('C'),
            'Ž' => out.push('Z'),
            'Đ' => out.push_str("Dj"),
            _ => out.push(c),
        }
    }
    out
}

/// Split a short phrase into word tokens: runs of alphanumerics, keeping an
/// apostrophe that sits between two letters (`k'o`).
pub(crate) fn phrase_words(phrase: &str) -> alloc::vec::Vec<String> {
    let chars: alloc::vec::Vec<char> = phrase.chars().collect();
    let mut words = alloc::vec::Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let inner_apostrophe = is_apostrophe(c)
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphabetic());
        if c.is_alphanumeric() || inner_apostrophe {
            current.push(c);
        } else if !current.is_empty() {
            words.push(core::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}
