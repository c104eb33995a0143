//! Hand-keyed corpus files: one simile per line, `#` starts a comment line.

use std::io;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportLine {
    pub line: usize,
    pub phrase: String,
}

pub fn parse_import(text: &str) -> Vec<ImportLine> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let phrase = raw.trim();
            (!phrase.is_empty() && !phrase.starts_with('#')).then(|| ImportLine {
                line: i + 1,
                phrase: phrase.to_string(),
            })
        })
        .collect()
}

pub fn load_import(path: &Path) -> io::Result<Vec<ImportLine>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_import(text.strip_prefix('\u{feff}').unwrap_or(&text)))
}
