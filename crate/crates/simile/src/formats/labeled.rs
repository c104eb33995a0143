//! Labeled training data: `label<TAB>left<TAB>connector_surface<TAB>right`,
//! label `1` (simile) or `0` (not a simile).

use std::io::{self, Write};
use std::path::Path;

use simile_core::classifier::{Label, LabeledPhrase};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabeledError {
    #[error("line {line}: expected 4 tab-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: label must be 1 or 0, found {label:?}")]
    Label { line: usize, label: String },
    #[error("line {line}: empty left or right side")]
    EmptySide { line: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn parse_labeled(text: &str) -> Result<Vec<LabeledPhrase>, LabeledError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let [label, left, connector, right] = fields[..] else {
            return Err(LabeledError::FieldCount {
                line,
                found: fields.len(),
            });
        };
        let label = match label.trim() {
            "1" => Label::Positive,
            "0" => Label::Negative,
            other => {
                return Err(LabeledError::Label {
                    line,
                    label: other.to_string(),
                })
            }
        };
        if left.trim().is_empty() || right.trim().is_empty() {
            return Err(LabeledError::EmptySide { line });
        }
        out.push(LabeledPhrase {
            label,
            left: left.trim().to_string(),
            connector_surface: connector.trim().to_string(),
            right: right.trim().to_string(),
        });
    }
    Ok(out)
}

pub fn load_labeled(path: &Path) -> Result<Vec<LabeledPhrase>, LabeledError> {
    parse_labeled(&std::fs::read_to_string(path)?)
}

pub fn write_labeled(w: &mut impl Write, data: &[LabeledPhrase]) -> io::Result<()> {
    for p in data {
        let label = match p.label {
            Label::Positive => '1',
            Label::Negative => '0',
        };
        writeln!(w, "{label}\t{}\t{}\t{}", p.left, p.connector_surface, p.right)?;
    }
    Ok(())
}
