//! On-disk formats shared by the pipeline stages.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use simile_core::{CandidateSimile, Label};

pub mod import;
pub mod labeled;
pub mod lexicon;
pub mod model;
pub mod tagged;

/// A candidate after classification: the candidate's fields plus `label`
/// and `score`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedCandidate {
    #[serde(flatten)]
    pub candidate: CandidateSimile,
    pub label: Label,
    pub score: f64,
}

/// Write `path` through a temporary sibling file that replaces it only after
/// everything was written and synced, so readers never see a partial file.
pub fn write_atomic<F>(path: &Path, fill: F) -> io::Result<()>
where
    F: FnOnce(&mut BufWriter<&mut File>) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Serialize `items` one JSON object per line, atomically. Returns the count.
pub fn write_jsonl<T, I>(path: &Path, items: I) -> io::Result<usize>
where
    T: Serialize,
    I: IntoIterator<Item = T>,
{
    let mut n = 0;
    write_atomic(path, |w| {
        for item in items {
            serde_json::to_writer(&mut *w, &item)?;
            w.write_all(b"\n")?;
            n += 1;
        }
        Ok(())
    })?;
    Ok(n)
}

/// One JSON-lines entry: the 1-based line number and the parsed value or the
/// reason it could not be parsed.
pub type JsonlItem<T> = (usize, Result<T, serde_json::Error>);

/// Lazily parse a JSON-lines file. Blank lines are skipped; malformed lines
/// surface as `Err` items so callers can count and continue.
pub fn read_jsonl<T: DeserializeOwned>(
    path: &Path,
) -> io::Result<impl Iterator<Item = io::Result<JsonlItem<T>>>> {
    let reader = BufReader::new(File::open(path)?);
    Ok(reader
        .lines()
        .enumerate()
        .filter(|(_, line)| line.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|(i, line)| line.map(|l| (i + 1, serde_json::from_str(&l)))))
}
