//! Append-only journal file. Each committed batch is one line:
//! `seq<TAB>crc32<TAB>json`, where the CRC covers the JSON bytes. A batch is
//! durable once its line and newline are synced; a torn final line is cut off
//! on open.

use std::fs::{File, OpenOptions};
use std::io::{self, Read, Seek, SeekFrom, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("journal line {line} is corrupt: {reason}")]
    Corrupt { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub struct Journal {
    file: File,
    len: u64,
    next_seq: u64,
    sync: bool,
    #[cfg(test)]
    pub(crate) fail_next: bool,
}

fn parse_line<T: DeserializeOwned>(line: &[u8], expected_seq: u64) -> Result<T, String> {
    let text = std::str::from_utf8(line).map_err(|e| e.to_string())?;
    let mut parts = text.splitn(3, '\t');
    let (Some(seq), Some(crc), Some(json)) = (parts.next(), parts.next(), parts.next()) else {
        return Err("expected seq, crc and payload".into());
    };
    let seq: u64 = seq.parse().map_err(|_| format!("bad sequence number {seq:?}"))?;
    if seq != expected_seq {
        return Err(format!("sequence {seq}, expected {expected_seq}"));
    }
    let crc = u32::from_str_radix(crc, 16).map_err(|_| format!("bad checksum field {crc:?}"))?;
    if crc32fast::hash(json.as_bytes()) != crc {
        return Err("checksum mismatch".into());
    }
    serde_json::from_str(json).map_err(|e| e.to_string())
}

impl Journal {
    /// Open or create the journal and return every committed batch. An
    /// unterminated or unreadable final line is a torn write and is truncated;
    /// damage anywhere earlier is an error.
    pub fn open<T: DeserializeOwned>(path: &Path, sync: bool) -> Result<(Self, Vec<T>), JournalError> {
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(path)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;

        let mut batches = Vec::new();
        let mut good_len = 0usize;
        let mut start = 0usize;
        let mut line_no = 0usize;
        while start < bytes.len() {
            line_no += 1;
            let Some(nl) = bytes[start..].iter().position(|&b| b == b'\n') else {
                tracing::warn!(line = line_no, "discarding unterminated journal tail");
                break;
            };
            let end = start + nl;
            match parse_line(&bytes[start..end], batches.len() as u64 + 1) {
                Ok(batch) => {
                    batches.push(batch);
                    good_len = end + 1;
                }
                Err(reason) if end + 1 == bytes.len() => {
                    tracing::warn!(line = line_no, %reason, "discarding torn final journal line");
                    break;
                }
                Err(reason) => return Err(JournalError::Corrupt { line: line_no, reason }),
            }
            start = end + 1;
        }
        if good_len < bytes.len() {
            file.set_len(good_len as u64)?;
            file.sync_all()?;
        }
        file.seek(SeekFrom::End(0))?;
        let journal = Journal {
            file,
            len: good_len as u64,
            next_seq: batches.len() as u64 + 1,
            sync,
            #[cfg(test)]
            fail_next: false,
        };
        Ok((journal, batches))
    }

    /// Durably append one batch. On failure the file is cut back to its
    /// previous length so no partial batch survives.
    pub fn append<T: Serialize>(&mut self, batch: &T) -> io::Result<()> {
        let json = serde_json::to_string(batch).map_err(io::Error::other)?;
        let line = format!("{}\t{:08x}\t{}\n", self.next_seq, crc32fast::hash(json.as_bytes()), json);
        let result = self.write_line(line.as_bytes());
        match result {
            Ok(()) => {
                self.len += line.len() as u64;
                self.next_seq += 1;
                Ok(())
            }
            Err(e) => {
                let _ = self.file.set_len(self.len);
                Err(e)
            }
        }
    }

    fn write_line(&mut self, line: &[u8]) -> io::Result<()> {
        #[cfg(test)]
        if std::mem::take(&mut self.fail_next) {
            self.file.write_all(&line[..line.len() / 2])?;
            return Err(io::Error::other("injected write failure"));
        }
        self.file.write_all(line)?;
        if self.sync {
            self.file.sync_data()?;
        }
        Ok(())
    }

    #[cfg(test)]
    pub fn batches_written(&self) -> u64 {
        self.next_seq - 1
    }
}
