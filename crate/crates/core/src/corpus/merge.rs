use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Display;

use serde::{Deserialize, Serialize};

use super::{RecordId, Source, UpsertOutcome};

/// A phrase from the import that matched a record from another source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionEntry {
    pub phrase: String,
    pub existing: RecordId,
    pub existing_form: String,
    pub existing_source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeError {
    /// 1-based position of the phrase in the import.
    pub position: usize,
    pub phrase: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeReport {
    pub source: Source,
    pub added: usize,
    /// Phrases whose key was already live, whatever its origin.
    pub duplicates: usize,
    pub intersection: Vec<IntersectionEntry>,
    /// Phrases colliding with a record created earlier in the same import.
    pub self_collisions: Vec<(String, RecordId)>,
    pub errors: Vec<MergeError>,
}

impl MergeReport {
    pub fn new(source: Source) -> Self {
        MergeReport {
            source,
            added: 0,
            duplicates: 0,
            intersection: Vec::new(),
            self_collisions: Vec::new(),
            errors: Vec::new(),
        }
    }
}

/// Drive an import through any upsert implementation and classify each
/// outcome.
pub fn merge_with<'p, E: Display>(
    phrases: impl IntoIterator<Item = &'p str>,
    source: Source,
    mut upsert: impl FnMut(&str) -> Result<UpsertOutcome, E>,
) -> MergeReport {
    let mut report = MergeReport::new(source);
    let mut created = BTreeSet::new();
    for (i, phrase) in phrases.into_iter().enumerate() {
        match upsert(phrase) {
            Ok(UpsertOutcome::Created(r)) => {
                report.added += 1;
                created.insert(r.id);
            }
            Ok(UpsertOutcome::Duplicate(r)) => {
                report.duplicates += 1;
                if created.contains(&r.id) {
                    report.self_collisions.push((phrase.to_string(), r.id));
                } else if r.source != source {
                    report.intersection.push(IntersectionEntry {
                        phrase: phrase.to_string(),
                        existing: r.id,
                        existing_form: r.display_form.clone(),
                        existing_source: r.source,
                    });
                }
            }
            Err(e) => report.errors.push(MergeError {
                position: i + 1,
                phrase: phrase.to_string(),
                message: e.to_string(),
            }),
        }
    }
    report
}
