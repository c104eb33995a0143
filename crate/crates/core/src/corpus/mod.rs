//! The curated simile corpus as an event-sourced state machine.
//!
//! Every mutation is planned against the current state first, yielding the
//! events it would produce; nothing changes until those events are applied.
//! A persistent store writes the events durably and then applies them, and
//! replaying a prefix of the event log always yields a consistent corpus.
//!
//! At most one non-rejected record exists per canonical key.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::extractor::CandidateKind;
use crate::stemmer::StemRuleSet;

mod key;
mod merge;

pub use key::{canonical_key, collation_key};
pub use merge::{merge_with, IntersectionEntry, MergeError, MergeReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecordId(pub u64);

impl fmt::Display for RecordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Milliseconds since the Unix epoch, UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Www,
    Karadzic,
    Manual,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::Www, Source::Karadzic, Source::Manual];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::Www => "www",
            Source::Karadzic => "karadzic",
            Source::Manual => "manual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pending,
    Approved,
    Rejected,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pending => "pending",
            Status::Approved => "approved",
            Status::Rejected => "rejected",
        }
    }

    pub fn can_become(self, next: Status) -> bool {
        matches!(
            (self, next),
            (Status::Pending, Status::Approved) | (Status::Pending, Status::Rejected)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimileKind {
    Adjectival,
    Verbal,
    Unknown,
}

impl From<CandidateKind> for SimileKind {
    fn from(k: CandidateKind) -> Self {
        match k {
            CandidateKind::Adjectival => SimileKind::Adjectival,
            CandidateKind::Verbal => SimileKind::Verbal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub doc_url: String,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimileRecord {
    pub id: RecordId,
    pub display_form: String,
    pub canonical_key: String,
    pub kind: SimileKind,
    pub source: Source,
    pub status: Status,
    pub submitted_by: Option<String>,
    pub created_at: Timestamp,
    pub updated_at: Timestamp,
    pub evidence: Vec<Evidence>,
    /// Observed surface variants and how often each was seen.
    #[serde(default)]
    pub surface_counts: BTreeMap<String, u32>,
    /// Set once a curator edits the display form; frequency no longer
    /// overrides it afterwards.
    #[serde(default)]
    pub edited: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RevisionAction {
    Approve,
    Reject,
    Edit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Revision {
    pub record_id: RecordId,
    pub editor: String,
    pub action: RevisionAction,
    pub before_form: String,
    pub after_form: String,
    pub before_status: Status,
    pub after_status: Status,
    pub at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum CorpusEvent {
    Created {
        record: SimileRecord,
    },
    Observed {
        id: RecordId,
        surface: String,
        doc_url: Option<String>,
        count: u32,
        at: Timestamp,
    },
    StatusChanged {
        revision: Revision,
    },
    Edited {
        canonical_key: String,
        revision: Revision,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    EmptyPhrase,
    NotASimile(&'static str),
    NotFound(RecordId),
    IllegalTransition {
        id: RecordId,
        from: Status,
        to: Status,
    },
    /// The canonical key already belongs to another non-rejected record.
    KeyTaken {
        key: String,
        existing: RecordId,
    },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::EmptyPhrase => f.write_str("empty phrase"),
            CorpusError::NotASimile(why) => write!(f, "not a simile phrase: {why}"),
            CorpusError::NotFound(id) => write!(f, "no record with id {id}"),
            CorpusError::IllegalTransition { id, from, to } => write!(
                f,
                "record {id} cannot go from {} to {}",
                from.as_str(),
                to.as_str()
            ),
            CorpusError::KeyTaken { key, existing } => {
                write!(f, "key {key:?} already belongs to record {existing}")
            }
        }
    }
}

impl core::error::Error for CorpusError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsertRequest<'a> {
    pub phrase: &'a str,
    pub source: Source,
    pub submitted_by: Option<&'a str>,
    /// Trusted imports are approved on creation.
    pub trusted: bool,
    pub kind: SimileKind,
    pub doc_url: Option<&'a str>,
    pub count: u32,
}

impl<'a> UpsertRequest<'a> {
    pub fn new(phrase: &'a str, source: Source) -> Self {
        UpsertRequest {
            phrase,
            source,
            submitted_by: None,
            trusted: false,
            kind: SimileKind::Unknown,
            doc_url: None,
            count: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "record", rename_all = "lowercase")]
pub enum UpsertOutcome {
    Created(SimileRecord),
    Duplicate(SimileRecord),
}

impl UpsertOutcome {
    pub fn record(&self) -> &SimileRecord {
        match self {
            UpsertOutcome::Created(r) | UpsertOutcome::Duplicate(r) => r,
        }
    }
}

/// Events a command would emit, plus the result it reports once applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Planned<T> {
    pub events: Vec<CorpusEvent>,
    pub outcome: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StatusCounts {
    pub pending: usize,
    pub approved: usize,
    pub rejected: usize,
}

impl StatusCounts {
    fn bump(&mut self, status: Status) {
        match status {
            Status::Pending => self.pending += 1,
            Status::Approved => self.approved += 1,
            Status::Rejected => self.rejected += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pending + self.approved + self.rejected
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Stats {
    pub www: StatusCounts,
    pub karadzic: StatusCounts,
    pub manual: StatusCounts,
    pub total: usize,
    pub total_approved: usize,
}

impl Stats {
    pub fn for_source(&self, source: Source) -> &StatusCounts {
        match source {
            Source::Www => &self.www,
            Source::Karadzic => &self.karadzic,
            Source::Manual => &self.manual,
        }
    }

    fn for_source_mut(&mut self, source: Source) -> &mut StatusCounts {
        match source {
            Source::Www => &mut self.www,
            Source::Karadzic => &mut self.karadzic,
            Source::Manual => &mut self.manual,
        }
    }
}

fn display_of(phrase: &str) -> String {
    let mut out = String::new();
    for w in phrase.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

/// Web-harvested surfaces are case-folded so sentence-initial capitals do
/// not count as a separate variant.
fn surface_of(phrase: &str, source: Source) -> String {
    let d = display_of(phrase);
    if source == Source::Www {
        crate::text::fold_case(&d)
    } else {
        d
    }
}

fn observe(record: &mut SimileRecord, surface: &str, doc_url: Option<&str>, count: u32, at: Timestamp) {
    *record.surface_counts.entry(surface.to_string()).or_insert(0) += count;
    if let Some(url) = doc_url {
        match record.evidence.iter_mut().find(|e| e.doc_url == url) {
            Some(e) => e.count += count,
            None => record.evidence.push(Evidence {
                doc_url: url.to_string(),
                count,
            }),
        }
    }
    if record.source == Source::Www && !record.edited {
        let best = record.surface_counts.values().copied().max().unwrap_or(0);
        let current = record.surface_counts.get(&record.display_form).copied().unwrap_or(0);
        if current < best {
            if let Some((form, _)) = record.surface_counts.iter().find(|(_, &c)| c == best) {
                record.display_form = form.clone();
            }
        }
    }
    record.updated_at = at;
}

#[derive(Debug, Clone)]
pub struct Corpus {
    rules: StemRuleSet,
    search_fold: bool,
    records: BTreeMap<RecordId, SimileRecord>,
    by_key: BTreeMap<String, RecordId>,
    revisions: Vec<Revision>,
    next_id: u64,
}

impl Corpus {
    pub fn new(rules: StemRuleSet) -> Self {
        Corpus {
            rules,
            search_fold: true,
            records: BTreeMap::new(),
            by_key: BTreeMap::new(),
            revisions: Vec::new(),
            next_id: 1,
        }
    }

    /// Toggle diacritic-insensitive search (on by default).
    pub fn with_search_fold(mut self, fold: bool) -> Self {
        self.search_fold = fold;
        self
    }

    pub fn rules(&self) -> &StemRuleSet {
        &self.rules
    }

    pub fn canonical_key(&self, phrase: &str) -> Result<String, CorpusError> {
        canonical_key(phrase, &self.rules)
    }

    pub fn get(&self, id: RecordId) -> Option<&SimileRecord> {
        self.records.get(&id)
    }

    pub fn records(&self) -> impl Iterator<Item = &SimileRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The live (non-rejected) record holding `key`, if any.
    pub fn by_key(&self, key: &str) -> Option<&SimileRecord> {
        self.by_key.get(key).and_then(|id| self.records.get(id))
    }

    pub fn revisions(&self) -> &[Revision] {
        &self.revisions
    }

    pub fn revisions_for(&self, id: RecordId) -> impl Iterator<Item = &Revision> {
        self.revisions.iter().filter(move |r| r.record_id == id)
    }

    pub fn plan_upsert(
        &self,
        req: &UpsertRequest<'_>,
        now: Timestamp,
    ) -> Result<Planned<UpsertOutcome>, CorpusError> {
        let key = self.canonical_key(req.phrase)?;
        let surface = surface_of(req.phrase, req.source);
        let count = req.count.max(1);
        if let Some(existing) = self.by_key(&key) {
            let mut updated = existing.clone();
            let mut events = Vec::new();
            if req.source == Source::Www {
                observe(&mut updated, &surface, req.doc_url, count, now);
                events.push(CorpusEvent::Observed {
                    id: existing.id,
                    surface,
                    doc_url: req.doc_url.map(str::to_string),
                    count,
                    at: now,
                });
            }
            return Ok(Planned {
                events,
                outcome: UpsertOutcome::Duplicate(updated),
            });
        }
        let mut surface_counts = BTreeMap::new();
        surface_counts.insert(surface.clone(), count);
        let record = SimileRecord {
            id: RecordId(self.next_id),
            display_form: surface,
            canonical_key: key,
            kind: req.kind,
            source: req.source,
            status: if req.trusted {
                Status::Approved
            } else {
                Status::Pending
            },
            submitted_by: req.submitted_by.map(str::to_string),
            created_at: now,
            updated_at: now,
            evidence: req
                .doc_url
                .map(|url| {
                    alloc::vec![Evidence {
                        doc_url: url.to_string(),
                        count,
                    }]
                })
                .unwrap_or_default(),
            surface_counts,
            edited: false,
        };
        Ok(Planned {
            events: alloc::vec![CorpusEvent::Created {
                record: record.clone()
            }],
            outcome: UpsertOutcome::Created(record),
        })
    }

    pub fn plan_set_status(
        &self,
        id: RecordId,
        status: Status,
        curator: &str,
        now: Timestamp,
    ) -> Result<Planned<SimileRecord>, CorpusError> {
        let record = self.records.get(&id).ok_or(CorpusError::NotFound(id))?;
        if !record.status.can_become(status) {
            return Err(CorpusError::IllegalTransition {
                id,
                from: record.status,
                to: status,
            });
        }
        let revision = Revision {
            record_id: id,
            editor: curator.to_string(),
            action: if status == Status::Approved {
                RevisionAction::Approve
            } else {
                RevisionAction::Reject
            },
            before_form: record.display_form.clone(),
            after_form: record.display_form.clone(),
            before_status: record.status,
            after_status: status,
            at: now,
        };
        let mut updated = record.clone();
        updated.status = status;
        updated.updated_at = now;
        Ok(Planned {
            events: alloc::vec![CorpusEvent::StatusChanged { revision }],
            outcome: updated,
        })
    }

    /// Change the display form of a pending or approved record. The status is
    /// kept; the canonical key follows the new form.
    pub fn plan_edit(
        &self,
        id: RecordId,
        display_form: &str,
        editor: &str,
        now: Timestamp,
    ) -> Result<Planned<SimileRecord>, CorpusError> {
        let record = self.records.get(&id).ok_or(CorpusError::NotFound(id))?;
        if record.status == Status::Rejected {
            return Err(CorpusError::IllegalTransition {
                id,
                from: Status::Rejected,
                to: Status::Rejected,
            });
        }
        let key = self.canonical_key(display_form)?;
        if let Some(&other) = self.by_key.get(&key) {
            if other != id {
                return Err(CorpusError::KeyTaken {
                    key,
                    existing: other,
                });
            }
        }
        let after = display_of(display_form);
        let revision = Revision {
            record_id: id,
            editor: editor.to_string(),
            action: RevisionAction::Edit,
            before_form: record.display_form.clone(),
            after_form: after.clone(),
            before_status: record.status,
            after_status: record.status,
            at: now,
        };
        let mut updated = record.clone();
        updated.display_form = after;
        updated.canonical_key = key.clone();
        updated.edited = true;
        updated.updated_at = now;
        Ok(Planned {
            events: alloc::vec![CorpusEvent::Edited {
                canonical_key: key,
                revision,
            }],
            outcome: updated,
        })
    }

    /// Re-create an exported record under a fresh id, keeping its key, form,
    /// status and provenance.
    pub fn plan_restore(&self, record: &SimileRecord) -> Result<Planned<SimileRecord>, CorpusError> {
        if record.status != Status::Rejected {
            if let Some(existing) = self.by_key(&record.canonical_key) {
                return Err(CorpusError::KeyTaken {
                    key: record.canonical_key.clone(),
                    existing: existing.id,
                });
            }
        }
        let mut restored = record.clone();
        restored.id = RecordId(self.next_id);
        Ok(Planned {
            events: alloc::vec![CorpusEvent::Created {
                record: restored.clone()
            }],
            outcome: restored,
        })
    }

    /// Apply one event. Events produced by the `plan_*` methods against the
    /// current state always apply cleanly.
    pub fn apply(&mut self, event: &CorpusEvent) {
        match event {
            CorpusEvent::Created { record } => {
                if record.status != Status::Rejected {
                    self.by_key.insert(record.canonical_key.clone(), record.id);
                }
                self.next_id = self.next_id.max(record.id.0 + 1);
                self.records.insert(record.id, record.clone());
            }
            CorpusEvent::Observed {
                id,
                surface,
                doc_url,
                count,
                at,
            } => {
                if let Some(r) = self.records.get_mut(id) {
                    observe(r, surface, doc_url.as_deref(), *count, *at);
                }
            }
            CorpusEvent::StatusChanged { revision } => {
                if let Some(r) = self.records.get_mut(&revision.record_id) {
                    r.status = revision.after_status;
                    r.updated_at = revision.at;
                    if r.status == Status::Rejected
                        && self.by_key.get(&r.canonical_key) == Some(&r.id)
                    {
                        self.by_key.remove(&r.canonical_key);
                    }
                }
                self.revisions.push(revision.clone());
            }
            CorpusEvent::Edited {
                canonical_key,
                revision,
            } => {
                if let Some(r) = self.records.get_mut(&revision.record_id) {
                    if self.by_key.get(&r.canonical_key) == Some(&r.id) {
                        self.by_key.remove(&r.canonical_key);
                    }
                    r.display_form = revision.after_form.clone();
                    r.canonical_key = canonical_key.clone();
                    r.edited = true;
                    r.updated_at = revision.at;
                    self.by_key.insert(canonical_key.clone(), r.id);
                }
                self.revisions.push(revision.clone());
            }
        }
    }

    fn commit<T>(&mut self, planned: Planned<T>) -> T {
        for e in &planned.events {
            self.apply(e);
        }
        planned.outcome
    }

    pub fn upsert(&mut self, req: &UpsertRequest<'_>, now: Timestamp) -> Result<UpsertOutcome, CorpusError> {
        let planned = self.plan_upsert(req, now)?;
        Ok(self.commit(planned))
    }

    pub fn set_status(
        &mut self,
        id: RecordId,
        status: Status,
        curator: &str,
        now: Timestamp,
    ) -> Result<SimileRecord, CorpusError> {
        let planned = self.plan_set_status(id, status, curator, now)?;
        Ok(self.commit(planned))
    }

    pub fn edit(
        &mut self,
        id: RecordId,
        display_form: &str,
        editor: &str,
        now: Timestamp,
    ) -> Result<SimileRecord, CorpusError> {
        let planned = self.plan_edit(id, display_form, editor, now)?;
        Ok(self.commit(planned))
    }

    pub fn restore(&mut self, record: &SimileRecord) -> Result<SimileRecord, CorpusError> {
        let planned = self.plan_restore(record)?;
        Ok(self.commit(planned))
    }

    /// Upsert every phrase and report additions, duplicates and the
    /// cross-source intersection.
    pub fn merge_corpora<'p>(
        &mut self,
        phrases: impl IntoIterator<Item = &'p str>,
        source: Source,
        trusted: bool,
        now: Timestamp,
    ) -> MergeReport {
        merge_with(phrases, source, |phrase| {
            let req = UpsertRequest {
                trusted,
                ..UpsertRequest::new(phrase, source)
            };
            self.upsert(&req, now)
        })
    }

    fn sorted<'a>(&self, mut records: Vec<&'a SimileRecord>) -> Vec<&'a SimileRecord> {
        records.sort_by_cached_key(|r| (collation_key(&r.display_form), r.id));
        records
    }

    /// Approved records in alphabetical order.
    pub fn list_approved(&self) -> Vec<&SimileRecord> {
        self.sorted(
            self.records
                .values()
                .filter(|r| r.status == Status::Approved)
                .collect(),
        )
    }

    /// Pending records, oldest first.
    pub fn pending(&self) -> Vec<&SimileRecord> {
        self.records
            .values()
            .filter(|r| r.status == Status::Pending)
            .collect()
    }

    /// Approved records whose key contains the stemmed query as a contiguous
    /// run of tokens. Exact key matches come first, the rest alphabetically.
    /// A query with no words lists every approved record.
    pub fn search(&self, query: &str) -> Vec<&SimileRecord> {
        let q = key::query_tokens(query, &self.rules, self.search_fold);
        let mut exact = Vec::new();
        let mut partial = Vec::new();
        for r in self.records.values().filter(|r| r.status == Status::Approved) {
            let k = key::key_tokens(&r.canonical_key, self.search_fold);
            if !q.is_empty() && k == q {
                exact.push(r);
            } else if key::contains_run(&k, &q) {
                partial.push(r);
            }
        }
        let mut out = self.sorted(exact);
        out.extend(self.sorted(partial));
        out
    }

    pub fn stats(&self) -> Stats {
        let mut stats = Stats::default();
        for r in self.records.values() {
            stats.for_source_mut(r.source).bump(r.status);
            stats.total += 1;
            if r.status == Status::Approved {
                stats.total_approved += 1;
            }
        }
        stats
    }
}
