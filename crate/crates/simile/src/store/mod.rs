//! Persistent corpus store: the core [`Corpus`] state machine plus users and
//! sessions, rebuilt on open by replaying a single journal file.
//!
//! Reads share an `RwLock`; every mutation takes the writer mutex, plans
//! against current state, appends the resulting batch to the journal (synced)
//! and only then applies it in memory. A command that fails to plan or to
//! persist leaves no trace.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};
use simile_core::corpus::{
    merge_with, CorpusError, CorpusEvent, MergeReport, Planned, RecordId, SimileRecord, Source,
    Status, Timestamp, UpsertOutcome, UpsertRequest,
};
use simile_core::{Corpus, StemRuleSet};
use thiserror::Error;

pub mod auth;
mod journal;

pub use auth::{Role, Session, User};
pub use journal::JournalError;
use journal::Journal;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Entry {
    Corpus(CorpusEvent),
    UserAdded(User),
    SessionOpened(Session),
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Journal(#[from] JournalError),
    #[error("storage failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("user {0:?} already exists")]
    UserExists(String),
    #[error("invalid user name or password")]
    InvalidCredentials,
    #[error("password hashing failed: {0}")]
    Hash(String),
}

pub fn now() -> Timestamp {
    Timestamp(chrono::Utc::now().timestamp_millis())
}

#[derive(Debug, Clone)]
pub struct StoreOptions {
    pub search_fold: bool,
    pub session_ttl: chrono::Duration,
    /// fsync after every commit. Only tests should turn this off.
    pub sync: bool,
    pub rules: StemRuleSet,
}

impl Default for StoreOptions {
    fn default() -> Self {
        StoreOptions {
            search_fold: true,
            session_ttl: chrono::Duration::hours(12),
            sync: true,
            rules: StemRuleSet::default_serbian(),
        }
    }
}

pub struct State {
    pub corpus: Corpus,
    users: BTreeMap<String, User>,
    sessions: HashMap<String, Session>,
}

impl State {
    fn apply(&mut self, entry: &Entry) {
        match entry {
            Entry::Corpus(e) => self.corpus.apply(e),
            Entry::UserAdded(u) => {
                self.users.insert(u.name.clone(), u.clone());
            }
            Entry::SessionOpened(s) => {
                self.sessions.insert(s.token_digest.clone(), s.clone());
            }
        }
    }

    pub fn user(&self, name: &str) -> Option<&User> {
        self.users.get(name)
    }

    pub fn users(&self) -> impl Iterator<Item = &User> {
        self.users.values()
    }
}

pub struct Store {
    path: PathBuf,
    state: RwLock<State>,
    writer: Mutex<Journal>,
    session_ttl: chrono::Duration,
}

impl Store {
    pub fn open(path: &Path, opts: StoreOptions) -> Result<Self, StoreError> {
        let (journal, batches) = Journal::open::<Vec<Entry>>(path, opts.sync)?;
        let mut state = State {
            corpus: Corpus::new(opts.rules).with_search_fold(opts.search_fold),
            users: BTreeMap::new(),
            sessions: HashMap::new(),
        };
        for entry in batches.iter().flatten() {
            state.apply(entry);
        }
        let t = now();
        state.sessions.retain(|_, s| s.expires_at > t);
        tracing::info!(
            path = %path.display(),
            batches = batches.len(),
            records = state.corpus.len(),
            "store opened"
        );
        Ok(Store {
            path: path.to_path_buf(),
            state: RwLock::new(state),
            writer: Mutex::new(journal),
            session_ttl: opts.session_ttl,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Run `f` against a consistent snapshot of the state.
    pub fn read<R>(&self, f: impl FnOnce(&State) -> R) -> R {
        f(&self.state.read().expect("store state lock poisoned"))
    }

    /// Plan under the writer lock, persist, then apply.
    fn commit<T, E>(&self, plan: impl FnOnce(&State) -> Result<(Vec<Entry>, T), E>) -> Result<T, StoreError>
    where
        StoreError: From<E>,
    {
        let mut journal = self.writer.lock().expect("store writer lock poisoned");
        let (entries, outcome) = plan(&self.state.read().expect("store state lock poisoned"))?;
        if !entries.is_empty() {
            journal.append(&entries)?;
            let mut state = self.state.write().expect("store state lock poisoned");
            for e in &entries {
                state.apply(e);
            }
        }
        Ok(outcome)
    }

    fn commit_corpus<T>(
        &self,
        plan: impl FnOnce(&Corpus) -> Result<Planned<T>, CorpusError>,
    ) -> Result<T, StoreError> {
        self.commit(|s| {
            plan(&s.corpus).map(|p| (p.events.into_iter().map(Entry::Corpus).collect(), p.outcome))
        })
    }

    pub fn upsert(&self, req: &UpsertRequest<'_>, at: Timestamp) -> Result<UpsertOutcome, StoreError> {
        self.commit_corpus(|c| c.plan_upsert(req, at))
    }

    pub fn set_status(
        &self,
        id: RecordId,
        status: Status,
        curator: &str,
        at: Timestamp,
    ) -> Result<SimileRecord, StoreError> {
        self.commit_corpus(|c| c.plan_set_status(id, status, curator, at))
    }

    pub fn edit(
        &self,
        id: RecordId,
        display_form: &str,
        editor: &str,
        at: Timestamp,
    ) -> Result<SimileRecord, StoreError> {
        self.commit_corpus(|c| c.plan_edit(id, display_form, editor, at))
    }

    pub fn restore(&self, record: &SimileRecord) -> Result<SimileRecord, StoreError> {
        self.commit_corpus(|c| c.plan_restore(record))
    }

    /// Upsert each phrase as its own commit; failures are collected.
    pub fn merge<'p>(
        &self,
        phrases: impl IntoIterator<Item = &'p str>,
        source: Source,
        trusted: bool,
        at: Timestamp,
    ) -> MergeReport {
        merge_with(phrases, source, |phrase| {
            let req = UpsertRequest {
                trusted,
                ..UpsertRequest::new(phrase, source)
            };
            self.upsert(&req, at)
        })
    }

    pub fn add_user(&self, name: &str, role: Role, password: &str, at: Timestamp) -> Result<(), StoreError> {
        let password_hash = auth::hash_password(password).map_err(|e| StoreError::Hash(e.to_string()))?;
        self.commit(|s| {
            if s.users.contains_key(name) {
                return Err(StoreError::UserExists(name.to_string()));
            }
            let user = User {
                name: name.to_string(),
                role,
                password_hash,
                created_at: at,
            };
            Ok((vec![Entry::UserAdded(user)], ()))
        })
    }

    /// Check credentials and open a session. Returns the bearer token, which
    /// is not stored anywhere, and the session.
    pub fn login(&self, name: &str, password: &str, at: Timestamp) -> Result<(String, Session), StoreError> {
        let user = self
            .read(|s| s.users.get(name).cloned())
            .ok_or(StoreError::InvalidCredentials)?;
        if !auth::verify_password(password, &user.password_hash) {
            return Err(StoreError::InvalidCredentials);
        }
        let token = auth::new_token();
        let session = Session {
            token_digest: auth::token_digest(&token),
            user: user.name,
            role: user.role,
            expires_at: Timestamp(at.0 + self.session_ttl.num_milliseconds()),
        };
        let s = session.clone();
        self.commit(|_| Ok::<_, StoreError>((vec![Entry::SessionOpened(s)], ())))?;
        Ok((token, session))
    }

    /// The live session for a bearer token.
    pub fn authenticate(&self, token: &str, at: Timestamp) -> Option<Session> {
        let digest = auth::token_digest(token);
        self.read(|s| s.sessions.get(&digest).filter(|s| s.expires_at > at).cloned())
    }

    pub fn export_records(&self) -> Vec<SimileRecord> {
        self.read(|s| s.corpus.records().cloned().collect())
    }
}
