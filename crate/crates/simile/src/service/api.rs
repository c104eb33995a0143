use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{ConnectInfo, Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use simile_core::corpus::{CorpusError, Revision, Stats, UpsertOutcome, UpsertRequest};
use simile_core::{RecordId, SimileRecord, Source, Status, Timestamp};

use super::{AppState, DEFAULT_PAGE_SIZE, MAX_PAGE_SIZE, MAX_PHRASE_CHARS};
use crate::store::{now, Role, Session, Store, StoreError};

type Shared = State<Arc<AppState>>;

/// Error body. `record` carries the conflicting record for duplicates and
/// illegal transitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<SimileRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retry_after_secs: Option<u64>,
}

pub struct Failure(StatusCode, Box<ApiError>);

impl Failure {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Failure(
            status,
            Box::new(ApiError {
                code: code.to_string(),
                message: message.into(),
                record: None,
                retry_after_secs: None,
            }),
        )
    }

    fn with_record(mut self, record: Option<SimileRecord>) -> Self {
        self.1.record = record;
        self
    }

    fn unauthorized() -> Self {
        Failure::new(StatusCode::UNAUTHORIZED, "unauthorized", "a valid curator session is required")
    }

    fn from_store(err: StoreError, store: &Store) -> Self {
        let record = |id| store.read(|s| s.corpus.get(id).cloned());
        match err {
            StoreError::Corpus(e) => {
                let msg = e.to_string();
                match e {
                    CorpusError::EmptyPhrase => Failure::new(StatusCode::UNPROCESSABLE_ENTITY, "empty_phrase", msg),
                    CorpusError::NotASimile(_) => {
                        Failure::new(StatusCode::UNPROCESSABLE_ENTITY, "not_a_simile", msg)
                    }
                    CorpusError::NotFound(_) => Failure::new(StatusCode::NOT_FOUND, "not_found", msg),
                    CorpusError::IllegalTransition { id, .. } => {
                        Failure::new(StatusCode::CONFLICT, "illegal_transition", msg).with_record(record(id))
                    }
                    CorpusError::KeyTaken { existing, .. } => {
                        Failure::new(StatusCode::CONFLICT, "key_taken", msg).with_record(record(existing))
                    }
                }
            }
            StoreError::InvalidCredentials => {
                Failure::new(StatusCode::UNAUTHORIZED, "invalid_credentials", err.to_string())
            }
            StoreError::UserExists(_) => Failure::new(StatusCode::CONFLICT, "user_exists", err.to_string()),
            StoreError::Io(_) | StoreError::Journal(_) | StoreError::Hash(_) => {
                tracing::error!(error = %err, "store failure");
                Failure::new(StatusCode::INTERNAL_SERVER_ERROR, "storage_error", "the store could not complete the request")
            }
        }
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        let retry = self.1.retry_after_secs;
        let mut resp = (self.0, Json(self.1)).into_response();
        if let Some(secs) = retry {
            resp.headers_mut().insert(header::RETRY_AFTER, HeaderValue::from(secs));
        }
        resp
    }
}

type ApiResult<T> = Result<T, Failure>;

fn body<T>(r: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    r.map(|Json(v)| v)
        .map_err(|e| Failure::new(e.status(), "invalid_body", e.body_text()))
}

fn query<T>(r: Result<Query<T>, QueryRejection>) -> ApiResult<T> {
    r.map(|Query(v)| v)
        .map_err(|e| Failure::new(StatusCode::BAD_REQUEST, "invalid_query", e.body_text()))
}

fn record_id(r: Result<Path<u64>, PathRejection>) -> ApiResult<RecordId> {
    r.map(|Path(id)| RecordId(id))
        .map_err(|e| Failure::new(StatusCode::BAD_REQUEST, "invalid_id", e.body_text()))
}

/// Run a blocking store write off the async runtime.
async fn blocking<T: Send + 'static>(
    state: &Arc<AppState>,
    f: impl FnOnce(&Store) -> Result<T, StoreError> + Send + 'static,
) -> ApiResult<T> {
    let store = state.store.clone();
    let s2 = store.clone();
    tokio::task::spawn_blocking(move || f(&s2))
        .await
        .map_err(|e| Failure::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(|e| Failure::from_store(e, &store))
}

fn session(state: &AppState, headers: &HeaderMap) -> Option<Session> {
    let value = headers.get(header::AUTHORIZATION)?.to_str().ok()?;
    let token = value.strip_prefix("Bearer ")?.trim();
    state.store.authenticate(token, now())
}

fn require_session(state: &AppState, headers: &HeaderMap) -> ApiResult<Session> {
    session(state, headers).ok_or_else(Failure::unauthorized)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page<T> {
    pub page: usize,
    pub page_size: usize,
    pub total: usize,
    pub items: Vec<T>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageParams {
    page: Option<usize>,
    page_size: Option<usize>,
    sort: Option<String>,
}

fn paginate<T: Clone>(all: &[T], params: &PageParams) -> ApiResult<Page<T>> {
    let page = params.page.unwrap_or(1);
    let page_size = params.page_size.unwrap_or(DEFAULT_PAGE_SIZE);
    if page == 0 {
        return Err(Failure::new(StatusCode::BAD_REQUEST, "invalid_query", "page starts at 1"));
    }
    if !(1..=MAX_PAGE_SIZE).contains(&page_size) {
        return Err(Failure::new(
            StatusCode::BAD_REQUEST,
            "invalid_query",
            format!("page_size must be between 1 and {MAX_PAGE_SIZE}"),
        ));
    }
    if params.sort.as_deref().is_some_and(|s| s != "alpha") {
        return Err(Failure::new(StatusCode::BAD_REQUEST, "invalid_query", "the only sort order is alpha"));
    }
    let start = (page - 1).saturating_mul(page_size).min(all.len());
    let end = start.saturating_add(page_size).min(all.len());
    Ok(Page {
        page,
        page_size,
        total: all.len(),
        items: all[start..end].to_vec(),
    })
}

pub async fn list(State(state): Shared, q: Result<Query<PageParams>, QueryRejection>) -> ApiResult<Json<Page<SimileRecord>>> {
    let params = query(q)?;
    let all: Vec<SimileRecord> = state
        .store
        .read(|s| s.corpus.list_approved().into_iter().cloned().collect());
    paginate(&all, &params).map(Json)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    q: Option<String>,
    page: Option<usize>,
    page_size: Option<usize>,
}

pub async fn search(
    State(state): Shared,
    q: Result<Query<SearchParams>, QueryRejection>,
) -> ApiResult<Json<Page<SimileRecord>>> {
    let params = query(q)?;
    let text = params.q.unwrap_or_default();
    if text.trim().is_empty() {
        return Err(Failure::new(StatusCode::BAD_REQUEST, "missing_query", "parameter q must not be empty"));
    }
    let hits: Vec<SimileRecord> = state
        .store
        .read(|s| s.corpus.search(&text).into_iter().cloned().collect());
    let page = PageParams {
        page: params.page,
        page_size: params.page_size,
        sort: None,
    };
    paginate(&hits, &page).map(Json)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitRequest {
    phrase: String,
    #[serde(default)]
    contributor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmitResponse {
    /// Always `pending`: submissions stay hidden until a curator approves.
    pub visibility: Status,
    pub message: String,
    pub record: SimileRecord,
}

pub async fn submit(
    State(state): Shared,
    ConnectInfo(addr): ConnectInfo<SocketAddr>,
    b: Result<Json<SubmitRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SubmitResponse>)> {
    if let Err(wait) = state.limiter.check(addr.ip(), Instant::now()) {
        let secs = wait.as_secs_f64().ceil() as u64;
        let mut f = Failure::new(
            StatusCode::TOO_MANY_REQUESTS,
            "rate_limited",
            format!("too many submissions, retry in {secs} s"),
        );
        f.1.retry_after_secs = Some(secs.max(1));
        return Err(f);
    }
    let req = body(b)?;
    let phrase = req.phrase.trim().to_string();
    if phrase.chars().count() > MAX_PHRASE_CHARS {
        return Err(Failure::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "too_long",
            format!("phrase exceeds {MAX_PHRASE_CHARS} characters"),
        ));
    }
    let contributor = req.contributor.map(|c| c.trim().to_string()).filter(|c| !c.is_empty());
    if contributor.as_ref().is_some_and(|c| c.chars().count() > 100) {
        return Err(Failure::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_contributor", "contributor name exceeds 100 characters"));
    }
    let outcome = blocking(&state, move |store| {
        let req = UpsertRequest {
            submitted_by: contributor.as_deref(),
            ..UpsertRequest::new(&phrase, Source::Manual)
        };
        store.upsert(&req, now())
    })
    .await?;
    match outcome {
        UpsertOutcome::Created(record) => Ok((
            StatusCode::CREATED,
            Json(SubmitResponse {
                visibility: record.status,
                message: "saved; the simile becomes public once a curator approves it".into(),
                record,
            }),
        )),
        UpsertOutcome::Duplicate(existing) => Err(Failure::new(
            StatusCode::CONFLICT,
            "duplicate",
            format!("this simile is already in the corpus as {:?}", existing.display_form),
        )
        .with_record(Some(existing))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoginRequest {
    username: String,
    password: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoginResponse {
    pub token: String,
    pub user: String,
    pub role: Role,
    pub expires_at: Timestamp,
}

pub async fn login(State(state): Shared, b: Result<Json<LoginRequest>, JsonRejection>) -> ApiResult<Json<LoginResponse>> {
    let req = body(b)?;
    let (token, session) = blocking(&state, move |store| store.login(&req.username, &req.password, now())).await?;
    Ok(Json(LoginResponse {
        token,
        user: session.user,
        role: session.role,
        expires_at: session.expires_at,
    }))
}

async fn transition(state: Arc<AppState>, headers: HeaderMap, id: RecordId, to: Status) -> ApiResult<Json<SimileRecord>> {
    let session = require_session(&state, &headers)?;
    blocking(&state, move |store| store.set_status(id, to, &session.user, now()))
        .await
        .map(Json)
}

pub async fn approve(
    State(state): Shared,
    headers: HeaderMap,
    id: Result<Path<u64>, PathRejection>,
) -> ApiResult<Json<SimileRecord>> {
    let id = record_id(id)?;
    transition(state, headers, id, Status::Approved).await
}

pub async fn reject(
    State(state): Shared,
    headers: HeaderMap,
    id: Result<Path<u64>, PathRejection>,
) -> ApiResult<Json<SimileRecord>> {
    let id = record_id(id)?;
    transition(state, headers, id, Status::Rejected).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditRequest {
    display_form: String,
}

pub async fn edit(
    State(state): Shared,
    headers: HeaderMap,
    id: Result<Path<u64>, PathRejection>,
    b: Result<Json<EditRequest>, JsonRejection>,
) -> ApiResult<Json<SimileRecord>> {
    let session = require_session(&state, &headers)?;
    let id = record_id(id)?;
    let req = body(b)?;
    if req.display_form.chars().count() > MAX_PHRASE_CHARS {
        return Err(Failure::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "too_long",
            format!("phrase exceeds {MAX_PHRASE_CHARS} characters"),
        ));
    }
    blocking(&state, move |store| store.edit(id, &req.display_form, &session.user, now()))
        .await
        .map(Json)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordDetail {
    pub record: SimileRecord,
    pub revisions: Vec<Revision>,
}

/// Approved records are public; others exist only for curators.
pub async fn detail(
    State(state): Shared,
    headers: HeaderMap,
    id: Result<Path<u64>, PathRejection>,
) -> ApiResult<Json<RecordDetail>> {
    let id = record_id(id)?;
    let found = state.store.read(|s| {
        s.corpus.get(id).map(|r| RecordDetail {
            record: r.clone(),
            revisions: s.corpus.revisions_for(id).cloned().collect(),
        })
    });
    match found {
        Some(d) if d.record.status == Status::Approved || session(&state, &headers).is_some() => Ok(Json(d)),
        _ => Err(Failure::new(StatusCode::NOT_FOUND, "not_found", format!("no record with id {id}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendingItem {
    pub record: SimileRecord,
    /// Classifier score when the service runs with a model; higher is more
    /// simile-like.
    pub score: Option<f64>,
}

/// The curation queue: by descending model score when a model is loaded,
/// otherwise oldest first.
pub async fn pending(
    State(state): Shared,
    headers: HeaderMap,
    q: Result<Query<PageParams>, QueryRejection>,
) -> ApiResult<Json<Page<PendingItem>>> {
    require_session(&state, &headers)?;
    let params = query(q)?;
    let mut items: Vec<PendingItem> = state.store.read(|s| {
        s.corpus
            .pending()
            .into_iter()
            .map(|r| PendingItem {
                score: state.model.as_ref().and_then(|m| m.score_phrase(&r.display_form)),
                record: r.clone(),
            })
            .collect()
    });
    if state.model.is_some() {
        items.sort_by(|a, b| {
            let key = |i: &PendingItem| i.score.unwrap_or(f64::NEG_INFINITY);
            key(b).total_cmp(&key(a)).then(a.record.id.cmp(&b.record.id))
        });
    }
    let params = PageParams { sort: None, ..params };
    paginate(&items, &params).map(Json)
}

pub async fn stats(State(state): Shared) -> Json<Stats> {
    Json(state.store.read(|s| s.corpus.stats()))
}

pub async fn not_found() -> Failure {
    Failure::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

pub async fn method_not_allowed() -> Failure {
    Failure::new(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed", "method not allowed for this endpoint")
}

