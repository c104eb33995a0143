//! Every endpoint and error path against a real server. Response bodies are
//! checked against strict schema structs (unknown fields rejected).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use reqwest::{Method, StatusCode};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use simile::service::{router, serve_on, AppState, RateLimiter};
use simile::store::{Role, Store, StoreOptions};
use simile_core::corpus::UpsertRequest;
use simile_core::{Source, Status, Timestamp};
use tokio::sync::oneshot;

// Fields exist to be validated, not all are read.
#[allow(dead_code)]
mod schema {
    use super::*;

    #[derive(Debug, Deserialize, PartialEq, Eq, Clone, Copy)]
    #[serde(rename_all = "lowercase")]
    pub enum Kind {
        Adjectival,
        Verbal,
        Unknown,
    }

    #[derive(Debug, Deserialize, PartialEq, Eq, Clone, Copy)]
    #[serde(rename_all = "lowercase")]
    pub enum Src {
        Www,
        Karadzic,
        Manual,
    }

    #[derive(Debug, Deserialize, PartialEq, Eq, Clone, Copy)]
    #[serde(rename_all = "lowercase")]
    pub enum St {
        Pending,
        Approved,
        Rejected,
    }

    #[derive(Debug, Deserialize, Clone)]
    #[serde(deny_unknown_fields)]
    pub struct Evidence {
        pub doc_url: String,
        pub count: u32,
    }

    #[derive(Debug, Deserialize, Clone)]
    #[serde(deny_unknown_fields)]
    pub struct Record {
        pub id: u64,
        pub display_form: String,
        pub canonical_key: String,
        pub kind: Kind,
        pub source: Src,
        pub status: St,
        pub submitted_by: Option<String>,
        pub created_at: i64,
        pub updated_at: i64,
        pub evidence: Vec<Evidence>,
        pub surface_counts: BTreeMap<String, u32>,
        pub edited: bool,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Error {
        pub code: String,
        pub message: String,
        pub record: Option<Record>,
        pub retry_after_secs: Option<u64>,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Page<T> {
        pub page: usize,
        pub page_size: usize,
        pub total: usize,
        pub items: Vec<T>,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Submitted {
        pub visibility: St,
        pub message: String,
        pub record: Record,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Login {
        pub token: String,
        pub user: String,
        pub role: String,
        pub expires_at: i64,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Revision {
        pub record_id: u64,
        pub editor: String,
        pub action: String,
        pub before_form: String,
        pub after_form: String,
        pub before_status: St,
        pub after_status: St,
        pub at: i64,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Detail {
        pub record: Record,
        pub revisions: Vec<Revision>,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct PendingItem {
        pub record: Record,
        pub score: Option<f64>,
    }

    #[derive(Debug, Deserialize, PartialEq, Eq)]
    #[serde(deny_unknown_fields)]
    pub struct Counts {
        pub pending: usize,
        pub approved: usize,
        pub rejected: usize,
    }

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct Stats {
        pub www: Counts,
        pub karadzic: Counts,
        pub manual: Counts,
        pub total: usize,
        pub total_approved: usize,
    }
}

struct Server {
    base: String,
    http: reqwest::Client,
    store: Arc<Store>,
    shutdown: Option<oneshot::Sender<()>>,
    task: tokio::task::JoinHandle<std::io::Result<()>>,
    _dir: tempfile::TempDir,
}

struct Reply {
    status: StatusCode,
    body: Value,
}

impl Reply {
    fn parse<T: DeserializeOwned>(&self) -> T {
        serde_json::from_value(self.body.clone())
            .unwrap_or_else(|e| panic!("schema violation ({e}) in {}", self.body))
    }

    fn error(&self, status: StatusCode, code: &str) -> schema::Error {
        assert_eq!(self.status, status, "{}", self.body);
        let e: schema::Error = self.parse();
        assert_eq!(e.code, code, "{}", self.body);
        assert!(!e.message.is_empty());
        e
    }
}

struct Options {
    rate_limit: u32,
    session_ttl: chrono::Duration,
    static_dir: Option<std::path::PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rate_limit: 1000,
            session_ttl: chrono::Duration::hours(1),
            static_dir: None,
        }
    }
}

async fn start(opts: Options) -> Server {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(
        &dir.path().join("store.journal"),
        StoreOptions {
            sync: false,
            session_ttl: opts.session_ttl,
            ..StoreOptions::default()
        },
    )
    .unwrap();
    store.add_user("ana", Role::Curator, "tajna", Timestamp(0)).unwrap();
    let store = Arc::new(store);
    let state = Arc::new(AppState {
        store: store.clone(),
        model: None,
        limiter: RateLimiter::per_minute(opts.rate_limit),
    });
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = oneshot::channel();
    let app = router(state, opts.static_dir.as_deref());
    let task = tokio::spawn(serve_on(listener, app, async {
        let _ = rx.await;
    }));
    Server {
        base: format!("http://{addr}"),
        http: reqwest::Client::new(),
        store,
        shutdown: Some(tx),
        task,
        _dir: dir,
    }
}

impl Server {
    async fn call(&self, method: Method, path: &str, token: Option<&str>, body: Option<Value>) -> Reply {
        let mut req = self.http.request(method, format!("{}{}", self.base, path));
        if let Some(t) = token {
            req = req.header("authorization", format!("Bearer {t}"));
        }
        if let Some(b) = body {
            req = req.header("content-type", "application/json").body(b.to_string());
        }
        let resp = req.send().await.unwrap();
        let status = resp.status();
        let ct = resp
            .headers()
            .get("content-type")
            .map(|v| v.to_str().unwrap().to_string())
            .unwrap_or_default();
        let text = resp.text().await.unwrap();
        assert!(ct.starts_with("application/json"), "{path}: content-type {ct:?}, body {text:?}");
        let body = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{path}: invalid JSON ({e}): {text:?}"));
        Reply { status, body }
    }

    async fn get(&self, path: &str, token: Option<&str>) -> Reply {
        self.call(Method::GET, path, token, None).await
    }

    async fn submit(&self, phrase: &str) -> Reply {
        self.call(Method::POST, "/api/similes", None, Some(json!({ "phrase": phrase }))).await
    }

    async fn login(&self) -> String {
        let r = self
            .call(Method::POST, "/api/login", None, Some(json!({"username": "ana", "password": "tajna"})))
            .await;
        assert_eq!(r.status, StatusCode::OK, "{}", r.body);
        let l: schema::Login = r.parse();
        assert_eq!((l.user.as_str(), l.role.as_str()), ("ana", "curator"));
        assert_eq!(l.token.len(), 64);
        l.token
    }

    /// Insert and approve directly through the store.
    fn seed_approved(&self, phrase: &str) -> u64 {
        let r = self
            .store
            .upsert(&UpsertRequest::new(phrase, Source::Karadzic), Timestamp(1))
            .unwrap();
        let id = r.record().id;
        self.store.set_status(id, Status::Approved, "seed", Timestamp(2)).unwrap();
        id.0
    }

    async fn stop(mut self) {
        self.shutdown.take().unwrap().send(()).unwrap();
        self.task.await.unwrap().unwrap();
    }
}

fn ids(page: &schema::Page<schema::Record>) -> Vec<u64> {
    page.items.iter().map(|r| r.id).collect()
}

#[tokio::test]
async fn submit_created_duplicate_and_validation() {
    let s = start(Options::default()).await;

    let r = s.submit("vredan kao mrav").await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.body);
    let created: schema::Submitted = r.parse();
    assert_eq!(created.visibility, schema::St::Pending);
    assert_eq!(created.record.status, schema::St::Pending);
    assert_eq!(created.record.source, schema::Src::Manual);
    assert!(!created.message.is_empty());

    let dup = s.submit("vredan kao mrav").await.error(StatusCode::CONFLICT, "duplicate");
    assert_eq!(dup.record.unwrap().id, created.record.id);

    // Gender variants collide as well.
    let first: schema::Submitted = s.submit("bela kao sneg").await.parse();
    let dup = s.submit("beo kao sneg").await.error(StatusCode::CONFLICT, "duplicate");
    assert_eq!(dup.record.unwrap().id, first.record.id);

    let named = s
        .call(Method::POST, "/api/similes", None, Some(json!({"phrase": "brz kao zec", "contributor": "Mika"})))
        .await;
    let named: schema::Submitted = named.parse();
    assert_eq!(named.record.submitted_by.as_deref(), Some("Mika"));

    s.submit("konj").await.error(StatusCode::UNPROCESSABLE_ENTITY, "not_a_simile");
    s.submit("   ").await.error(StatusCode::UNPROCESSABLE_ENTITY, "empty_phrase");
    s.submit("kao").await.error(StatusCode::UNPROCESSABLE_ENTITY, "not_a_simile");
    let long = format!("radi kao {}", "konj ".repeat(40));
    s.submit(&long).await.error(StatusCode::UNPROCESSABLE_ENTITY, "too_long");

    let bad = s.http.post(format!("{}/api/similes", s.base)).header("content-type", "application/json").body("{not json").send().await.unwrap();
    assert_eq!(bad.status(), StatusCode::BAD_REQUEST);
    let e: schema::Error = serde_json::from_str(&bad.text().await.unwrap()).unwrap();
    assert_eq!(e.code, "invalid_body");
    s.call(Method::POST, "/api/similes", None, Some(json!({"fraza": "x kao y"})))
        .await
        .error(StatusCode::UNPROCESSABLE_ENTITY, "invalid_body");
    let no_ct = s.http.post(format!("{}/api/similes", s.base)).body(r#"{"phrase":"a kao b"}"#).send().await.unwrap();
    assert_eq!(no_ct.status(), StatusCode::UNSUPPORTED_MEDIA_TYPE);
    let e: schema::Error = serde_json::from_str(&no_ct.text().await.unwrap()).unwrap();
    assert_eq!(e.code, "invalid_body");

    s.stop().await;
}

#[tokio::test]
async fn pending_is_invisible_until_approved() {
    let s = start(Options::default()).await;
    let created: schema::Submitted = s.submit("beo kao sneg").await.parse();
    let id = created.record.id;

    let list: schema::Page<schema::Record> = s.get("/api/similes", None).await.parse();
    assert_eq!((list.total, list.items.len()), (0, 0));
    let hits: schema::Page<schema::Record> = s.get("/api/similes/search?q=sneg", None).await.parse();
    assert_eq!(hits.total, 0);
    s.get(&format!("/api/similes/{id}"), None).await.error(StatusCode::NOT_FOUND, "not_found");

    let token = s.login().await;
    let detail: schema::Detail = s.get(&format!("/api/similes/{id}"), Some(&token)).await.parse();
    assert_eq!(detail.record.status, schema::St::Pending);

    let r = s.call(Method::POST, &format!("/api/similes/{id}/approve"), Some(&token), None).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let approved: schema::Record = r.parse();
    assert_eq!(approved.status, schema::St::Approved);

    let list: schema::Page<schema::Record> = s.get("/api/similes?page=1", None).await.parse();
    assert_eq!(ids(&list), vec![id]);
    let hits: schema::Page<schema::Record> = s.get("/api/similes/search?q=bela+kao+sneg", None).await.parse();
    assert_eq!(ids(&hits), vec![id]);
    let hits: schema::Page<schema::Record> = s.get("/api/similes/search?q=BELO%20K%27O%20SNEG", None).await.parse();
    assert_eq!(ids(&hits), vec![id]);
    let detail: schema::Detail = s.get(&format!("/api/similes/{id}"), None).await.parse();
    assert_eq!(detail.revisions.len(), 1);
    assert_eq!(detail.revisions[0].action, "approve");
    assert_eq!(detail.revisions[0].editor, "ana");

    s.stop().await;
}

#[tokio::test]
async fn curation_requires_a_session() {
    let s = start(Options::default()).await;
    let created: schema::Submitted = s.submit("lep kao cvet").await.parse();
    let id = created.record.id;

    for (method, path, body) in [
        (Method::POST, format!("/api/similes/{id}/approve"), None),
        (Method::POST, format!("/api/similes/{id}/reject"), None),
        (Method::PUT, format!("/api/similes/{id}"), Some(json!({"display_form": "lepa kao cvet"}))),
        (Method::GET, "/api/pending".to_string(), None),
    ] {
        s.call(method.clone(), &path, None, body.clone()).await.error(StatusCode::UNAUTHORIZED, "unauthorized");
        s.call(method, &path, Some("f00d"), body).await.error(StatusCode::UNAUTHORIZED, "unauthorized");
    }
    let st: schema::Stats = s.get("/api/stats", None).await.parse();
    assert_eq!(st.manual, schema::Counts { pending: 1, approved: 0, rejected: 0 });

    s.call(Method::POST, "/api/login", None, Some(json!({"username": "ana", "password": "pogrešna"})))
        .await
        .error(StatusCode::UNAUTHORIZED, "invalid_credentials");
    s.call(Method::POST, "/api/login", None, Some(json!({"username": "niko", "password": "tajna"})))
        .await
        .error(StatusCode::UNAUTHORIZED, "invalid_credentials");
    s.call(Method::POST, "/api/login", None, Some(json!({"username": "ana"})))
        .await
        .error(StatusCode::UNPROCESSABLE_ENTITY, "invalid_body");
    s.stop().await;
}

#[tokio::test]
async fn expired_sessions_are_rejected() {
    let s = start(Options {
        session_ttl: chrono::Duration::zero(),
        ..Options::default()
    })
    .await;
    let token = s.login().await;
    s.get("/api/pending", Some(&token)).await.error(StatusCode::UNAUTHORIZED, "unauthorized");
    s.stop().await;
}

#[tokio::test]
async fn transitions_edits_and_lookups() {
    let s = start(Options::default()).await;
    let token = s.login().await;
    let t = Some(token.as_str());
    let a: schema::Submitted = s.submit("radi kao konj").await.parse();
    let b: schema::Submitted = s.submit("gladan kao vuk").await.parse();
    let (a, b) = (a.record.id, b.record.id);

    let r: schema::Record = s.call(Method::POST, &format!("/api/similes/{b}/reject"), t, None).await.parse();
    assert_eq!(r.status, schema::St::Rejected);
    let e = s
        .call(Method::POST, &format!("/api/similes/{b}/approve"), t, None)
        .await
        .error(StatusCode::CONFLICT, "illegal_transition");
    assert_eq!(e.record.unwrap().status, schema::St::Rejected);

    s.call(Method::POST, "/api/similes/999/approve", t, None).await.error(StatusCode::NOT_FOUND, "not_found");
    s.call(Method::POST, "/api/similes/abc/approve", t, None).await.error(StatusCode::BAD_REQUEST, "invalid_id");
    s.get("/api/similes/999", t).await.error(StatusCode::NOT_FOUND, "not_found");

    s.call(Method::POST, &format!("/api/similes/{a}/approve"), t, None).await.parse::<schema::Record>();
    let before: schema::Detail = s.get(&format!("/api/similes/{a}"), None).await.parse();
    let edited = s
        .call(Method::PUT, &format!("/api/similes/{a}"), t, Some(json!({"display_form": "Radi ko konj"})))
        .await;
    assert_eq!(edited.status, StatusCode::OK, "{}", edited.body);
    let edited: schema::Record = edited.parse();
    assert_eq!(edited.display_form, "Radi ko konj");
    assert!(edited.edited);
    assert_eq!(edited.status, schema::St::Approved);
    let after: schema::Detail = s.get(&format!("/api/similes/{a}"), None).await.parse();
    assert_eq!(after.revisions.len(), before.revisions.len() + 1);
    let last = after.revisions.last().unwrap();
    assert_eq!((last.before_form.as_str(), last.after_form.as_str()), ("radi kao konj", "Radi ko konj"));

    s.call(Method::PUT, &format!("/api/similes/{a}"), t, Some(json!({"display_form": "konj"})))
        .await
        .error(StatusCode::UNPROCESSABLE_ENTITY, "not_a_simile");
    let c: schema::Submitted = s.submit("lep kao cvet").await.parse();
    let e = s
        .call(Method::PUT, &format!("/api/similes/{}", c.record.id), t, Some(json!({"display_form": "radi kao konj"})))
        .await
        .error(StatusCode::CONFLICT, "key_taken");
    assert_eq!(e.record.unwrap().id, a);
    s.call(Method::PUT, &format!("/api/similes/{b}"), t, Some(json!({"display_form": "gladna kao vuk"})))
        .await
        .error(StatusCode::CONFLICT, "illegal_transition");
    s.call(Method::PUT, &format!("/api/similes/{a}"), t, Some(json!({"form": "x"})))
        .await
        .error(StatusCode::UNPROCESSABLE_ENTITY, "invalid_body");

    let pending: schema::Page<schema::PendingItem> = s.get("/api/pending", t).await.parse();
    assert_eq!(pending.items.iter().map(|i| i.record.id).collect::<Vec<_>>(), vec![c.record.id]);
    assert!(pending.items[0].score.is_none());

    let st: schema::Stats = s.get("/api/stats", None).await.parse();
    assert_eq!(st.manual, schema::Counts { pending: 1, approved: 1, rejected: 1 });
    assert_eq!((st.total, st.total_approved), (3, 1));
    s.stop().await;
}

#[tokio::test]
async fn pagination_partitions_the_approved_set() {
    let s = start(Options::default()).await;
    let heads = ["beo", "brz", "crn", "čist", "ćutljiv", "dobar", "džangrizav", "đavolast", "gladan", "jak", "lep", "ljut", "mek", "nežan", "njušav"];
    let mut seeded = BTreeSet::new();
    for h in heads {
        seeded.insert(s.seed_approved(&format!("{h} kao sneg")));
    }
    s.submit("spava kao top").await;

    let full: schema::Page<schema::Record> = s.get("/api/similes?page_size=200&sort=alpha", None).await.parse();
    assert_eq!(full.total, heads.len());
    let forms: Vec<_> = full.items.iter().map(|r| r.display_form.split(' ').next().unwrap().to_string()).collect();
    assert_eq!(forms, heads, "Serbian alphabetical order");

    let mut paged = Vec::new();
    for page in 1.. {
        let p: schema::Page<schema::Record> = s.get(&format!("/api/similes?page={page}&page_size=4"), None).await.parse();
        assert_eq!((p.page, p.page_size, p.total), (page, 4, heads.len()));
        if p.items.is_empty() {
            break;
        }
        assert!(p.items.len() <= 4);
        paged.extend(ids(&p));
    }
    assert_eq!(paged, ids(&full));
    assert_eq!(paged.iter().copied().collect::<BTreeSet<_>>(), seeded);

    for bad in ["page=0", "page_size=0", "page_size=1000", "sort=date", "page=x", "bogus=1"] {
        s.get(&format!("/api/similes?{bad}"), None).await.error(StatusCode::BAD_REQUEST, "invalid_query");
    }
    s.get("/api/similes/search", None).await.error(StatusCode::BAD_REQUEST, "missing_query");
    s.get("/api/similes/search?q=+", None).await.error(StatusCode::BAD_REQUEST, "missing_query");
    let none: schema::Page<schema::Record> = s.get("/api/similes/search?q=krokodil", None).await.parse();
    assert_eq!(none.total, 0);
    s.stop().await;
}

#[tokio::test]
async fn exact_key_matches_rank_first() {
    let s = start(Options::default()).await;
    let long = s.seed_approved("beo kao sneg u planini");
    let exact = s.seed_approved("beo kao sneg");
    let other = s.seed_approved("hladan kao sneg");
    let hits: schema::Page<schema::Record> = s.get("/api/similes/search?q=belo+kao+sneg", None).await.parse();
    assert_eq!(ids(&hits), vec![exact, long]);
    let hits: schema::Page<schema::Record> = s.get("/api/similes/search?q=sneg", None).await.parse();
    assert_eq!(ids(&hits).into_iter().collect::<BTreeSet<_>>(), BTreeSet::from([exact, long, other]));
    s.stop().await;
}

#[tokio::test]
async fn submit_is_rate_limited_per_client() {
    let s = start(Options {
        rate_limit: 3,
        ..Options::default()
    })
    .await;
    for p in ["lep kao cvet", "brz kao zec", "konj"] {
        assert_ne!(s.submit(p).await.status, StatusCode::TOO_MANY_REQUESTS);
    }
    let e = s.submit("jak kao bik").await.error(StatusCode::TOO_MANY_REQUESTS, "rate_limited");
    assert!(e.retry_after_secs.unwrap() >= 1);
    // Reads are not limited.
    assert_eq!(s.get("/api/stats", None).await.status, StatusCode::OK);
    s.stop().await;
}

#[tokio::test]
async fn unknown_routes_and_methods_are_json() {
    let s = start(Options::default()).await;
    s.get("/api/nope", None).await.error(StatusCode::NOT_FOUND, "not_found");
    s.call(Method::DELETE, "/api/similes", None, None)
        .await
        .error(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed");
    s.call(Method::GET, "/api/login", None, None)
        .await
        .error(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed");
    s.stop().await;
}

#[tokio::test]
async fn concurrent_approve_and_reject_have_one_winner() {
    let s = Arc::new(start(Options::default()).await);
    let token = s.login().await;
    for round in 0..10 {
        let created: schema::Submitted = s.submit(&format!("brz kao zec{round}")).await.parse();
        let id = created.record.id;
        let (approve, reject) = (format!("/api/similes/{id}/approve"), format!("/api/similes/{id}/reject"));
        let (a, b) = tokio::join!(
            s.call(Method::POST, &approve, Some(&token), None),
            s.call(Method::POST, &reject, Some(&token), None),
        );
        let mut statuses = [a.status, b.status];
        statuses.sort();
        assert_eq!(statuses, [StatusCode::OK, StatusCode::CONFLICT]);
        let loser = if a.status == StatusCode::CONFLICT { &a } else { &b };
        let winner: schema::Record = if a.status == StatusCode::OK { a.parse() } else { b.parse() };
        let e = loser.error(StatusCode::CONFLICT, "illegal_transition");
        assert_eq!(e.record.unwrap().status, winner.status);
        let d: schema::Detail = s.get(&format!("/api/similes/{id}"), Some(&token)).await.parse();
        assert_eq!(d.revisions.len(), 1);
        assert_eq!(d.revisions[0].before_status, schema::St::Pending);
    }
    Arc::try_unwrap(s).ok().unwrap().stop().await;
}

#[tokio::test]
async fn graceful_shutdown_keeps_acknowledged_writes() {
    let s = start(Options::default()).await;
    let created: schema::Submitted = s.submit("vredan kao mrav").await.parse();
    let path = s._dir.path().join("store.journal");
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("copy.journal");
    let store = s.store.clone();
    let Server { shutdown, task, _dir, .. } = s;
    shutdown.unwrap().send(()).unwrap();
    task.await.unwrap().unwrap();
    drop(store);
    std::fs::copy(&path, &copy).unwrap();
    let reopened = Store::open(&copy, StoreOptions { sync: false, ..StoreOptions::default() }).unwrap();
    reopened.read(|st| {
        let r = st.corpus.get(simile_core::RecordId(created.record.id)).unwrap();
        assert_eq!(r.display_form, "vredan kao mrav");
        assert!(st.user("ana").is_some());
    });
}

#[tokio::test]
async fn static_assets_are_served_outside_the_api() {
    let ui = tempfile::tempdir().unwrap();
    std::fs::write(ui.path().join("index.html"), "<!doctype html><title>poređenja</title>").unwrap();
    let s = start(Options {
        static_dir: Some(ui.path().to_path_buf()),
        ..Options::default()
    })
    .await;
    let resp = s.http.get(format!("{}/", s.base)).send().await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert!(resp.text().await.unwrap().contains("poređenja"));
    s.get("/api/nope", None).await.error(StatusCode::NOT_FOUND, "not_found");
    s.stop().await;
}
