//! JSON HTTP API over the corpus [`Store`].
//!
//! Public: browse, search, submit, stats and approved-record lookup.
//! Curators (bearer token from `POST /api/login`): approve, reject, edit, the
//! pending queue and non-approved record lookup. Every error is
//! `{"code": ..., "message": ...}`, sometimes with extra context fields.

use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;

use anyhow::Context;
use axum::routing::{get, post};
use axum::Router;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

use crate::formats::model::{ModelFile, Scorer};
use crate::store::{Store, StoreOptions};

mod api;
mod config;
mod limit;

pub use api::{ApiError, LoginResponse, Page, PendingItem, RecordDetail, SubmitResponse};
pub use config::{ServiceConfig, ENV_PREFIX};
pub use limit::RateLimiter;

/// Longest accepted submission, in characters.
pub const MAX_PHRASE_CHARS: usize = 200;
pub const DEFAULT_PAGE_SIZE: usize = 20;
pub const MAX_PAGE_SIZE: usize = 200;

pub struct AppState {
    pub store: Arc<Store>,
    pub model: Option<Scorer>,
    pub limiter: RateLimiter,
}

pub fn router(state: Arc<AppState>, static_dir: Option<&std::path::Path>) -> Router {
    let api = Router::new()
        .route("/similes", get(api::list).post(api::submit))
        .route("/similes/search", get(api::search))
        .route("/similes/{id}", get(api::detail).put(api::edit))
        .route("/similes/{id}/approve", post(api::approve))
        .route("/similes/{id}/reject", post(api::reject))
        .route("/login", post(api::login))
        .route("/pending", get(api::pending))
        .route("/stats", get(api::stats))
        .fallback(api::not_found)
        .method_not_allowed_fallback(api::method_not_allowed)
        .with_state(state);
    let app = Router::new().nest("/api", api);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

/// Open the store and model named by `cfg` and build the shared state.
pub fn open_state(cfg: &ServiceConfig) -> anyhow::Result<Arc<AppState>> {
    let store = Store::open(
        &cfg.store,
        StoreOptions {
            search_fold: cfg.search_fold,
            session_ttl: chrono::Duration::minutes(cfg.session_ttl_minutes.into()),
            ..StoreOptions::default()
        },
    )
    .with_context(|| format!("opening store {}", cfg.store.display()))?;
    let model = cfg
        .model
        .as_deref()
        .map(|p| {
            ModelFile::load(p)
                .and_then(Scorer::new)
                .with_context(|| format!("loading model {}", p.display()))
        })
        .transpose()?;
    Ok(Arc::new(AppState {
        store: Arc::new(store),
        model,
        limiter: RateLimiter::per_minute(cfg.rate_limit_per_minute),
    }))
}

/// Serve on an already bound listener until `shutdown` resolves. In-flight
/// requests finish first; every acknowledged write is already durable.
pub async fn serve_on(
    listener: TcpListener,
    app: Router,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, app.into_make_service_with_connect_info::<SocketAddr>())
        .with_graceful_shutdown(shutdown)
        .await
}

/// Bind, serve until Ctrl-C or SIGTERM, then return.
pub async fn serve(cfg: &ServiceConfig) -> anyhow::Result<()> {
    let state = open_state(cfg)?;
    let listener = TcpListener::bind((cfg.bind, cfg.port))
        .await
        .with_context(|| format!("binding {}:{}", cfg.bind, cfg.port))?;
    tracing::info!(addr = %listener.local_addr()?, "serving");
    let app = router(state, cfg.static_dir.as_deref());
    serve_on(listener, app, shutdown_signal()).await?;
    tracing::info!("shut down");
    Ok(())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}
