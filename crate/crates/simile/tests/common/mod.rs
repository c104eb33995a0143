//! Local fixture site for crawler and pipeline tests.
//!
//! Five crawlable pages on 127.0.0.1, one robots-blocked page, two links to a
//! separate "external" server on `localhost` that only counts hits, and decoy
//! containers that must not be extracted.

#![allow(dead_code)]

use std::net::SocketAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Body;
use axum::extract::State;
use axum::http::{header, StatusCode, Uri};
use axum::response::Response;
use axum::Router;

pub struct FixtureSite {
    pub addr: SocketAddr,
    pub external: SocketAddr,
    pub external_hits: Arc<AtomicUsize>,
    pub site_paths: Arc<Mutex<Vec<String>>>,
}

impl FixtureSite {
    pub fn base(&self) -> String {
        format!("http://127.0.0.1:{}", self.addr.port())
    }

    pub fn site_config(&self) -> String {
        format!(
            "# fixture\nsite_id = fixture\nseed_urls = {}/\ndomain = 127.0.0.1\ncontent_selector = div[id=content]\nmax_pages = 10\nmax_depth = 5\npoliteness_delay_ms = 0\n",
            self.base()
        )
    }

    pub fn external_requests(&self) -> usize {
        self.external_hits.load(Ordering::SeqCst)
    }
}

/// Expected container text per page, in crawl (BFS) order.
pub const EXPECTED_TEXTS: [(&str, &str); 5] = [
    ("/", "Radi kao konj. Bio je lep kao cvet."),
    ("/a", "Hladan kao krastavac. Vredan kao mrav."),
    ("/b", "Čovek je beo kao sneg, gladan kao vuk."),
    ("/c", "Radi kao pravnik. Spava kao top."),
    ("/d", "Radi kao konj."),
];

fn page(external: &str, path: &str) -> Option<(Vec<u8>, &'static str)> {
    let html = |body: String| Some((body.into_bytes(), "text/html; charset=utf-8"));
    match path {
        "/" => html(format!(
            r#"<!doctype html><html><head><title>Početna</title></head><body>
<div id="menu">Brz kao zec <a href="/a">A</a></div>
<div class="content">Jak kao bik</div>
<div id="content"><p>Radi kao konj.</p><p>Bio je <b>lep</b> kao cvet.</p><script>var x = "beo kao sneg";</script></div>
<a href="/b">B</a> <a href="/a#vrh">A again</a> <a href="/private">private</a>
<a href="{external}/x">external one</a> <a href="mailto:urednik@example.org">mail</a>
</body></html>"#
        )),
        "/a" => html(format!(
            r#"<html><body><div id="content">Hladan kao krastavac.<br>Vredan kao mrav.</div>
<a href="c">C</a> <a href="/d">D</a> <a href="{external}/y">external two</a> <a href="/">home</a>
</body></html>"#
        )),
        "/b" => {
            let text = r#"<html><body><div id="content">Čovek je beo kao sneg, gladan kao vuk.</div><a href="/c">C</a></body></html>"#;
            let (bytes, _, _) = encoding_rs::WINDOWS_1250.encode(text);
            Some((bytes.into_owned(), "text/html; charset=windows-1250"))
        }
        "/c" => html(r#"<html><body><div id="content"><ul><li>Radi kao pravnik.</li><li>Spava kao top.</li></ul></div><nav id="content-nav">Jak kao bik</nav></body></html>"#.into()),
        "/d" => html(r#"<html><body><div id="content">Radi kao konj.</div><a href="/a">A</a></body></html>"#.into()),
        "/private" => html(r#"<html><body><div id="content">Jak kao bik.</div></body></html>"#.into()),
        "/robots.txt" => Some((b"User-agent: *\nDisallow: /private\n".to_vec(), "text/plain")),
        _ => None,
    }
}

#[derive(Clone)]
struct SiteState {
    external: String,
    paths: Arc<Mutex<Vec<String>>>,
}

async fn site(State(s): State<SiteState>, uri: Uri) -> Response {
    let path = uri.path().to_string();
    s.paths.lock().unwrap().push(path.clone());
    match page(&s.external, &path) {
        Some((body, ct)) => Response::builder()
            .header(header::CONTENT_TYPE, ct)
            .body(Body::from(body))
            .unwrap(),
        None => Response::builder()
            .status(StatusCode::NOT_FOUND)
            .body(Body::empty())
            .unwrap(),
    }
}

async fn counter(State(hits): State<Arc<AtomicUsize>>) -> &'static str {
    hits.fetch_add(1, Ordering::SeqCst);
    "<html><body><div id=\"content\">Spoljni sajt kao mamac.</div></body></html>"
}

/// Start both servers on a background thread; they live until the process
/// exits.
pub fn start_fixture_site() -> FixtureSite {
    let (tx, rx) = std::sync::mpsc::channel();
    let external_hits = Arc::new(AtomicUsize::new(0));
    let site_paths = Arc::new(Mutex::new(Vec::new()));
    let (hits, paths) = (external_hits.clone(), site_paths.clone());
    std::thread::spawn(move || {
        let rt = tokio::runtime::Builder::new_current_thread()
            .enable_all()
            .build()
            .unwrap();
        rt.block_on(async move {
            let ext = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            let ext_addr = ext.local_addr().unwrap();
            let site_l = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
            let site_addr = site_l.local_addr().unwrap();
            let ext_app = Router::new().fallback(counter).with_state(hits);
            let site_app = Router::new().fallback(site).with_state(SiteState {
                external: format!("http://localhost:{}", ext_addr.port()),
                paths,
            });
            tx.send((site_addr, ext_addr)).unwrap();
            let a = axum::serve(ext, ext_app);
            let b = axum::serve(site_l, site_app);
            let _ = tokio::join!(a, b);
        });
    });
    let (addr, external) = rx.recv().unwrap();
    FixtureSite {
        addr,
        external,
        external_hits,
        site_paths,
    }
}

/// Labeled data for the pipeline fixture: every phrase on the site appears,
/// so the expected labels can be read off by hand.
pub const PIPELINE_TRAINING: &str = "\
1\tradi\tkao\tkonj
1\tlep\tkao\tcvet
1\thladan\tkao\tkrastavac
1\tvredan\tkao\tmrav
1\tbeo\tkao\tsneg
1\tgladan\tkao\tvuk
1\tspava\tkao\ttop
1\tjak\tkao\tbik
1\tbrz\tkao\tzec
0\tradi\tkao\tpravnik
0\tradi\tkao\tlekar
0\tradi\tkao\tadvokat
0\tspava\tkao\tlekar
0\tradi\tkao\tprofesor
0\tradi\tkao\tvojnik
0\tspava\tkao\tvojnik
0\tbio\tkao\tpravnik
0\tradi\tkao\tkuvar
";
