use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Duration;

use chrono::Utc;
use serde::Serialize;
use texting_robots::Robot;
use tokio::time::Instant;
use url::Url;

use super::html::{decode_html, process_page};
use super::{canonicalize, host_in_domain, Document, SiteConfig};

#[derive(Debug, Clone)]
pub struct CrawlOptions {
    pub user_agent: String,
    pub timeout: Duration,
    /// Overrides `cfg.max_pages` downward, for desk-scale runs.
    pub limit: Option<usize>,
}

impl Default for CrawlOptions {
    fn default() -> Self {
        CrawlOptions {
            user_agent: concat!("simile-harvester/", env!("CARGO_PKG_VERSION")).to_string(),
            timeout: Duration::from_secs(30),
            limit: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CrawlReport {
    /// Pages fetched and parsed (counts against `max_pages`).
    pub fetched: usize,
    pub emitted: usize,
    pub empty_pages: usize,
    pub http_errors: usize,
    pub undecodable: usize,
    pub non_html: usize,
    pub robots_blocked: usize,
    pub out_of_scope_links: usize,
}

fn host_key(url: &Url) -> String {
    format!(
        "{}://{}:{}",
        url.scheme(),
        url.host_str().unwrap_or_default(),
        url.port_or_known_default().unwrap_or(0)
    )
}

struct Politeness {
    delay: Duration,
    last: HashMap<String, Instant>,
}

impl Politeness {
    async fn wait(&mut self, host: &str, extra: Option<Duration>) {
        let delay = extra.map_or(self.delay, |e| e.max(self.delay));
        if let Some(&last) = self.last.get(host) {
            tokio::time::sleep_until(last + delay).await;
        }
        self.last.insert(host.to_string(), Instant::now());
    }
}

/// Breadth-first crawl from the seeds. Each canonical URL is fetched at most
/// once, one request at a time, honoring robots.txt and the per-host delay.
/// Seeds are depth 1. Every page with non-empty container text is passed to
/// `emit`; an `emit` error aborts the crawl.
pub async fn crawl<E>(
    cfg: &SiteConfig,
    opts: &CrawlOptions,
    mut emit: impl FnMut(Document) -> Result<(), E>,
) -> Result<CrawlReport, E> {
    let domain = cfg.domain.clone();
    let client = reqwest::Client::builder()
        .user_agent(opts.user_agent.clone())
        .timeout(opts.timeout)
        .redirect(reqwest::redirect::Policy::custom(move |attempt| {
            if attempt.previous().len() >= 10 || !host_in_domain(attempt.url(), &domain) {
                attempt.stop()
            } else {
                attempt.follow()
            }
        }))
        .build()
        .expect("static client configuration");

    let max_pages = opts.limit.map_or(cfg.max_pages, |l| l.min(cfg.max_pages));
    let mut report = CrawlReport::default();
    let mut seen: HashSet<String> = HashSet::new();
    let mut queue: VecDeque<(Url, usize)> = VecDeque::new();
    for seed in &cfg.seed_urls {
        if seen.insert(seed.to_string()) {
            queue.push_back((seed.clone(), 1));
        }
    }
    let mut robots: HashMap<String, Option<Robot>> = HashMap::new();
    let mut polite = Politeness {
        delay: Duration::from_millis(cfg.politeness_delay_ms),
        last: HashMap::new(),
    };

    while let Some((url, depth)) = queue.pop_front() {
        if report.fetched >= max_pages {
            break;
        }
        let host = host_key(&url);
        if !robots.contains_key(&host) {
            let robot = fetch_robots(&client, &url, &opts.user_agent, &mut polite, &host).await;
            robots.insert(host.clone(), robot);
        }
        let robot = robots.get(&host).and_then(Option::as_ref);
        if robot.is_some_and(|r| !r.allowed(url.as_str())) {
            report.robots_blocked += 1;
            continue;
        }
        let crawl_delay = robot.and_then(|r| r.delay).map(|s| Duration::from_secs_f32(s.max(0.0)));
        polite.wait(&host, crawl_delay).await;

        let response = match client.get(url.clone()).send().await {
            Ok(r) if r.status().is_success() => r,
            Ok(r) => {
                tracing::warn!(url = %url, status = r.status().as_u16(), "skipping page");
                report.http_errors += 1;
                continue;
            }
            Err(e) => {
                tracing::warn!(url = %url, error = %e, "fetch failed");
                report.http_errors += 1;
                continue;
            }
        };
        let final_url = canonicalize(response.url().clone());
        if final_url != url && !seen.insert(final_url.to_string()) {
            continue;
        }
        let content_type = response
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .map(str::to_string);
        if content_type
            .as_deref()
            .is_some_and(|ct| !ct.contains("html") && !ct.starts_with("text/"))
        {
            report.non_html += 1;
            continue;
        }
        let bytes = match response.bytes().await {
            Ok(b) => b,
            Err(e) => {
                tracing::warn!(url = %url, error = %e, "reading body failed");
                report.http_errors += 1;
                continue;
            }
        };
        report.fetched += 1;
        let html = match decode_html(&bytes, content_type.as_deref()) {
            Ok(h) => h,
            Err(e) => {
                tracing::warn!(url = %final_url, error = %e, "undecodable page skipped");
                report.undecodable += 1;
                continue;
            }
        };
        let (text, links) = process_page(&html, &final_url, &cfg.content_selector);
        if depth < cfg.max_depth {
            for link in links {
                if !host_in_domain(&link, &cfg.domain) {
                    report.out_of_scope_links += 1;
                } else if seen.insert(link.to_string()) {
                    queue.push_back((link, depth + 1));
                }
            }
        }
        if text.is_empty() {
            report.empty_pages += 1;
            continue;
        }
        emit(Document {
            url: final_url.to_string(),
            site_id: cfg.site_id.clone(),
            fetched_at: Utc::now(),
            text,
        })?;
        report.emitted += 1;
    }
    if report.fetched == 0 {
        tracing::warn!(site = %cfg.site_id, "no seed could be fetched");
    }
    Ok(report)
}

/// `None` means no usable robots.txt: everything is allowed.
async fn fetch_robots(
    client: &reqwest::Client,
    page: &Url,
    agent: &str,
    polite: &mut Politeness,
    host: &str,
) -> Option<Robot> {
    let robots_url = page.join("/robots.txt").ok()?;
    polite.wait(host, None).await;
    let response = client.get(robots_url).send().await.ok()?;
    if !response.status().is_success() {
        return None;
    }
    let body = response.bytes().await.ok()?;
    let name = agent.split('/').next().unwrap_or(agent);
    Robot::new(name, &body).ok()
}
