//! Config-driven focused crawler: one [`SiteConfig`] per site, text taken only
//! from a designated content container, links followed within the site's
//! domain.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

mod crawl;
mod html;

pub use crawl::{crawl, CrawlOptions, CrawlReport};
pub use html::{decode_html, extract_links, extract_text, DecodeError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub url: String,
    pub site_id: String,
    pub fetched_at: DateTime<Utc>,
    pub text: String,
}

/// Element name plus one attribute that must equal a value, e.g. `div[id=content]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentSelector {
    pub element: String,
    pub attribute: String,
    pub value: String,
}

impl ContentSelector {
    pub fn new(element: &str, attribute: &str, value: &str) -> Self {
        ContentSelector {
            element: element.to_ascii_lowercase(),
            attribute: attribute.to_ascii_lowercase(),
            value: value.to_string(),
        }
    }

    pub(crate) fn to_css(&self) -> String {
        let escaped = self.value.replace('\\', "\\\\").replace('"', "\\\"");
        format!("{}[{}=\"{}\"]", self.element, self.attribute, escaped)
    }
}

impl fmt::Display for ContentSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}={}]", self.element, self.attribute, self.value)
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl FromStr for ContentSelector {
    type Err = ConfigError;

    /// Accepts `div[id=content]`, `div[id="content"]` and the shorthand `div#content`.
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let bad = || ConfigError::Selector(s.to_string());
        let s = s.trim();
        if let Some((element, id)) = s.split_once('#') {
            if is_name(element) && !id.is_empty() {
                return Ok(ContentSelector::new(element, "id", id));
            }
            return Err(bad());
        }
        let (element, rest) = s.split_once('[').ok_or_else(bad)?;
        let inner = rest.strip_suffix(']').ok_or_else(bad)?;
        let (attribute, value) = inner.split_once('=').ok_or_else(bad)?;
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        if !is_name(element) || !is_name(attribute.trim()) || value.is_empty() {
            return Err(bad());
        }
        Ok(ContentSelector::new(element, attribute.trim(), value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteConfig {
    pub site_id: String,
    pub seed_urls: Vec<Url>,
    pub domain: String,
    pub content_selector: ContentSelector,
    pub max_pages: usize,
    pub politeness_delay_ms: u64,
    pub max_depth: usize,
}

pub const DEFAULT_POLITENESS_DELAY_MS: u64 = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("missing key {0:?}")]
    Missing(&'static str),
    #[error("{key}: {reason}")]
    Value { key: &'static str, reason: String },
    #[error("bad content selector {0:?}; expected element[attribute=value]")]
    Selector(String),
    #[error("seed {0} is outside the configured domain")]
    SeedOutOfDomain(String),
}

fn positive(key: &'static str, v: Option<&str>) -> Result<usize, ConfigError> {
    let v = v.ok_or(ConfigError::Missing(key))?;
    match v.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(ConfigError::Value {
            key,
            reason: format!("expected a positive integer, got {v:?}"),
        }),
    }
}

impl SiteConfig {
    /// Parse the `key = value` site file. `#` starts a comment line;
    /// `seed_urls` may repeat or hold a comma/space separated list.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut site_id = None;
        let mut seeds: Vec<String> = Vec::new();
        let mut domain = None;
        let mut selector = None;
        let mut max_pages = None;
        let mut delay = None;
        let mut max_depth = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            let value = value.trim().to_string();
            match key.trim() {
                "site_id" => site_id = Some(value),
                "seed_urls" | "seed_url" => seeds.extend(
                    value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(str::to_string),
                ),
                "domain" => domain = Some(value),
                "content_selector" => selector = Some(value),
                "max_pages" => max_pages = Some(value),
                "politeness_delay_ms" => delay = Some(value),
                "max_depth" => max_depth = Some(value),
                other => {
                    return Err(ConfigError::UnknownKey {
                        line: i + 1,
                        key: other.to_string(),
                    })
                }
            }
        }
        let site_id = site_id
            .filter(|s| !s.is_empty())
            .ok_or(ConfigError::Missing("site_id"))?;
        let domain = domain
            .map(|d| d.trim_matches('.').to_ascii_lowercase())
            .filter(|d| !d.is_empty())
            .ok_or(ConfigError::Missing("domain"))?;
        let content_selector = selector
            .ok_or(ConfigError::Missing("content_selector"))?
            .parse()?;
        if seeds.is_empty() {
            return Err(ConfigError::Missing("seed_urls"));
        }
        let mut seed_urls = Vec::new();
        for s in seeds {
            let url = Url::parse(&s).map_err(|e| ConfigError::Value {
                key: "seed_urls",
                reason: format!("{s}: {e}"),
            })?;
            if !matches!(url.scheme(), "http" | "https") || !host_in_domain(&url, &domain) {
                return Err(ConfigError::SeedOutOfDomain(s));
            }
            seed_urls.push(canonicalize(url));
        }
        let politeness_delay_ms = match delay {
            None => DEFAULT_POLITENESS_DELAY_MS,
            Some(v) => v.parse().map_err(|_| ConfigError::Value {
                key: "politeness_delay_ms",
                reason: format!("expected a non-negative integer, got {v:?}"),
            })?,
        };
        Ok(SiteConfig {
            site_id,
            seed_urls,
            domain,
            content_selector,
            max_pages: positive("max_pages", max_pages.as_deref())?,
            politeness_delay_ms,
            max_depth: positive("max_depth", max_depth.as_deref())?,
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::parse(&text)?)
    }
}

fn host_in_domain(url: &Url, domain: &str) -> bool {
    let Some(host) = url.host_str() else {
        return false;
    };
    let host = host.trim_end_matches('.').to_ascii_lowercase();
    host == domain
        || host
            .strip_suffix(domain)
            .is_some_and(|prefix| prefix.ends_with('.'))
}

/// Is `url` on `domain` or one of its subdomains?
pub fn in_scope(url: &str, cfg: &SiteConfig) -> Result<bool, url::ParseError> {
    Ok(host_in_domain(&Url::parse(url)?, &cfg.domain))
}

/// Lowercased host (done by the parser), no fragment.
pub fn canonicalize(mut url: Url) -> Url {
    url.set_fragment(None);
    url
}
