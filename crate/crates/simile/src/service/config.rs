use std::net::IpAddr;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub bind: IpAddr,
    /// 0 picks a free port.
    pub port: u16,
    pub store: PathBuf,
    /// Directory with the UI build, served at `/`. Optional.
    pub static_dir: Option<PathBuf>,
    /// Model used to score the pending queue. Optional.
    pub model: Option<PathBuf>,
    /// Public submissions allowed per client address per minute.
    pub rate_limit_per_minute: u32,
    pub search_fold: bool,
    pub session_ttl_minutes: u32,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: IpAddr::from([127, 0, 0, 1]),
            port: 8080,
            store: PathBuf::from("simile.journal"),
            static_dir: None,
            model: None,
            rate_limit_per_minute: 10,
            search_fold: true,
            session_ttl_minutes: 12 * 60,
        }
    }
}

pub const ENV_PREFIX: &str = "SIMILE_";

impl ServiceConfig {
    /// Parse a TOML file. Relative paths resolve against the file's directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: ServiceConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        if let Some(base) = path.parent() {
            let fix = |p: &mut PathBuf| {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            };
            fix(&mut cfg.store);
            cfg.static_dir.as_mut().map(fix);
            cfg.model.as_mut().map(fix);
        }
        Ok(cfg)
    }

    /// Apply `SIMILE_*` overrides, e.g. `SIMILE_PORT=9000`.
    pub fn apply_env<I, K, V>(&mut self, vars: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        for (key, value) in vars {
            let Some(name) = key.as_ref().strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let v = value.as_ref();
            let bad = || format!("invalid value {v:?} for {}", key.as_ref());
            match name {
                "BIND" => self.bind = v.parse().with_context(bad)?,
                "PORT" => self.port = v.parse().with_context(bad)?,
                "STORE" => self.store = v.into(),
                "STATIC_DIR" => self.static_dir = Some(v.into()),
                "MODEL" => self.model = Some(v.into()),
                "RATE_LIMIT_PER_MINUTE" => self.rate_limit_per_minute = v.parse().with_context(bad)?,
                "SEARCH_FOLD" => self.search_fold = v.parse().with_context(bad)?,
                "SESSION_TTL_MINUTES" => self.session_ttl_minutes = v.parse().with_context(bad)?,
                _ => {}
            }
        }
        Ok(())
    }
}
