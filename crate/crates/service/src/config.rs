//! Service configuration: a TOML file with every key optional, then
//! `FAIRDOC_*` environment overrides.

use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use fairdoc::metafetch::{ResolverConfig, ResolverMode};
use serde::{Deserialize, Serialize};

use crate::ServeError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub listen: String,
    /// 0 picks a free port.
    pub port: u16,
    pub kg_store_path: PathBuf,
    pub fixtures_path: PathBuf,
    pub max_upload_bytes: usize,
    /// Finished analysis jobs kept for polling; older ones are dropped.
    pub job_retention: usize,
    pub max_concurrent_jobs: usize,
    pub resolver: ResolverSection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolverSection {
    pub mode: ResolverMode,
    pub endpoint_url: String,
    pub timeout_ms: u64,
    pub cache_capacity: usize,
    pub cache_ttl_secs: u64,
}

impl Default for ResolverSection {
    fn default() -> Self {
        let d = ResolverConfig::default();
        Self {
            mode: d.mode,
            endpoint_url: d.endpoint_url,
            timeout_ms: d.timeout_ms,
            cache_capacity: d.cache_capacity,
            cache_ttl_secs: d.cache_ttl_secs,
        }
    }
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen: "127.0.0.1".into(),
            port: 8080,
            kg_store_path: PathBuf::from("data/kg.json"),
            fixtures_path: PathBuf::from("fixtures"),
            max_upload_bytes: 10 * 1024 * 1024,
            job_retention: 100,
            max_concurrent_jobs: 2,
            resolver: ResolverSection::default(),
        }
    }
}

/// Environment variables read by [`ServiceConfig::with_env`].
pub const ENV_KEYS: [&str; 7] = [
    "FAIRDOC_LISTEN",
    "FAIRDOC_PORT",
    "FAIRDOC_KG_STORE",
    "FAIRDOC_FIXTURES",
    "FAIRDOC_MAX_UPLOAD_BYTES",
    "FAIRDOC_RESOLVER_MODE",
    fairdoc::metafetch::ENDPOINT_ENV,
];

fn bad(msg: impl Into<String>) -> ServeError {
    ServeError::BadConfig(msg.into())
}

impl ServiceConfig {
    pub fn from_toml(text: &str) -> Result<Self, ServeError> {
        toml::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ServeError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies overrides from `var` (normally `std::env::var`).
    pub fn with_env(mut self, var: impl Fn(&str) -> Option<String>) -> Result<Self, ServeError> {
        let get = |k: &str| var(k).map(|v| v.trim().to_string()).filter(|v| !v.is_empty());
        if let Some(v) = get("FAIRDOC_LISTEN") {
            self.listen = v;
        }
        if let Some(v) = get("FAIRDOC_PORT") {
            self.port = v.parse().map_err(|_| bad(format!("FAIRDOC_PORT `{v}` is not a port number")))?;
        }
        if let Some(v) = get("FAIRDOC_KG_STORE") {
            self.kg_store_path = v.into();
        }
        if let Some(v) = get("FAIRDOC_FIXTURES") {
            self.fixtures_path = v.into();
        }
        if let Some(v) = get("FAIRDOC_MAX_UPLOAD_BYTES") {
            self.max_upload_bytes = v.parse().map_err(|_| bad(format!("FAIRDOC_MAX_UPLOAD_BYTES `{v}`")))?;
        }
        if let Some(v) = get("FAIRDOC_RESOLVER_MODE") {
            self.resolver.mode = match v.as_str() {
                "offline" => ResolverMode::Offline,
                "online" => ResolverMode::Online,
                other => return Err(bad(format!("FAIRDOC_RESOLVER_MODE `{other}`"))),
            };
        }
        if let Some(v) = get(fairdoc::metafetch::ENDPOINT_ENV) {
            self.resolver.endpoint_url = v;
        }
        Ok(self)
    }

    pub fn from_process_env(self) -> Result<Self, ServeError> {
        self.with_env(|k| std::env::var(k).ok())
    }

    pub fn socket_addr(&self) -> Result<SocketAddr, ServeError> {
        let ip: IpAddr = self.listen.parse().map_err(|_| bad(format!("listen address `{}`", self.listen)))?;
        Ok(SocketAddr::new(ip, self.port))
    }

    pub fn resolver_config(&self) -> ResolverConfig {
        let r = &self.resolver;
        ResolverConfig {
            mode: r.mode,
            fixtures_path: self.fixtures_path.clone(),
            endpoint_url: r.endpoint_url.clone(),
            timeout_ms: r.timeout_ms,
            cache_capacity: r.cache_capacity,
            cache_ttl_secs: r.cache_ttl_secs,
        }
    }

    /// Checks values and creates missing directories.
    pub fn prepare(&self) -> Result<(), ServeError> {
        self.socket_addr()?;
        if self.max_upload_bytes == 0 {
            return Err(bad("max_upload_bytes must be positive"));
        }
        if self.max_concurrent_jobs == 0 {
            return Err(bad("max_concurrent_jobs must be positive"));
        }
        if self.kg_store_path.as_os_str().is_empty() {
            return Err(bad("kg_store_path is empty"));
        }
        if let Some(dir) = self.kg_store_path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| bad(format!("{}: {e}", dir.display())))?;
        }
        std::fs::create_dir_all(&self.fixtures_path).map_err(|e| bad(format!("{}: {e}", self.fixtures_path.display())))?;
        Ok(())
    }
}
