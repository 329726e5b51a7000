use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::csl::map_record;
use super::{
    fixture_file_name, normalize_doi, ExternalCandidate, MetaError, PublicationMeta, ResolverConfig, ResolverMode,
    CSL_JSON,
};
use crate::modelkg::EntityKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransportError {
    Timeout,
    Other(String),
}

/// Blocking HTTP GET. Implemented outside this crate.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str, accept: &str, timeout: Duration) -> Result<TransportResponse, TransportError>;
}

/// Unknown DOIs are a value: the questionnaire keeps going with manual entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DoiLookup {
    Found(PublicationMeta),
    NotFound { timed_out: bool },
}

type Outcome = Result<DoiLookup, MetaError>;

struct Entry {
    born: Instant,
    slot: Arc<OnceLock<Outcome>>,
}

/// Shareable across threads. Concurrent lookups of one key wait on a single
/// fetch; failures are not cached.
pub struct Resolver {
    config: ResolverConfig,
    transport: Option<Arc<dyn Transport>>,
    cache: Mutex<HashMap<String, Entry>>,
    fixture_reads: AtomicUsize,
}

impl fmt::Debug for Resolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Resolver")
            .field("config", &self.config)
            .field("transport", &self.transport.is_some())
            .finish_non_exhaustive()
    }
}

impl Resolver {
    pub fn new(config: ResolverConfig) -> Self {
        Self { config, transport: None, cache: Mutex::new(HashMap::new()), fixture_reads: AtomicUsize::new(0) }
    }

    /// The transport is only used in online mode.
    pub fn with_transport(config: ResolverConfig, transport: Arc<dyn Transport>) -> Self {
        Self { transport: Some(transport), ..Self::new(config) }
    }

    pub fn config(&self) -> &ResolverConfig {
        &self.config
    }

    /// Number of DOI fixture file reads so far.
    pub fn fixture_reads(&self) -> usize {
        self.fixture_reads.load(Ordering::SeqCst)
    }

    pub fn resolve_doi(&self, doi: &str) -> Outcome {
        let doi = normalize_doi(doi)?;
        if self.config.cache_capacity == 0 {
            return self.fetch(&doi);
        }
        let slot = self.slot_for(&doi);
        let outcome = slot.get_or_init(|| self.fetch(&doi)).clone();
        if outcome.is_err() {
            let mut cache = self.cache.lock().expect("cache lock");
            if cache.get(&doi).is_some_and(|e| Arc::ptr_eq(&e.slot, &slot)) {
                cache.remove(&doi);
            }
        }
        outcome
    }

    fn slot_for(&self, doi: &str) -> Arc<OnceLock<Outcome>> {
        let mut cache = self.cache.lock().expect("cache lock");
        let now = Instant::now();
        if let Some(e) = cache.get(doi) {
            if now.duration_since(e.born) < self.config.cache_ttl() {
                return e.slot.clone();
            }
            cache.remove(doi);
        }
        while cache.len() >= self.config.cache_capacity {
            let oldest = cache.iter().min_by_key(|(_, e)| e.born).map(|(k, _)| k.clone());
            match oldest {
                Some(k) => cache.remove(&k),
                None => break,
            };
        }
        let slot = Arc::new(OnceLock::new());
        cache.insert(doi.to_string(), Entry { born: now, slot: slot.clone() });
        slot
    }

    fn fetch(&self, doi: &str) -> Outcome {
        match self.config.mode {
            ResolverMode::Offline => self.fetch_fixture(doi),
            ResolverMode::Online => self.fetch_online(doi),
        }
    }

    fn fetch_fixture(&self, doi: &str) -> Outcome {
        let path = self.config.fixtures_path.join("doi").join(fixture_file_name(doi));
        self.fixture_reads.fetch_add(1, Ordering::SeqCst);
        let corrupt = |message: String| MetaError::FixtureCorrupt { path: path.display().to_string(), message };
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(DoiLookup::NotFound { timed_out: false }),
            Err(e) => return Err(corrupt(e.to_string())),
        };
        map_record(doi, &bytes).map(DoiLookup::Found).map_err(corrupt)
    }

    fn fetch_online(&self, doi: &str) -> Outcome {
        let transport = self
            .transport
            .as_ref()
            .ok_or_else(|| MetaError::NetworkError("no transport configured".into()))?;
        let url = format!("{}{}", self.config.endpoint_url, doi);
        match transport.get(&url, CSL_JSON, self.config.timeout()) {
            Ok(r) if r.status == 200 => map_record(doi, &r.body)
                .map(DoiLookup::Found)
                .map_err(|m| MetaError::NetworkError(format!("unusable record: {m}"))),
            Ok(r) if r.status == 404 => Ok(DoiLookup::NotFound { timed_out: false }),
            Ok(r) => Err(MetaError::NetworkError(format!("status {}", r.status))),
            Err(TransportError::Timeout) => Ok(DoiLookup::NotFound { timed_out: true }),
            Err(TransportError::Other(m)) => Err(MetaError::NetworkError(m)),
        }
    }

    /// Case-insensitive label-prefix search over the catalogue fixtures for
    /// `kind`. Missing or unreadable fixtures give no candidates.
    pub fn search_external(&self, label: &str, kind: EntityKind) -> Vec<ExternalCandidate> {
        let needle = label.trim().to_lowercase();
        if needle.is_empty() {
            return Vec::new();
        }
        let path = self.config.fixtures_path.join("external").join(format!("{}.json", kind.id_prefix()));
        let Ok(bytes) = std::fs::read(path) else {
            return Vec::new();
        };
        let Ok(all) = serde_json::from_slice::<Vec<ExternalCandidate>>(&bytes) else {
            return Vec::new();
        };
        let mut hits: Vec<ExternalCandidate> =
            all.into_iter().filter(|c| c.label.to_lowercase().starts_with(&needle)).collect();
        hits.sort_by(|a, b| (a.source, &a.id).cmp(&(b.source, &b.id)));
        hits
    }
}
