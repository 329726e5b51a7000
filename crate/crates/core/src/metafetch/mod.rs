//! Publication metadata by DOI and candidate lookups in external catalogues.
//!
//! The default backend reads fixture files and never touches the network.
//! An online backend goes through a caller-supplied [`Transport`], so this
//! crate stays free of any HTTP client.
//!
//! Fixture layout under `fixtures_path`:
//!
//! ```text
//! doi/<percent-encoded doi>.json      CSL-JSON record, e.g. doi/10.1000%2Fdemo.json
//! external/<kind prefix>.json         array of ExternalCandidate, e.g. external/software.json
//! ```

mod csl;
mod resolver;

use std::path::PathBuf;
use std::time::Duration;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use resolver::{DoiLookup, Resolver, Transport, TransportError, TransportResponse};

/// Env var overriding [`ResolverConfig::endpoint_url`].
pub const ENDPOINT_ENV: &str = "FAIRDOC_DOI_ENDPOINT";

/// Accept header sent to the citation endpoint.
pub const CSL_JSON: &str = "application/vnd.citationstyles.csl+json";

const FILE_SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'.').remove(b'-').remove(b'_');

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaError {
    #[error("`{0}` is not a DOI")]
    InvalidDoi(String),
    #[error("fixture {path} is corrupt: {message}")]
    FixtureCorrupt { path: String, message: String },
    #[error("network error: {0}")]
    NetworkError(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationMeta {
    pub doi: String,
    pub title: String,
    pub authors: Vec<String>,
    pub year: i32,
    pub venue: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateSource {
    Wikidata,
    Swmath,
    Zbmath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalCandidate {
    pub source: CandidateSource,
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolverMode {
    #[default]
    Offline,
    Online,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolverConfig {
    pub mode: ResolverMode,
    pub fixtures_path: PathBuf,
    /// The normalized DOI is appended to this.
    pub endpoint_url: String,
    pub timeout_ms: u64,
    /// Zero disables caching.
    pub cache_capacity: usize,
    pub cache_ttl_secs: u64,
}

impl Default for ResolverConfig {
    fn default() -> Self {
        Self {
            mode: ResolverMode::Offline,
            fixtures_path: PathBuf::from("fixtures"),
            endpoint_url: "https://doi.org/".to_string(),
            timeout_ms: 5000,
            cache_capacity: 256,
            cache_ttl_secs: 3600,
        }
    }
}

impl ResolverConfig {
    pub fn offline(fixtures_path: impl Into<PathBuf>) -> Self {
        Self { fixtures_path: fixtures_path.into(), ..Self::default() }
    }

    pub fn with_env_overrides(mut self) -> Self {
        if let Ok(url) = std::env::var(ENDPOINT_ENV) {
            if !url.trim().is_empty() {
                self.endpoint_url = url.trim().to_string();
            }
        }
        self
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    pub fn cache_ttl(&self) -> Duration {
        Duration::from_secs(self.cache_ttl_secs)
    }
}

fn is_registrant(s: &str) -> bool {
    !s.is_empty() && s.split('.').all(|part| !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit()))
}

/// Strips resolver prefixes, trims and lowercases; the rest must look like
/// `10.<digits[.digits]*>/<suffix>`.
pub fn normalize_doi(text: &str) -> Result<String, MetaError> {
    let invalid = || MetaError::InvalidDoi(text.to_string());
    let mut s = text.trim().to_lowercase();
    for prefix in ["https://", "http://"] {
        if let Some(rest) = s.strip_prefix(prefix) {
            s = rest.to_string();
        }
    }
    for prefix in ["dx.doi.org/", "doi.org/", "doi:"] {
        if let Some(rest) = s.strip_prefix(prefix) {
            s = rest.trim_start().to_string();
            break;
        }
    }
    let (registrant, suffix) = s
        .strip_prefix("10.")
        .and_then(|rest| rest.split_once('/'))
        .ok_or_else(invalid)?;
    if !is_registrant(registrant) || suffix.is_empty() || suffix.chars().any(char::is_whitespace) {
        return Err(invalid());
    }
    Ok(s)
}

/// File name of the fixture for an already normalized DOI.
pub fn fixture_file_name(doi: &str) -> String {
    format!("{}.json", utf8_percent_encode(doi, FILE_SEGMENT))
}
