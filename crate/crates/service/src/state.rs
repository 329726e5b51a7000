//! Shared service state: the persisted knowledge graph, in-memory
//! documentation sessions, the resolver and the job queue.
//!
//! Lock order is sessions, then graph. Graph mutations run on a copy that
//! replaces the live graph only after it reached disk.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, RwLock};

use fairdoc::metafetch::{Resolver, ResolverMode};
use fairdoc::modelkg::{export_json, import_json, KnowledgeGraph};
use fairdoc::workflowdoc::{default_template, DocumentationSession, QuestionnaireTemplate};

use crate::config::ServiceConfig;
use crate::error::ApiError;
use crate::jobs::JobQueue;
use crate::transport::UreqTransport;
use crate::ServeError;

pub struct AppState {
    pub config: ServiceConfig,
    pub template: QuestionnaireTemplate,
    pub resolver: Resolver,
    pub jobs: JobQueue,
    pub(crate) sessions: RwLock<HashMap<String, DocumentationSession>>,
    pub(crate) kg: RwLock<KnowledgeGraph>,
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Reads the graph store, or an empty graph when the file does not exist.
pub fn load_store(path: &Path) -> Result<KnowledgeGraph, String> {
    match std::fs::read(path) {
        Ok(bytes) => import_json(&bytes).map_err(|e| format!("{}: {e}", path.display())),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(KnowledgeGraph::new()),
        Err(e) => Err(format!("{}: {e}", path.display())),
    }
}

impl AppState {
    /// Builds state from a config, choosing the resolver backend by mode.
    /// Must run inside a tokio runtime (the job workers are spawned here).
    pub fn new(config: ServiceConfig) -> Result<Arc<Self>, ServeError> {
        let rc = config.resolver_config();
        let resolver = match rc.mode {
            ResolverMode::Offline => Resolver::new(rc),
            ResolverMode::Online => Resolver::with_transport(rc, Arc::new(UreqTransport)),
        };
        Self::with_resolver(config, resolver)
    }

    pub fn with_resolver(config: ServiceConfig, resolver: Resolver) -> Result<Arc<Self>, ServeError> {
        config.prepare()?;
        let kg = load_store(&config.kg_store_path).map_err(ServeError::BadConfig)?;
        if !config.kg_store_path.exists() {
            write_atomic(&config.kg_store_path, &export_json(&kg)).map_err(|e| ServeError::BadConfig(e.to_string()))?;
        }
        Ok(Arc::new(Self {
            jobs: JobQueue::new(config.max_concurrent_jobs, config.job_retention),
            template: default_template(),
            resolver,
            config,
            sessions: RwLock::new(HashMap::new()),
            kg: RwLock::new(kg),
        }))
    }

    pub fn kg(&self) -> std::sync::RwLockReadGuard<'_, KnowledgeGraph> {
        self.kg.read().expect("kg lock")
    }

    /// Runs `f` on a copy of the graph; a changed copy is written through to
    /// the store and then becomes the live graph.
    pub fn mutate_kg<T>(&self, f: impl FnOnce(&mut KnowledgeGraph) -> Result<T, ApiError>) -> Result<T, ApiError> {
        let mut live = self.kg.write().expect("kg lock");
        let mut next = live.clone();
        let out = f(&mut next)?;
        if next.version() != live.version() || next != *live {
            write_atomic(&self.config.kg_store_path, &export_json(&next))
                .map_err(|e| ApiError::internal(format!("could not persist the graph: {e}")))?;
            *live = next;
        }
        Ok(out)
    }

    pub fn insert_session(&self, s: DocumentationSession) -> DocumentationSession {
        self.sessions.write().expect("session lock").insert(s.id().to_string(), s.clone());
        s
    }

    pub fn session(&self, id: &str) -> Result<DocumentationSession, ApiError> {
        self.sessions
            .read()
            .expect("session lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found("session", id))
    }

    /// Runs `f` on a copy of the session and keeps the copy when `f` succeeds.
    pub fn update_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut DocumentationSession) -> Result<T, ApiError>,
    ) -> Result<(T, DocumentationSession), ApiError> {
        let mut sessions = self.sessions.write().expect("session lock");
        let live = sessions.get_mut(id).ok_or_else(|| ApiError::not_found("session", id))?;
        let mut next = live.clone();
        let out = f(&mut next)?;
        *live = next.clone();
        Ok((out, next))
    }
}
