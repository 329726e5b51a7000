//! HTTP/JSON service and command line over the fairdoc library: documentation
//! sessions, the model knowledge graph and background rule mining.

pub mod cli;
pub mod config;
pub mod error;
pub mod jobs;
pub mod routes;
pub mod state;
pub mod transport;

use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;

use thiserror::Error;
use tokio::net::TcpListener;

pub use config::ServiceConfig;
pub use error::{ApiError, ErrorBody};
pub use routes::router;
pub use state::AppState;

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("cannot bind {addr}: {message}")]
    BindFailure { addr: SocketAddr, message: String },
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("server error: {0}")]
    Io(String),
}

pub async fn bind(config: &ServiceConfig) -> Result<TcpListener, ServeError> {
    let addr = config.socket_addr()?;
    TcpListener::bind(addr)
        .await
        .map_err(|e| ServeError::BindFailure { addr, message: e.to_string() })
}

/// Serves until `shutdown` resolves, lets in-flight requests finish, then
/// fails every analysis job that has not completed.
pub async fn serve_until(
    state: Arc<AppState>,
    listener: TcpListener,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServeError> {
    let app = router(state.clone());
    let result = axum::serve(listener, app).with_graceful_shutdown(shutdown).await;
    let aborted = state.jobs.abort_all();
    if aborted > 0 {
        tracing::warn!(aborted, "analysis jobs aborted by shutdown");
    }
    result.map_err(|e| ServeError::Io(e.to_string()))
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
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}

/// Binds, serves and shuts down on SIGINT or SIGTERM.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let state = AppState::new(config)?;
    let listener = bind(&state.config).await?;
    let addr = listener.local_addr().map_err(|e| ServeError::Io(e.to_string()))?;
    tracing::info!(%addr, "listening");
    serve_until(state, listener, shutdown_signal()).await
}
