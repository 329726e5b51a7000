//! Blocking HTTP transport for online DOI lookups.

use std::time::Duration;

use fairdoc::metafetch::{Transport, TransportError, TransportResponse};

#[derive(Debug, Default, Clone, Copy)]
pub struct UreqTransport;

impl Transport for UreqTransport {
    fn get(&self, url: &str, accept: &str, timeout: Duration) -> Result<TransportResponse, TransportError> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        match agent.get(url).header("Accept", accept).call() {
            Ok(mut resp) => {
                let status = resp.status().as_u16();
                let body = resp.body_mut().read_to_vec().map_err(map_err)?;
                Ok(TransportResponse { status, body })
            }
            Err(e) => Err(map_err(e)),
        }
    }
}

fn map_err(e: ureq::Error) -> TransportError {
    match e {
        ureq::Error::Timeout(_) => TransportError::Timeout,
        other => TransportError::Other(other.to_string()),
    }
}
