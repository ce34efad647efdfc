use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{EmbedError, EmbeddingVector};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f64>>,
    dim: usize,
}

/// `POST {endpoint}/embed` with `{"texts": [...]}`; expects
/// `{"vectors": [[...], ...], "dim": n}` in input order.
pub fn embed_remote(texts: &[&str], endpoint: &str, timeout: Duration) -> Result<Vec<EmbeddingVector>, EmbedError> {
    if texts.is_empty() {
        return Ok(Vec::new());
    }
    let url = format!("{}/embed", endpoint.trim_end_matches('/'));
    let agent: ureq::Agent =
        ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
    let mut resp =
        agent.post(&url).header("Content-Type", "application/json").send_json(&EmbedRequest { texts }).map_err(
            |e| match e {
                ureq::Error::Timeout(_) => EmbedError::Timeout(timeout),
                other => EmbedError::Transport(other.to_string()),
            },
        )?;
    let status = resp.status().as_u16();
    if status != 200 {
        return Err(EmbedError::Status(status));
    }
    let body: EmbedResponse = resp.body_mut().read_json().map_err(|e| match e {
        ureq::Error::Timeout(_) => EmbedError::Timeout(timeout),
        other => EmbedError::BadResponse(other.to_string()),
    })?;
    if body.vectors.len() != texts.len() {
        return Err(EmbedError::BadResponse(format!("expected {} vectors, got {}", texts.len(), body.vectors.len())));
    }
    if let Some(v) = body.vectors.iter().find(|v| v.len() != body.dim) {
        return Err(EmbedError::DimensionMismatch { expected: body.dim, found: v.len() });
    }
    if body.dim == 0 {
        return Err(EmbedError::ZeroDimension);
    }
    Ok(body.vectors.into_iter().map(EmbeddingVector::normalized).collect())
}
