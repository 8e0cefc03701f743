use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{EmbeddingBackend, ProviderConfig};
use crate::error::{Error, Result};

#[derive(Serialize)]
struct Request<'a> {
    texts: &'a [String],
}

#[derive(Deserialize)]
struct Response {
    embeddings: Vec<Vec<f64>>,
}

/// Embedding service speaking `POST {"texts": [...]}` → `{"embeddings": [[...], ...]}`.
///
/// Connection failures, timeouts, 429 and 5xx responses are retried with
/// exponential backoff; any other non-200 status is a malformed response.
pub struct HttpBackend {
    agent: ureq::Agent,
    url: String,
    max_retries: usize,
    backoff: Duration,
}

enum Attempt {
    Retry(String),
    Fatal(Error),
}

impl HttpBackend {
    pub fn from_config(config: &ProviderConfig) -> Result<Self> {
        let url = config
            .endpoint_url
            .clone()
            .filter(|u| !u.is_empty())
            .ok_or_else(|| Error::BadParams("mode `http` requires endpoint_url".into()))?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(config.timeout_seconds)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(Self {
            agent,
            url,
            max_retries: config.max_retries,
            backoff: Duration::from_secs_f64(config.backoff_seconds.max(0.0)),
        })
    }

    fn attempt(&self, texts: &[String]) -> std::result::Result<Vec<Vec<f64>>, Attempt> {
        let mut response = self
            .agent
            .post(&self.url)
            .send_json(Request { texts })
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        let status = response.status().as_u16();
        if status == 429 || status >= 500 {
            return Err(Attempt::Retry(format!("HTTP {status}")));
        }
        if status != 200 {
            return Err(Attempt::Fatal(Error::MalformedResponse(format!(
                "HTTP {status}"
            ))));
        }
        let body: Response = response
            .body_mut()
            .read_json()
            .map_err(|e| Attempt::Fatal(Error::MalformedResponse(e.to_string())))?;
        if body.embeddings.len() != texts.len() {
            return Err(Attempt::Fatal(Error::MalformedResponse(format!(
                "{} embeddings for {} texts",
                body.embeddings.len(),
                texts.len()
            ))));
        }
        Ok(body.embeddings)
    }
}

impl EmbeddingBackend for HttpBackend {
    fn name(&self) -> &str {
        "http"
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>> {
        let mut delay = self.backoff;
        let mut last = String::new();
        for attempt in 0..=self.max_retries {
            if attempt > 0 {
                log::warn!("embedding request failed ({last}); retrying in {delay:?}");
                std::thread::sleep(delay);
                delay *= 2;
            }
            match self.attempt(texts) {
                Ok(v) => return Ok(v),
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Retry(msg)) => last = msg,
            }
        }
        Err(Error::ServiceUnavailable {
            attempts: self.max_retries + 1,
            message: last,
        })
    }
}
