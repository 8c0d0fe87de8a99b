//! OpenAI-compatible HTTP backend.

use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::Semaphore;

use super::{ChatBackend, ChatRequest, LlmError};

fn default_timeout() -> f64 {
    60.0
}
fn default_retries() -> u32 {
    3
}
fn default_in_flight() -> usize {
    4
}
fn default_backoff() -> u64 {
    500
}

/// Connection settings for a chat/embeddings endpoint. The API key itself is
/// never stored; only the name of the environment variable holding it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    pub base_url: String,
    pub model: String,
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
}

impl BackendConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        BackendConfig {
            base_url: base_url.into(),
            model: model.into(),
            api_key_env: None,
            timeout_secs: default_timeout(),
            max_retries: default_retries(),
            max_in_flight: default_in_flight(),
            backoff_ms: default_backoff(),
        }
    }

    pub fn validate(&self) -> Result<(), LlmError> {
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(LlmError::Config("timeout_secs must be positive".into()));
        }
        if self.max_in_flight == 0 {
            return Err(LlmError::Config("max_in_flight must be at least 1".into()));
        }
        if self.base_url.trim().is_empty() || self.model.trim().is_empty() {
            return Err(LlmError::Config("base_url and model are required".into()));
        }
        Ok(())
    }

    fn api_key(&self) -> Result<Option<String>, LlmError> {
        match &self.api_key_env {
            None => Ok(None),
            Some(var) => std::env::var(var)
                .map(Some)
                .map_err(|_| LlmError::Config(format!("environment variable {var} is not set"))),
        }
    }

    fn url(&self, path: &str) -> String {
        format!("{}/{}", self.base_url.trim_end_matches('/'), path.trim_start_matches('/'))
    }
}

/// HTTP client shared by the chat and embeddings backends: bounded
/// concurrency and exponential-backoff retries on transient failures.
#[derive(Debug, Clone)]
pub struct HttpClient {
    config: BackendConfig,
    client: reqwest::Client,
    permits: Arc<Semaphore>,
}

const BODY_EXCERPT: usize = 500;

impl HttpClient {
    pub fn new(config: BackendConfig) -> Result<Self, LlmError> {
        config.validate()?;
        let client = reqwest::Client::builder()
            .timeout(Duration::from_secs_f64(config.timeout_secs))
            .build()
            .map_err(|e| LlmError::Config(e.to_string()))?;
        let permits = Arc::new(Semaphore::new(config.max_in_flight));
        Ok(HttpClient { config, client, permits })
    }

    pub fn config(&self) -> &BackendConfig {
        &self.config
    }

    async fn post_once(&self, url: &str, body: &Value, key: Option<&str>) -> Result<Value, LlmError> {
        let mut req = self.client.post(url).json(body);
        if let Some(key) = key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().await.map_err(|e| LlmError::Transport(e.to_string()))?;
        let status = resp.status();
        let text = resp.text().await.map_err(|e| LlmError::Transport(e.to_string()))?;
        if !status.is_success() {
            let body: String = text.chars().take(BODY_EXCERPT).collect();
            return Err(LlmError::Backend { status: status.as_u16(), body });
        }
        serde_json::from_str(&text).map_err(|e| LlmError::Format {
            message: format!("response body is not JSON: {e}"),
            raw: text,
        })
    }

    /// POSTs `body` to `path`, retrying transient failures.
    pub async fn post_json(&self, path: &str, body: &Value) -> Result<Value, LlmError> {
        let key = self.config.api_key()?;
        let url = self.config.url(path);
        let _permit = self.permits.acquire().await.expect("semaphore is never closed");
        let mut attempt = 0;
        loop {
            match self.post_once(&url, body, key.as_deref()).await {
                Err(e) if e.is_transient() && attempt < self.config.max_retries => {
                    let delay = self.config.backoff_ms.saturating_mul(1 << attempt.min(16));
                    tracing::warn!(%url, attempt, error = %e, "retrying after {delay} ms");
                    tokio::time::sleep(Duration::from_millis(delay)).await;
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct HttpChat {
    http: HttpClient,
}

impl HttpChat {
    pub fn new(config: BackendConfig) -> Result<Self, LlmError> {
        Ok(HttpChat { http: HttpClient::new(config)? })
    }
}

pub(crate) fn request_body(model: &str, request: &ChatRequest) -> Value {
    let mut body = json!({
        "model": model,
        "messages": request.messages,
        "temperature": 0,
    });
    if let Some(f) = &request.function {
        body["tools"] = json!([{ "type": "function", "function": f }]);
        body["tool_choice"] = json!({ "type": "function", "function": { "name": f.name } });
    }
    body
}

pub(crate) fn reply_text(response: &Value) -> Result<String, LlmError> {
    let message = &response["choices"][0]["message"];
    if let Some(args) = message["tool_calls"][0]["function"]["arguments"].as_str() {
        return Ok(args.to_string());
    }
    match message["content"].as_str() {
        Some(text) => Ok(text.to_string()),
        None => Err(LlmError::Format {
            message: "response has no message content".into(),
            raw: response.to_string(),
        }),
    }
}

#[async_trait]
impl ChatBackend for HttpChat {
    fn model_name(&self) -> &str {
        &self.http.config.model
    }

    async fn complete(&self, request: &ChatRequest) -> Result<String, LlmError> {
        request.validate()?;
        let body = request_body(&self.http.config.model, request);
        let response = self.http.post_json("chat/completions", &body).await?;
        reply_text(&response)
    }
}
