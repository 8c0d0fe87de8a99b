//! Chat-completion backends and few-shot prompt templates.
//!
//! Every prompt built by this crate carries English only. Backends are
//! shareable handles; the HTTP backend caps concurrent requests and retries
//! transient failures, and the mock backend is a pure function of the
//! template name and the final user message.

use std::fmt;

use async_trait::async_trait;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub mod http;
pub mod mock;
mod template;

pub use http::{BackendConfig, HttpChat};
pub use mock::{MockChat, ScriptedChat};
pub use template::{FewShot, PromptTemplate};

#[derive(Debug, Clone, thiserror::Error)]
pub enum LlmError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("backend returned status {status}: {body}")]
    Backend { status: u16, body: String },
    #[error("unparseable reply: {message}")]
    Format { message: String, raw: String },
    #[error("configuration error: {0}")]
    Config(String),
}

impl LlmError {
    /// Failures worth retrying: network errors, rate limiting and server
    /// errors.
    pub fn is_transient(&self) -> bool {
        match self {
            LlmError::Transport(_) => true,
            LlmError::Backend { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// A function the model is asked to call with structured arguments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionSpec {
    pub name: String,
    pub description: String,
    /// JSON Schema of the arguments object.
    pub parameters: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    /// Name of the prompt template the messages were built from.
    pub template: String,
    pub messages: Vec<ChatMessage>,
    pub function: Option<FunctionSpec>,
}

impl ChatRequest {
    pub fn new(template: impl Into<String>, messages: Vec<ChatMessage>) -> Self {
        ChatRequest {
            template: template.into(),
            messages,
            function: None,
        }
    }

    pub fn with_function(mut self, function: FunctionSpec) -> Self {
        self.function = Some(function);
        self
    }

    pub fn last_user(&self) -> Option<&str> {
        self.messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.as_str())
    }

    pub fn validate(&self) -> Result<(), LlmError> {
        match self.messages.first() {
            Some(m) if m.role == Role::System => {}
            _ => return Err(LlmError::InvalidRequest("messages must start with a system message".into())),
        }
        if self.messages.iter().any(|m| m.content.trim().is_empty()) {
            return Err(LlmError::InvalidRequest("message content must be non-empty".into()));
        }
        Ok(())
    }
}

#[async_trait]
pub trait ChatBackend: Send + Sync {
    fn model_name(&self) -> &str;

    /// Returns the assistant's text, or the function-call arguments when the
    /// request names a function.
    async fn complete(&self, request: &ChatRequest) -> Result<String, LlmError>;
}

impl fmt::Debug for dyn ChatBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChatBackend({})", self.model_name())
    }
}

fn strip_fences(text: &str) -> &str {
    let t = text.trim();
    let Some(rest) = t.strip_prefix("```") else {
        return t;
    };
    let rest = rest.trim_start_matches(|c: char| c.is_ascii_alphabetic());
    rest.strip_suffix("```").unwrap_or(rest).trim()
}

/// Rewrites Python-literal syntax (single-quoted strings, `None`, `True`,
/// `False`) into JSON.
fn pythonish_to_json(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        out.push_str(match word.as_str() {
            "None" => "null",
            "True" => "true",
            "False" => "false",
            w => w,
        });
        word.clear();
    };
    while let Some(c) = chars.next() {
        match c {
            '"' | '\'' => {
                flush(&mut word, &mut out);
                out.push('"');
                while let Some(d) = chars.next() {
                    match d {
                        '\\' => {
                            if let Some(e) = chars.next() {
                                if e == '\'' {
                                    out.push('\'');
                                } else {
                                    out.push('\\');
                                    out.push(e);
                                }
                            }
                        }
                        d if d == c => break,
                        '"' => out.push_str("\\\""),
                        d => out.push(d),
                    }
                }
                out.push('"');
            }
            c if c.is_alphanumeric() || c == '_' => word.push(c),
            c => {
                flush(&mut word, &mut out);
                out.push(c);
            }
        }
    }
    flush(&mut word, &mut out);
    out
}

/// Parses a model reply as JSON, tolerating code fences, surrounding prose
/// and Python-literal quoting.
pub fn lenient_json(text: &str) -> Result<Value, String> {
    let t = strip_fences(text);
    if t.is_empty() {
        return Err("empty reply".into());
    }
    if let Ok(v) = serde_json::from_str(t) {
        return Ok(v);
    }
    let start = t.find(['[', '{']);
    let end = t.rfind([']', '}']);
    let inner = match (start, end) {
        (Some(s), Some(e)) if e > s => &t[s..=e],
        _ => return Err("no JSON value in reply".into()),
    };
    serde_json::from_str(inner)
        .or_else(|_| serde_json::from_str(&pythonish_to_json(inner)))
        .map_err(|e| format!("invalid JSON: {e}"))
}

/// Extracts a list of records from a reply: a bare array, an object wrapping
/// one array field (e.g. `{"sentences": [...]}`), or a single record.
/// Unknown fields are ignored.
pub fn parse_records<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, String> {
    let value = lenient_json(text)?;
    let items = match value {
        Value::Array(items) => items,
        Value::Object(map) => {
            let arrays: Vec<&Value> = map.values().filter(|v| v.is_array()).collect();
            match arrays.as_slice() {
                [only] => only.as_array().cloned().unwrap_or_default(),
                _ => vec![Value::Object(map)],
            }
        }
        other => return Err(format!("expected a list of records, got {other}")),
    };
    items
        .into_iter()
        .map(|v| serde_json::from_value(v).map_err(|e| format!("bad record: {e}")))
        .collect()
}

const REPAIR_PROMPT: &str = "Your previous reply could not be parsed. Reply again with only the JSON array of records, and no other text.";

/// Sends `request` and parses the reply as a list of `T`. A reply that does
/// not parse gets one repair re-prompt before a format error is returned.
pub async fn complete_structured<T: DeserializeOwned>(
    backend: &dyn ChatBackend,
    request: &ChatRequest,
) -> Result<Vec<T>, LlmError> {
    let raw = backend.complete(request).await?;
    let first_error = match parse_records(&raw) {
        Ok(records) => return Ok(records),
        Err(e) => e,
    };
    tracing::warn!(template = %request.template, error = %first_error, "structured reply did not parse; re-prompting");
    let mut repair = request.clone();
    if !raw.trim().is_empty() {
        repair.messages.push(ChatMessage::assistant(raw.clone()));
    }
    repair.messages.push(ChatMessage::user(format!("{REPAIR_PROMPT} ({first_error})")));
    let raw = backend.complete(&repair).await?;
    parse_records(&raw).map_err(|message| LlmError::Format { message, raw })
}
