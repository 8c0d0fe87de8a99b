//! Runtime configuration shared by the CLI and the HTTP service: backend
//! endpoints, the history log, and listen/CORS settings. Loaded from TOML,
//! then overridden from `OVP_*` environment variables.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::en2ovp::{En2OvpOptions, Synonyms};
use crate::eval::{EmbeddingBackend, HttpEmbeddings, MockEmbeddings};
use crate::llm::{BackendConfig, ChatBackend, HttpChat, LlmError, MockChat};
use crate::ovp2en::EncodeOptions;
use crate::Lexicon;

/// Environment variable holding the config file path.
pub const CONFIG_ENV: &str = "OVP_CONFIG";
/// Bearer key used by backends that name no key variable of their own.
pub const DEFAULT_KEY_ENV: &str = "OVP_API_KEY";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Backend(#[from] LlmError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendMode {
    /// Offline deterministic backends.
    #[default]
    Mock,
    /// The HTTP endpoints from `[chat]` / `[embeddings]`.
    Live,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub backend: BackendMode,
    pub listen: String,
    pub history_path: PathBuf,
    /// Origins allowed to call the API from a browser; `*` allows any.
    pub cors_origins: Vec<String>,
    /// Directory of static UI assets served at `/`.
    pub static_dir: Option<PathBuf>,
    /// Replacement lexicon TOML.
    pub lexicon: Option<PathBuf>,
    pub synonyms: Option<PathBuf>,
    /// `segment` or `segment-topic`.
    pub segment_template: Option<String>,
    /// Render `-ti` as past continuous instead of present continuous.
    pub ti_as_past_continuous: bool,
    /// In mock mode, whether scoring is available.
    pub mock_embeddings: bool,
    pub chat: Option<BackendConfig>,
    pub embeddings: Option<BackendConfig>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            backend: BackendMode::Mock,
            listen: "127.0.0.1:8080".into(),
            history_path: PathBuf::from("ovp-history.jsonl"),
            cors_origins: Vec::new(),
            static_dir: None,
            lexicon: None,
            synonyms: None,
            segment_template: None,
            ti_as_past_continuous: false,
            mock_embeddings: true,
            chat: None,
            embeddings: None,
        }
    }
}

fn env_backend(slot: &mut Option<BackendConfig>, url: Option<String>, model: Option<String>) {
    match (slot.as_mut(), url) {
        (Some(c), url) => {
            if let Some(u) = url {
                c.base_url = u;
            }
            if let Some(m) = model {
                c.model = m;
            }
        }
        (None, Some(u)) => {
            *slot = Some(BackendConfig::new(u, model.unwrap_or_default()));
        }
        (None, None) => {}
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Config, ConfigError> {
        let file_err = |message: String| ConfigError::File {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
        toml::from_str(&text).map_err(|e| file_err(e.to_string()))
    }

    /// `path`, else the file named by `OVP_CONFIG`, else defaults; then
    /// environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Config, ConfigError> {
        let from_env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let mut config = match path.or(from_env.as_deref()) {
            Some(p) => Config::from_path(p)?,
            None => Config::default(),
        };
        config.apply_env(|k| std::env::var(k).ok().filter(|v| !v.is_empty()))?;
        Ok(config)
    }

    /// Overrides from `OVP_BACKEND`, `OVP_LISTEN`, `OVP_HISTORY`,
    /// `OVP_CHAT_URL`, `OVP_CHAT_MODEL`, `OVP_EMBED_URL`, `OVP_EMBED_MODEL`
    /// and `OVP_API_KEY_ENV` / `OVP_API_KEY`.
    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(b) = var("OVP_BACKEND") {
            self.backend = match b.as_str() {
                "mock" => BackendMode::Mock,
                "live" => BackendMode::Live,
                other => return Err(ConfigError::Invalid(format!("OVP_BACKEND: unknown backend `{other}`"))),
            };
        }
        if let Some(v) = var("OVP_LISTEN") {
            self.listen = v;
        }
        if let Some(v) = var("OVP_HISTORY") {
            self.history_path = v.into();
        }
        env_backend(&mut self.chat, var("OVP_CHAT_URL"), var("OVP_CHAT_MODEL"));
        env_backend(&mut self.embeddings, var("OVP_EMBED_URL"), var("OVP_EMBED_MODEL"));
        // An explicit key variable applies everywhere; a set `OVP_API_KEY`
        // only fills in backends that name none.
        let explicit = var("OVP_API_KEY_ENV");
        let fallback = var(DEFAULT_KEY_ENV).map(|_| DEFAULT_KEY_ENV.to_string());
        for c in self.chat.iter_mut().chain(self.embeddings.iter_mut()) {
            if explicit.is_some() {
                c.api_key_env = explicit.clone();
            } else if c.api_key_env.is_none() {
                c.api_key_env = fallback.clone();
            }
        }
        Ok(())
    }

    pub fn lexicon(&self) -> Result<&'static Lexicon, ConfigError> {
        match &self.lexicon {
            None => Ok(Lexicon::embedded()),
            // One lexicon per process; leaking keeps the `'static` borrow
            // shape of the embedded one.
            Some(p) => Lexicon::from_path(p)
                .map(|l| &*Box::leak(Box::new(l)))
                .map_err(|e| ConfigError::File {
                    path: p.clone(),
                    message: e.to_string(),
                }),
        }
    }

    pub fn en2ovp_options(&self) -> Result<En2OvpOptions, ConfigError> {
        let synonyms = match &self.synonyms {
            None => Synonyms::default(),
            Some(p) => Synonyms::from_path(p).map_err(|e| ConfigError::File {
                path: p.clone(),
                message: e.to_string(),
            })?,
        };
        Ok(En2OvpOptions {
            template: self.segment_template.clone(),
            synonyms,
            encode: self.encode_options(),
        })
    }

    pub fn encode_options(&self) -> EncodeOptions {
        EncodeOptions {
            ti_as_past_continuous: self.ti_as_past_continuous,
        }
    }

    pub fn chat_backend(&self, mode: BackendMode) -> Result<Arc<dyn ChatBackend>, ConfigError> {
        Ok(match mode {
            BackendMode::Mock => Arc::new(MockChat),
            BackendMode::Live => {
                let c = self
                    .chat
                    .clone()
                    .ok_or_else(|| ConfigError::Invalid("live backend needs a [chat] section or OVP_CHAT_URL".into()))?;
                Arc::new(HttpChat::new(c)?)
            }
        })
    }

    /// `None` when no embeddings backend is configured for `mode`.
    pub fn embedding_backend(&self, mode: BackendMode) -> Result<Option<Arc<dyn EmbeddingBackend>>, ConfigError> {
        Ok(match mode {
            BackendMode::Mock if self.mock_embeddings => Some(Arc::new(MockEmbeddings::default())),
            BackendMode::Mock => None,
            BackendMode::Live => match &self.embeddings {
                Some(c) => Some(Arc::new(HttpEmbeddings::new(c.clone())?)),
                None => None,
            },
        })
    }
}
