use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{ChatMessage, ChatRequest, LlmError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FewShot {
    pub user: String,
    pub assistant: String,
}

/// A system prompt plus worked examples, sent ahead of the real input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PromptTemplate {
    pub name: String,
    pub system: String,
    pub few_shots: Vec<FewShot>,
}

const BUILTIN_SOURCES: [&str; 3] = [
    include_str!("../../templates/render.toml"),
    include_str!("../../templates/segment.toml"),
    include_str!("../../templates/segment_topic.toml"),
];

fn builtins() -> &'static [PromptTemplate] {
    static TEMPLATES: OnceLock<Vec<PromptTemplate>> = OnceLock::new();
    TEMPLATES.get_or_init(|| {
        BUILTIN_SOURCES
            .iter()
            .map(|src| PromptTemplate::from_toml_str(src).expect("shipped template is valid"))
            .collect()
    })
}

impl PromptTemplate {
    pub const RENDER: &'static str = "render";
    pub const SEGMENT: &'static str = "segment";
    pub const SEGMENT_TOPIC: &'static str = "segment-topic";

    /// A shipped template: `render`, `segment` or `segment-topic`.
    pub fn builtin(name: &str) -> Option<&'static PromptTemplate> {
        builtins().iter().find(|t| t.name == name)
    }

    pub fn all_builtin() -> &'static [PromptTemplate] {
        builtins()
    }

    pub fn from_toml_str(src: &str) -> Result<PromptTemplate, LlmError> {
        let t: PromptTemplate = toml::from_str(src).map_err(|e| LlmError::Config(format!("template: {e}")))?;
        if t.name.trim().is_empty() || t.system.trim().is_empty() {
            return Err(LlmError::Config("template name and system prompt must be non-empty".into()));
        }
        if t.few_shots.is_empty() {
            return Err(LlmError::Config(format!("template `{}` has no few-shot examples", t.name)));
        }
        Ok(t)
    }

    pub fn from_path(path: &Path) -> Result<PromptTemplate, LlmError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| LlmError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&src)
    }

    /// System prompt, alternating few-shot turns, then `input` as the final
    /// user message.
    pub fn messages(&self, input: &str) -> Vec<ChatMessage> {
        let mut messages = vec![ChatMessage::system(&self.system)];
        for shot in &self.few_shots {
            messages.push(ChatMessage::user(&shot.user));
            messages.push(ChatMessage::assistant(&shot.assistant));
        }
        messages.push(ChatMessage::user(input));
        messages
    }

    pub fn request(&self, input: &str) -> ChatRequest {
        ChatRequest::new(&self.name, self.messages(input))
    }
}
