//! Offline backends for tests and hermetic runs.

use std::collections::VecDeque;
use std::sync::Mutex;

use async_trait::async_trait;

use super::{ChatBackend, ChatRequest, LlmError, Role};
use crate::english;
use crate::ovp2en::{template_english, StructuredSentence};

/// Deterministic stand-in for a chat model.
///
/// Rendering templates get a fixed English frame built from the structured
/// input; segmentation templates answer their own few-shot inputs verbatim
/// and otherwise use the rule-based splitter.
#[derive(Debug, Clone, Default)]
pub struct MockChat;

impl MockChat {
    pub const MODEL: &'static str = "mock";

    fn segment(request: &ChatRequest, input: &str) -> String {
        let n = request.messages.len();
        let shot = request.messages[..n.saturating_sub(1)]
            .windows(2)
            .find(|w| w[0].role == Role::User && w[1].role == Role::Assistant && w[0].content == input);
        match shot {
            Some(w) => w[1].content.clone(),
            None => serde_json::to_string(&english::split_simple(input)).expect("simple sentences serialize"),
        }
    }
}

#[async_trait]
impl ChatBackend for MockChat {
    fn model_name(&self) -> &str {
        Self::MODEL
    }

    async fn complete(&self, request: &ChatRequest) -> Result<String, LlmError> {
        request.validate()?;
        let input = request.last_user().unwrap_or_default();
        if request.template.starts_with("render") {
            let structured = StructuredSentence::from_prompt(input).map_err(LlmError::InvalidRequest)?;
            template_english(&structured).map_err(LlmError::InvalidRequest)
        } else if request.template.starts_with("segment") {
            Ok(Self::segment(request, input))
        } else {
            Err(LlmError::Config(format!(
                "mock backend has no behaviour for template `{}`",
                request.template
            )))
        }
    }
}

/// Replays a fixed list of replies in order and records every request.
#[derive(Debug, Default)]
pub struct ScriptedChat {
    replies: Mutex<VecDeque<Result<String, LlmError>>>,
    requests: Mutex<Vec<ChatRequest>>,
}

impl ScriptedChat {
    pub fn new<I>(replies: I) -> Self
    where
        I: IntoIterator<Item = Result<String, LlmError>>,
    {
        ScriptedChat {
            replies: Mutex::new(replies.into_iter().collect()),
            requests: Mutex::new(Vec::new()),
        }
    }

    pub fn replying<S: Into<String>>(replies: impl IntoIterator<Item = S>) -> Self {
        Self::new(replies.into_iter().map(|s| Ok(s.into())))
    }

    pub fn requests(&self) -> Vec<ChatRequest> {
        self.requests.lock().expect("lock").clone()
    }
}

#[async_trait]
impl ChatBackend for ScriptedChat {
    fn model_name(&self) -> &str {
        "scripted"
    }

    async fn complete(&self, request: &ChatRequest) -> Result<String, LlmError> {
        self.requests.lock().expect("lock").push(request.clone());
        self.replies
            .lock()
            .expect("lock")
            .pop_front()
            .unwrap_or_else(|| Err(LlmError::Transport("script exhausted".into())))
    }
}
