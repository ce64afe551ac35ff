//! Chat-completions client for OpenAI-compatible endpoints.
//!
//! Everything that talks to a model goes through [`Completer`]. The HTTP
//! client, the capture recorder and the replayer all implement it, so a
//! pipeline run can be recorded once and replayed offline.

mod capture;
mod http;
pub mod mock;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use capture::{read_capture, CaptureRecord, Recorder, Replayer};
pub use http::{HttpClient, RetryPolicy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LlmError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("endpoint returned HTTP {status}: {body}")]
    Endpoint { status: u16, body: String },
    #[error("completion was empty")]
    EmptyCompletion,
    #[error("invalid response: {0}")]
    InvalidResponse(String),
    #[error("invalid conversation: {0}")]
    InvalidConversation(String),
    #[error("capture file: {0}")]
    Capture(String),
    #[error("no recorded response for request ({0})")]
    ReplayMiss(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Conversation {
    pub messages: Vec<ChatMessage>,
}

impl Conversation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn system(mut self, content: impl Into<String>) -> Self {
        self.push(Role::System, content);
        self
    }

    pub fn user(mut self, content: impl Into<String>) -> Self {
        self.push(Role::User, content);
        self
    }

    pub fn assistant(mut self, content: impl Into<String>) -> Self {
        self.push(Role::Assistant, content);
        self
    }

    pub fn push(&mut self, role: Role, content: impl Into<String>) {
        self.messages.push(ChatMessage {
            role,
            content: content.into(),
        });
    }

    pub fn roles(&self) -> Vec<Role> {
        self.messages.iter().map(|m| m.role).collect()
    }

    pub fn last(&self) -> Option<&ChatMessage> {
        self.messages.last()
    }

    /// Checks the shape required before a completion request: non-empty
    /// contents, a system message only in first position, and a final
    /// user message.
    pub fn validate(&self) -> Result<(), LlmError> {
        for (i, msg) in self.messages.iter().enumerate() {
            if msg.content.trim().is_empty() {
                return Err(LlmError::InvalidConversation(format!("message {i} is empty")));
            }
            if msg.role == Role::System && i != 0 {
                return Err(LlmError::InvalidConversation(format!(
                    "system message at position {i}"
                )));
            }
        }
        match self.last() {
            Some(m) if m.role == Role::User => Ok(()),
            Some(m) => Err(LlmError::InvalidConversation(format!("last message has role {}", m.role))),
            None => Err(LlmError::InvalidConversation("no messages".into())),
        }
    }
}

/// Sampling parameters. Temperature is always zero and no repetition or
/// frequency penalty is ever sent.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionParams {
    pub model: String,
    pub max_tokens: u32,
    temperature: f64,
}

impl CompletionParams {
    pub fn new(model: impl Into<String>, max_tokens: u32) -> Self {
        CompletionParams {
            model: model.into(),
            max_tokens: max_tokens.max(1),
            temperature: 0.0,
        }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}

/// The request body sent to `POST /v1/chat/completions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl ChatRequest {
    pub fn new(conv: &Conversation, params: &CompletionParams) -> Self {
        ChatRequest {
            model: params.model.clone(),
            messages: conv.messages.clone(),
            temperature: params.temperature(),
            max_tokens: params.max_tokens,
        }
    }
}

pub trait Completer: Send + Sync {
    fn complete(&self, conv: &Conversation, params: &CompletionParams) -> Result<String, LlmError>;
}

impl<C: Completer + ?Sized> Completer for Box<C> {
    fn complete(&self, conv: &Conversation, params: &CompletionParams) -> Result<String, LlmError> {
        (**self).complete(conv, params)
    }
}

impl<C: Completer + ?Sized> Completer for std::sync::Arc<C> {
    fn complete(&self, conv: &Conversation, params: &CompletionParams) -> Result<String, LlmError> {
        (**self).complete(conv, params)
    }
}

/// Where in the pipeline a call is made; selects the token limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallSite {
    Summary,
    Classification,
    Explanation,
    Generation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaxTokens {
    pub summary: u32,
    pub classification: u32,
    pub explanation: u32,
    pub generation: u32,
}

impl Default for MaxTokens {
    fn default() -> Self {
        MaxTokens {
            summary: 512,
            classification: 32,
            explanation: 1024,
            generation: 1024,
        }
    }
}

impl MaxTokens {
    pub fn for_site(&self, site: CallSite) -> u32 {
        match site {
            CallSite::Summary => self.summary,
            CallSite::Classification => self.classification,
            CallSite::Explanation => self.explanation,
            CallSite::Generation => self.generation,
        }
    }
}

/// A completer bound to a model name and per-call-site token limits.
#[derive(Clone, Copy)]
pub struct Model<'a> {
    pub completer: &'a dyn Completer,
    pub name: &'a str,
    pub max_tokens: MaxTokens,
}

impl<'a> Model<'a> {
    pub fn new(completer: &'a dyn Completer, name: &'a str) -> Self {
        Model {
            completer,
            name,
            max_tokens: MaxTokens::default(),
        }
    }

    pub fn with_max_tokens(mut self, max_tokens: MaxTokens) -> Self {
        self.max_tokens = max_tokens;
        self
    }

    pub fn complete(&self, conv: &Conversation, site: CallSite) -> Result<String, LlmError> {
        conv.validate()?;
        let params = CompletionParams::new(self.name, self.max_tokens.for_site(site));
        let text = self.completer.complete(conv, &params)?;
        if text.trim().is_empty() {
            return Err(LlmError::EmptyCompletion);
        }
        Ok(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversation_validation() {
        assert!(Conversation::new().system("s").user("u").validate().is_ok());
        assert!(Conversation::new().user("u").assistant("a").validate().is_err());
        assert!(Conversation::new().user("u").system("s").user("u").validate().is_err());
        assert!(Conversation::new().user("  ").validate().is_err());
        assert!(Conversation::new().validate().is_err());
    }

    #[test]
    fn params_are_deterministic() {
        let p = CompletionParams::new("m", 0);
        assert_eq!(p.temperature(), 0.0);
        assert_eq!(p.max_tokens, 1);
        let req = ChatRequest::new(&Conversation::new().user("hi"), &p);
        let json = serde_json::to_value(&req).unwrap();
        assert_eq!(json["temperature"].as_f64(), Some(0.0));
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["max_tokens", "messages", "model", "temperature"]);
    }

    struct Blank;
    impl Completer for Blank {
        fn complete(&self, _: &Conversation, _: &CompletionParams) -> Result<String, LlmError> {
            Ok("  \n".into())
        }
    }

    #[test]
    fn blank_completion_is_empty() {
        let model = Model::new(&Blank, "m");
        let err = model.complete(&Conversation::new().user("x"), CallSite::Summary).unwrap_err();
        assert_eq!(err, LlmError::EmptyCompletion);
    }
}
