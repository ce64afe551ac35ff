use std::thread;
use std::time::Duration;

use serde_json::Value;

use super::{ChatRequest, Completer, CompletionParams, Conversation, LlmError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

/// Blocking client for `POST <base>/v1/chat/completions`.
pub struct HttpClient {
    url: String,
    api_key: Option<String>,
    retry: RetryPolicy,
    client: reqwest::blocking::Client,
}

impl HttpClient {
    pub fn new(base_url: &str, api_key: Option<String>, retry: RetryPolicy, timeout: Duration) -> Result<Self, LlmError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        Ok(HttpClient {
            url: completions_url(base_url),
            api_key: api_key.filter(|k| !k.is_empty()),
            retry,
            client,
        })
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    fn attempt(&self, body: &ChatRequest) -> Result<String, LlmError> {
        let mut req = self.client.post(&self.url).json(body);
        if let Some(key) = &self.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| LlmError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp.text().map_err(|e| LlmError::Transport(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(LlmError::Endpoint { status, body: text });
        }
        completion_text(&text)
    }
}

fn completions_url(base: &str) -> String {
    let base = base.trim_end_matches('/');
    if base.ends_with("/v1") {
        format!("{base}/chat/completions")
    } else {
        format!("{base}/v1/chat/completions")
    }
}

fn retryable(err: &LlmError) -> bool {
    match err {
        LlmError::Transport(_) => true,
        LlmError::Endpoint { status, .. } => *status == 429 || *status >= 500,
        _ => false,
    }
}

/// Pulls `choices[0].message.content` out of a response body.
pub(crate) fn completion_text(body: &str) -> Result<String, LlmError> {
    let json: Value = serde_json::from_str(body).map_err(|e| LlmError::InvalidResponse(e.to_string()))?;
    let choice = json
        .get("choices")
        .and_then(|c| c.get(0))
        .ok_or_else(|| LlmError::InvalidResponse("no choices".into()))?;
    match choice.pointer("/message/content") {
        Some(Value::String(s)) if !s.trim().is_empty() => Ok(s.clone()),
        Some(Value::String(_)) | Some(Value::Null) | None => Err(LlmError::EmptyCompletion),
        Some(other) => Err(LlmError::InvalidResponse(format!("content is not a string: {other}"))),
    }
}

impl Completer for HttpClient {
    fn complete(&self, conv: &Conversation, params: &CompletionParams) -> Result<String, LlmError> {
        let body = ChatRequest::new(conv, params);
        let attempts = self.retry.max_attempts.max(1);
        let mut attempt = 0;
        loop {
            attempt += 1;
            match self.attempt(&body) {
                Err(e) if attempt < attempts && retryable(&e) => {
                    thread::sleep(self.retry.base_delay * 2u32.pow(attempt - 1));
                }
                other => return other,
            }
        }
    }
}
