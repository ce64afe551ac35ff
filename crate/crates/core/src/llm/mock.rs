//! A minimal in-process HTTP server that speaks just enough of the
//! chat-completions protocol for tests and offline demos.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};

use once_cell::sync::Lazy;
use regex::Regex;
use serde_json::json;

use super::ChatRequest;
use crate::prompts::{identify, PromptKind};

#[derive(Debug, Clone)]
pub struct RecordedRequest {
    pub method: String,
    pub path: String,
    pub headers: Vec<(String, String)>,
    pub body: String,
}

impl RecordedRequest {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }

    pub fn json(&self) -> Option<serde_json::Value> {
        serde_json::from_str(&self.body).ok()
    }

    pub fn chat_request(&self) -> Option<ChatRequest> {
        serde_json::from_str(&self.body).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MockResponse {
    pub status: u16,
    pub body: String,
}

impl MockResponse {
    /// A 200 response carrying one assistant message.
    pub fn chat(content: &str) -> Self {
        let body = json!({
            "id": "mock",
            "object": "chat.completion",
            "choices": [{
                "index": 0,
                "message": {"role": "assistant", "content": content},
                "finish_reason": "stop"
            }]
        });
        MockResponse {
            status: 200,
            body: body.to_string(),
        }
    }

    pub fn status(status: u16, body: &str) -> Self {
        MockResponse {
            status,
            body: body.to_string(),
        }
    }
}

type Handler = dyn Fn(&RecordedRequest, usize) -> MockResponse + Send + Sync;

/// Serves every request with `handler(request, index)`, where `index`
/// counts requests from zero. Shuts down when dropped.
pub struct MockServer {
    addr: SocketAddr,
    requests: Arc<Mutex<Vec<RecordedRequest>>>,
    stop: Arc<AtomicBool>,
    accept: Option<JoinHandle<()>>,
}

impl MockServer {
    pub fn start(handler: impl Fn(&RecordedRequest, usize) -> MockResponse + Send + Sync + 'static) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let requests = Arc::new(Mutex::new(Vec::new()));
        let stop = Arc::new(AtomicBool::new(false));
        let handler: Arc<Handler> = Arc::new(handler);
        let counter = Arc::new(AtomicUsize::new(0));

        let accept = {
            let requests = Arc::clone(&requests);
            let stop = Arc::clone(&stop);
            thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let requests = Arc::clone(&requests);
                    let handler = Arc::clone(&handler);
                    let counter = Arc::clone(&counter);
                    thread::spawn(move || {
                        let _ = serve(stream, &requests, &*handler, &counter);
                    });
                }
            })
        };
        Ok(MockServer {
            addr,
            requests,
            stop,
            accept: Some(accept),
        })
    }

    /// Answers chat requests with `replies` in order, then with HTTP 500.
    pub fn with_replies<S: Into<String>>(replies: impl IntoIterator<Item = S>) -> std::io::Result<Self> {
        let replies: Vec<String> = replies.into_iter().map(Into::into).collect();
        Self::start(move |_, i| match replies.get(i) {
            Some(r) => MockResponse::chat(r),
            None => MockResponse::status(500, "no scripted reply left"),
        })
    }

    /// Answers chat requests by passing the decoded request to `reply`.
    pub fn with_responder(reply: impl Fn(&ChatRequest) -> String + Send + Sync + 'static) -> std::io::Result<Self> {
        Self::start(move |req, _| match req.chat_request() {
            Some(chat) => MockResponse::chat(&reply(&chat)),
            None => MockResponse::status(400, "request body is not a chat request"),
        })
    }

    /// Answers every pipeline prompt with [`canned_reply`].
    pub fn canned() -> std::io::Result<Self> {
        Self::with_responder(canned_reply)
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn requests(&self) -> Vec<RecordedRequest> {
        self.requests.lock().unwrap_or_else(|p| p.into_inner()).clone()
    }

    pub fn request_count(&self) -> usize {
        self.requests.lock().unwrap_or_else(|p| p.into_inner()).len()
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop so it sees the flag.
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.accept.take() {
            let _ = h.join();
        }
    }
}

static METHOD_NAME: Lazy<Regex> = Lazy::new(|| Regex::new(r"(\w+)\s*\([^()]*\)\s*(?:throws [\w., ]+)?\s*\{").unwrap());
static CLASS_NAME: Lazy<Regex> = Lazy::new(|| Regex::new(r"\b(?:class|interface|enum|record)\s+(\w+)").unwrap());
static FILE_LINE: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?m)^File: (\S+)").unwrap());
static TYPE_LINE: Lazy<Regex> = Lazy::new(|| Regex::new(r"The type must be (\w+)\.").unwrap());
static HEADING: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?m)^### (\S+) in (\S+) \((\w+)\)").unwrap());

/// Deterministic stand-in answers for every pipeline prompt, chosen by
/// the request's system message. Good enough to exercise the whole
/// pipeline offline; the content is not meant to be insightful.
pub fn canned_reply(req: &ChatRequest) -> String {
    let system = req.messages.first().map(|m| m.content.as_str()).unwrap_or_default();
    let last = req.messages.last().map(|m| m.content.as_str()).unwrap_or_default();
    let first_user = req
        .messages
        .iter()
        .find(|m| m.role == super::Role::User)
        .map(|m| m.content.as_str())
        .unwrap_or_default();
    match identify(system) {
        Some(PromptKind::Fidex) => {
            let narrative = req.messages.get(4).map(|m| m.content.as_str()).unwrap_or_default();
            let files: Vec<String> = FILE_LINE.captures_iter(narrative).map(|c| c[1].to_string()).collect();
            files
                .iter()
                .map(|f| {
                    let n = narrative.lines().filter(|l| l.contains(&format!("In {f},"))).count();
                    format!("{f}:\nThe new version differs from the old version in {n} place(s). Each change item of the narrative applies to code statements; no change is stylistic only.")
                })
                .collect::<Vec<_>>()
                .join("\n\n")
        }
        Some(PromptKind::Classifier) => {
            let changes = first_user.split_once("\nChanges:\n").map(|(_, c)| c).unwrap_or_default();
            let changes = changes.rsplit_once("\n\nAnswer with").map(|(c, _)| c).unwrap_or(changes);
            let text = changes.to_lowercase();
            if ["null", "bug", "fix", "exception", "throw"].iter().any(|k| text.contains(k)) {
                "fix".into()
            } else if text.contains("lines removed") || text.contains("lines replaced") {
                "refactor".into()
            } else {
                "feat".into()
            }
        }
        Some(PromptKind::Mms) => {
            let name = METHOD_NAME.captures(last).map(|c| c[1].to_string()).unwrap_or_else(|| "this method".into());
            let lines = last.lines().count().saturating_sub(2);
            format!(
                "What: Implements the {name} operation.\nWhy: Provides {name} as part of the class interface.\nHow-to-use: Call {name} with its declared arguments.\nHow-it-is-done: Uses {lines} line(s) of code.\nProperty: not applicable"
            )
        }
        Some(PromptKind::Cmms) => {
            let signature = last.contains("Signature changed");
            let count = last.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count();
            let usage = if signature {
                "The signature changes, so callers must pass the new arguments."
            } else {
                "not applicable"
            };
            format!(
                "What: not applicable\nWhy: not applicable\nHow-to-use: {usage}\nHow-it-is-done: The body is affected by {count} change(s).\nProperty: not applicable"
            )
        }
        Some(PromptKind::ClassSummary) => {
            let name = CLASS_NAME.captures(last).map(|c| c[1].to_string()).unwrap_or_else(|| "This class".into());
            format!("{name} groups related state and the operations on it.")
        }
        Some(PromptKind::Generation) => {
            let tag = TYPE_LINE.captures(first_user).map(|c| c[1].to_string()).unwrap_or_else(|| "refactor".into());
            let units: Vec<String> = HEADING
                .captures_iter(first_user)
                .map(|c| format!("- {} {} in {}", capitalize(&c[3]), &c[1], &c[2]))
                .collect();
            let subject_of = HEADING
                .captures(first_user)
                .map(|c| c[1].split(['#', '.']).next().unwrap_or_default().to_string())
                .or_else(|| FILE_IMPORTANCE_LINE.captures(first_user).map(|c| c[1].to_string()))
                .unwrap_or_else(|| "the code".into());
            let verb = match tag.as_str() {
                "fix" => "correct",
                "feat" => "extend",
                "style" => "reformat",
                _ => "restructure",
            };
            let body = if units.is_empty() { format!("Update {subject_of}.") } else { units.join("\n") };
            format!("{tag}: {verb} {subject_of}\n\n{body}")
        }
        None => "ok".into(),
    }
}

static FILE_IMPORTANCE_LINE: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?m)^- (\S+): [01]\.\d\d$").unwrap());

fn capitalize(word: &str) -> String {
    let mut c = word.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn serve(
    stream: TcpStream,
    requests: &Mutex<Vec<RecordedRequest>>,
    handler: &Handler,
    counter: &AtomicUsize,
) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut line = String::new();
    if reader.read_line(&mut line)? == 0 {
        return Ok(());
    }
    let mut parts = line.split_whitespace();
    let method = parts.next().unwrap_or_default().to_string();
    let path = parts.next().unwrap_or_default().to_string();

    let mut headers = Vec::new();
    let mut content_length = 0usize;
    loop {
        let mut h = String::new();
        if reader.read_line(&mut h)? == 0 {
            break;
        }
        let h = h.trim_end();
        if h.is_empty() {
            break;
        }
        if let Some((k, v)) = h.split_once(':') {
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.eq_ignore_ascii_case("content-length") {
                content_length = v.parse().unwrap_or(0);
            }
            headers.push((k, v));
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;

    let request = RecordedRequest {
        method,
        path,
        headers,
        body: String::from_utf8_lossy(&body).into_owned(),
    };
    // Numbering and logging happen under one lock so indices follow
    // arrival order.
    let index = {
        let mut log = requests.lock().unwrap_or_else(|p| p.into_inner());
        log.push(request.clone());
        counter.fetch_add(1, Ordering::SeqCst)
    };
    let resp = handler(&request, index);
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 {} {}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
        resp.status,
        reason(resp.status),
        resp.body.len(),
        resp.body
    )?;
    stream.flush()
}

fn reason(status: u16) -> &'static str {
    match status {
        200 => "OK",
        400 => "Bad Request",
        401 => "Unauthorized",
        404 => "Not Found",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        502 => "Bad Gateway",
        503 => "Service Unavailable",
        _ => "Status",
    }
}

#[cfg(test)]
mod tests {
    use std::time::Duration;

    use super::super::{Completer, CompletionParams, Conversation, HttpClient, LlmError, RetryPolicy};
    use super::*;

    fn client(url: &str, attempts: u32) -> HttpClient {
        let retry = RetryPolicy {
            max_attempts: attempts,
            base_delay: Duration::from_millis(1),
        };
        HttpClient::new(url, Some("secret".into()), retry, Duration::from_secs(10)).unwrap()
    }

    #[test]
    fn round_trip_through_http() {
        let server = MockServer::with_replies(["hello"]).unwrap();
        let conv = Conversation::new().system("s").user("u");
        let out = client(&server.url(), 3).complete(&conv, &CompletionParams::new("m", 5)).unwrap();
        assert_eq!(out, "hello");
        let reqs = server.requests();
        assert_eq!(reqs.len(), 1);
        assert_eq!(reqs[0].method, "POST");
        assert_eq!(reqs[0].path, "/v1/chat/completions");
        assert_eq!(reqs[0].header("authorization"), Some("Bearer secret"));
        let chat = reqs[0].chat_request().unwrap();
        assert_eq!(chat.messages, conv.messages);
        assert_eq!(chat.max_tokens, 5);
    }

    #[test]
    fn retries_server_errors_then_gives_up() {
        let server = MockServer::start(|_, _| MockResponse::status(503, "busy")).unwrap();
        let err = client(&server.url(), 3)
            .complete(&Conversation::new().user("u"), &CompletionParams::new("m", 5))
            .unwrap_err();
        assert_eq!(err, LlmError::Endpoint { status: 503, body: "busy".into() });
        assert_eq!(server.request_count(), 3);
    }

    #[test]
    fn client_errors_are_not_retried() {
        let server = MockServer::start(|_, _| MockResponse::status(400, "bad")).unwrap();
        let err = client(&server.url(), 3)
            .complete(&Conversation::new().user("u"), &CompletionParams::new("m", 5))
            .unwrap_err();
        assert!(matches!(err, LlmError::Endpoint { status: 400, .. }));
        assert_eq!(server.request_count(), 1);
    }

    #[test]
    fn recovers_after_transient_failure() {
        let server = MockServer::start(|_, i| {
            if i == 0 {
                MockResponse::status(429, "slow down")
            } else {
                MockResponse::chat("ok")
            }
        })
        .unwrap();
        let out = client(&server.url(), 3)
            .complete(&Conversation::new().user("u"), &CompletionParams::new("m", 5))
            .unwrap();
        assert_eq!(out, "ok");
        assert_eq!(server.request_count(), 2);
    }

    #[test]
    fn empty_content_is_an_error() {
        let server = MockServer::with_replies([""]).unwrap();
        let err = client(&server.url(), 3)
            .complete(&Conversation::new().user("u"), &CompletionParams::new("m", 5))
            .unwrap_err();
        assert_eq!(err, LlmError::EmptyCompletion);
    }
}
