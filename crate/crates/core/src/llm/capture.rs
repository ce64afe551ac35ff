use std::collections::{HashMap, VecDeque};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{ChatRequest, Completer, CompletionParams, Conversation, LlmError};

/// One line of a capture file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureRecord {
    pub request: ChatRequest,
    pub response: String,
}

fn request_key(req: &ChatRequest) -> String {
    // Struct field order is fixed, so this serialization is canonical.
    serde_json::to_string(req).expect("request serializes")
}

pub fn read_capture(path: &Path) -> Result<Vec<CaptureRecord>, LlmError> {
    let text = fs::read_to_string(path).map_err(|e| LlmError::Capture(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| LlmError::Capture(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

/// Forwards to an inner completer and appends each successful exchange to
/// a JSONL file.
pub struct Recorder<C> {
    inner: C,
    out: Mutex<File>,
}

impl<C: Completer> Recorder<C> {
    /// Truncates `path` and records into it.
    pub fn create(inner: C, path: &Path) -> Result<Self, LlmError> {
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(true)
            .open(path)
            .map_err(|e| LlmError::Capture(format!("{}: {e}", path.display())))?;
        Ok(Recorder {
            inner,
            out: Mutex::new(file),
        })
    }
}

impl<C: Completer> Completer for Recorder<C> {
    fn complete(&self, conv: &Conversation, params: &CompletionParams) -> Result<String, LlmError> {
        let response = self.inner.complete(conv, params)?;
        let record = CaptureRecord {
            request: ChatRequest::new(conv, params),
            response: response.clone(),
        };
        let mut line = serde_json::to_string(&record).map_err(|e| LlmError::Capture(e.to_string()))?;
        line.push('\n');
        let mut out = self.out.lock().unwrap_or_else(|p| p.into_inner());
        out.write_all(line.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| LlmError::Capture(e.to_string()))?;
        Ok(response)
    }
}

/// Answers requests from a capture file without any network access.
///
/// Identical requests recorded more than once are answered in recording
/// order.
pub struct Replayer {
    responses: Mutex<HashMap<String, VecDeque<String>>>,
}

impl Replayer {
    pub fn from_records(records: Vec<CaptureRecord>) -> Self {
        let mut responses: HashMap<String, VecDeque<String>> = HashMap::new();
        for r in records {
            responses.entry(request_key(&r.request)).or_default().push_back(r.response);
        }
        Replayer {
            responses: Mutex::new(responses),
        }
    }

    pub fn open(path: &Path) -> Result<Self, LlmError> {
        Ok(Self::from_records(read_capture(path)?))
    }
}

impl Completer for Replayer {
    fn complete(&self, conv: &Conversation, params: &CompletionParams) -> Result<String, LlmError> {
        let req = ChatRequest::new(conv, params);
        let key = request_key(&req);
        let mut responses = self.responses.lock().unwrap_or_else(|p| p.into_inner());
        match responses.get_mut(&key).and_then(|q| q.pop_front()) {
            Some(r) => Ok(r),
            None => {
                let preview: String = req
                    .messages
                    .last()
                    .map(|m| m.content.chars().take(80).collect())
                    .unwrap_or_default();
                Err(LlmError::ReplayMiss(format!("last message starts {preview:?}")))
            }
        }
    }
}
