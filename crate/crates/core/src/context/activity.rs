use super::{ActivityType, ContextError, HeaderTag};
use crate::llm::{CallSite, Conversation, Model};
use crate::prompts::CLASSIFIER;
use crate::template::fill;

/// Maps a classifier reply to a header tag, ignoring case, surrounding
/// whitespace and punctuation.
pub fn normalize_label(reply: &str) -> Option<HeaderTag> {
    let word = reply.trim().trim_matches(|c: char| !c.is_alphanumeric());
    word.parse().ok()
}

/// Asks the model for the commit's header tag given a description of the
/// changes and the list of changed files. An unusable answer is retried
/// once with the allowed labels restated.
pub fn classify_activity(model: &Model, changes: &str, files: &[String]) -> Result<ActivityType, ContextError> {
    let file_list = files.iter().map(|f| format!("- {f}")).collect::<Vec<_>>().join("\n");
    let conv = Conversation::new()
        .system(CLASSIFIER.system.trim())
        .user(fill(CLASSIFIER.user.trim(), &[("files", &file_list), ("changes", changes.trim())]));
    let first = model.complete(&conv, CallSite::Classification)?;
    if let Some(tag) = normalize_label(&first) {
        return Ok(tag.into());
    }
    let retry = conv.assistant(first.trim()).user(CLASSIFIER.retry.trim());
    let second = model.complete(&retry, CallSite::Classification)?;
    normalize_label(&second)
        .map(ActivityType::from)
        .ok_or_else(|| ContextError::UnrecognizedLabel(second.trim().to_string()))
}
