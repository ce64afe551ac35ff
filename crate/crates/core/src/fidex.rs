//! Diff explanation through a seeded role-play conversation.
//!
//! The first five messages are fixed: a role-setting system prompt, a
//! question about reading diffs with a canned answer, and a request to
//! describe the diff answered with the diff narrative. Only the sixth
//! message, which asks for the old-vs-new explanation, goes to the model.

use serde::{Deserialize, Serialize};

use crate::diff::UnifiedDiff;
use crate::llm::{CallSite, Conversation, LlmError, Model};
use crate::narrator::render_narrative;
use crate::prompts::FIDEX;
use crate::template::fill;

pub const NO_CHANGES: &str = "No changes.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FidexConversation(Conversation);

impl FidexConversation {
    pub fn conversation(&self) -> &Conversation {
        &self.0
    }

    pub fn into_conversation(self) -> Conversation {
        self.0
    }

    /// The narrative seeded as the second assistant reply.
    pub fn narrative(&self) -> &str {
        &self.0.messages[4].content
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffExplanation {
    pub text: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidexMode {
    /// One completion covering every file.
    #[default]
    Single,
    /// One completion per changed file, concatenated.
    PerFile,
}

fn conversation_for(raw_diff: &str, narrative: &str) -> FidexConversation {
    let conv = Conversation::new()
        .system(FIDEX.system.trim())
        .user(FIDEX.ask_instructions.trim())
        .assistant(FIDEX.instructions.trim())
        .user(fill(FIDEX.describe.trim(), &[("diff", raw_diff)]))
        .assistant(narrative)
        .user(fill(FIDEX.output.trim(), &[("diff", raw_diff)]));
    FidexConversation(conv)
}

pub fn build_fidex_conversation(diff: &UnifiedDiff) -> FidexConversation {
    let raw = if diff.raw_text.is_empty() { diff.render() } else { diff.raw_text.clone() };
    conversation_for(raw.trim_end_matches('\n'), &render_narrative(diff).text)
}

pub fn explain_diff(model: &Model, diff: &UnifiedDiff, mode: FidexMode) -> Result<DiffExplanation, LlmError> {
    if diff.is_empty() {
        return Ok(DiffExplanation {
            text: NO_CHANGES.to_string(),
        });
    }
    match mode {
        FidexMode::Single => {
            let conv = build_fidex_conversation(diff);
            let text = model.complete(conv.conversation(), CallSite::Explanation)?;
            Ok(DiffExplanation { text })
        }
        FidexMode::PerFile => {
            let mut sections = Vec::new();
            for file in &diff.files {
                let single = UnifiedDiff {
                    files: vec![file.clone()],
                    raw_text: file.render(),
                };
                let conv = build_fidex_conversation(&single);
                let text = model.complete(conv.conversation(), CallSite::Explanation)?;
                sections.push(format!("{}:\n{}", file.path(), text.trim()));
            }
            Ok(DiffExplanation {
                text: sections.join("\n\n"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::parse_unified_diff;
    use crate::llm::{Completer, CompletionParams, Role};
    use std::sync::atomic::{AtomicUsize, Ordering};

    const DIFF: &str = "diff --git a/F.java b/F.java\n--- a/F.java\n+++ b/F.java\n@@ -1,3 +1,3 @@\n a\n-b\n+c\n d\n";

    #[test]
    fn six_messages_in_fixed_roles() {
        let diff = parse_unified_diff(DIFF).unwrap();
        let conv = build_fidex_conversation(&diff);
        use Role::*;
        assert_eq!(conv.conversation().roles(), vec![System, User, Assistant, User, Assistant, User]);
        assert_eq!(conv.narrative(), render_narrative(&diff).text);
        let last = &conv.conversation().messages[5].content;
        assert!(last.contains(DIFF.trim_end()));
        for phrase in ["fine-grained statement types", "order of changes", "code style or formatting changes"] {
            assert!(last.contains(phrase), "{phrase}");
        }
    }

    struct Counting(AtomicUsize);
    impl Completer for Counting {
        fn complete(&self, _: &Conversation, _: &CompletionParams) -> Result<String, LlmError> {
            self.0.fetch_add(1, Ordering::SeqCst);
            Ok("explained".into())
        }
    }

    #[test]
    fn one_call_and_empty_short_circuit() {
        let c = Counting(AtomicUsize::new(0));
        let model = Model::new(&c, "m");
        let diff = parse_unified_diff(DIFF).unwrap();
        assert_eq!(explain_diff(&model, &diff, FidexMode::Single).unwrap().text, "explained");
        assert_eq!(c.0.load(Ordering::SeqCst), 1);
        let empty = parse_unified_diff("").unwrap();
        assert_eq!(explain_diff(&model, &empty, FidexMode::Single).unwrap().text, NO_CHANGES);
        assert_eq!(c.0.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn per_file_mode_calls_once_per_file() {
        let two = format!("{DIFF}{}", DIFF.replace("F.java", "G.java"));
        let c = Counting(AtomicUsize::new(0));
        let model = Model::new(&c, "m");
        let out = explain_diff(&model, &parse_unified_diff(&two).unwrap(), FidexMode::PerFile).unwrap();
        assert_eq!(c.0.load(Ordering::SeqCst), 2);
        assert_eq!(out.text, "F.java:\nexplained\n\nG.java:\nexplained");
    }
}
