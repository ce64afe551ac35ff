//! Commit message generation from an assembled context, and the structure
//! of the messages themselves.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{CommitContext, HeaderTag, MethodSummary, MultiIntentSummary};
use crate::java::UnitStatus;
use crate::llm::{CallSite, Conversation, LlmError, Model, Role};
use crate::prompts::GENERATION;
use crate::template::fill;

pub const MAX_SUBJECT_CHARS: usize = 72;
pub const DEFAULT_PROMPT_BUDGET: usize = 24_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("malformed commit message: {0}")]
    MalformedMessage(String),
    #[error("prompt needs {size} characters after truncation, budget is {budget}")]
    ContextTooLarge { size: usize, budget: usize },
    #[error(transparent)]
    Llm(#[from] LlmError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitMessage {
    pub activity_tag: HeaderTag,
    pub subject: String,
    pub body: String,
}

impl CommitMessage {
    pub fn header(&self) -> String {
        format!("{}: {}", self.activity_tag, self.subject)
    }

    pub fn render(&self) -> String {
        if self.body.is_empty() {
            self.header()
        } else {
            format!("{}\n\n{}", self.header(), self.body)
        }
    }
}

impl fmt::Display for CommitMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn malformed(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::MalformedMessage(msg.into())
}

fn body_of<'a>(rest: impl Iterator<Item = &'a str>) -> String {
    let lines: Vec<&str> = rest.map(str::trim_end).skip_while(|l| l.is_empty()).collect();
    lines.join("\n").trim_end().to_string()
}

/// Parses `<tag>: <subject>`, an optional blank line and a body.
pub fn parse_commit_message(text: &str) -> Result<CommitMessage, GeneratorError> {
    let text = text.trim();
    let mut lines = text.lines();
    let header = lines.next().filter(|h| !h.is_empty()).ok_or_else(|| malformed("message is empty"))?;
    let (tag, subject) = header
        .split_once(':')
        .ok_or_else(|| malformed("header has no `<type>:` prefix"))?;
    let activity_tag: HeaderTag = tag
        .trim()
        .parse()
        .map_err(|t| malformed(format!("type {t:?} is not one of fix, feat, refactor, style")))?;
    let subject = subject.trim();
    if subject.is_empty() {
        return Err(malformed("subject is empty"));
    }
    let len = subject.chars().count();
    if len > MAX_SUBJECT_CHARS {
        return Err(malformed(format!("subject has {len} characters, limit is {MAX_SUBJECT_CHARS}")));
    }
    let mut rest = lines.peekable();
    if rest.peek().is_some_and(|l| !l.trim().is_empty()) {
        return Err(malformed("no blank line after the header"));
    }
    Ok(CommitMessage {
        activity_tag,
        subject: subject.to_string(),
        body: body_of(rest),
    })
}

/// Canonical text of a message: lowercase tag, single space after the
/// colon, one blank line before the body, no trailing whitespace.
pub fn normalize(text: &str) -> String {
    let text = text.trim();
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let Some((tag, subject)) = header.split_once(':') else {
        return text.to_string();
    };
    let header = format!("{}: {}", tag.trim().to_lowercase(), subject.trim());
    let body = body_of(lines);
    if body.is_empty() {
        header
    } else {
        format!("{header}\n\n{body}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionId {
    Diff,
    DiffExplanation,
    Issues,
    PullRequests,
    FileImportance,
    Activity,
    MethodSummaries,
    ClassSummaries,
}

impl SectionId {
    pub fn title(self) -> &'static str {
        match self {
            SectionId::Diff => "Commit diff",
            SectionId::DiffExplanation => "Diff explanation",
            SectionId::Issues => "Associated issues",
            SectionId::PullRequests => "Associated pull requests",
            SectionId::FileImportance => "Relative importance of changed files",
            SectionId::Activity => "Software maintenance activity type",
            SectionId::MethodSummaries => "Summaries of affected methods",
            SectionId::ClassSummaries => "Summaries of affected classes",
        }
    }
}

/// Sections are cut in this order until the prompt fits. The activity
/// section is never cut.
const TRUNCATION_ORDER: [SectionId; 7] = [
    SectionId::ClassSummaries,
    SectionId::MethodSummaries,
    SectionId::PullRequests,
    SectionId::Issues,
    SectionId::FileImportance,
    SectionId::DiffExplanation,
    SectionId::Diff,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromptSection {
    pub id: SectionId,
    pub body: String,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationPrompt {
    pub sections: Vec<PromptSection>,
    pub conversation: Conversation,
}

impl GenerationPrompt {
    pub fn section(&self, id: SectionId) -> Option<&PromptSection> {
        self.sections.iter().find(|s| s.id == id)
    }

    pub fn user_message(&self) -> &str {
        &self.conversation.messages[1].content
    }
}

fn status_word(status: UnitStatus) -> &'static str {
    match status {
        UnitStatus::Added => "added",
        UnitStatus::Deleted => "deleted",
        UnitStatus::Modified => "modified",
    }
}

fn or_none(items: Vec<String>) -> String {
    if items.is_empty() {
        "None.".to_string()
    } else {
        items.join("\n\n")
    }
}

fn render_method_summary(summary: &MethodSummary) -> String {
    let aspects = MultiIntentSummary::render;
    match summary {
        MethodSummary::Intent { summary } => aspects(summary),
        MethodSummary::PrePost { pre, post } => {
            format!("Before the commit:\n{}\nAfter the commit:\n{}", aspects(pre), aspects(post))
        }
        MethodSummary::ChangeImpact { pre, changes, impact } => format!(
            "Before the commit:\n{}\nChanges:\n{}\nImpact of the changes:\n{}",
            aspects(pre),
            changes.trim_end(),
            aspects(impact)
        ),
        MethodSummary::Unavailable { .. } => "Summary unavailable.".to_string(),
    }
}

fn render_sections(ctx: &CommitContext) -> Vec<PromptSection> {
    let mut out = Vec::new();
    let mut push = |id, body: String| {
        out.push(PromptSection {
            id,
            body,
            truncated: false,
        })
    };
    let raw = if ctx.diff.raw_text.is_empty() { ctx.diff.render() } else { ctx.diff.raw_text.clone() };
    push(SectionId::Diff, format!("```diff\n{}\n```", raw.trim_end_matches('\n')));
    if let Some(expl) = &ctx.diff_explanation {
        push(SectionId::DiffExplanation, expl.trim().to_string());
    }
    push(
        SectionId::Issues,
        or_none(
            ctx.issues
                .iter()
                .map(|i| {
                    let state = if i.state.is_empty() { String::new() } else { format!(" [{}]", i.state) };
                    format!("#{}{state} {}\n{}", i.id, i.title, i.body.trim()).trim_end().to_string()
                })
                .collect(),
        ),
    );
    push(
        SectionId::PullRequests,
        or_none(
            ctx.pull_requests
                .iter()
                .map(|p| format!("#{} {}\n{}", p.id, p.title, p.body.trim()).trim_end().to_string())
                .collect(),
        ),
    );
    push(
        SectionId::FileImportance,
        if ctx.file_importance.is_empty() {
            "None.".to_string()
        } else {
            ctx.file_importance
                .iter()
                .map(|f| format!("- {}: {:.2}", f.path, f.score))
                .collect::<Vec<_>>()
                .join("\n")
        },
    );
    push(
        SectionId::Activity,
        match &ctx.activity {
            Some(a) => format!("{} ({})", a.header_tag, a.value),
            None => "unknown".to_string(),
        },
    );
    push(
        SectionId::MethodSummaries,
        or_none(
            ctx.method_summaries
                .iter()
                .map(|m| {
                    format!(
                        "### {} in {} ({})\n{}",
                        m.method,
                        m.path,
                        status_word(m.status),
                        render_method_summary(&m.summary)
                    )
                })
                .collect(),
        ),
    );
    push(
        SectionId::ClassSummaries,
        or_none(
            ctx.class_summaries
                .iter()
                .map(|c| {
                    format!(
                        "### {} in {} ({})\n{}",
                        c.class,
                        c.path,
                        status_word(c.status),
                        c.summary.as_deref().unwrap_or("Summary unavailable.")
                    )
                })
                .collect(),
        ),
    );
    out
}

fn instructions(ctx: &CommitContext) -> String {
    let tag = match &ctx.activity {
        Some(a) => a.header_tag.as_str(),
        None => "one of fix, feat, refactor or style",
    };
    fill(GENERATION.instructions.trim(), &[("tag", tag)])
}

fn user_message(sections: &[PromptSection], instructions: &str) -> String {
    let mut parts: Vec<String> = sections
        .iter()
        .map(|s| format!("## {}\n{}", s.id.title(), s.body))
        .collect();
    parts.push(format!("## Instructions\n{instructions}"));
    parts.join("\n\n")
}

fn notice(removed: usize) -> String {
    format!("\n[... {removed} characters truncated to fit the prompt budget]")
}

/// Builds the single system+user generation conversation.
///
/// When the prompt exceeds `budget` characters, section bodies are cut
/// from the end in [`TRUNCATION_ORDER`], each with a notice of how much
/// was removed. If even that is not enough the result is
/// `ContextTooLarge`.
pub fn build_generation_prompt(ctx: &CommitContext, budget: usize) -> Result<GenerationPrompt, GeneratorError> {
    let system = GENERATION.system.trim();
    let instr = instructions(ctx);
    let mut sections = render_sections(ctx);
    let size = |sections: &[PromptSection]| system.chars().count() + user_message(sections, &instr).chars().count();

    for id in TRUNCATION_ORDER {
        let total = size(&sections);
        if total <= budget {
            break;
        }
        let Some(sec) = sections.iter_mut().find(|s| s.id == id) else { continue };
        let len = sec.body.chars().count();
        let reserve = notice(len).chars().count();
        if len <= reserve {
            continue;
        }
        let keep = len.saturating_sub(total - budget + reserve);
        let mut body: String = sec.body.chars().take(keep).collect();
        body.push_str(&notice(len - keep));
        sec.body = body;
        sec.truncated = true;
    }
    let total = size(&sections);
    if total > budget {
        return Err(GeneratorError::ContextTooLarge { size: total, budget });
    }
    let conversation = Conversation::new().system(system).user(user_message(&sections, &instr));
    Ok(GenerationPrompt { sections, conversation })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generation {
    pub message: CommitMessage,
    pub prompt: GenerationPrompt,
    /// The prompt followed by every reply and reprompt.
    pub transcript: Conversation,
    pub reprompted: bool,
}

fn unfence(reply: &str) -> &str {
    let t = reply.trim();
    if let Some(inner) = t.strip_prefix("```") {
        let inner = inner.split_once('\n').map(|(_, rest)| rest).unwrap_or("");
        return inner.trim_end().strip_suffix("```").unwrap_or(inner).trim();
    }
    t
}

/// One completion, parsed; an unparseable reply gets one reprompt with
/// the format restated. The classified activity overrides the model's
/// choice of tag.
pub fn generate(model: &Model, ctx: &CommitContext, budget: usize) -> Result<Generation, GeneratorError> {
    let prompt = build_generation_prompt(ctx, budget)?;
    let mut transcript = prompt.conversation.clone();
    let reply = model.complete(&transcript, CallSite::Generation)?;
    transcript.push(Role::Assistant, reply.trim());
    let (mut message, reprompted) = match parse_commit_message(unfence(&reply)) {
        Ok(m) => (m, false),
        Err(_) => {
            transcript.push(Role::User, GENERATION.retry.trim());
            let second = model.complete(&transcript, CallSite::Generation)?;
            transcript.push(Role::Assistant, second.trim());
            (parse_commit_message(unfence(&second))?, true)
        }
    };
    if let Some(a) = &ctx.activity {
        message.activity_tag = a.header_tag;
    }
    Ok(Generation {
        message,
        prompt,
        transcript,
        reprompted,
    })
}
