//! Commit context: the pieces of information handed to the generator.

mod activity;
mod assemble;
mod hosting;
mod summaries;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diff::{DiffError, UnifiedDiff};
use crate::java::{JavaError, UnitStatus};
use crate::llm::LlmError;

pub use activity::{classify_activity, normalize_label};
pub use assemble::{assemble_context, file_importance, CommitFixture, CommitInput, ContextOptions};
pub use hosting::{fetch_issue_pr_context, issue_references, HostingConfig, IssuePrContext, IssueSource};
pub use summaries::{cmms, mms, parse_aspects, summarize_class, truncate_middle, NOT_APPLICABLE};

#[derive(Debug, Error)]
pub enum ContextError {
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Java(#[from] JavaError),
    #[error("unrecognized activity label {0:?}")]
    UnrecognizedLabel(String),
    #[error("summary has only {found} of the five labeled aspects")]
    UnparseableSummary { found: usize },
    #[error("change list is empty")]
    EmptyChangeList,
    #[error("code to summarize is empty")]
    EmptyBody,
    #[error("fixture: {0}")]
    Fixture(String),
    #[error("issue/PR source unavailable: {0}")]
    SourceUnavailable(String),
}

/// A method described from five aspects. Aspects the model did not cover
/// hold [`NOT_APPLICABLE`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiIntentSummary {
    pub what: String,
    pub why: String,
    pub how_to_use: String,
    pub how_it_is_done: String,
    pub property: String,
}

pub const ASPECT_LABELS: [&str; 5] = ["What", "Why", "How-to-use", "How-it-is-done", "Property"];

impl MultiIntentSummary {
    pub fn aspects(&self) -> [(&'static str, &str); 5] {
        [
            (ASPECT_LABELS[0], &self.what),
            (ASPECT_LABELS[1], &self.why),
            (ASPECT_LABELS[2], &self.how_to_use),
            (ASPECT_LABELS[3], &self.how_it_is_done),
            (ASPECT_LABELS[4], &self.property),
        ]
    }

    pub fn render(&self) -> String {
        self.aspects()
            .iter()
            .map(|(label, text)| format!("{label}: {text}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// How upcoming changes affect each aspect of a method's pre-commit
/// summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChangeImpactSummary(pub MultiIntentSummary);

impl std::ops::Deref for ChangeImpactSummary {
    type Target = MultiIntentSummary;
    fn deref(&self) -> &MultiIntentSummary {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeaderTag {
    Fix,
    Feat,
    Refactor,
    Style,
}

impl HeaderTag {
    pub const ALL: [HeaderTag; 4] = [HeaderTag::Fix, HeaderTag::Feat, HeaderTag::Refactor, HeaderTag::Style];

    pub fn as_str(self) -> &'static str {
        match self {
            HeaderTag::Fix => "fix",
            HeaderTag::Feat => "feat",
            HeaderTag::Refactor => "refactor",
            HeaderTag::Style => "style",
        }
    }

    pub fn activity(self) -> Activity {
        match self {
            HeaderTag::Fix => Activity::Corrective,
            HeaderTag::Feat => Activity::Adaptive,
            HeaderTag::Refactor | HeaderTag::Style => Activity::Perfective,
        }
    }
}

impl fmt::Display for HeaderTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HeaderTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        HeaderTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Activity {
    Corrective,
    Perfective,
    Adaptive,
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityType {
    pub value: Activity,
    pub header_tag: HeaderTag,
}

impl From<HeaderTag> for ActivityType {
    fn from(tag: HeaderTag) -> Self {
        ActivityType {
            value: tag.activity(),
            header_tag: tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub id: u64,
    pub title: String,
    #[serde(default)]
    pub body: String,
    #[serde(default)]
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullRequest {
    pub id: u64,
    pub title: String,
    #[serde(default)]
    pub body: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head_ref: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileImportance {
    pub path: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MethodSummary {
    /// Plain summary of the single existing version (added or deleted
    /// methods, or one side of a modified method).
    Intent { summary: MultiIntentSummary },
    /// Separate summaries of the pre- and post-commit bodies.
    PrePost {
        pre: MultiIntentSummary,
        post: MultiIntentSummary,
    },
    /// Pre-commit summary plus the per-aspect impact of the change list.
    ChangeImpact {
        pre: MultiIntentSummary,
        changes: String,
        impact: ChangeImpactSummary,
    },
    Unavailable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSummaryEntry {
    pub path: String,
    pub method: String,
    pub status: UnitStatus,
    pub summary: MethodSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummaryEntry {
    pub path: String,
    pub class: String,
    pub status: UnitStatus,
    /// `None` when summarization failed; see the context warnings.
    pub summary: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitContext {
    pub sha: String,
    pub diff: UnifiedDiff,
    pub diff_explanation: Option<String>,
    pub issues: Vec<Issue>,
    pub pull_requests: Vec<PullRequest>,
    pub file_importance: Vec<FileImportance>,
    /// `None` when classification failed; see the warnings.
    pub activity: Option<ActivityType>,
    pub method_summaries: Vec<MethodSummaryEntry>,
    pub class_summaries: Vec<ClassSummaryEntry>,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_mapping() {
        assert_eq!(ActivityType::from(HeaderTag::Fix).value, Activity::Corrective);
        assert_eq!(ActivityType::from(HeaderTag::Feat).value, Activity::Adaptive);
        assert_eq!(ActivityType::from(HeaderTag::Refactor).value, Activity::Perfective);
        assert_eq!(ActivityType::from(HeaderTag::Style).value, Activity::Perfective);
        assert_eq!("FIX".parse::<HeaderTag>(), Ok(HeaderTag::Fix));
        assert!("chore".parse::<HeaderTag>().is_err());
    }
}
