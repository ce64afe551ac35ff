use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};

use super::{
    classify_activity, cmms, fetch_issue_pr_context, mms, summarize_class, truncate_middle, ClassSummaryEntry,
    CommitContext, ContextError, FileImportance, HostingConfig, Issue, IssueSource, MethodSummary,
    MethodSummaryEntry, PullRequest,
};
use crate::diff::{git_file_at, git_resolve, git_show_diff, parse_unified_diff, FileStatus, UnifiedDiff};
use crate::fidex::{explain_diff, FidexMode};
use crate::java::{
    affected_units, is_java, method_change_list, render_change_list, AffectedUnit, UnitKey, UnitKind, UnitRecord,
    UnitStatus,
};
use crate::llm::Model;
use crate::narrator::render_narrative;

/// Switches for the context refinements. `omega()` enables all of them;
/// `same_as_omg()` disables all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextOptions {
    /// Summarize modified methods as pre-commit summary plus change impact
    /// instead of separate pre and post summaries.
    pub use_cmms: bool,
    /// Remove comments and Javadoc from code before summarizing it.
    pub strip_docs: bool,
    pub use_fidex: bool,
    pub fidex_mode: FidexMode,
    /// Character limit for code and change text inside one summary or
    /// classification prompt.
    pub unit_char_budget: usize,
    /// Number of summary requests allowed in flight at once.
    pub concurrency: usize,
}

impl ContextOptions {
    pub fn omega() -> Self {
        ContextOptions {
            use_cmms: true,
            strip_docs: true,
            use_fidex: true,
            fidex_mode: FidexMode::Single,
            unit_char_budget: 12_000,
            concurrency: 1,
        }
    }

    pub fn same_as_omg() -> Self {
        ContextOptions {
            use_cmms: false,
            strip_docs: false,
            use_fidex: false,
            ..Self::omega()
        }
    }
}

impl Default for ContextOptions {
    fn default() -> Self {
        Self::omega()
    }
}

/// Source text in a fixture: inline, or a file relative to the fixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceEntry {
    Inline(String),
    File { file: String },
}

/// An offline description of one commit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitFixture {
    pub sha: String,
    /// Relative to the fixture file. Ignored when `diff` is given.
    #[serde(default)]
    pub diff_path: Option<String>,
    #[serde(default)]
    pub diff: Option<String>,
    #[serde(default)]
    pub issues: Vec<Issue>,
    #[serde(default)]
    pub pull_requests: Vec<PullRequest>,
    #[serde(default)]
    pub pre_sources: BTreeMap<String, SourceEntry>,
    #[serde(default)]
    pub post_sources: BTreeMap<String, SourceEntry>,
}

/// Everything the assembler reads about a commit.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitInput {
    pub sha: String,
    pub diff_text: String,
    /// Pre-commit Java sources keyed by old path.
    pub pre_sources: HashMap<String, String>,
    /// Post-commit Java sources keyed by new path.
    pub post_sources: HashMap<String, String>,
    pub issue_source: IssueSource,
}

fn read(path: &Path) -> Result<String, ContextError> {
    fs::read_to_string(path).map_err(|e| ContextError::Fixture(format!("{}: {e}", path.display())))
}

fn resolve_sources(base: &Path, map: &BTreeMap<String, SourceEntry>) -> Result<HashMap<String, String>, ContextError> {
    map.iter()
        .map(|(k, v)| {
            let text = match v {
                SourceEntry::Inline(s) => s.clone(),
                SourceEntry::File { file } => read(&base.join(file))?,
            };
            Ok((k.clone(), text))
        })
        .collect()
}

impl CommitInput {
    pub fn from_fixture(path: &Path) -> Result<Self, ContextError> {
        let fixture: CommitFixture = serde_json::from_str(&read(path)?)
            .map_err(|e| ContextError::Fixture(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let diff_text = match (&fixture.diff, &fixture.diff_path) {
            (Some(d), _) => d.clone(),
            (None, Some(p)) => read(&base.join(p))?,
            (None, None) => return Err(ContextError::Fixture("fixture needs `diff` or `diff_path`".into())),
        };
        Ok(CommitInput {
            pre_sources: resolve_sources(base, &fixture.pre_sources)?,
            post_sources: resolve_sources(base, &fixture.post_sources)?,
            sha: fixture.sha,
            diff_text,
            issue_source: IssueSource::Fixture {
                issues: fixture.issues,
                pull_requests: fixture.pull_requests,
            },
        })
    }

    /// Reads the commit and the Java files it touches from a git
    /// repository.
    pub fn from_repo(repo: &Path, commit: &str, hosting: Option<HostingConfig>) -> Result<Self, ContextError> {
        let sha = git_resolve(repo, commit)?;
        let diff_text = git_show_diff(repo, &sha)?;
        let diff = parse_unified_diff(&diff_text)?;
        let parent = format!("{sha}^");
        let mut pre_sources = HashMap::new();
        let mut post_sources = HashMap::new();
        for file in diff.files.iter().filter(|f| !f.is_binary && is_java(f.path())) {
            if file.status != FileStatus::Added {
                if let Some(text) = git_file_at(repo, &parent, &file.old_path)? {
                    pre_sources.insert(file.old_path.clone(), text);
                }
            }
            if file.status != FileStatus::Deleted {
                if let Some(text) = git_file_at(repo, &sha, &file.new_path)? {
                    post_sources.insert(file.new_path.clone(), text);
                }
            }
        }
        Ok(CommitInput {
            sha,
            diff_text,
            pre_sources,
            post_sources,
            issue_source: hosting.map(IssueSource::Hosting).unwrap_or(IssueSource::None),
        })
    }
}

/// Share of the total churn (added plus removed lines) per changed file,
/// highest first, ties in path order. Files without churn share equally
/// when no file has any.
pub fn file_importance(diff: &UnifiedDiff) -> Vec<FileImportance> {
    let mut churn: Vec<(String, usize)> = diff
        .files
        .iter()
        .map(|f| (f.path().to_string(), f.added_count() + f.removed_count()))
        .collect();
    churn.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let total: usize = churn.iter().map(|(_, c)| c).sum();
    let n = churn.len() as f64;
    churn
        .into_iter()
        .map(|(path, c)| FileImportance {
            path,
            score: if total == 0 { 1.0 / n } else { c as f64 / total as f64 },
        })
        .collect()
}

/// Applies `f` to every item using up to `workers` threads and returns the
/// results in input order.
fn ordered_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|s| {
        for _ in 0..workers.min(items.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every slot filled"))
        .collect()
}

fn code<'a>(record: &'a UnitRecord, options: &ContextOptions) -> &'a str {
    if options.strip_docs {
        record.doc_stripped_body()
    } else {
        record.body()
    }
}

fn display_record(unit: &AffectedUnit) -> &UnitRecord {
    unit.post.as_ref().or(unit.pre.as_ref()).expect("affected unit has a side")
}

fn method_summary(model: &Model, unit: &AffectedUnit, options: &ContextOptions) -> Result<MethodSummary, ContextError> {
    let budget = options.unit_char_budget;
    let summarize = |r: &UnitRecord| mms(model, code(r, options), budget);
    match (&unit.pre, &unit.post) {
        (Some(pre), Some(post)) if unit.status == UnitStatus::Modified => {
            if !options.use_cmms {
                return Ok(MethodSummary::PrePost {
                    pre: summarize(pre)?,
                    post: summarize(post)?,
                });
            }
            let (UnitRecord::Method(pre_m), UnitRecord::Method(post_m)) = (pre, post) else {
                unreachable!("method key with class records")
            };
            let changes = method_change_list(pre_m, post_m, &unit.items);
            if changes.is_empty() {
                return Ok(MethodSummary::Intent {
                    summary: summarize(post)?,
                });
            }
            let pre_summary = summarize(pre)?;
            let impact = cmms(model, &pre_summary, &changes)?;
            Ok(MethodSummary::ChangeImpact {
                pre: pre_summary,
                changes: render_change_list(&changes),
                impact,
            })
        }
        _ => Ok(MethodSummary::Intent {
            summary: summarize(display_record(unit))?,
        }),
    }
}

/// Gathers the full context for one commit.
///
/// Only an unparseable diff is an error. Every other failure (issue
/// lookup, explanation, classification, a single summary) is recorded in
/// `warnings` and the affected piece is left empty or marked unavailable.
pub fn assemble_context(model: &Model, input: &CommitInput, options: &ContextOptions) -> Result<CommitContext, ContextError> {
    let diff = parse_unified_diff(&input.diff_text)?;
    let mut warnings = Vec::new();

    let linked = fetch_issue_pr_context(&input.sha, &input.issue_source);
    warnings.extend(linked.warnings);

    let diff_explanation = if options.use_fidex {
        match explain_diff(model, &diff, options.fidex_mode) {
            Ok(e) => Some(e.text),
            Err(e) => {
                warnings.push(format!("diff explanation unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };

    // The classifier always sees the narrative so that the explanation
    // switch cannot change the activity.
    let activity = if diff.is_empty() {
        warnings.push("empty diff; activity not classified".into());
        None
    } else {
        let files: Vec<String> = diff.files.iter().map(|f| f.path().to_string()).collect();
        let narrative = truncate_middle(&render_narrative(&diff).text, options.unit_char_budget);
        match classify_activity(model, &narrative, &files) {
            Ok(a) => Some(a),
            Err(e) => {
                warnings.push(format!("activity classification failed: {e}"));
                None
            }
        }
    };

    let units = affected_units(&diff, &input.pre_sources, &input.post_sources).unwrap_or_else(|e| {
        warnings.push(format!("method and class summaries skipped: {e}"));
        BTreeMap::new()
    });
    let (methods, classes): (Vec<(&UnitKey, &AffectedUnit)>, Vec<_>) =
        units.iter().partition(|(k, _)| k.kind == UnitKind::Method);

    let method_results = ordered_map(&methods, options.concurrency, |(key, unit)| {
        let name = display_record(unit).qualified_name().to_string();
        let summary = method_summary(model, unit, options).unwrap_or_else(|e| MethodSummary::Unavailable {
            reason: e.to_string(),
        });
        MethodSummaryEntry {
            path: key.path.clone(),
            method: name,
            status: unit.status,
            summary,
        }
    });
    for entry in &method_results {
        if let MethodSummary::Unavailable { reason } = &entry.summary {
            warnings.push(format!("summary of {} in {} unavailable: {reason}", entry.method, entry.path));
        }
    }

    let class_results = ordered_map(&classes, options.concurrency, |(key, unit)| {
        let record = display_record(unit);
        let summary = summarize_class(model, code(record, options), options.unit_char_budget);
        (
            ClassSummaryEntry {
                path: key.path.clone(),
                class: record.qualified_name().to_string(),
                status: unit.status,
                summary: summary.as_ref().ok().cloned(),
            },
            summary.err().map(|e| e.to_string()),
        )
    });
    let mut class_summaries = Vec::new();
    for (entry, err) in class_results {
        if let Some(e) = err {
            warnings.push(format!("summary of class {} in {} unavailable: {e}", entry.class, entry.path));
        }
        class_summaries.push(entry);
    }

    Ok(CommitContext {
        sha: input.sha.clone(),
        file_importance: file_importance(&diff),
        diff,
        diff_explanation,
        issues: linked.issues,
        pull_requests: linked.pull_requests,
        activity,
        method_summaries: method_results,
        class_summaries,
        warnings,
    })
}
