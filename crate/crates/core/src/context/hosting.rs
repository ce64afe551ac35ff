use std::collections::BTreeSet;
use std::time::Duration;

use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Issue, PullRequest};

/// Read-only access to a GitHub-compatible REST API.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostingConfig {
    pub api_base: String,
    /// `owner/name`.
    pub repo: String,
    #[serde(skip)]
    pub token: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IssueSource {
    Fixture {
        issues: Vec<Issue>,
        pull_requests: Vec<PullRequest>,
    },
    Hosting(HostingConfig),
    None,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IssuePrContext {
    pub issues: Vec<Issue>,
    pub pull_requests: Vec<PullRequest>,
    pub warnings: Vec<String>,
}

static HASH_REF: Lazy<Regex> = Lazy::new(|| Regex::new(r"#(\d+)\b").unwrap());
static BRANCH_REF: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)(?:^|[/_-])(?:issues?|gh|bug)[-_/]?(\d+)(?:[/_-]|$)").unwrap());

/// Issue numbers a pull request refers to: `#NNN` in its title or body,
/// and `#NNN`, `issue-NNN`, `gh-NNN` or `bug-NNN` in its branch name.
pub fn issue_references(pr: &PullRequest) -> Vec<u64> {
    let mut refs = BTreeSet::new();
    for text in [&pr.title, &pr.body] {
        refs.extend(HASH_REF.captures_iter(text).filter_map(|c| c[1].parse::<u64>().ok()));
    }
    if let Some(branch) = &pr.head_ref {
        refs.extend(HASH_REF.captures_iter(branch).filter_map(|c| c[1].parse::<u64>().ok()));
        refs.extend(BRANCH_REF.captures_iter(branch).filter_map(|c| c[1].parse::<u64>().ok()));
    }
    refs.remove(&pr.id);
    refs.into_iter().collect()
}

/// Collects the issues and pull requests linked to commit `sha`.
///
/// Failures never abort: they leave the affected lists empty and add a
/// warning.
pub fn fetch_issue_pr_context(sha: &str, source: &IssueSource) -> IssuePrContext {
    match source {
        IssueSource::Fixture { issues, pull_requests } => IssuePrContext {
            issues: issues.clone(),
            pull_requests: pull_requests.clone(),
            warnings: Vec::new(),
        },
        IssueSource::None => IssuePrContext {
            warnings: vec!["no issue/PR source configured; issues and pull requests left empty".into()],
            ..Default::default()
        },
        IssueSource::Hosting(cfg) => fetch_from_api(sha, cfg),
    }
}

fn get_json(client: &reqwest::blocking::Client, cfg: &HostingConfig, path: &str) -> Result<Value, String> {
    let url = format!("{}/repos/{}/{}", cfg.api_base.trim_end_matches('/'), cfg.repo, path);
    let mut req = client
        .get(&url)
        .header("Accept", "application/vnd.github+json")
        .header("User-Agent", "omega-commit-context");
    if let Some(token) = &cfg.token {
        req = req.bearer_auth(token);
    }
    let resp = req.send().map_err(|e| format!("GET {url}: {e}"))?;
    let status = resp.status();
    if !status.is_success() {
        return Err(format!("GET {url}: HTTP {}", status.as_u16()));
    }
    resp.json().map_err(|e| format!("GET {url}: {e}"))
}

fn text(v: &Value, key: &str) -> String {
    v.get(key).and_then(Value::as_str).unwrap_or_default().to_string()
}

fn fetch_from_api(sha: &str, cfg: &HostingConfig) -> IssuePrContext {
    let mut ctx = IssuePrContext::default();
    let client = match reqwest::blocking::Client::builder().timeout(Duration::from_secs(30)).build() {
        Ok(c) => c,
        Err(e) => {
            ctx.warnings.push(format!("issue/PR source unavailable: {e}"));
            return ctx;
        }
    };
    let pulls = match get_json(&client, cfg, &format!("commits/{sha}/pulls")) {
        Ok(Value::Array(items)) => items,
        Ok(_) => {
            ctx.warnings.push("issue/PR source unavailable: unexpected pull request listing".into());
            return ctx;
        }
        Err(e) => {
            ctx.warnings.push(format!("issue/PR source unavailable: {e}"));
            return ctx;
        }
    };
    for p in &pulls {
        let Some(id) = p.get("number").and_then(Value::as_u64) else { continue };
        ctx.pull_requests.push(PullRequest {
            id,
            title: text(p, "title"),
            body: text(p, "body"),
            head_ref: p.pointer("/head/ref").and_then(Value::as_str).map(String::from),
        });
    }
    let pr_ids: BTreeSet<u64> = ctx.pull_requests.iter().map(|p| p.id).collect();
    let wanted: BTreeSet<u64> = ctx
        .pull_requests
        .iter()
        .flat_map(issue_references)
        .filter(|n| !pr_ids.contains(n))
        .collect();
    for n in wanted {
        match get_json(&client, cfg, &format!("issues/{n}")) {
            // The issues endpoint also serves pull requests.
            Ok(v) if v.get("pull_request").is_some() => {}
            Ok(v) => ctx.issues.push(Issue {
                id: v.get("number").and_then(Value::as_u64).unwrap_or(n),
                title: text(&v, "title"),
                body: text(&v, "body"),
                state: text(&v, "state"),
            }),
            Err(e) => ctx.warnings.push(format!("issue #{n} skipped: {e}")),
        }
    }
    ctx
}
