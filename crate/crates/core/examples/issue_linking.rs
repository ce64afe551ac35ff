//! Fetches the pull requests and linked issues of a commit from a
//! GitHub-style REST API. Here the API is a local stub, so the example runs
//! offline; point `api_base` at a real host to use it for real.
//!
//!     cargo run --example issue_linking

use omega::context::{fetch_issue_pr_context, HostingConfig, IssueSource};
use omega::llm::mock::{MockResponse, MockServer};
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sha = "77e0f6b2276871e416459be6a2bfc79ce323118e";
    let server = MockServer::start(move |req, _| {
        let body = match req.path.as_str() {
            p if p.ends_with("/pulls") => json!([{
                "number": 57,
                "title": "Reject non-positive quantities in Inventory",
                "body": "Fixes #42. Also see #57.",
                "head": {"ref": "issue-42-negative-quantities"}
            }]),
            p if p.ends_with("/issues/42") => json!({
                "number": 42,
                "title": "Negative quantities corrupt stock levels",
                "body": "remove(\"apple\", -3) increases the stock.",
                "state": "closed"
            }),
            _ => return MockResponse::status(404, "{}"),
        };
        MockResponse {
            status: 200,
            body: body.to_string(),
        }
    })?;

    let source = IssueSource::Hosting(HostingConfig {
        api_base: server.url(),
        repo: "example/shop".into(),
        token: None,
    });
    let ctx = fetch_issue_pr_context(sha, &source);
    for pr in &ctx.pull_requests {
        println!("PR #{} {} (branch {:?})", pr.id, pr.title, pr.head_ref);
    }
    for issue in &ctx.issues {
        println!("issue #{} [{}] {}", issue.id, issue.state, issue.title);
    }
    for w in &ctx.warnings {
        eprintln!("warning: {w}");
    }
    for r in server.requests() {
        eprintln!("{} {}", r.method, r.path);
    }
    Ok(())
}
