//! Summarizes `Inventory#add` from the sample commit: a five-aspect summary
//! of the old version, then the change-based summary that describes how
//! the commit affects each aspect. Answers come from the canned mock, or
//! from a live endpoint given with `--endpoint <url> --model <name>`.
//!
//!     cargo run --example method_summaries

use std::path::Path;
use std::time::Duration;

use omega::context::{cmms, mms};
use omega::diff::parse_unified_diff;
use omega::java::{extract_units, method_change_list, render_change_list, strip_documentation};
use omega::llm::mock::MockServer;
use omega::llm::{HttpClient, Model, RetryPolicy};
use omega::narrator::extract_change_items;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (server, url, model_name) = match args.as_slice() {
        [] => {
            let s = MockServer::canned()?;
            let url = s.url();
            (Some(s), url, "mock-model".to_string())
        }
        [e, url, m, name] if e == "--endpoint" && m == "--model" => (None, url.clone(), name.clone()),
        _ => return Err("usage: method_summaries [--endpoint <url> --model <name>]".into()),
    };
    let client = HttpClient::new(&url, std::env::var("OMEGA_API_KEY").ok(), RetryPolicy::default(), Duration::from_secs(300))?;
    let model = Model::new(&client, &model_name);

    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let pre = extract_units(&std::fs::read_to_string(sample.join("pre/Inventory.java"))?);
    let post = extract_units(&std::fs::read_to_string(sample.join("post/Inventory.java"))?);
    let find = |units: &omega::java::Units| units.methods.iter().find(|m| m.name == "add").cloned();
    let (Some(before), Some(after)) = (find(&pre), find(&post)) else {
        return Err("Inventory#add not found".into());
    };

    let diff = parse_unified_diff(&std::fs::read_to_string(sample.join("commit.diff"))?)?;
    let items: Vec<_> = extract_change_items(&diff)
        .into_iter()
        .filter(|i| i.file.ends_with("main/java/shop/Inventory.java"))
        .collect();
    let changes = method_change_list(&before, &after, &items);

    let summary = mms(&model, &strip_documentation(&before.body).text, 12_000)?;
    println!("== summary of {} before the commit\n{}\n", before.qualified_name, summary.render());
    println!("== change list\n{}\n", render_change_list(&changes));
    let impact = cmms(&model, &summary, &changes)?;
    println!("== impact of the change\n{}", impact.render());
    drop(server);
    Ok(())
}
