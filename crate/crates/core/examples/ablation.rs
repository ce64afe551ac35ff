//! Builds the generation prompt for the sample commit under each pipeline
//! arm and reports which prompt sections differ from the full arm.
//!
//!     cargo run --example ablation

use std::path::Path;
use std::time::Duration;

use omega::context::{assemble_context, CommitInput, ContextOptions};
use omega::generator::{build_generation_prompt, GenerationPrompt, DEFAULT_PROMPT_BUDGET};
use omega::llm::mock::MockServer;
use omega::llm::{HttpClient, Model, RetryPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let server = MockServer::canned()?;
    let client = HttpClient::new(&server.url(), None, RetryPolicy::default(), Duration::from_secs(30))?;
    let model = Model::new(&client, "mock-model");
    let input = CommitInput::from_fixture(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample/commit.json"))?;

    let prompt = |options: ContextOptions| -> Result<GenerationPrompt, Box<dyn std::error::Error>> {
        let ctx = assemble_context(&model, &input, &options)?;
        Ok(build_generation_prompt(&ctx, DEFAULT_PROMPT_BUDGET)?)
    };
    let full = prompt(ContextOptions::omega())?;
    let arms = [
        ("no diff explanation", ContextOptions { use_fidex: false, ..ContextOptions::omega() }),
        ("no change-based summaries", ContextOptions { use_cmms: false, ..ContextOptions::omega() }),
        ("documentation kept", ContextOptions { strip_docs: false, ..ContextOptions::omega() }),
        ("all off", ContextOptions::same_as_omg()),
    ];
    println!("full arm: {} prompt chars", full.user_message().len());
    for (name, options) in arms {
        let other = prompt(options)?;
        let changed: Vec<&str> = full
            .sections
            .iter()
            .filter(|s| other.section(s.id).map(|o| o.body != s.body).unwrap_or(true))
            .map(|s| s.id.title())
            .collect();
        println!("{name}: {} prompt chars; changed sections: {}", other.user_message().len(), changed.join(", "));
    }
    eprintln!("{} requests", server.request_count());
    Ok(())
}
