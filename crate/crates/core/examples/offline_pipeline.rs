//! Runs the whole pipeline on the bundled sample commit against the
//! in-process mock endpoint, which answers every prompt with a canned
//! reply.
//!
//!     cargo run --example offline_pipeline [-- --record <capture.jsonl>]

use std::path::{Path, PathBuf};
use std::time::Duration;

use omega::config::Config;
use omega::context::{assemble_context, CommitInput, ContextOptions};
use omega::generator::{generate, DEFAULT_PROMPT_BUDGET};
use omega::llm::mock::MockServer;
use omega::llm::{Completer, HttpClient, Model, Recorder, RetryPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let record = match args.as_slice() {
        [] => None,
        [flag, path] if flag == "--record" => Some(PathBuf::from(path)),
        _ => return Err("usage: offline_pipeline [--record <file>]".into()),
    };

    let server = MockServer::canned()?;
    let client = HttpClient::new(&server.url(), None, RetryPolicy::default(), Duration::from_secs(30))?;
    let completer: Box<dyn Completer> = match &record {
        Some(path) => Box::new(Recorder::create(client, path)?),
        None => Box::new(client),
    };
    // The default model name, so the capture replays under a default config.
    let model_name = Config::default().model;
    let model = Model::new(&*completer, &model_name);

    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample/commit.json");
    let input = CommitInput::from_fixture(&fixture)?;
    let ctx = assemble_context(&model, &input, &ContextOptions::omega())?;
    for w in &ctx.warnings {
        eprintln!("warning: {w}");
    }
    let generation = generate(&model, &ctx, DEFAULT_PROMPT_BUDGET)?;

    eprintln!("{} requests sent to {}", server.request_count(), server.url());
    println!("{}", generation.message);
    Ok(())
}
