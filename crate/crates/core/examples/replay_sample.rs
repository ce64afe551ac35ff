//! Regenerates the sample commit message from the recorded capture, with
//! no endpoint at all, and checks it against the frozen message.
//!
//!     cargo run --example replay_sample

use std::path::Path;

use omega::config::Config;
use omega::context::{assemble_context, CommitInput, ContextOptions};
use omega::generator::{generate, DEFAULT_PROMPT_BUDGET};
use omega::llm::{Model, Replayer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let replayer = Replayer::open(&sample.join("capture.jsonl"))?;
    let model_name = Config::default().model;
    let model = Model::new(&replayer, &model_name);

    let input = CommitInput::from_fixture(&sample.join("commit.json"))?;
    let ctx = assemble_context(&model, &input, &ContextOptions::omega())?;
    let generation = generate(&model, &ctx, DEFAULT_PROMPT_BUDGET)?;
    let text = format!("{}\n", generation.message);
    print!("{text}");

    let expected = std::fs::read_to_string(sample.join("expected_message.txt"))?;
    if text != expected {
        return Err("replayed message differs from expected_message.txt".into());
    }
    eprintln!("matches expected_message.txt");
    Ok(())
}
