//! Shows the seeded diff-explanation conversation for a diff without
//! calling any endpoint. Only the final user turn is sent live.
//!
//!     cargo run --example fidex_conversation [-- <file.diff>]

use std::path::PathBuf;

use omega::diff::parse_unified_diff;
use omega::fidex::build_fidex_conversation;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample/commit.diff"));
    let diff = parse_unified_diff(&std::fs::read_to_string(path)?)?;
    let fidex = build_fidex_conversation(&diff);
    for (i, m) in fidex.conversation().messages.iter().enumerate() {
        println!("--- [{i}] {} ({} chars) ---", m.role, m.content.len());
        println!("{}\n", m.content);
    }
    Ok(())
}
