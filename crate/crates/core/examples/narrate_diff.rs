//! Prints the numbered change narrative of a unified diff.
//!
//!     cargo run --example narrate_diff [-- <file.diff>]
//!
//! Without an argument it narrates the bundled sample commit.

use std::path::PathBuf;

use omega::diff::parse_unified_diff;
use omega::narrator::{render_narrative, ChangeKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample/commit.diff"));
    let diff = parse_unified_diff(&std::fs::read_to_string(&path)?)?;

    for f in &diff.files {
        eprintln!("{:?} {} (+{} -{})", f.status, f.path(), f.added_count(), f.removed_count());
    }
    let narrative = render_narrative(&diff);
    let count = |k| narrative.items.iter().filter(|i| i.kind == k).count();
    eprintln!(
        "{} items: {} additions, {} removals, {} replacements",
        narrative.items.len(),
        count(ChangeKind::AdditionChunk),
        count(ChangeKind::RemovalChunk),
        count(ChangeKind::ReplacementChunk)
    );
    println!("{}", narrative.text);
    Ok(())
}
