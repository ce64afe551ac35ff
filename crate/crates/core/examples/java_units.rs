//! Strips documentation from a Java file and lists its classes and methods.
//! With the default input it also shows which units the sample commit
//! touches and the change list of each modified method.
//!
//!     cargo run --example java_units [-- <File.java>]

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use omega::diff::parse_unified_diff;
use omega::java::{affected_units, extract_units, method_change_list, render_change_list, strip_documentation, UnitRecord};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let arg = std::env::args().nth(1).map(PathBuf::from);
    let path = arg.clone().unwrap_or_else(|| sample.join("post/Inventory.java"));
    let source = std::fs::read_to_string(&path)?;

    let stripped = strip_documentation(&source);
    println!("== {} without comments ({} -> {} bytes)", path.display(), source.len(), stripped.text.len());
    print!("{}", stripped.text);

    let units = extract_units(&source);
    println!("\n== units");
    for c in &units.classes {
        println!("{:?} {} lines {}-{}", c.kind, c.qualified_name, c.span.0, c.span.1);
    }
    for m in &units.methods {
        println!("method {} ({}) lines {}-{}", m.qualified_name, m.identity(), m.span.0, m.span.1);
    }
    for d in &units.diagnostics {
        eprintln!("warning: {d}");
    }
    if arg.is_some() {
        return Ok(());
    }

    let diff = parse_unified_diff(&std::fs::read_to_string(sample.join("commit.diff"))?)?;
    let main_path = "src/main/java/shop/Inventory.java";
    let test_path = "src/test/java/shop/InventoryTest.java";
    let pre = HashMap::from([(main_path.to_string(), std::fs::read_to_string(sample.join("pre/Inventory.java"))?)]);
    let post = HashMap::from([
        (main_path.to_string(), source.clone()),
        (test_path.to_string(), std::fs::read_to_string(sample.join("post/InventoryTest.java"))?),
    ]);
    println!("\n== affected by the sample commit");
    for (key, unit) in affected_units(&diff, &pre, &post)? {
        println!("{:?} {:?} {} in {}", unit.status, key.kind, key.name, key.path);
        if let (Some(UnitRecord::Method(a)), Some(UnitRecord::Method(b))) = (&unit.pre, &unit.post) {
            for line in render_change_list(&method_change_list(a, b, &unit.items)).lines() {
                println!("    {line}");
            }
        }
    }
    Ok(())
}
