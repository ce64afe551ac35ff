//! Scores the bundled 10-pair fixture and prints the report table, then a
//! few single-sentence scores to show how each metric reacts.
//!
//!     cargo run --example evaluate_metrics [-- <pairs.jsonl>]

use std::path::PathBuf;

use omega::metrics::{bleu, evaluate_corpus, load_eval_pairs, meteor, render_table, rouge_l};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/eval/pairs.jsonl"));
    let pairs = load_eval_pairs(&path)?;
    let report = evaluate_corpus(&pairs);
    print!("{}", render_table(&[("candidate".to_string(), report.clone())]));
    println!("\ntokenizer: {}", report.metadata.tokenizer);
    println!("bleu:      {}", report.metadata.bleu);
    println!("meteor:    {}", report.metadata.meteor);

    let reference = "fix: guard against null pointer in the parser";
    for cand in [reference, "fix: guard null pointer in parser", "fixes null pointers in parsers", "update docs"] {
        println!(
            "\n{cand:?}\n  BLEU {:6.2}  METEOR {:6.2}  ROUGE-L {:6.2}",
            bleu(&[cand], &[reference])?,
            meteor(cand, reference)?,
            rouge_l(cand, reference)?
        );
    }
    Ok(())
}
