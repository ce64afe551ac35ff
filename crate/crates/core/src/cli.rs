//! The `omega` command line.
//!
//! Payload goes to stdout, diagnostics to stderr. Exit status is 0 on
//! success, 1 when the pipeline fails and 2 for usage errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::{CaptureMode, Config};
use crate::context::{assemble_context, classify_activity, truncate_middle, CommitInput};
use crate::diff::{parse_unified_diff, UnifiedDiff};
use crate::fidex::{build_fidex_conversation, explain_diff};
use crate::generator::generate;
use crate::java::{extract_units, strip_documentation};
use crate::llm::{Conversation, Model};
use crate::metrics::{classifier_accuracy, evaluate_corpus, load_eval_pairs, load_labeled_commits, render_table};
use crate::narrator::render_narrative;
use crate::prompts;

#[derive(Debug, Parser)]
#[command(name = "omega", version, about = "Commit message generation from commit context")]
struct Cli {
    /// Configuration file (default: ./omega.toml if present).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct CaptureArgs {
    /// Record every completion to this JSONL file.
    #[arg(long, value_name = "FILE", conflicts_with = "replay")]
    record: Option<PathBuf>,
    /// Answer completions from this JSONL capture instead of the endpoint.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the numbered change narrative of a diff.
    Narrate {
        /// Diff file, or `-` for stdin.
        diff: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Explain a diff with the seeded role-play conversation.
    Explain {
        diff: PathBuf,
        /// Print the conversation without calling the endpoint.
        #[arg(long)]
        dry_run: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        capture: CaptureArgs,
    },
    /// Generate a commit message.
    Generate {
        #[arg(long, default_value = ".")]
        repo: PathBuf,
        #[arg(long, required_unless_present = "fixture")]
        commit: Option<String>,
        /// Read the commit from a fixture document instead of git.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        no_fidex: bool,
        #[arg(long)]
        no_cmms: bool,
        /// Summarize code with its comments and Javadoc.
        #[arg(long)]
        keep_docs: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        capture: CaptureArgs,
    },
    /// Score candidate messages against reference messages.
    Evaluate {
        dataset: PathBuf,
        #[arg(long, conflicts_with = "table")]
        json: bool,
        #[arg(long)]
        table: bool,
    },
    /// Remove comments and Javadoc from a Java file.
    StripDocs {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the classes and methods of a Java file.
    Units {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Measure activity classification accuracy on a labeled dataset.
    ValidateClassifier {
        dataset: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        capture: CaptureArgs,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        message: e.to_string(),
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(fail)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
    }
}

fn read_diff(path: &Path) -> Result<UnifiedDiff, Failure> {
    parse_unified_diff(&read_input(path)?).map_err(fail)
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn render_conversation(conv: &Conversation) -> String {
    conv.messages
        .iter()
        .map(|m| format!("--- {} ---\n{}\n", m.role, m.content))
        .collect()
}

fn apply_capture(config: &mut Config, capture: &CaptureArgs) {
    if let Some(p) = &capture.record {
        config.capture.mode = CaptureMode::Record;
        config.capture.path = Some(p.clone());
    }
    if let Some(p) = &capture.replay {
        config.capture.mode = CaptureMode::Replay;
        config.capture.path = Some(p.clone());
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let mut config = Config::load(cli.config.as_deref()).map_err(usage)?;
    let mut emit = |text: &str| out.write_all(text.as_bytes()).map_err(fail);

    match cli.command {
        Command::Narrate { diff, json } => {
            let narrative = render_narrative(&read_diff(&diff)?);
            if json {
                emit(&to_json(&narrative))
            } else {
                emit(&format!("{}\n", narrative.text))
            }
        }
        Command::Explain {
            diff,
            dry_run,
            json,
            capture,
        } => {
            let diff = read_diff(&diff)?;
            if dry_run {
                let conv = build_fidex_conversation(&diff).into_conversation();
                return if json { emit(&to_json(&conv)) } else { emit(&render_conversation(&conv)) };
            }
            apply_capture(&mut config, &capture);
            config.validate().map_err(usage)?;
            let completer = config.completer().map_err(fail)?;
            let model = Model::new(&*completer, &config.model).with_max_tokens(config.max_tokens);
            let explanation = explain_diff(&model, &diff, config.pipeline.fidex_mode).map_err(fail)?;
            if json {
                emit(&to_json(&explanation))
            } else {
                emit(&format!("{}\n", explanation.text.trim_end()))
            }
        }
        Command::Generate {
            repo,
            commit,
            fixture,
            no_fidex,
            no_cmms,
            keep_docs,
            json,
            capture,
        } => {
            apply_capture(&mut config, &capture);
            config.validate().map_err(usage)?;
            let mut options = config.context_options();
            options.use_fidex &= !no_fidex;
            options.use_cmms &= !no_cmms;
            options.strip_docs &= !keep_docs;
            let input = match (&fixture, &commit) {
                (Some(f), _) => CommitInput::from_fixture(f).map_err(fail)?,
                (None, Some(c)) => CommitInput::from_repo(&repo, c, config.hosting()).map_err(fail)?,
                (None, None) => return Err(usage("either --commit or --fixture is required")),
            };
            let completer = config.completer().map_err(fail)?;
            let model = Model::new(&*completer, &config.model).with_max_tokens(config.max_tokens);
            let ctx = assemble_context(&model, &input, &options).map_err(fail)?;
            for w in &ctx.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let generation = generate(&model, &ctx, config.budgets.prompt_chars).map_err(fail)?;
            if json {
                let versions: serde_json::Map<String, serde_json::Value> =
                    prompts::versions().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                emit(&to_json(&json!({
                    "text": generation.message.render(),
                    "message": generation.message,
                    "reprompted": generation.reprompted,
                    "options": options,
                    "prompt_versions": versions,
                    "context": ctx,
                    "prompt_sections": generation.prompt.sections,
                    "transcript": generation.transcript,
                })))
            } else {
                emit(&format!("{}\n", generation.message.render()))
            }
        }
        Command::Evaluate { dataset, json, .. } => {
            let pairs = load_eval_pairs(&dataset).map_err(fail)?;
            let report = evaluate_corpus(&pairs);
            if json {
                emit(&to_json(&report))
            } else {
                let name = dataset.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                emit(&render_table(&[(name, report)]))
            }
        }
        Command::StripDocs { file, json } => {
            let stripped = strip_documentation(&read_input(&file)?);
            for w in &stripped.warnings {
                let _ = writeln!(err, "warning: line {}: {}", w.line, w.message);
            }
            if json {
                emit(&to_json(&stripped))
            } else {
                emit(&stripped.text)
            }
        }
        Command::Units { file, json } => {
            let units = extract_units(&read_input(&file)?);
            for d in &units.diagnostics {
                let _ = writeln!(err, "warning: {d}");
            }
            if json {
                return emit(&to_json(&units));
            }
            let mut text = String::new();
            for c in &units.classes {
                text.push_str(&format!("class  {} lines {}-{}\n", c.qualified_name, c.span.0, c.span.1));
            }
            for m in &units.methods {
                text.push_str(&format!("method {} lines {}-{}\n", m.qualified_name, m.span.0, m.span.1));
            }
            emit(&text)
        }
        Command::ValidateClassifier { dataset, json, capture } => {
            let records = load_labeled_commits(&dataset).map_err(fail)?;
            apply_capture(&mut config, &capture);
            config.validate().map_err(usage)?;
            let completer = config.completer().map_err(fail)?;
            let model = Model::new(&*completer, &config.model).with_max_tokens(config.max_tokens);
            let budget = config.budgets.unit_chars;
            let report = classifier_accuracy(&records, |r| {
                let diff = parse_unified_diff(r.diff.as_deref().unwrap_or_default()).map_err(|e| e.to_string())?;
                let files: Vec<String> = diff.files.iter().map(|f| f.path().to_string()).collect();
                let narrative = truncate_middle(&render_narrative(&diff).text, budget);
                classify_activity(&model, &narrative, &files)
                    .map(|a| a.value.to_string())
                    .map_err(|e| e.to_string())
            });
            if json {
                emit(&to_json(&report))
            } else {
                emit(&format!(
                    "accuracy {:.4} ({} of {} correct, {} failed)\n",
                    report.accuracy, report.correct, report.total, report.failed
                ))
            }
        }
    }
}

/// Runs the command line with explicit output streams; returns the exit
/// status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
