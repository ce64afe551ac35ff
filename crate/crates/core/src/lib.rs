//! Commit message generation for Java repositories from rich commit
//! context, against any OpenAI-compatible chat endpoint.
//!
//! A run goes diff -> [`narrator`] -> [`fidex`] explanation, plus issue
//! and pull request lookup, activity classification and method/class
//! summaries ([`context`]), then one generation call ([`generator`]).
//! [`metrics`] scores the results against reference messages.
//!
//! Every model call goes through [`llm::Completer`], so a run can be
//! recorded to a capture file and replayed without an endpoint:
//!
//! ```no_run
//! use omega::context::{assemble_context, CommitInput, ContextOptions};
//! use omega::generator::{generate, DEFAULT_PROMPT_BUDGET};
//! use omega::llm::{Model, Replayer};
//!
//! let replayer = Replayer::open("capture.jsonl".as_ref())?;
//! let model = Model::new(&replayer, "meta-llama/Meta-Llama-3-8B-Instruct");
//! let input = CommitInput::from_fixture("commit.json".as_ref())?;
//! let ctx = assemble_context(&model, &input, &ContextOptions::omega())?;
//! println!("{}", generate(&model, &ctx, DEFAULT_PROMPT_BUDGET)?.message);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod diff;
pub mod narrator;
pub mod java;

pub mod llm;
pub mod prompts;
pub mod fidex;
pub mod context;
pub mod generator;

pub mod metrics;

pub mod config;
pub mod cli;

mod template;
