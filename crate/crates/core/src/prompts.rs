//! Prompt templates, compiled in from `resources/prompts/*.toml`.
//!
//! Each file carries a `version` that is bumped whenever its wording
//! changes, so capture files can be matched to the prompts that made them.

use once_cell::sync::Lazy;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct FidexPrompts {
    pub version: u32,
    pub system: String,
    pub ask_instructions: String,
    pub instructions: String,
    pub describe: String,
    pub output: String,
}

#[derive(Debug, Deserialize)]
pub struct ClassifierPrompts {
    pub version: u32,
    pub system: String,
    pub user: String,
    pub retry: String,
}

#[derive(Debug, Deserialize)]
pub struct SimplePrompt {
    pub version: u32,
    pub system: String,
    pub user: String,
}

#[derive(Debug, Deserialize)]
pub struct Exemplar {
    pub code: String,
    pub summary: String,
}

#[derive(Debug, Deserialize)]
pub struct MmsPrompts {
    pub version: u32,
    pub system: String,
    pub user: String,
    pub examples: Vec<Exemplar>,
}

#[derive(Debug, Deserialize)]
pub struct GenerationPrompts {
    pub version: u32,
    pub system: String,
    pub instructions: String,
    pub retry: String,
}

fn load<T: serde::de::DeserializeOwned>(name: &str, text: &str) -> T {
    toml::from_str(text).unwrap_or_else(|e| panic!("bundled prompt {name} is invalid: {e}"))
}

pub static FIDEX: Lazy<FidexPrompts> =
    Lazy::new(|| load("fidex.toml", include_str!("../resources/prompts/fidex.toml")));
pub static CLASSIFIER: Lazy<ClassifierPrompts> =
    Lazy::new(|| load("classifier.toml", include_str!("../resources/prompts/classifier.toml")));
pub static CLASS_SUMMARY: Lazy<SimplePrompt> =
    Lazy::new(|| load("class_summary.toml", include_str!("../resources/prompts/class_summary.toml")));
pub static MMS: Lazy<MmsPrompts> = Lazy::new(|| load("mms.toml", include_str!("../resources/prompts/mms.toml")));
pub static CMMS: Lazy<SimplePrompt> = Lazy::new(|| load("cmms.toml", include_str!("../resources/prompts/cmms.toml")));
pub static GENERATION: Lazy<GenerationPrompts> =
    Lazy::new(|| load("generation.toml", include_str!("../resources/prompts/generation.toml")));

/// Versions of every prompt family, for reports and capture metadata.
pub fn versions() -> Vec<(&'static str, u32)> {
    vec![
        ("fidex", FIDEX.version),
        ("classifier", CLASSIFIER.version),
        ("class_summary", CLASS_SUMMARY.version),
        ("mms", MMS.version),
        ("cmms", CMMS.version),
        ("generation", GENERATION.version),
    ]
}

/// The pipeline step a conversation belongs to, recognised by its system
/// message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromptKind {
    Fidex,
    Classifier,
    ClassSummary,
    Mms,
    Cmms,
    Generation,
}

pub fn identify(system_message: &str) -> Option<PromptKind> {
    let table = [
        (FIDEX.system.as_str(), PromptKind::Fidex),
        (CLASSIFIER.system.as_str(), PromptKind::Classifier),
        (CLASS_SUMMARY.system.as_str(), PromptKind::ClassSummary),
        (MMS.system.as_str(), PromptKind::Mms),
        (CMMS.system.as_str(), PromptKind::Cmms),
        (GENERATION.system.as_str(), PromptKind::Generation),
    ];
    table.iter().find(|(s, _)| *s == system_message).map(|(_, k)| *k)
}
