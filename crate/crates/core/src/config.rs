//! Settings read from `omega.toml`.
//!
//! Every key is optional. The endpoint credential is never read from the
//! file, only from `OMEGA_API_KEY`; the hosting token only from
//! `GITHUB_TOKEN`. Sampling temperature is not a setting at all.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{ContextOptions, HostingConfig};
use crate::fidex::FidexMode;
use crate::generator::DEFAULT_PROMPT_BUDGET;
use crate::llm::{Completer, HttpClient, LlmError, MaxTokens, Recorder, Replayer, RetryPolicy};

pub const API_KEY_ENV: &str = "OMEGA_API_KEY";
pub const HOSTING_TOKEN_ENV: &str = "GITHUB_TOKEN";
pub const DEFAULT_CONFIG_FILE: &str = "omega.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Llm(#[from] LlmError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaptureMode {
    #[default]
    Off,
    Record,
    Replay,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaptureConfig {
    pub mode: CaptureMode,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryConfig {
    pub max_attempts: u32,
    pub base_delay_ms: u64,
}

impl Default for RetryConfig {
    fn default() -> Self {
        RetryConfig {
            max_attempts: 3,
            base_delay_ms: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Characters in the final generation prompt.
    pub prompt_chars: usize,
    /// Characters of code or change text in one summary or classification
    /// prompt.
    pub unit_chars: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            prompt_chars: DEFAULT_PROMPT_BUDGET,
            unit_chars: 12_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub use_fidex: bool,
    pub use_cmms: bool,
    pub strip_docs: bool,
    pub fidex_mode: FidexMode,
    pub concurrency: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            use_fidex: true,
            use_cmms: true,
            strip_docs: true,
            fidex_mode: FidexMode::Single,
            concurrency: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HostingSection {
    #[serde(default = "default_api_base")]
    pub api_base: String,
    pub repo: String,
}

fn default_api_base() -> String {
    "https://api.github.com".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub endpoint_url: String,
    pub model: String,
    pub request_timeout_secs: u64,
    pub max_tokens: MaxTokens,
    pub budgets: Budgets,
    pub retry: RetryConfig,
    pub capture: CaptureConfig,
    pub pipeline: PipelineConfig,
    pub hosting: Option<HostingSection>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            endpoint_url: "http://localhost:8000".into(),
            model: "meta-llama/Meta-Llama-3-8B-Instruct".into(),
            request_timeout_secs: 300,
            max_tokens: MaxTokens::default(),
            budgets: Budgets::default(),
            retry: RetryConfig::default(),
            capture: CaptureConfig::default(),
            pipeline: PipelineConfig::default(),
            hosting: None,
        }
    }
}

impl Config {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    /// Loads `path`, or `./omega.toml` when no path is given and that file
    /// exists, or the defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None => {
                let default = PathBuf::from(DEFAULT_CONFIG_FILE);
                if !default.exists() {
                    return Ok(Config::default());
                }
                default
            }
        };
        let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match (self.capture.mode, &self.capture.path) {
            (CaptureMode::Off, _) => {}
            (_, None) => return Err(ConfigError::Invalid("capture mode needs a capture path".into())),
            (CaptureMode::Replay, Some(p)) if !p.is_file() => {
                return Err(ConfigError::Invalid(format!("capture file {} does not exist", p.display())))
            }
            _ => {}
        }
        if self.model.trim().is_empty() {
            return Err(ConfigError::Invalid("model name is empty".into()));
        }
        if self.pipeline.concurrency == 0 {
            return Err(ConfigError::Invalid("pipeline.concurrency must be at least 1".into()));
        }
        Ok(())
    }

    pub fn context_options(&self) -> ContextOptions {
        ContextOptions {
            use_cmms: self.pipeline.use_cmms,
            strip_docs: self.pipeline.strip_docs,
            use_fidex: self.pipeline.use_fidex,
            fidex_mode: self.pipeline.fidex_mode,
            unit_char_budget: self.budgets.unit_chars,
            concurrency: self.pipeline.concurrency,
        }
    }

    pub fn hosting(&self) -> Option<HostingConfig> {
        self.hosting.as_ref().map(|h| HostingConfig {
            api_base: h.api_base.clone(),
            repo: h.repo.clone(),
            token: std::env::var(HOSTING_TOKEN_ENV).ok().filter(|t| !t.is_empty()),
        })
    }

    /// The completer selected by the capture mode: a live client, a live
    /// client that records, or a replayer.
    pub fn completer(&self) -> Result<Box<dyn Completer>, ConfigError> {
        self.validate()?;
        let live = || {
            HttpClient::new(
                &self.endpoint_url,
                std::env::var(API_KEY_ENV).ok(),
                RetryPolicy {
                    max_attempts: self.retry.max_attempts,
                    base_delay: Duration::from_millis(self.retry.base_delay_ms),
                },
                Duration::from_secs(self.request_timeout_secs),
            )
        };
        let path = self.capture.path.as_deref();
        Ok(match self.capture.mode {
            CaptureMode::Off => Box::new(live()?),
            CaptureMode::Record => Box::new(Recorder::create(live()?, path.expect("validated"))?),
            CaptureMode::Replay => Box::new(Replayer::open(path.expect("validated"))?),
        })
    }
}
