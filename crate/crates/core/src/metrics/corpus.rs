use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{bleu_tokens, meteor_tokens, rouge_l_tokens, tokenize, MetricError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalPair {
    pub commit_id: String,
    pub candidate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_omg: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_human: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalScores {
    pub bleu: f64,
    pub meteor: f64,
    pub rouge_l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnScores {
    pub scores: EvalScores,
    /// Pairs that carried this reference.
    pub pairs: usize,
    /// Pairs without this reference.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub tokenizer: &'static str,
    pub bleu: &'static str,
    pub meteor: &'static str,
    pub rouge_l: &'static str,
}

impl Default for ReportMetadata {
    fn default() -> Self {
        ReportMetadata {
            tokenizer: "lowercase; split on Unicode whitespace; each punctuation character is a token",
            bleu: "corpus-level BLEU-4, uniform weights, brevity penalty exp(1-r/c); zero-match orders use 1/(2*total); no unigram overlap scores 0",
            meteor: "sentence-level, macro-averaged; exact then stem (Snowball English) matching, no synonyms; alpha=0.9, beta=3, gamma=0.5",
            rouge_l: "sentence-level LCS F1 (beta=1), macro-averaged",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub reference_omg: Option<ColumnScores>,
    pub reference_human: Option<ColumnScores>,
    pub metadata: ReportMetadata,
}

fn column(pairs: &[EvalPair], reference: impl Fn(&EvalPair) -> Option<&String>) -> Option<ColumnScores> {
    let scored: Vec<(Vec<String>, Vec<String>)> = pairs
        .iter()
        .filter_map(|p| reference(p).map(|r| (tokenize(&p.candidate), tokenize(r))))
        .collect();
    if scored.is_empty() {
        return None;
    }
    let (cands, refs): (Vec<_>, Vec<_>) = scored.iter().cloned().unzip();
    let bleu = bleu_tokens(&cands, &refs).unwrap_or(0.0);
    // Empty texts cannot be scored at sentence level; they count as 0.
    let mean = |f: fn(&[String], &[String]) -> Result<f64, MetricError>| {
        scored.iter().map(|(c, r)| f(c, r).unwrap_or(0.0)).sum::<f64>() / scored.len() as f64
    };
    Some(ColumnScores {
        scores: EvalScores {
            bleu,
            meteor: mean(meteor_tokens),
            rouge_l: mean(rouge_l_tokens),
        },
        pairs: scored.len(),
        skipped: pairs.len() - scored.len(),
    })
}

/// Scores candidates against the OMG and human reference columns
/// separately. A column with no references is reported as `None`.
pub fn evaluate_corpus(pairs: &[EvalPair]) -> CorpusReport {
    CorpusReport {
        reference_omg: column(pairs, |p| p.reference_omg.as_ref()),
        reference_human: column(pairs, |p| p.reference_human.as_ref()),
        metadata: ReportMetadata::default(),
    }
}

pub fn parse_eval_pairs(text: &str) -> Result<Vec<EvalPair>, MetricError> {
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let pair: EvalPair = serde_json::from_str(line).map_err(|e| MetricError::Dataset {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if pair.reference_omg.is_none() && pair.reference_human.is_none() {
            return Err(MetricError::Dataset {
                line: idx + 1,
                message: format!("pair {} has no reference", pair.commit_id),
            });
        }
        pairs.push(pair);
    }
    Ok(pairs)
}

pub fn load_eval_pairs(path: &Path) -> Result<Vec<EvalPair>, MetricError> {
    let text = fs::read_to_string(path).map_err(|e| MetricError::Io(format!("{}: {e}", path.display())))?;
    parse_eval_pairs(&text)
}

fn cell(col: &Option<ColumnScores>) -> [String; 3] {
    match col {
        Some(c) => [
            format!("{:.2}", c.scores.bleu),
            format!("{:.2}", c.scores.meteor),
            format!("{:.2}", c.scores.rouge_l),
        ],
        None => ["-".to_string(), "-".to_string(), "-".to_string()],
    }
}

/// Renders one row per named report under grouped Reference OMG /
/// Reference Human column headers.
pub fn render_table(rows: &[(String, CorpusReport)]) -> String {
    let name_width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max("Approach".len());
    let mut out = String::new();
    out.push_str(&format!(
        "| {:<name_width$} | {:^26} | {:^26} |\n",
        "", "Reference OMG", "Reference Human"
    ));
    out.push_str(&format!(
        "| {:<name_width$} | {:>6} | {:>7} | {:>7} | {:>6} | {:>7} | {:>7} |\n",
        "Approach", "BLEU", "METEOR", "ROUGE-L", "BLEU", "METEOR", "ROUGE-L"
    ));
    out.push_str(&format!(
        "|{}|{}|{}|{}|{}|{}|{}|\n",
        "-".repeat(name_width + 2),
        "-".repeat(8),
        "-".repeat(9),
        "-".repeat(9),
        "-".repeat(8),
        "-".repeat(9),
        "-".repeat(9)
    ));
    for (name, report) in rows {
        let [ob, om, or] = cell(&report.reference_omg);
        let [hb, hm, hr] = cell(&report.reference_human);
        out.push_str(&format!(
            "| {name:<name_width$} | {ob:>6} | {om:>7} | {or:>7} | {hb:>6} | {hm:>7} | {hr:>7} |\n"
        ));
    }
    out
}

/// A commit with a manually assigned maintenance activity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCommit {
    pub commit_id: String,
    /// Inline diff text; alternatively `diff_path`, relative to the dataset.
    #[serde(default)]
    pub diff: Option<String>,
    #[serde(default)]
    pub diff_path: Option<String>,
    /// `Corrective`, `Perfective` or `Adaptive`.
    pub label: String,
}

pub fn load_labeled_commits(path: &Path) -> Result<Vec<LabeledCommit>, MetricError> {
    let text = fs::read_to_string(path).map_err(|e| MetricError::Io(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut record: LabeledCommit = serde_json::from_str(line).map_err(|e| MetricError::Dataset {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if record.diff.is_none() {
            let Some(rel) = &record.diff_path else {
                return Err(MetricError::Dataset {
                    line: idx + 1,
                    message: "record needs `diff` or `diff_path`".to_string(),
                });
            };
            let diff_file = base.join(rel);
            let diff = fs::read_to_string(&diff_file)
                .map_err(|e| MetricError::Io(format!("{}: {e}", diff_file.display())))?;
            record.diff = Some(diff);
        }
        records.push(record);
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifierReport {
    pub total: usize,
    pub correct: usize,
    pub failed: usize,
    pub accuracy: f64,
}

/// Runs `classify` over each record and compares the predicted activity
/// (by name, case-insensitive) with the label. Classification errors count
/// as wrong answers.
pub fn classifier_accuracy<E>(
    records: &[LabeledCommit],
    mut classify: impl FnMut(&LabeledCommit) -> Result<String, E>,
) -> ClassifierReport {
    let mut correct = 0;
    let mut failed = 0;
    for record in records {
        match classify(record) {
            Ok(predicted) if predicted.eq_ignore_ascii_case(record.label.trim()) => correct += 1,
            Ok(_) => {}
            Err(_) => failed += 1,
        }
    }
    let total = records.len();
    ClassifierReport {
        total,
        correct,
        failed,
        accuracy: if total == 0 { 0.0 } else { correct as f64 / total as f64 },
    }
}
