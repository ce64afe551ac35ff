//! Text-similarity scores used to compare generated messages against
//! reference messages: corpus BLEU-4, sentence ROUGE-L and METEOR.
//!
//! All scores are on a 0-100 scale.

mod corpus;

use std::collections::HashMap;

use once_cell::sync::Lazy;
use rust_stemmers::{Algorithm, Stemmer};
use thiserror::Error;

pub use corpus::{
    classifier_accuracy, evaluate_corpus, load_eval_pairs, load_labeled_commits, parse_eval_pairs, render_table,
    ClassifierReport, ColumnScores, CorpusReport, EvalPair, EvalScores, LabeledCommit, ReportMetadata,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("{candidates} candidates but {references} references")]
    LengthMismatch { candidates: usize, references: usize },
    #[error("text is empty after tokenization")]
    EmptyText,
    #[error("invalid dataset line {line}: {message}")]
    Dataset { line: usize, message: String },
    #[error("reading dataset: {0}")]
    Io(String),
}

/// Lowercases, splits on Unicode whitespace, and makes every punctuation
/// character its own token. Letters, digits and `_` form words.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_whitespace() {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
        } else if c.is_alphanumeric() || c == '_' {
            word.extend(c.to_lowercase());
        } else {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
            tokens.push(c.to_lowercase().collect());
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

const MAX_ORDER: usize = 4;

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Corpus-level BLEU-4 over aligned candidate/reference lists.
///
/// Clipped n-gram matches and totals are summed over the corpus before
/// the precisions are taken. An order with n-grams but no matches uses
/// `1 / (2 * total)` as its precision. Orders longer than every candidate
/// are left out of the geometric mean. No unigram overlap at all scores 0.
pub fn bleu<C: AsRef<str>, R: AsRef<str>>(candidates: &[C], references: &[R]) -> Result<f64, MetricError> {
    let cands: Vec<Vec<String>> = candidates.iter().map(|c| tokenize(c.as_ref())).collect();
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenize(r.as_ref())).collect();
    bleu_tokens(&cands, &refs)
}

pub fn bleu_tokens(candidates: &[Vec<String>], references: &[Vec<String>]) -> Result<f64, MetricError> {
    if candidates.len() != references.len() {
        return Err(MetricError::LengthMismatch {
            candidates: candidates.len(),
            references: references.len(),
        });
    }
    if candidates.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }

    let mut matches = [0usize; MAX_ORDER];
    let mut totals = [0usize; MAX_ORDER];
    let mut cand_len = 0usize;
    let mut ref_len = 0usize;
    for (cand, reference) in candidates.iter().zip(references) {
        cand_len += cand.len();
        ref_len += reference.len();
        for n in 1..=MAX_ORDER {
            let ref_counts = ngram_counts(reference, n);
            for (gram, count) in ngram_counts(cand, n) {
                matches[n - 1] += count.min(ref_counts.get(gram).copied().unwrap_or(0));
                totals[n - 1] += count;
            }
        }
    }

    if matches[0] == 0 {
        return Ok(0.0);
    }
    let orders = totals.iter().take_while(|&&t| t > 0).count();
    let log_sum: f64 = (0..orders)
        .map(|i| {
            let p = if matches[i] > 0 {
                matches[i] as f64 / totals[i] as f64
            } else {
                1.0 / (2.0 * totals[i] as f64)
            };
            p.ln()
        })
        .sum();
    let brevity = if cand_len < ref_len {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    } else {
        1.0
    };
    Ok(100.0 * brevity * (log_sum / orders as f64).exp())
}

/// Length of the longest common subsequence of two token lists.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            row[j + 1] = if x == y { prev[j] + 1 } else { row[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[b.len()]
}

/// ROUGE-L F1 (beta = 1).
pub fn rouge_l(candidate: &str, reference: &str) -> Result<f64, MetricError> {
    rouge_l_tokens(&tokenize(candidate), &tokenize(reference))
}

pub fn rouge_l_tokens(candidate: &[String], reference: &[String]) -> Result<f64, MetricError> {
    if candidate.is_empty() || reference.is_empty() {
        return Err(MetricError::EmptyText);
    }
    let lcs = lcs_len(candidate, reference);
    if lcs == 0 {
        return Ok(0.0);
    }
    let precision = lcs as f64 / candidate.len() as f64;
    let recall = lcs as f64 / reference.len() as f64;
    Ok(100.0 * 2.0 * precision * recall / (precision + recall))
}

static STEMMER: Lazy<Stemmer> = Lazy::new(|| Stemmer::create(Algorithm::English));

pub fn stem(word: &str) -> String {
    STEMMER.stem(word).into_owned()
}

/// Pairs of (candidate index, reference index) produced by the two-stage
/// unigram alignment, sorted by candidate index.
///
/// Stage one matches identical tokens, stage two matches tokens with equal
/// stems. In each stage candidate tokens are visited left to right and
/// take the leftmost unmatched reference token that qualifies.
pub fn meteor_alignment(candidate: &[String], reference: &[String]) -> Vec<(usize, usize)> {
    let mut cand_used = vec![false; candidate.len()];
    let mut ref_used = vec![false; reference.len()];
    let mut pairs = Vec::new();

    let mut stage = |cand_keys: &[String], ref_keys: &[String], pairs: &mut Vec<(usize, usize)>| {
        for (i, key) in cand_keys.iter().enumerate() {
            if cand_used[i] {
                continue;
            }
            if let Some(j) = (0..ref_keys.len()).find(|&j| !ref_used[j] && ref_keys[j] == *key) {
                cand_used[i] = true;
                ref_used[j] = true;
                pairs.push((i, j));
            }
        }
    };
    stage(candidate, reference, &mut pairs);
    let cand_stems: Vec<String> = candidate.iter().map(|t| stem(t)).collect();
    let ref_stems: Vec<String> = reference.iter().map(|t| stem(t)).collect();
    stage(&cand_stems, &ref_stems, &mut pairs);

    pairs.sort_unstable();
    pairs
}

/// METEOR with exact and stem matching (no synonym stage).
///
/// `Fmean = 10PR / (R + 9P)`, `penalty = 0.5 * (chunks / m)^3`,
/// `score = Fmean * (1 - penalty)`.
pub fn meteor(candidate: &str, reference: &str) -> Result<f64, MetricError> {
    meteor_tokens(&tokenize(candidate), &tokenize(reference))
}

pub fn meteor_tokens(candidate: &[String], reference: &[String]) -> Result<f64, MetricError> {
    if candidate.is_empty() || reference.is_empty() {
        return Err(MetricError::EmptyText);
    }
    let alignment = meteor_alignment(candidate, reference);
    let m = alignment.len();
    if m == 0 {
        return Ok(0.0);
    }
    let mut chunks = 1;
    for pair in alignment.windows(2) {
        let ((c0, r0), (c1, r1)) = (pair[0], pair[1]);
        if c1 != c0 + 1 || r1 != r0 + 1 {
            chunks += 1;
        }
    }
    let precision = m as f64 / candidate.len() as f64;
    let recall = m as f64 / reference.len() as f64;
    let fmean = 10.0 * precision * recall / (recall + 9.0 * precision);
    let penalty = 0.5 * (chunks as f64 / m as f64).powi(3);
    Ok(100.0 * fmean * (1.0 - penalty))
}
