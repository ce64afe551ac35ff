use once_cell::sync::Lazy;
use regex::Regex;

use super::{ChangeImpactSummary, ContextError, MultiIntentSummary};
use crate::java::{render_change_list, MethodChange};
use crate::llm::{CallSite, Conversation, Model};
use crate::prompts::{CLASS_SUMMARY, CMMS, MMS};
use crate::template::fill;

pub const NOT_APPLICABLE: &str = "not applicable";

// Accepts list markers, headings and bold around the label, and either
// hyphens or spaces inside the two-word labels.
static LABEL: Lazy<Regex> = Lazy::new(|| {
    Regex::new(
        r"(?i)^\s*(?:[-*#>]+\s*|\d+[.)]\s*)*\**\s*(what|why|how[- ]to[- ]use|how[- ]it[- ]is[- ]done|property)\s*\**\s*:\s*\**\s*(.*)$",
    )
    .unwrap()
});

fn aspect_index(label: &str) -> usize {
    let key: String = label.chars().filter(|c| c.is_ascii_alphabetic()).collect::<String>().to_lowercase();
    match key.as_str() {
        "what" => 0,
        "why" => 1,
        "howtouse" => 2,
        "howitisdone" => 3,
        _ => 4,
    }
}

/// Splits a reply into the five labeled aspects.
///
/// Text following a label runs until the next label. Missing or empty
/// aspects become [`NOT_APPLICABLE`]; fewer than three labels is an error.
pub fn parse_aspects(reply: &str) -> Result<MultiIntentSummary, ContextError> {
    let mut slots: [Option<Vec<String>>; 5] = Default::default();
    let mut current: Option<usize> = None;
    for line in reply.lines() {
        if let Some(caps) = LABEL.captures(line) {
            let idx = aspect_index(&caps[1]);
            if slots[idx].is_none() {
                slots[idx] = Some(vec![caps[2].trim_end_matches("**").trim().to_string()]);
                current = Some(idx);
            } else {
                current = None;
            }
            continue;
        }
        if let Some(idx) = current {
            slots[idx].as_mut().unwrap().push(line.trim_end().to_string());
        }
    }
    let found = slots.iter().filter(|s| s.is_some()).count();
    if found < 3 {
        return Err(ContextError::UnparseableSummary { found });
    }
    let [what, why, how_to_use, how_it_is_done, property] = slots.map(|s| {
        let text = s.map(|lines| lines.join("\n").trim().to_string()).unwrap_or_default();
        if text.is_empty() {
            NOT_APPLICABLE.to_string()
        } else {
            text
        }
    });
    Ok(MultiIntentSummary {
        what,
        why,
        how_to_use,
        how_it_is_done,
        property,
    })
}

/// Shortens `text` to at most `budget` characters, keeping its beginning
/// and end around an omission marker.
pub fn truncate_middle(text: &str, budget: usize) -> String {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() <= budget {
        return text.to_string();
    }
    let omitted_max = chars.len();
    let marker_len = format!("\n[... {omitted_max} characters omitted ...]\n").chars().count();
    let keep = budget.saturating_sub(marker_len);
    let head = keep - keep / 2;
    let tail = keep / 2;
    let omitted = chars.len() - head - tail;
    let mut out: String = chars[..head].iter().collect();
    out.push_str(&format!("\n[... {omitted} characters omitted ...]\n"));
    out.extend(&chars[chars.len() - tail..]);
    out
}

fn code_block(code: &str, budget: usize) -> String {
    truncate_middle(code.trim_end(), budget)
}

/// Few-shot five-aspect summary of a method body.
pub fn mms(model: &Model, body: &str, budget: usize) -> Result<MultiIntentSummary, ContextError> {
    if body.trim().is_empty() {
        return Err(ContextError::EmptyBody);
    }
    let mut conv = Conversation::new().system(MMS.system.trim());
    for ex in &MMS.examples {
        conv = conv
            .user(fill(MMS.user.trim(), &[("code", ex.code.trim())]))
            .assistant(ex.summary.trim());
    }
    conv = conv.user(fill(MMS.user.trim(), &[("code", &code_block(body, budget))]));
    parse_aspects(&model.complete(&conv, CallSite::Summary)?)
}

/// Asks how `changes` affect each aspect of `pre_summary`.
pub fn cmms(
    model: &Model,
    pre_summary: &MultiIntentSummary,
    changes: &[MethodChange],
) -> Result<ChangeImpactSummary, ContextError> {
    if changes.is_empty() {
        return Err(ContextError::EmptyChangeList);
    }
    let conv = Conversation::new().system(CMMS.system.trim()).user(fill(
        CMMS.user.trim(),
        &[("summary", &pre_summary.render()), ("changes", &render_change_list(changes))],
    ));
    Ok(ChangeImpactSummary(parse_aspects(&model.complete(&conv, CallSite::Summary)?)?))
}

/// Zero-shot summary of a class body, truncated to `budget` characters.
pub fn summarize_class(model: &Model, body: &str, budget: usize) -> Result<String, ContextError> {
    if body.trim().is_empty() {
        return Err(ContextError::EmptyBody);
    }
    let conv = Conversation::new()
        .system(CLASS_SUMMARY.system.trim())
        .user(fill(CLASS_SUMMARY.user.trim(), &[("code", &code_block(body, budget))]));
    Ok(model.complete(&conv, CallSite::Summary)?.trim().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_labeled_sections() {
        let s = parse_aspects("What: a\nWhy: b\nHow-to-use: c\nHow-it-is-done: d\nProperty: e").unwrap();
        assert_eq!((s.what.as_str(), s.property.as_str()), ("a", "e"));
        assert_eq!(s.how_it_is_done, "d");
    }

    #[test]
    fn missing_property_is_not_applicable() {
        let s = parse_aspects("What: a\nWhy: b\nHow-to-use: c\nHow-it-is-done: d").unwrap();
        assert_eq!(s.property, NOT_APPLICABLE);
    }

    #[test]
    fn markdown_and_continuations() {
        let reply = "Summary:\n1. **What**: adds\n   two numbers\n- **Why:** helper\n### How to use: call it\n";
        let s = parse_aspects(reply).unwrap();
        assert_eq!(s.what, "adds\n   two numbers");
        assert_eq!(s.why, "helper");
        assert_eq!(s.how_to_use, "call it");
        assert_eq!(s.how_it_is_done, NOT_APPLICABLE);
    }

    #[test]
    fn too_few_labels() {
        assert!(matches!(
            parse_aspects("What: x\nsomething else"),
            Err(ContextError::UnparseableSummary { found: 1 })
        ));
    }

    #[test]
    fn render_parses_back() {
        let s = parse_aspects("What: a\nWhy: b\nHow-to-use: c\nHow-it-is-done: d\nProperty: e").unwrap();
        assert_eq!(parse_aspects(&s.render()).unwrap(), s);
    }

    #[test]
    fn truncation_keeps_head_and_tail() {
        let text: String = (0..500).map(|i| char::from(b'a' + (i % 26) as u8)).collect();
        let out = truncate_middle(&text, 100);
        assert!(out.chars().count() <= 100);
        assert!(out.starts_with(&text[..20]));
        assert!(out.ends_with(&text[text.len() - 20..]));
        assert!(out.contains("characters omitted"));
        assert_eq!(truncate_middle("short", 100), "short");
    }
}
