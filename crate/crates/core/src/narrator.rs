//! The diff narrator: splits a parsed diff into change items and renders
//! them as a numbered, plain-text narrative.

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::diff::{FileDiff, FileStatus, LineKind, UnifiedDiff};
use crate::template::fill;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChangeKind {
    AdditionChunk,
    RemovalChunk,
    ReplacementChunk,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberedLine {
    pub lineno: u32,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeItem {
    /// 1-based, global across all files of the diff.
    pub index: usize,
    pub kind: ChangeKind,
    pub file: String,
    pub removed_lines: Vec<NumberedLine>,
    pub added_lines: Vec<NumberedLine>,
}

impl ChangeItem {
    pub fn old_range(&self) -> Option<(u32, u32)> {
        span_of(&self.removed_lines)
    }

    pub fn new_range(&self) -> Option<(u32, u32)> {
        span_of(&self.added_lines)
    }
}

fn span_of(lines: &[NumberedLine]) -> Option<(u32, u32)> {
    Some((lines.first()?.lineno, lines.last()?.lineno))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffNarrative {
    pub items: Vec<ChangeItem>,
    pub text: String,
}

#[derive(Deserialize)]
struct NarrativeTemplate {
    empty: String,
    file_header: String,
    renamed_file_header: String,
    binary_file_header: String,
    addition: String,
    removal: String,
    replacement: String,
    old_line: String,
    new_line: String,
    single_range: String,
    multi_range: String,
}

static TEMPLATE: Lazy<NarrativeTemplate> = Lazy::new(|| {
    toml::from_str(include_str!("../resources/narrative.toml")).expect("bundled narrative template is valid")
});

/// Run state while walking one hunk.
#[derive(Default)]
struct Run {
    removed: Vec<NumberedLine>,
    added: Vec<NumberedLine>,
}

impl Run {
    fn is_empty(&self) -> bool {
        self.removed.is_empty() && self.added.is_empty()
    }

    fn take_item(&mut self, file: &str, items: &mut Vec<ChangeItem>) {
        if self.is_empty() {
            return;
        }
        let removed = std::mem::take(&mut self.removed);
        let added = std::mem::take(&mut self.added);
        let kind = match (removed.is_empty(), added.is_empty()) {
            (false, false) => ChangeKind::ReplacementChunk,
            (true, false) => ChangeKind::AdditionChunk,
            _ => ChangeKind::RemovalChunk,
        };
        items.push(ChangeItem {
            index: items.len() + 1,
            kind,
            file: file.to_string(),
            removed_lines: removed,
            added_lines: added,
        });
    }
}

fn file_items(file: &FileDiff, items: &mut Vec<ChangeItem>) {
    let path = file.path();
    for hunk in &file.hunks {
        let mut run = Run::default();
        for line in &hunk.lines {
            match line.kind {
                LineKind::Context => run.take_item(path, items),
                LineKind::Removal => {
                    // A removal after any addition starts a new chunk.
                    if !run.added.is_empty() {
                        run.take_item(path, items);
                    }
                    run.removed.push(NumberedLine {
                        lineno: line.old_lineno.expect("removal has old line number"),
                        content: line.content.clone(),
                    });
                }
                LineKind::Addition => run.added.push(NumberedLine {
                    lineno: line.new_lineno.expect("addition has new line number"),
                    content: line.content.clone(),
                }),
            }
        }
        run.take_item(path, items);
    }
}

pub fn extract_change_items(diff: &UnifiedDiff) -> Vec<ChangeItem> {
    let mut items = Vec::new();
    for file in &diff.files {
        file_items(file, &mut items);
    }
    items
}

fn render_range(range: Option<(u32, u32)>) -> String {
    let t = &*TEMPLATE;
    match range {
        Some((start, end)) if start == end => fill(&t.single_range, &[("start", &start.to_string())]),
        Some((start, end)) => fill(&t.multi_range, &[("start", &start.to_string()), ("end", &end.to_string())]),
        None => String::new(),
    }
}

fn file_header(file: &FileDiff) -> String {
    let t = &*TEMPLATE;
    let status = file.status.to_string();
    let vars = [("path", file.path()), ("status", status.as_str()), ("old_path", file.old_path.as_str())];
    if file.is_binary {
        fill(&t.binary_file_header, &vars)
    } else if file.status == FileStatus::Renamed {
        fill(&t.renamed_file_header, &vars)
    } else {
        fill(&t.file_header, &vars)
    }
}

fn render_item(item: &ChangeItem, out: &mut Vec<String>) {
    let t = &*TEMPLATE;
    let index = item.index.to_string();
    let old_range = render_range(item.old_range());
    let new_range = render_range(item.new_range());
    let vars = [
        ("index", index.as_str()),
        ("path", item.file.as_str()),
        ("old_range", old_range.as_str()),
        ("new_range", new_range.as_str()),
    ];
    let heading = match item.kind {
        ChangeKind::AdditionChunk => &t.addition,
        ChangeKind::RemovalChunk => &t.removal,
        ChangeKind::ReplacementChunk => &t.replacement,
    };
    out.push(fill(heading, &vars));
    for line in &item.removed_lines {
        out.push(fill(&t.old_line, &[("content", &line.content)]));
    }
    for line in &item.added_lines {
        out.push(fill(&t.new_line, &[("content", &line.content)]));
    }
}

/// Renders the numbered narrative. Each file section opens with a header
/// line naming the path and status, followed by that file's items.
pub fn render_narrative(diff: &UnifiedDiff) -> DiffNarrative {
    if diff.files.is_empty() {
        return DiffNarrative {
            items: Vec::new(),
            text: TEMPLATE.empty.clone(),
        };
    }

    let mut items = Vec::new();
    let mut sections = Vec::with_capacity(diff.files.len());
    for file in &diff.files {
        let first = items.len();
        file_items(file, &mut items);
        let mut lines = vec![file_header(file)];
        for item in &items[first..] {
            render_item(item, &mut lines);
        }
        sections.push(lines.join("\n"));
    }
    DiffNarrative {
        items,
        text: sections.join("\n\n"),
    }
}
