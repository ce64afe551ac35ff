//! Unified diff parsing.
//!
//! Accepts the output of `git diff` / `git show` (with or without the
//! `diff --git` extended headers) as well as plain `diff -u` output. Hunk
//! bodies are consumed by the counts in their headers, so body lines that
//! happen to look like file headers (`--- x`) are read correctly.

use std::fmt;
use std::path::Path;
use std::process::Command;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const NO_NEWLINE_MARKER: &str = "\\ No newline at end of file";
const DEV_NULL: &str = "/dev/null";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiffError {
    #[error("malformed diff in {path} at byte {offset}: {reason}")]
    MalformedDiff {
        path: String,
        offset: usize,
        reason: String,
    },
    #[error("context mismatch at old line {lineno}: expected {expected:?}, found {found:?}")]
    ContextMismatch {
        lineno: u32,
        expected: String,
        found: String,
    },
    #[error("git invocation failed: {0}")]
    Git(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineKind {
    Context,
    Addition,
    Removal,
}

impl LineKind {
    pub fn mark(self) -> char {
        match self {
            LineKind::Context => ' ',
            LineKind::Addition => '+',
            LineKind::Removal => '-',
        }
    }
}

/// A single body line of a hunk. `content` excludes the mark character and
/// the trailing `\n`, but keeps a `\r` if the file uses CRLF endings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffLine {
    pub kind: LineKind,
    pub content: String,
    pub old_lineno: Option<u32>,
    pub new_lineno: Option<u32>,
    /// Set when the line was followed by `\ No newline at end of file`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub no_newline: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hunk {
    pub old_start: u32,
    pub old_count: u32,
    pub new_start: u32,
    pub new_count: u32,
    /// Text after the closing `@@`, usually the enclosing function.
    #[serde(default)]
    pub section: String,
    pub lines: Vec<DiffLine>,
}

impl Hunk {
    pub fn header(&self) -> String {
        let mut header = format!(
            "@@ -{} +{} @@",
            range(self.old_start, self.old_count),
            range(self.new_start, self.new_count)
        );
        header.push_str(&self.section);
        header
    }

    pub fn additions(&self) -> impl Iterator<Item = &DiffLine> {
        self.lines.iter().filter(|l| l.kind == LineKind::Addition)
    }

    pub fn removals(&self) -> impl Iterator<Item = &DiffLine> {
        self.lines.iter().filter(|l| l.kind == LineKind::Removal)
    }

    /// The hunk body as it appears in diff text, marks re-prepended.
    pub fn render_body(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push(line.kind.mark());
            out.push_str(&line.content);
            out.push('\n');
            if line.no_newline {
                out.push_str(NO_NEWLINE_MARKER);
                out.push('\n');
            }
        }
        out
    }
}

fn range(start: u32, count: u32) -> String {
    if count == 1 {
        start.to_string()
    } else {
        format!("{start},{count}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FileStatus {
    Modified,
    Added,
    Deleted,
    Renamed,
}

impl fmt::Display for FileStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileStatus::Modified => "modified",
            FileStatus::Added => "added",
            FileStatus::Deleted => "deleted",
            FileStatus::Renamed => "renamed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDiff {
    pub old_path: String,
    pub new_path: String,
    pub status: FileStatus,
    pub hunks: Vec<Hunk>,
    pub is_binary: bool,
}

impl FileDiff {
    /// The path that identifies the file after the commit, or before it
    /// for deletions.
    pub fn path(&self) -> &str {
        match self.status {
            FileStatus::Deleted => &self.old_path,
            _ => &self.new_path,
        }
    }

    pub fn added_count(&self) -> usize {
        self.hunks.iter().map(|h| h.additions().count()).sum()
    }

    pub fn removed_count(&self) -> usize {
        self.hunks.iter().map(|h| h.removals().count()).sum()
    }

    /// Renders the file section with normalized headers.
    pub fn render(&self) -> String {
        let mut out = format!("diff --git a/{} b/{}\n", self.old_path, self.new_path);
        match self.status {
            FileStatus::Added => out.push_str("new file mode 100644\n"),
            FileStatus::Deleted => out.push_str("deleted file mode 100644\n"),
            FileStatus::Renamed => {
                out.push_str(&format!("rename from {}\n", self.old_path));
                out.push_str(&format!("rename to {}\n", self.new_path));
            }
            FileStatus::Modified => {}
        }
        if self.is_binary {
            out.push_str(&format!(
                "Binary files {} and {} differ\n",
                self.old_header_path(),
                self.new_header_path()
            ));
            return out;
        }
        if self.hunks.is_empty() {
            return out;
        }
        out.push_str(&format!("--- {}\n", self.old_header_path()));
        out.push_str(&format!("+++ {}\n", self.new_header_path()));
        for hunk in &self.hunks {
            out.push_str(&hunk.header());
            out.push('\n');
            out.push_str(&hunk.render_body());
        }
        out
    }

    fn old_header_path(&self) -> String {
        if self.status == FileStatus::Added {
            DEV_NULL.to_string()
        } else {
            format!("a/{}", self.old_path)
        }
    }

    fn new_header_path(&self) -> String {
        if self.status == FileStatus::Deleted {
            DEV_NULL.to_string()
        } else {
            format!("b/{}", self.new_path)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnifiedDiff {
    pub files: Vec<FileDiff>,
    pub raw_text: String,
}

impl UnifiedDiff {
    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn render(&self) -> String {
        self.files.iter().map(FileDiff::render).collect()
    }
}

/// Splits text into lines, each returned with its starting byte offset.
/// Only `\n` terminates a line; a trailing `\r` stays in the line.
fn split_lines(text: &str) -> Vec<(usize, &str)> {
    let mut lines = Vec::new();
    let mut start = 0;
    for (idx, byte) in text.bytes().enumerate() {
        if byte == b'\n' {
            lines.push((start, &text[start..idx]));
            start = idx + 1;
        }
    }
    if start < text.len() {
        lines.push((start, &text[start..]));
    }
    lines
}

struct PendingFile {
    old_path: Option<String>,
    new_path: Option<String>,
    git_old: Option<String>,
    git_new: Option<String>,
    added: bool,
    deleted: bool,
    renamed: bool,
    is_binary: bool,
    hunks: Vec<Hunk>,
}

impl PendingFile {
    fn new() -> Self {
        PendingFile {
            old_path: None,
            new_path: None,
            git_old: None,
            git_new: None,
            added: false,
            deleted: false,
            renamed: false,
            is_binary: false,
            hunks: Vec::new(),
        }
    }

    fn display_path(&self) -> String {
        self.new_path
            .clone()
            .or_else(|| self.git_new.clone())
            .or_else(|| self.old_path.clone())
            .unwrap_or_else(|| "<unknown>".to_string())
    }

    fn finish(self) -> FileDiff {
        let old_is_null = self.old_path.as_deref() == Some(DEV_NULL);
        let new_is_null = self.new_path.as_deref() == Some(DEV_NULL);
        let added = self.added || old_is_null;
        let deleted = self.deleted || new_is_null;

        let pick = |header: Option<String>, git: Option<String>| -> Option<String> {
            header.filter(|p| p != DEV_NULL).or(git)
        };
        let mut old_path = pick(self.old_path, self.git_old);
        let mut new_path = pick(self.new_path, self.git_new);
        if old_path.is_none() {
            old_path = new_path.clone();
        }
        if new_path.is_none() {
            new_path = old_path.clone();
        }
        let old_path = old_path.unwrap_or_default();
        let new_path = new_path.unwrap_or_default();

        let status = if added {
            FileStatus::Added
        } else if deleted {
            FileStatus::Deleted
        } else if self.renamed || old_path != new_path {
            FileStatus::Renamed
        } else {
            FileStatus::Modified
        };
        FileDiff {
            old_path,
            new_path,
            status,
            hunks: self.hunks,
            is_binary: self.is_binary,
        }
    }
}

/// Strips a `a/` or `b/` prefix, surrounding quotes, and any tab-separated
/// timestamp from a header path.
fn clean_header_path(raw: &str) -> String {
    let raw = raw.trim_end_matches('\r');
    let raw = if raw.starts_with('"') {
        unquote(raw)
    } else {
        raw.split('\t').next().unwrap_or(raw).trim_end().to_string()
    };
    strip_side_prefix(&raw)
}

fn strip_side_prefix(path: &str) -> String {
    if path == DEV_NULL {
        return path.to_string();
    }
    path.strip_prefix("a/")
        .or_else(|| path.strip_prefix("b/"))
        .unwrap_or(path)
        .to_string()
}

fn unquote(raw: &str) -> String {
    let inner = raw.trim_start_matches('"');
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '"' => break,
            '\\' => match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some(other) => out.push(other),
                None => break,
            },
            _ => out.push(c),
        }
    }
    out
}

/// Splits `a/x b/y` from a `diff --git` line. Handles quoted paths and
/// paths containing spaces when both sides are equal.
fn split_git_paths(rest: &str) -> (Option<String>, Option<String>) {
    let rest = rest.trim_end_matches('\r');
    if let Some(quoted) = rest.strip_prefix('"') {
        let end = quoted.find('"').map(|i| i + 2).unwrap_or(rest.len());
        let old = clean_header_path(&rest[..end]);
        let new = clean_header_path(rest[end..].trim_start());
        return (Some(old), Some(new));
    }
    // Prefer the split where both halves name the same path.
    for (idx, _) in rest.match_indices(" b/") {
        let (old, new) = (&rest[..idx], &rest[idx + 1..]);
        if old.strip_prefix("a/") == new.strip_prefix("b/") {
            return (Some(strip_side_prefix(old)), Some(strip_side_prefix(new)));
        }
    }
    match rest.rsplit_once(" b/") {
        Some((old, new)) => (
            Some(strip_side_prefix(old)),
            Some(strip_side_prefix(&format!("b/{new}"))),
        ),
        None => (None, None),
    }
}

struct HunkHeader {
    old_start: u32,
    old_count: u32,
    new_start: u32,
    new_count: u32,
    section: String,
}

fn parse_hunk_header(line: &str) -> Option<HunkHeader> {
    let rest = line.strip_prefix("@@ -")?;
    let end = rest.find(" @@")?;
    let (ranges, tail) = (&rest[..end], &rest[end + 3..]);
    let (old, new) = ranges.split_once(" +")?;
    let parse_range = |r: &str| -> Option<(u32, u32)> {
        match r.split_once(',') {
            Some((s, c)) => Some((s.parse().ok()?, c.parse().ok()?)),
            None => Some((r.parse().ok()?, 1)),
        }
    };
    let (old_start, old_count) = parse_range(old)?;
    let (new_start, new_count) = parse_range(new)?;
    Some(HunkHeader {
        old_start,
        old_count,
        new_start,
        new_count,
        section: tail.trim_end_matches('\r').to_string(),
    })
}

/// Parses unified diff text into files, hunks and lines.
pub fn parse_unified_diff(text: &str) -> Result<UnifiedDiff, DiffError> {
    let lines = split_lines(text);
    let mut files = Vec::new();
    let mut current: Option<PendingFile> = None;
    let mut idx = 0;

    let malformed = |file: &Option<PendingFile>, offset: usize, reason: &str| DiffError::MalformedDiff {
        path: file
            .as_ref()
            .map(PendingFile::display_path)
            .unwrap_or_else(|| "<none>".to_string()),
        offset,
        reason: reason.to_string(),
    };

    while idx < lines.len() {
        let (offset, line) = lines[idx];
        let trimmed = line.trim_end_matches('\r');

        if trimmed.starts_with("diff --cc ") || trimmed.starts_with("diff --combined ") || line.starts_with("@@@") {
            return Err(malformed(&current, offset, "combined diffs are not supported"));
        }

        if let Some(rest) = trimmed.strip_prefix("diff --git ") {
            if let Some(done) = current.take() {
                files.push(done.finish());
            }
            let mut file = PendingFile::new();
            let (old, new) = split_git_paths(rest);
            file.git_old = old;
            file.git_new = new;
            current = Some(file);
            idx += 1;
            continue;
        }

        if trimmed.starts_with("--- ") && lines.get(idx + 1).is_some_and(|(_, l)| l.starts_with("+++ ")) {
            // A plain diff without git headers starts a new file here; so
            // does a second ---/+++ pair in the same git section.
            let needs_new = match &current {
                None => true,
                Some(f) => f.old_path.is_some() || !f.hunks.is_empty(),
            };
            if needs_new {
                if let Some(done) = current.take() {
                    files.push(done.finish());
                }
                current = Some(PendingFile::new());
            }
            let file = current.as_mut().expect("file section present");
            file.old_path = Some(clean_header_path(&trimmed[4..]));
            file.new_path = Some(clean_header_path(lines[idx + 1].1.trim_end_matches('\r').get(4..).unwrap_or("")));
            idx += 2;
            continue;
        }

        if line.starts_with("@@ ") {
            let Some(header) = parse_hunk_header(trimmed) else {
                return Err(malformed(&current, offset, "unreadable hunk header"));
            };
            if current.is_none() {
                return Err(malformed(&current, offset, "hunk outside of a file section"));
            }
            let (hunk, next) = parse_hunk_body(&lines, text.len(), idx + 1, header).map_err(|(off, reason)| {
                malformed(&current, off, &reason)
            })?;
            current.as_mut().expect("checked above").hunks.push(hunk);
            idx = next;
            continue;
        }

        if let Some(file) = current.as_mut() {
            let stray_body = !file.hunks.is_empty()
                && trimmed != "--"
                && trimmed != "-- "
                && matches!(line.as_bytes().first(), Some(b'+' | b'-' | b' '));
            if stray_body {
                return Err(malformed(&current, offset, "body line outside hunk header counts"));
            }
            if trimmed.starts_with("new file mode") {
                file.added = true;
            } else if trimmed.starts_with("deleted file mode") {
                file.deleted = true;
            } else if let Some(p) = trimmed.strip_prefix("rename from ") {
                file.renamed = true;
                file.git_old = Some(p.to_string());
            } else if let Some(p) = trimmed.strip_prefix("rename to ") {
                file.renamed = true;
                file.git_new = Some(p.to_string());
            } else if trimmed.starts_with("Binary files ") || trimmed == "GIT binary patch" {
                file.is_binary = true;
                if trimmed.starts_with("Binary files ") {
                    // `Binary files /dev/null and b/x differ`
                    if trimmed.contains(&format!("{DEV_NULL} and ")) {
                        file.added = true;
                    } else if trimmed.contains(&format!(" and {DEV_NULL} ")) {
                        file.deleted = true;
                    }
                }
            }
            // index, mode, similarity and copy headers carry nothing we keep.
        }
        idx += 1;
    }

    if let Some(done) = current.take() {
        files.push(done.finish());
    }

    Ok(UnifiedDiff {
        files,
        raw_text: text.to_string(),
    })
}

/// Consumes a hunk body driven by the header counts. Returns the hunk and
/// the index of the first line after it.
fn parse_hunk_body(
    lines: &[(usize, &str)],
    text_len: usize,
    mut idx: usize,
    header: HunkHeader,
) -> Result<(Hunk, usize), (usize, String)> {
    let mut old_remaining = header.old_count;
    let mut new_remaining = header.new_count;
    let mut old_lineno = header.old_start.max(1);
    let mut new_lineno = header.new_start.max(1);
    // A zero-length side starts "before" line start+1.
    if header.old_count == 0 {
        old_lineno = header.old_start + 1;
    }
    if header.new_count == 0 {
        new_lineno = header.new_start + 1;
    }
    let mut body = Vec::new();

    while old_remaining > 0 || new_remaining > 0 {
        let Some(&(offset, line)) = lines.get(idx) else {
            return Err((text_len, format!(
                "hunk body ended early: {old_remaining} old and {new_remaining} new lines missing"
            )));
        };
        let (kind, content) = match line.as_bytes().first() {
            Some(b' ') => (LineKind::Context, &line[1..]),
            Some(b'+') => (LineKind::Addition, &line[1..]),
            Some(b'-') => (LineKind::Removal, &line[1..]),
            Some(b'\\') => {
                mark_no_newline(&mut body, offset)?;
                idx += 1;
                continue;
            }
            // Some tools drop the space on empty context lines.
            None => (LineKind::Context, ""),
            Some(b'\r') if line == "\r" => (LineKind::Context, line),
            _ => {
                return Err((offset, format!(
                    "unexpected line in hunk body: {old_remaining} old and {new_remaining} new lines missing"
                )))
            }
        };
        let diff_line = match kind {
            LineKind::Context => {
                if old_remaining == 0 || new_remaining == 0 {
                    return Err((offset, "context line exceeds hunk header counts".to_string()));
                }
                old_remaining -= 1;
                new_remaining -= 1;
                let l = DiffLine {
                    kind,
                    content: content.to_string(),
                    old_lineno: Some(old_lineno),
                    new_lineno: Some(new_lineno),
                    no_newline: false,
                };
                old_lineno += 1;
                new_lineno += 1;
                l
            }
            LineKind::Addition => {
                if new_remaining == 0 {
                    return Err((offset, "addition exceeds hunk header new count".to_string()));
                }
                new_remaining -= 1;
                let l = DiffLine {
                    kind,
                    content: content.to_string(),
                    old_lineno: None,
                    new_lineno: Some(new_lineno),
                    no_newline: false,
                };
                new_lineno += 1;
                l
            }
            LineKind::Removal => {
                if old_remaining == 0 {
                    return Err((offset, "removal exceeds hunk header old count".to_string()));
                }
                old_remaining -= 1;
                let l = DiffLine {
                    kind,
                    content: content.to_string(),
                    old_lineno: Some(old_lineno),
                    new_lineno: None,
                    no_newline: false,
                };
                old_lineno += 1;
                l
            }
        };
        body.push(diff_line);
        idx += 1;
    }

    if let Some(&(offset, line)) = lines.get(idx) {
        if line.starts_with('\\') {
            mark_no_newline(&mut body, offset)?;
            idx += 1;
        }
    }

    Ok((
        Hunk {
            old_start: header.old_start,
            old_count: header.old_count,
            new_start: header.new_start,
            new_count: header.new_count,
            section: header.section,
            lines: body,
        },
        idx,
    ))
}

fn mark_no_newline(body: &mut [DiffLine], offset: usize) -> Result<(), (usize, String)> {
    match body.last_mut() {
        Some(last) => {
            last.no_newline = true;
            Ok(())
        }
        None => Err((offset, "no-newline marker before any hunk line".to_string())),
    }
}

/// Applies a file diff to the content it was computed from.
pub fn reconstruct_post(file_diff: &FileDiff, pre_image: &str) -> Result<String, DiffError> {
    if file_diff.status == FileStatus::Added && !pre_image.is_empty() {
        return Err(DiffError::ContextMismatch {
            lineno: 1,
            expected: String::new(),
            found: pre_image.lines().next().unwrap_or_default().to_string(),
        });
    }
    if file_diff.hunks.is_empty() {
        return Ok(pre_image.to_string());
    }

    // (content, has_newline) for every pre-image line.
    let pre: Vec<(&str, bool)> = split_lines(pre_image)
        .into_iter()
        .map(|(offset, line)| (line, pre_image.as_bytes().get(offset + line.len()) == Some(&b'\n')))
        .collect();

    let mut out = String::with_capacity(pre_image.len());
    let mut cursor = 0usize; // next pre line (0-based) not yet emitted
    let push = |out: &mut String, content: &str, newline: bool| {
        out.push_str(content);
        if newline {
            out.push('\n');
        }
    };

    for hunk in &file_diff.hunks {
        let hunk_first_old = hunk
            .lines
            .iter()
            .find_map(|l| l.old_lineno)
            .map(|n| n as usize - 1)
            .unwrap_or(hunk.old_start as usize);
        if hunk_first_old < cursor || hunk_first_old > pre.len() {
            return Err(DiffError::ContextMismatch {
                lineno: hunk.old_start,
                expected: format!("hunk starting at old line {}", hunk.old_start),
                found: format!("{} pre-image lines, {} already consumed", pre.len(), cursor),
            });
        }
        while cursor < hunk_first_old {
            let (content, nl) = pre[cursor];
            push(&mut out, content, nl);
            cursor += 1;
        }
        for line in &hunk.lines {
            match line.kind {
                LineKind::Context | LineKind::Removal => {
                    let lineno = line.old_lineno.expect("old side line has old_lineno");
                    let found = pre.get(lineno as usize - 1).map(|(c, _)| *c);
                    if found != Some(line.content.as_str()) {
                        return Err(DiffError::ContextMismatch {
                            lineno,
                            expected: line.content.clone(),
                            found: found.unwrap_or("<end of file>").to_string(),
                        });
                    }
                    cursor = lineno as usize;
                    if line.kind == LineKind::Context {
                        push(&mut out, &line.content, !line.no_newline);
                    }
                }
                LineKind::Addition => push(&mut out, &line.content, !line.no_newline),
            }
        }
    }
    while cursor < pre.len() {
        let (content, nl) = pre[cursor];
        push(&mut out, content, nl);
        cursor += 1;
    }
    Ok(out)
}

/// Runs `git show --format= <sha>` in `repo` and returns its stdout.
pub fn git_show_diff(repo: &Path, commit: &str) -> Result<String, DiffError> {
    git_output(repo, &["show", "--format=", "--no-color", "--no-ext-diff", commit])
}

/// Resolves a revision to a full commit id.
pub fn git_resolve(repo: &Path, rev: &str) -> Result<String, DiffError> {
    let spec = format!("{rev}^{{commit}}");
    Ok(git_output(repo, &["rev-parse", "--verify", &spec])?.trim().to_string())
}

/// Reads a file at a given revision, `None` if it does not exist there.
pub fn git_file_at(repo: &Path, rev: &str, path: &str) -> Result<Option<String>, DiffError> {
    let spec = format!("{rev}:{path}");
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(["show", &spec])
        .output()
        .map_err(|e| DiffError::Git(e.to_string()))?;
    if output.status.success() {
        Ok(Some(String::from_utf8_lossy(&output.stdout).into_owned()))
    } else {
        Ok(None)
    }
}

fn git_output(repo: &Path, args: &[&str]) -> Result<String, DiffError> {
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(args)
        .output()
        .map_err(|e| DiffError::Git(e.to_string()))?;
    if !output.status.success() {
        return Err(DiffError::Git(String::from_utf8_lossy(&output.stderr).trim().to_string()));
    }
    Ok(String::from_utf8_lossy(&output.stdout).into_owned())
}
