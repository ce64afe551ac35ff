//! Generators and reference implementations shared by the integration
//! tests and the acceptance harness. Nothing here calls into the code under
//! test except to feed it input.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use once_cell::sync::Lazy;
use proptest::prelude::*;
use regex::Regex;

use omega::diff::{parse_unified_diff, reconstruct_post};
use omega::narrator::{ChangeItem, ChangeKind};

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn data(rel: &str) -> PathBuf {
    manifest_dir().join("data").join(rel)
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// Random file pairs for the round trip.

const LINE_POOL: &[&str] = &[
    "a",
    "b",
    "c",
    "{",
    "}",
    "",
    "    int x = 1;",
    "    return x;",
    "// --- not a header",
    "+++ looks like a header",
    "@@ -1 +1 @@ nor is this",
    " leading space",
    "-dash",
    "tab\there",
    "naïve ünïcode",
];

fn pool_line() -> impl Strategy<Value = String> {
    prop::sample::select(LINE_POOL).prop_map(String::from)
}

#[derive(Debug, Clone)]
pub struct FilePair {
    pub pre: String,
    pub post: String,
    pub context: usize,
}

fn join(lines: &[String], eol: &str, final_newline: bool) -> String {
    let mut text = lines.join(eol);
    if final_newline && !lines.is_empty() {
        text.push_str(eol);
    }
    text
}

/// A pre-image and a post-image made from it by random line edits, with
/// random final-newline handling and occasionally CRLF endings.
pub fn file_pair() -> impl Strategy<Value = FilePair> {
    (
        prop::collection::vec(pool_line(), 0..40),
        prop::collection::vec((0u8..4, any::<u16>(), pool_line()), 0..12),
        any::<bool>(),
        any::<bool>(),
        prop::bool::weighted(0.15),
        0usize..4,
    )
        .prop_map(|(pre_lines, edits, pre_nl, post_nl, crlf, context)| {
            let mut post_lines = pre_lines.clone();
            for (op, pos, line) in edits {
                let at = pos as usize % (post_lines.len() + 1);
                match op {
                    0 => post_lines.insert(at, line),
                    1 if at < post_lines.len() => {
                        post_lines.remove(at);
                    }
                    2 if at < post_lines.len() => post_lines[at] = line,
                    _ => {
                        // A block move: take a line out and put it elsewhere.
                        if at < post_lines.len() {
                            let l = post_lines.remove(at);
                            let to = (pos as usize / 7) % (post_lines.len() + 1);
                            post_lines.insert(to, l);
                        }
                    }
                }
            }
            let eol = if crlf { "\r\n" } else { "\n" };
            FilePair {
                pre: join(&pre_lines, eol, pre_nl),
                post: join(&post_lines, eol, post_nl),
                context,
            }
        })
}

/// The git-style diff of `pair`. Only the sequence of changes comes from
/// `similar`; numbering and hunk grouping are done here because its op
/// indices are not always consistent (2.7 reports deletions at the wrong
/// new index).
pub fn unified_diff_of(pair: &FilePair) -> String {
    let diff = similar::TextDiff::from_lines(&pair.pre, &pair.post);
    // (mark, text, old line, new line), 1-based.
    let mut lines = Vec::new();
    let (mut old, mut new) = (1usize, 1usize);
    for change in diff.iter_all_changes() {
        let mark = match change.tag() {
            similar::ChangeTag::Equal => ' ',
            similar::ChangeTag::Delete => '-',
            similar::ChangeTag::Insert => '+',
        };
        lines.push((mark, change.value(), old, new));
        old += (mark != '+') as usize;
        new += (mark != '-') as usize;
    }
    let changed: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].0 != ' ').collect();
    if changed.is_empty() {
        return String::new();
    }
    // Hunks: changed lines plus `context` lines around them, merged when
    // their context touches.
    let mut spans: Vec<(usize, usize)> = Vec::new();
    for &i in &changed {
        let lo = i.saturating_sub(pair.context);
        let hi = (i + pair.context).min(lines.len() - 1);
        match spans.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => spans.push((lo, hi)),
        }
    }
    let mut out = String::from("diff --git a/src/F.java b/src/F.java\nindex 0000001..0000002 100644\n--- a/src/F.java\n+++ b/src/F.java\n");
    for (lo, hi) in spans {
        let body = &lines[lo..=hi];
        let old_len = body.iter().filter(|l| l.0 != '+').count();
        let new_len = body.iter().filter(|l| l.0 != '-').count();
        // An empty side names the line before the hunk.
        let old_start = if old_len == 0 { body[0].2 - 1 } else { body[0].2 };
        let new_start = if new_len == 0 { body[0].3 - 1 } else { body[0].3 };
        out.push_str(&format!("@@ -{old_start},{old_len} +{new_start},{new_len} @@\n"));
        for (mark, value, _, _) in body {
            out.push(*mark);
            out.push_str(value);
            if !value.ends_with('\n') {
                out.push_str("\n\\ No newline at end of file\n");
            }
        }
    }
    out
}

/// Parses the diff of `pair` and applies it to the pre-image.
pub fn round_trip(pair: &FilePair) -> Result<(), String> {
    let text = unified_diff_of(pair);
    let parsed = parse_unified_diff(&text).map_err(|e| format!("parse: {e}\n{text}"))?;
    let rebuilt = match parsed.files.as_slice() {
        [] => pair.pre.clone(),
        [file] => reconstruct_post(file, &pair.pre).map_err(|e| format!("reconstruct: {e}\n{text}"))?,
        files => return Err(format!("{} files parsed from a one-file diff", files.len())),
    };
    if rebuilt == pair.post {
        Ok(())
    } else {
        Err(format!("rebuilt post-image differs\n--- diff\n{text}\n--- expected {:?}\n--- got {:?}", pair.post, rebuilt))
    }
}

// ---------------------------------------------------------------------------
// Synthetic diffs with arbitrary line-mark sequences.

/// Files, each a list of hunks, each a list of marks (' ', '-', '+').
pub type Marks = Vec<Vec<Vec<char>>>;

pub fn marks() -> impl Strategy<Value = Marks> {
    let hunk = prop::collection::vec(prop::sample::select(vec![' ', '-', '+']), 1..25);
    let file = prop::collection::vec(hunk, 1..4);
    prop::collection::vec(file, 1..4)
}

pub fn synth_path(file: usize) -> String {
    format!("src/S{file}.java")
}

/// One hunk line with the line numbers the oracle assigns to it.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthLine {
    pub mark: char,
    pub old: Option<u32>,
    pub new: Option<u32>,
    pub content: String,
}

#[derive(Debug, Clone)]
pub struct SynthHunk {
    /// Old and new line number of the hunk's first line.
    pub start: (u32, u32),
    pub lines: Vec<SynthLine>,
}

/// Lays out the hunks of every file with a gap of unchanged lines between
/// them and numbers their lines.
pub fn synth_layout(m: &Marks) -> Vec<Vec<SynthHunk>> {
    let mut files = Vec::new();
    for (fi, hunks) in m.iter().enumerate() {
        let (mut old, mut new) = (1u32, 1u32);
        let mut laid = Vec::new();
        for (hi, marks) in hunks.iter().enumerate() {
            old += 3;
            new += 3;
            let start = (old, new);
            let mut lines = Vec::new();
            for (li, &mark) in marks.iter().enumerate() {
                let word = match mark {
                    ' ' => "same",
                    '-' => "gone",
                    _ => "came",
                };
                let content = format!("{word} f{fi} h{hi} l{li}");
                let o = (mark != '+').then_some(old);
                let n = (mark != '-').then_some(new);
                old += o.is_some() as u32;
                new += n.is_some() as u32;
                lines.push(SynthLine { mark, old: o, new: n, content });
            }
            laid.push(SynthHunk { start, lines });
        }
        files.push(laid);
    }
    files
}

pub fn synth_diff_text(m: &Marks) -> String {
    let mut out = String::new();
    for (fi, hunks) in synth_layout(m).iter().enumerate() {
        let path = synth_path(fi);
        out.push_str(&format!("diff --git a/{path} b/{path}\nindex 1234567..89abcde 100644\n--- a/{path}\n+++ b/{path}\n"));
        for h in hunks {
            let old_count = h.lines.iter().filter(|l| l.old.is_some()).count() as u32;
            let new_count = h.lines.iter().filter(|l| l.new.is_some()).count() as u32;
            // An empty side names the line before the hunk, as git does.
            let old_start = if old_count == 0 { h.start.0 - 1 } else { h.start.0 };
            let new_start = if new_count == 0 { h.start.1 - 1 } else { h.start.1 };
            out.push_str(&format!("@@ -{old_start},{old_count} +{new_start},{new_count} @@\n"));
            for l in &h.lines {
                out.push(l.mark);
                out.push_str(&l.content);
                out.push('\n');
            }
        }
    }
    out
}

static CHUNK: Lazy<Regex> = Lazy::new(|| Regex::new(r"-+\+*|\++").unwrap());

/// What the narrator must produce for synthetic marks: `(kind, file, old
/// line numbers, new line numbers)` per change item, in order.
pub type ExpectedItem = (ChangeKind, String, Vec<u32>, Vec<u32>);

pub fn expected_items(m: &Marks) -> Vec<ExpectedItem> {
    let mut items = Vec::new();
    for (fi, hunks) in synth_layout(m).iter().enumerate() {
        for SynthHunk { lines, .. } in hunks {
            let marks: String = lines.iter().map(|l| l.mark).collect();
            for chunk in CHUNK.find_iter(&marks) {
                let span = &lines[chunk.start()..chunk.end()];
                let kind = match (chunk.as_str().contains('-'), chunk.as_str().contains('+')) {
                    (true, true) => ChangeKind::ReplacementChunk,
                    (true, false) => ChangeKind::RemovalChunk,
                    _ => ChangeKind::AdditionChunk,
                };
                items.push((
                    kind,
                    synth_path(fi),
                    span.iter().filter_map(|l| l.old).collect(),
                    span.iter().filter_map(|l| l.new).collect(),
                ));
            }
        }
    }
    items
}

pub fn actual_items(items: &[ChangeItem]) -> Vec<ExpectedItem> {
    items
        .iter()
        .map(|i| {
            (
                i.kind,
                i.file.clone(),
                i.removed_lines.iter().map(|l| l.lineno).collect(),
                i.added_lines.iter().map(|l| l.lineno).collect(),
            )
        })
        .collect()
}

/// Checks partition, kind soundness, numbering and the two adjacency rules
/// directly on the narrator output, independent of [`expected_items`].
pub fn chunk_violations(m: &Marks, items: &[ChangeItem]) -> Vec<String> {
    let mut v = Vec::new();
    for (n, item) in items.iter().enumerate() {
        if item.index != n + 1 {
            v.push(format!("item {} has index {}", n + 1, item.index));
        }
        let sound = match item.kind {
            ChangeKind::AdditionChunk => item.removed_lines.is_empty() && !item.added_lines.is_empty(),
            ChangeKind::RemovalChunk => !item.removed_lines.is_empty() && item.added_lines.is_empty(),
            ChangeKind::ReplacementChunk => !item.removed_lines.is_empty() && !item.added_lines.is_empty(),
        };
        if !sound {
            v.push(format!("item {} is {:?} with {} removed / {} added lines", item.index, item.kind, item.removed_lines.len(), item.added_lines.len()));
        }
    }
    for (fi, hunks) in synth_layout(m).iter().enumerate() {
        let path = synth_path(fi);
        let owner = |l: &SynthLine| -> Vec<usize> {
            items
                .iter()
                .filter(|i| i.file == path)
                .filter(|i| match l.mark {
                    '-' => i.removed_lines.iter().any(|x| Some(x.lineno) == l.old && x.content == l.content),
                    '+' => i.added_lines.iter().any(|x| Some(x.lineno) == l.new && x.content == l.content),
                    _ => i.removed_lines.iter().chain(&i.added_lines).any(|x| x.content == l.content),
                })
                .map(|i| i.index)
                .collect()
        };
        for SynthHunk { lines, .. } in hunks {
            for l in lines {
                let o = owner(l);
                match (l.mark, o.len()) {
                    (' ', 0) | ('-', 1) | ('+', 1) => {}
                    _ => v.push(format!("{path}: line {:?} owned by items {o:?}", l.content)),
                }
            }
            for pair in lines.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                let (oa, ob) = (owner(a), owner(b));
                match (a.mark, b.mark) {
                    ('-', '+') if oa != ob => v.push(format!("{path}: removal {:?} and following addition {:?} not merged", a.content, b.content)),
                    ('+', '-') if !oa.is_empty() && oa == ob => v.push(format!("{path}: addition {:?} merged with following removal {:?}", a.content, b.content)),
                    _ => {}
                }
            }
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Java scanner used as the reference for documentation stripping.

#[derive(Debug, Default, PartialEq)]
pub struct Scanned {
    /// Non-comment tokens: whitespace-separated code runs and whole
    /// literals. Comments separate tokens like whitespace does.
    pub tokens: Vec<String>,
    pub literals: Vec<String>,
    pub comments: usize,
}

pub fn scan_java(src: &str) -> Scanned {
    let chars: Vec<char> = src.chars().collect();
    let mut s = Scanned::default();
    let mut cur = String::new();
    let flush = |cur: &mut String, s: &mut Scanned| {
        if !cur.is_empty() {
            s.tokens.push(std::mem::take(cur));
        }
    };
    let starts = |i: usize, pat: &str| pat.chars().enumerate().all(|(k, c)| chars.get(i + k) == Some(&c));
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if starts(i, "//") {
            flush(&mut cur, &mut s);
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            s.comments += 1;
        } else if starts(i, "/*") {
            flush(&mut cur, &mut s);
            i += 2;
            while i < chars.len() && !starts(i, "*/") {
                i += 1;
            }
            i += 2;
            s.comments += 1;
        } else if starts(i, "\"\"\"") || c == '"' || c == '\'' {
            flush(&mut cur, &mut s);
            let close = if starts(i, "\"\"\"") { "\"\"\"" } else if c == '"' { "\"" } else { "'" };
            let mut lit: String = close.to_string();
            i += close.len();
            while i < chars.len() && !starts(i, close) {
                if chars[i] == '\\' && i + 1 < chars.len() {
                    lit.push(chars[i]);
                    i += 1;
                }
                lit.push(chars[i]);
                i += 1;
            }
            lit.push_str(close);
            i += close.len();
            s.literals.push(lit.clone());
            s.tokens.push(lit);
        } else if c.is_whitespace() {
            flush(&mut cur, &mut s);
            i += 1;
        } else {
            cur.push(c);
            i += 1;
        }
    }
    flush(&mut cur, &mut s);
    s
}

pub fn java_corpus() -> Vec<(String, String)> {
    let mut files: Vec<_> = std::fs::read_dir(data("java_corpus"))
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "java"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), read(&p)))
        .collect()
}

// ---------------------------------------------------------------------------
// Metric references.

/// LCS length by trying every subsequence of `a`, longest first.
pub fn brute_force_lcs(a: &[String], b: &[String]) -> usize {
    assert!(a.len() <= 16, "brute force is exponential");
    let is_subseq = |mask: u32| {
        let mut it = b.iter();
        (0..a.len()).filter(|k| mask & (1 << k) != 0).all(|k| it.any(|t| *t == a[k]))
    };
    (0..(1u32 << a.len()))
        .filter(|&m| is_subseq(m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn rouge_from_lcs(lcs: usize, cand: usize, reference: usize) -> f64 {
    if lcs == 0 {
        return 0.0;
    }
    let p = lcs as f64 / cand as f64;
    let r = lcs as f64 / reference as f64;
    100.0 * 2.0 * p * r / (p + r)
}

/// Every token list over `alphabet` with length at most `max_len`.
pub fn all_sequences(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<String>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for t in alphabet {
                let mut s = seq.clone();
                s.push(t.to_string());
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// BLEU worked examples: `(candidates, references, score)`, scores from
/// `tests/oracles/metrics_oracle.py --worked`.
pub const BLEU_WORKED: &[(&[&str], &[&str], f64)] = &[
    (&["the the the"], &["the cat sat"], 34.66806371753174),
    (&["fix: guard null pointer in parser"], &["fix: guard against null pointer in the parser"], 32.10964829328844),
    (
        &["add retry to client", "fix typo"],
        &["add retry logic to the http client", "fix typo in readme"],
        21.729910425353914,
    ),
];

// ---------------------------------------------------------------------------
// Pipeline helpers.

pub const SAMPLE_FIXTURE: &str = "sample/commit.json";
pub const SAMPLE_CAPTURE: &str = "sample/capture.jsonl";
pub const SAMPLE_MESSAGE: &str = "sample/expected_message.txt";

/// Headings of the generation prompt in the order they must appear.
pub const SECTION_HEADINGS: [&str; 8] = [
    "## Commit diff",
    "## Diff explanation",
    "## Associated issues",
    "## Associated pull requests",
    "## Relative importance of changed files",
    "## Software maintenance activity type",
    "## Summaries of affected methods",
    "## Summaries of affected classes",
];

pub static HEADER: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(fix|feat|refactor|style): .+").unwrap());

/// Splits a summaries section into `(heading, entry)` pairs.
pub fn summary_entries(section: &str) -> Vec<(String, String)> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for line in section.lines() {
        if let Some(h) = line.strip_prefix("### ") {
            entries.push((h.to_string(), String::new()));
        } else if let Some((_, body)) = entries.last_mut() {
            body.push_str(line);
            body.push('\n');
        }
    }
    entries
}

/// Runs the `omega` binary in `dir` with `args`; returns (status, stdout,
/// stderr).
pub fn omega(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_omega"))
        .args(args)
        .current_dir(dir)
        .env_remove("OMEGA_API_KEY")
        .env_remove("GITHUB_TOKEN")
        .output()
        .expect("omega binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
