use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::units::{extract_units, ClassRecord, MethodRecord, Units};
use super::JavaError;
use crate::diff::{FileDiff, FileStatus, UnifiedDiff};
use crate::narrator::{extract_change_items, ChangeItem, ChangeKind, NumberedLine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum UnitKind {
    Class,
    Method,
}

/// Identifies a unit across the two sides of a commit. `name` is the class
/// path for classes and `Class#method/arity` for methods (the full
/// parameter list when arity alone is ambiguous).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UnitKey {
    pub path: String,
    pub kind: UnitKind,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum UnitStatus {
    Added,
    Deleted,
    Modified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum UnitRecord {
    Class(ClassRecord),
    Method(MethodRecord),
}

impl UnitRecord {
    pub fn span(&self) -> (u32, u32) {
        match self {
            UnitRecord::Class(c) => c.span,
            UnitRecord::Method(m) => m.span,
        }
    }

    pub fn qualified_name(&self) -> &str {
        match self {
            UnitRecord::Class(c) => &c.qualified_name,
            UnitRecord::Method(m) => &m.qualified_name,
        }
    }

    pub fn body(&self) -> &str {
        match self {
            UnitRecord::Class(c) => &c.body,
            UnitRecord::Method(m) => &m.body,
        }
    }

    pub fn doc_stripped_body(&self) -> &str {
        match self {
            UnitRecord::Class(c) => &c.doc_stripped_body,
            UnitRecord::Method(m) => &m.doc_stripped_body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffectedUnit {
    pub status: UnitStatus,
    pub pre: Option<UnitRecord>,
    pub post: Option<UnitRecord>,
    /// Change items of the unit's file that overlap either span.
    pub items: Vec<ChangeItem>,
}

pub fn is_java(path: &str) -> bool {
    path.ends_with(".java")
}

fn keyed_units(units: Units, ambiguous: &BTreeSet<String>, path: &str) -> BTreeMap<UnitKey, UnitRecord> {
    let mut out = BTreeMap::new();
    for class in units.classes {
        let key = UnitKey {
            path: path.to_string(),
            kind: UnitKind::Class,
            name: class.qualified_name.clone(),
        };
        out.insert(key, UnitRecord::Class(class));
    }
    for method in units.methods {
        let identity = method.identity();
        let name = if ambiguous.contains(&identity) {
            method.qualified_name.clone()
        } else {
            identity
        };
        let key = UnitKey {
            path: path.to_string(),
            kind: UnitKind::Method,
            name,
        };
        out.insert(key, UnitRecord::Method(method));
    }
    out
}

fn ambiguous_identities(sides: &[&Units]) -> BTreeSet<String> {
    let mut ambiguous = BTreeSet::new();
    for units in sides {
        let mut seen = HashMap::new();
        for m in &units.methods {
            *seen.entry(m.identity()).or_insert(0) += 1;
        }
        ambiguous.extend(seen.into_iter().filter(|(_, n)| *n > 1).map(|(k, _)| k));
    }
    ambiguous
}

fn overlaps(lines: &[NumberedLine], span: (u32, u32)) -> bool {
    lines.iter().any(|l| l.lineno >= span.0 && l.lineno <= span.1)
}

fn item_touches(item: &ChangeItem, pre: Option<(u32, u32)>, post: Option<(u32, u32)>) -> bool {
    pre.is_some_and(|s| overlaps(&item.removed_lines, s)) || post.is_some_and(|s| overlaps(&item.added_lines, s))
}

fn source_for<'a>(sources: &'a HashMap<String, String>, path: &str) -> Result<&'a str, JavaError> {
    sources
        .get(path)
        .map(String::as_str)
        .ok_or_else(|| JavaError::MissingSource(path.to_string()))
}

/// Finds the classes and methods a diff touches in its Java files.
///
/// A unit present on both sides is `Modified` when a change item overlaps
/// its pre-commit or post-commit span. Units present on one side only are
/// `Added` or `Deleted`.
pub fn affected_units(
    diff: &UnifiedDiff,
    pre_sources: &HashMap<String, String>,
    post_sources: &HashMap<String, String>,
) -> Result<BTreeMap<UnitKey, AffectedUnit>, JavaError> {
    let items = extract_change_items(diff);
    let mut result = BTreeMap::new();
    for file in diff.files.iter().filter(|f| is_java(f.path()) && !f.is_binary) {
        let file_items: Vec<&ChangeItem> = items.iter().filter(|i| i.file == file.path()).collect();
        file_units(file, &file_items, pre_sources, post_sources, &mut result)?;
    }
    Ok(result)
}

fn file_units(
    file: &FileDiff,
    items: &[&ChangeItem],
    pre_sources: &HashMap<String, String>,
    post_sources: &HashMap<String, String>,
    result: &mut BTreeMap<UnitKey, AffectedUnit>,
) -> Result<(), JavaError> {
    let pre_units = match file.status {
        FileStatus::Added => extract_units(""),
        _ => extract_units(source_for(pre_sources, &file.old_path)?),
    };
    let post_units = match file.status {
        FileStatus::Deleted => extract_units(""),
        _ => extract_units(source_for(post_sources, &file.new_path)?),
    };
    let ambiguous = ambiguous_identities(&[&pre_units, &post_units]);
    let path = file.path();
    let mut pre = keyed_units(pre_units, &ambiguous, path);
    let mut post = keyed_units(post_units, &ambiguous, path);

    let keys: BTreeSet<UnitKey> = pre.keys().chain(post.keys()).cloned().collect();
    for key in keys {
        let before = pre.remove(&key);
        let after = post.remove(&key);
        let pre_span = before.as_ref().map(UnitRecord::span);
        let post_span = after.as_ref().map(UnitRecord::span);
        let touching: Vec<ChangeItem> = items
            .iter()
            .filter(|i| item_touches(i, pre_span, post_span))
            .map(|i| (*i).clone())
            .collect();
        let status = match (&before, &after) {
            (Some(_), Some(_)) if touching.is_empty() => continue,
            (Some(_), Some(_)) => UnitStatus::Modified,
            (None, Some(_)) => UnitStatus::Added,
            (Some(_), None) => UnitStatus::Deleted,
            (None, None) => continue,
        };
        result.insert(
            key,
            AffectedUnit {
                status,
                pre: before,
                post: after,
                items: touching,
            },
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MethodChangeKind {
    SignatureChanged,
    LinesAdded,
    LinesRemoved,
    LinesReplaced,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodChange {
    pub kind: MethodChangeKind,
    pub detail: String,
    pub items: Vec<ChangeItem>,
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn range_text(lines: &[NumberedLine]) -> String {
    match (lines.first(), lines.last()) {
        (Some(a), Some(b)) if a.lineno == b.lineno => format!("line {}", a.lineno),
        (Some(a), Some(b)) => format!("lines {}-{}", a.lineno, b.lineno),
        _ => String::new(),
    }
}

fn describe(kind: MethodChangeKind, item: &ChangeItem) -> String {
    let mut detail = match kind {
        MethodChangeKind::LinesAdded => format!("Lines added at new {}:", range_text(&item.added_lines)),
        MethodChangeKind::LinesRemoved => format!("Lines removed at old {}:", range_text(&item.removed_lines)),
        _ => format!(
            "Lines replaced at old {} / new {}:",
            range_text(&item.removed_lines),
            range_text(&item.added_lines)
        ),
    };
    for line in &item.removed_lines {
        detail.push_str("\n- ");
        detail.push_str(line.content.trim());
    }
    for line in &item.added_lines {
        detail.push_str("\n+ ");
        detail.push_str(line.content.trim());
    }
    detail
}

/// Lists what changed between two versions of a method: a signature change
/// when the declarations differ beyond whitespace, then one entry per change
/// item overlapping the method. Lines inside the declaration are left out
/// of the line-level entries when the signature change already covers them.
pub fn method_change_list(pre: &MethodRecord, post: &MethodRecord, items: &[ChangeItem]) -> Vec<MethodChange> {
    let mut changes = Vec::new();
    let signature_changed = normalize_ws(&pre.signature) != normalize_ws(&post.signature);
    if signature_changed {
        changes.push(MethodChange {
            kind: MethodChangeKind::SignatureChanged,
            detail: format!("Signature changed from `{}` to `{}`", pre.signature, post.signature),
            items: Vec::new(),
        });
    }
    let pre_header = (pre.span.0, pre.body_start_line);
    let post_header = (post.span.0, post.body_start_line);
    let keep = |line: &NumberedLine, span: (u32, u32), header: (u32, u32)| {
        let inside = line.lineno >= span.0 && line.lineno <= span.1;
        let in_header = line.lineno >= header.0 && line.lineno <= header.1;
        inside && !(signature_changed && in_header)
    };

    for item in items {
        let removed: Vec<NumberedLine> = item
            .removed_lines
            .iter()
            .filter(|l| keep(l, pre.span, pre_header))
            .cloned()
            .collect();
        let added: Vec<NumberedLine> = item
            .added_lines
            .iter()
            .filter(|l| keep(l, post.span, post_header))
            .cloned()
            .collect();
        let kind = match (removed.is_empty(), added.is_empty()) {
            (true, true) => continue,
            (false, false) => MethodChangeKind::LinesReplaced,
            (true, false) => MethodChangeKind::LinesAdded,
            (false, true) => MethodChangeKind::LinesRemoved,
        };
        let restricted = ChangeItem {
            index: item.index,
            kind: match kind {
                MethodChangeKind::LinesAdded => ChangeKind::AdditionChunk,
                MethodChangeKind::LinesRemoved => ChangeKind::RemovalChunk,
                _ => ChangeKind::ReplacementChunk,
            },
            file: item.file.clone(),
            removed_lines: removed,
            added_lines: added,
        };
        changes.push(MethodChange {
            kind,
            detail: describe(kind, &restricted),
            items: vec![restricted],
        });
    }
    changes
}

/// Renders a change list as the numbered text given to the model.
pub fn render_change_list(changes: &[MethodChange]) -> String {
    changes
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{}. {}", i + 1, c.detail))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::parse_unified_diff;

    const PRE: &str = "import java.util.List;\n\nclass Calc {\n    int add(int a, int b) {\n        return a + b;\n    }\n\n    int twice(int a) {\n        return a * 2;\n    }\n}\n";

    fn sources(path: &str, text: &str) -> HashMap<String, String> {
        HashMap::from([(path.to_string(), text.to_string())])
    }

    fn diff_of(pre: &str, post: &str) -> UnifiedDiff {
        let text = similar_unified(pre, post);
        parse_unified_diff(&text).unwrap()
    }

    // Minimal line diff for fixtures: one hunk covering the whole file.
    fn similar_unified(pre: &str, post: &str) -> String {
        let pre_lines: Vec<&str> = pre.lines().collect();
        let post_lines: Vec<&str> = post.lines().collect();
        let mut prefix = 0;
        while prefix < pre_lines.len().min(post_lines.len()) && pre_lines[prefix] == post_lines[prefix] {
            prefix += 1;
        }
        let mut suffix = 0;
        while suffix < (pre_lines.len() - prefix).min(post_lines.len() - prefix)
            && pre_lines[pre_lines.len() - 1 - suffix] == post_lines[post_lines.len() - 1 - suffix]
        {
            suffix += 1;
        }
        let mut body = String::new();
        for l in &pre_lines[..prefix] {
            body.push_str(&format!(" {l}\n"));
        }
        for l in &pre_lines[prefix..pre_lines.len() - suffix] {
            body.push_str(&format!("-{l}\n"));
        }
        for l in &post_lines[prefix..post_lines.len() - suffix] {
            body.push_str(&format!("+{l}\n"));
        }
        for l in &pre_lines[pre_lines.len() - suffix..] {
            body.push_str(&format!(" {l}\n"));
        }
        format!(
            "--- a/Calc.java\n+++ b/Calc.java\n@@ -1,{} +1,{} @@\n{body}",
            pre_lines.len(),
            post_lines.len()
        )
    }

    #[test]
    fn change_inside_method_marks_method_and_class() {
        let post = PRE.replace("a + b", "b + a");
        let diff = diff_of(PRE, &post);
        let units = affected_units(&diff, &sources("Calc.java", PRE), &sources("Calc.java", &post)).unwrap();
        let summary: Vec<_> = units.iter().map(|(k, v)| (k.name.as_str(), v.status)).collect();
        assert_eq!(
            summary,
            vec![("Calc", UnitStatus::Modified), ("Calc#add/2", UnitStatus::Modified)]
        );
    }

    #[test]
    fn appended_method_is_added() {
        let post = PRE.replace("        return a * 2;\n    }\n", "        return a * 2;\n    }\n\n    int neg(int a) {\n        return -a;\n    }\n");
        let diff = diff_of(PRE, &post);
        let units = affected_units(&diff, &sources("Calc.java", PRE), &sources("Calc.java", &post)).unwrap();
        let added: Vec<_> = units
            .iter()
            .filter(|(k, _)| k.kind == UnitKind::Method)
            .map(|(k, v)| (k.name.as_str(), v.status))
            .collect();
        assert_eq!(added, vec![("Calc#neg/1", UnitStatus::Added)]);
    }

    #[test]
    fn import_only_change_affects_nothing() {
        let post = PRE.replace("java.util.List", "java.util.ArrayList");
        let diff = diff_of(PRE, &post);
        let units = affected_units(&diff, &sources("Calc.java", PRE), &sources("Calc.java", &post)).unwrap();
        assert!(units.is_empty());
    }

    #[test]
    fn missing_source_is_an_error() {
        let post = PRE.replace("a + b", "b + a");
        let diff = diff_of(PRE, &post);
        let err = affected_units(&diff, &HashMap::new(), &sources("Calc.java", &post)).unwrap_err();
        assert_eq!(err, JavaError::MissingSource("Calc.java".into()));
    }

    fn method<'a>(units: &'a Units, name: &str) -> &'a MethodRecord {
        units.methods.iter().find(|m| m.name == name).unwrap()
    }

    #[test]
    fn signature_change_only() {
        let post = PRE.replace("int twice(int a)", "int twice(int a, int unused)");
        let diff = diff_of(PRE, &post);
        let items = extract_change_items(&diff);
        let pre_units = extract_units(PRE);
        let post_units = extract_units(&post);
        let changes = method_change_list(method(&pre_units, "twice"), method(&post_units, "twice"), &items);
        assert_eq!(changes.len(), 1);
        assert_eq!(changes[0].kind, MethodChangeKind::SignatureChanged);
        assert!(changes[0].detail.contains("int twice(int a)"));
        assert!(changes[0].detail.contains("int twice(int a, int unused)"));
    }

    #[test]
    fn identical_method_has_no_changes() {
        let units = extract_units(PRE);
        let m = method(&units, "add");
        assert!(method_change_list(m, m, &[]).is_empty());
    }

    #[test]
    fn replaced_statement() {
        let post = PRE.replace("return a * 2;", "return a << 1;");
        let diff = diff_of(PRE, &post);
        let items = extract_change_items(&diff);
        let pre_units = extract_units(PRE);
        let post_units = extract_units(&post);
        let changes = method_change_list(method(&pre_units, "twice"), method(&post_units, "twice"), &items);
        assert_eq!(changes.len(), 1);
        assert_eq!(changes[0].kind, MethodChangeKind::LinesReplaced);
        assert_eq!(changes[0].items[0].removed_lines[0].lineno, 9);
        assert_eq!(changes[0].detail, "Lines replaced at old line 9 / new line 9:\n- return a * 2;\n+ return a << 1;");
        // The other method is untouched by the same items.
        let add_changes = method_change_list(method(&pre_units, "add"), method(&post_units, "add"), &items);
        assert!(add_changes.is_empty());
    }
}
