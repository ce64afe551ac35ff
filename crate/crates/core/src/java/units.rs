//! Class and method extraction by brace matching over the token stream.
//!
//! There is no Java grammar here. Members are delimited by `;` or by a
//! balanced `{ ... }` at parenthesis depth zero, and classified by the
//! tokens in front of the brace.

use serde::Serialize;

use super::lexer::{lex, Token, TokenKind};
use super::strip::strip_documentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
    Record,
    Annotation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    /// Dotted nesting path, e.g. `Outer.Inner`.
    pub qualified_name: String,
    pub kind: TypeKind,
    pub body: String,
    /// Inclusive 1-based line range.
    pub span: (u32, u32),
    pub doc_stripped_body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodRecord {
    /// `Outer.Inner#name(T1,T2)`.
    pub qualified_name: String,
    pub class_name: String,
    pub name: String,
    pub param_types: Vec<String>,
    /// Declaration text up to the opening brace, comments removed and
    /// whitespace collapsed.
    pub signature: String,
    pub body: String,
    pub span: (u32, u32),
    /// Line holding the opening brace of the body.
    pub body_start_line: u32,
    pub doc_stripped_body: String,
}

impl MethodRecord {
    pub fn arity(&self) -> usize {
        self.param_types.len()
    }

    /// `Class#name/arity`, the cross-commit identity of a method.
    pub fn identity(&self) -> String {
        format!("{}#{}/{}", self.class_name, self.name, self.arity())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Units {
    pub classes: Vec<ClassRecord>,
    pub methods: Vec<MethodRecord>,
    /// Non-empty when extraction stopped early; the units found up to that
    /// point are still returned.
    pub diagnostics: Vec<String>,
}

impl Units {
    pub fn is_complete(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

const TYPE_KEYWORDS: [(&str, TypeKind); 4] = [
    ("class", TypeKind::Class),
    ("interface", TypeKind::Interface),
    ("enum", TypeKind::Enum),
    ("record", TypeKind::Record),
];

struct Extractor<'a> {
    src: &'a str,
    toks: Vec<Token>,
    lines: Vec<&'a str>,
    classes: Vec<ClassRecord>,
    methods: Vec<MethodRecord>,
    diagnostics: Vec<String>,
}

enum Member {
    Type { kind: TypeKind, name: String },
    Method { name: String, params: (usize, usize) },
    Initializer,
    Block,
}

impl<'a> Extractor<'a> {
    fn text(&self, i: usize) -> &'a str {
        self.toks[i].text(self.src)
    }

    fn is(&self, i: usize, s: &str) -> bool {
        i < self.toks.len() && self.text(i) == s
    }

    /// Index just past the token matching the opener at `open`, or `None`
    /// at end of input.
    fn matching(&self, open: usize, opener: &str, closer: &str) -> Option<usize> {
        let mut depth = 0usize;
        for i in open..self.toks.len() {
            let t = self.text(i);
            if self.toks[i].kind != TokenKind::Punct {
                continue;
            }
            if t == opener {
                depth += 1;
            } else if t == closer {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
        }
        None
    }

    /// Skips an annotation starting at `i` (`@Name.Part(args)`), returning
    /// the index after it.
    fn skip_annotation(&self, mut i: usize) -> usize {
        i += 1; // '@'
        if i < self.toks.len() && self.toks[i].kind == TokenKind::Ident {
            i += 1;
        }
        while self.is(i, ".") && i + 1 < self.toks.len() && self.toks[i + 1].kind == TokenKind::Ident {
            i += 2;
        }
        if self.is(i, "(") {
            i = self.matching(i, "(", ")").unwrap_or(self.toks.len());
        }
        i
    }

    fn classify(&self, start: usize, brace: usize) -> Member {
        let mut i = start;
        let mut first_paren = None;
        let mut has_assign = false;
        while i < brace {
            let t = self.text(i);
            let kind = self.toks[i].kind;
            if t == "@" && kind == TokenKind::Punct {
                if self.is(i + 1, "interface") && first_paren.is_none() && !has_assign {
                    if let Some(name) = self.ident_at(i + 2) {
                        return Member::Type { kind: TypeKind::Annotation, name };
                    }
                }
                i = self.skip_annotation(i);
                continue;
            }
            if kind == TokenKind::Ident && first_paren.is_none() && !has_assign {
                let after_dot = i > 0 && self.is(i - 1, ".");
                if !after_dot {
                    if let Some((_, tk)) = TYPE_KEYWORDS.iter().find(|(k, _)| *k == t) {
                        if let Some(name) = self.ident_at(i + 1) {
                            return Member::Type { kind: *tk, name };
                        }
                    }
                }
            }
            if kind == TokenKind::Punct {
                match t {
                    "=" => has_assign = true,
                    "(" if first_paren.is_none() => first_paren = Some(i),
                    _ => {}
                }
            }
            if t == "(" {
                i = self.matching(i, "(", ")").unwrap_or(brace).min(brace);
                continue;
            }
            i += 1;
        }
        if has_assign {
            return Member::Initializer;
        }
        match first_paren {
            Some(p) if p > start && self.toks[p - 1].kind == TokenKind::Ident => {
                let close = self.matching(p, "(", ")").unwrap_or(brace);
                Member::Method {
                    name: self.text(p - 1).to_string(),
                    params: (p + 1, close.saturating_sub(1)),
                }
            }
            _ => Member::Block,
        }
    }

    fn ident_at(&self, i: usize) -> Option<String> {
        (i < self.toks.len() && self.toks[i].kind == TokenKind::Ident).then(|| self.text(i).to_string())
    }

    fn span_text(&self, first_line: u32, last_line: u32) -> String {
        self.lines[(first_line - 1) as usize..last_line as usize].join("\n")
    }

    fn param_types(&self, (from, to): (usize, usize)) -> Vec<String> {
        let mut params = Vec::new();
        let mut current = Vec::new();
        let mut angle = 0i32;
        let mut i = from;
        while i < to {
            let t = self.text(i);
            match t {
                "@" => {
                    i = self.skip_annotation(i);
                    continue;
                }
                "<" => angle += 1,
                ">" => angle -= 1,
                "(" => {
                    let end = self.matching(i, "(", ")").unwrap_or(to).min(to);
                    current.extend(i..end);
                    i = end;
                    continue;
                }
                "," if angle == 0 => {
                    params.push(std::mem::take(&mut current));
                    i += 1;
                    continue;
                }
                _ => {}
            }
            current.push(i);
            i += 1;
        }
        if !current.is_empty() {
            params.push(current);
        }
        params
            .into_iter()
            .filter_map(|toks| {
                let toks: Vec<usize> = toks.into_iter().filter(|&i| self.text(i) != "final").collect();
                // Drop the parameter name (last identifier, before any `[]`).
                let name_pos = toks.iter().rposition(|&i| self.toks[i].kind == TokenKind::Ident)?;
                let mut ty: Vec<usize> = toks[..name_pos].to_vec();
                ty.extend_from_slice(&toks[name_pos + 1..]);
                if ty.is_empty() {
                    // Receiver-less lambda-style or malformed; keep the name.
                    return Some(self.text(toks[name_pos]).to_string());
                }
                Some(join_type(ty.iter().map(|&i| self.text(i))))
            })
            .collect()
    }

    fn signature(&self, start: usize, brace: usize) -> String {
        let from = self.toks[start].start;
        let to = self.toks[brace].start;
        let stripped = strip_documentation(&self.src[from..to]).text;
        stripped.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    /// Walks the members of a type body (or the top level when `owner` is
    /// `None`) starting at `i`. Returns the index after the closing brace.
    fn members(&mut self, mut i: usize, owner: Option<(&str, TypeKind)>) -> Option<usize> {
        if let Some((_, TypeKind::Enum)) = owner {
            i = self.enum_constants(i)?;
        }
        loop {
            if i >= self.toks.len() {
                return if owner.is_none() { Some(i) } else { None };
            }
            let t = self.text(i);
            if t == "}" {
                if owner.is_none() {
                    self.diagnostics
                        .push(format!("unbalanced '}}' at line {}", self.toks[i].line));
                    i += 1;
                    continue;
                }
                return Some(i + 1);
            }
            if t == ";" {
                i += 1;
                continue;
            }

            let start = i;
            let mut j = i;
            let mut terminator = None;
            while j < self.toks.len() {
                match (self.toks[j].kind, self.text(j)) {
                    (TokenKind::Punct, "(") => {
                        j = self.matching(j, "(", ")")?;
                        continue;
                    }
                    (TokenKind::Punct, "@") => {
                        j = self.skip_annotation(j);
                        continue;
                    }
                    (TokenKind::Punct, ";") | (TokenKind::Punct, "{") | (TokenKind::Punct, "}") => {
                        terminator = Some(j);
                        break;
                    }
                    _ => j += 1,
                }
            }
            let Some(j) = terminator else {
                return if owner.is_none() { Some(j) } else { None };
            };
            match self.text(j) {
                ";" => {
                    i = j + 1;
                    continue;
                }
                "}" => {
                    i = j;
                    continue;
                }
                _ => {}
            }

            let brace = j;
            match self.classify(start, brace) {
                Member::Type { kind, name } => {
                    let qualified = match owner {
                        Some((outer, _)) => format!("{outer}.{name}"),
                        None => name,
                    };
                    let after = match self.members(brace + 1, Some((&qualified, kind))) {
                        Some(after) => after,
                        None => {
                            self.diagnostics.push(format!(
                                "unterminated body of {qualified} starting at line {}",
                                self.toks[start].line
                            ));
                            return None;
                        }
                    };
                    let span = (self.toks[start].line, self.toks[after - 1].line);
                    let body = self.span_text(span.0, span.1);
                    self.classes.push(ClassRecord {
                        qualified_name: qualified,
                        kind,
                        doc_stripped_body: strip_documentation(&body).text,
                        body,
                        span,
                    });
                    i = after;
                }
                Member::Method { name, params } if owner.is_some() => {
                    let (class_name, _) = owner.expect("guarded");
                    let Some(after) = self.matching(brace, "{", "}") else {
                        self.diagnostics.push(format!(
                            "unterminated body of {class_name}#{name} starting at line {}",
                            self.toks[start].line
                        ));
                        return None;
                    };
                    let param_types = self.param_types(params);
                    let span = (self.toks[start].line, self.toks[after - 1].line);
                    let body = self.span_text(span.0, span.1);
                    self.methods.push(MethodRecord {
                        qualified_name: format!("{class_name}#{name}({})", param_types.join(",")),
                        class_name: class_name.to_string(),
                        name,
                        param_types,
                        signature: self.signature(start, brace),
                        doc_stripped_body: strip_documentation(&body).text,
                        body,
                        span,
                        body_start_line: self.toks[brace].line,
                    });
                    i = after;
                }
                Member::Initializer => {
                    // Field initializer with braces (array literal, anonymous
                    // class, lambda): skip through to its `;`.
                    let mut k = brace;
                    loop {
                        if k >= self.toks.len() {
                            return None;
                        }
                        match self.text(k) {
                            "{" => k = self.matching(k, "{", "}")?,
                            "(" => k = self.matching(k, "(", ")")?,
                            ";" => break,
                            "}" => break,
                            _ => k += 1,
                        }
                    }
                    i = if self.is(k, ";") { k + 1 } else { k };
                }
                Member::Method { .. } | Member::Block => {
                    i = self.matching(brace, "{", "}")?;
                }
            }
        }
    }

    /// Skips the constant list at the start of an enum body.
    fn enum_constants(&self, mut i: usize) -> Option<usize> {
        while i < self.toks.len() {
            match self.text(i) {
                ";" => return Some(i + 1),
                "}" => return Some(i),
                "{" => i = self.matching(i, "{", "}")?,
                "(" => i = self.matching(i, "(", ")")?,
                "@" => i = self.skip_annotation(i),
                _ => i += 1,
            }
        }
        None
    }
}

/// Joins type tokens, spacing only between word-like tokens so that
/// `List < ? extends T >` becomes `List<? extends T>`.
fn join_type<'t>(tokens: impl Iterator<Item = &'t str>) -> String {
    let wordy = |c: char| c.is_alphanumeric() || c == '_' || c == '$' || c == '?';
    let mut out = String::new();
    for t in tokens {
        if t.starts_with(wordy) && out.ends_with(wordy) {
            out.push(' ');
        }
        out.push_str(t);
    }
    out
}

/// Extracts classes (including nested types) and methods with bodies.
/// Abstract and interface methods without a body are not reported.
pub fn extract_units(source: &str) -> Units {
    let lexed = lex(source);
    let mut diagnostics = Vec::new();
    if let Some(err) = &lexed.error {
        diagnostics.push(format!("unterminated {} at line {}", err.what, err.line));
    }
    let mut ex = Extractor {
        src: source,
        toks: lexed.tokens.into_iter().filter(|t| !t.kind.is_comment()).collect(),
        lines: source.split('\n').collect(),
        classes: Vec::new(),
        methods: Vec::new(),
        diagnostics,
    };
    if ex.members(0, None).is_none() && ex.diagnostics.is_empty() {
        ex.diagnostics.push("unbalanced delimiters before end of input".to_string());
    }
    let mut classes = ex.classes;
    let mut methods = ex.methods;
    classes.sort_by_key(|c| c.span);
    methods.sort_by_key(|m| m.span);
    Units {
        classes,
        methods,
        diagnostics: ex.diagnostics,
    }
}
