use serde::Serialize;

use super::lexer::{lex, Token};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StripWarning {
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stripped {
    pub text: String,
    pub warnings: Vec<StripWarning>,
}

/// Removes `//`, `/* */` and `/** */` comments.
///
/// A line that held only comment text (and whitespace) is dropped; a line
/// with code keeps the code with trailing whitespace trimmed. A comment
/// squeezed between two tokens on one line leaves a single space. Lines
/// without comments are copied byte for byte.
///
/// If a literal or comment is unterminated, everything from that point on
/// is passed through unchanged and a warning is returned.
pub fn strip_documentation(source: &str) -> Stripped {
    let lexed = lex(source);
    let comments: Vec<&Token> = lexed.tokens.iter().filter(|t| t.kind.is_comment()).collect();
    let mut warnings = Vec::new();
    if let Some(err) = &lexed.error {
        warnings.push(StripWarning {
            line: err.line,
            message: format!("unterminated {}; rest of input left unmodified", err.what),
        });
    }

    let mut out = String::with_capacity(source.len());
    let mut next_comment = 0;
    let mut line_start = 0;
    while line_start < source.len() {
        let newline = source[line_start..].find('\n').map(|i| line_start + i);
        let line_end = newline.unwrap_or(source.len());

        let mut kept = String::new();
        let mut had_comment = false;
        let mut pos = line_start;
        // Skip comments that ended before this line.
        while next_comment < comments.len() && comments[next_comment].end <= line_start {
            next_comment += 1;
        }
        let mut ci = next_comment;
        while ci < comments.len() && comments[ci].start < line_end {
            let c = comments[ci];
            let cut_start = c.start.max(line_start);
            let cut_end = c.end.min(line_end);
            kept.push_str(&source[pos..cut_start]);
            had_comment = true;
            let before = kept.chars().last();
            let after = source[cut_end..line_end].chars().next();
            let joins = |ch: Option<char>| ch.is_some_and(|ch| !ch.is_whitespace());
            if c.end <= line_end && c.start >= line_start && joins(before) && joins(after) {
                kept.push(' ');
            }
            pos = cut_end;
            if c.end > line_end {
                break;
            }
            ci += 1;
        }
        kept.push_str(&source[pos..line_end]);

        if had_comment {
            let crlf = kept.ends_with('\r');
            let code = kept.trim_end();
            if !code.trim_start().is_empty() {
                out.push_str(code);
                if crlf {
                    out.push('\r');
                }
                if newline.is_some() {
                    out.push('\n');
                }
            }
        } else {
            out.push_str(&source[line_start..line_end]);
            if newline.is_some() {
                out.push('\n');
            }
        }
        line_start = line_end + 1;
    }

    Stripped { text: out, warnings }
}
