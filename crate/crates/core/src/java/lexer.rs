//! A literal-aware Java tokenizer. It knows enough about comments, string,
//! char and text-block literals to never mistake their contents for code.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Number,
    Str,
    Char,
    TextBlock,
    Punct,
    LineComment,
    BlockComment,
}

impl TokenKind {
    pub fn is_comment(self) -> bool {
        matches!(self, TokenKind::LineComment | TokenKind::BlockComment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
    /// 1-based line of `start`.
    pub line: u32,
}

impl Token {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.start..self.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unterminated {
    pub offset: usize,
    pub line: u32,
    pub what: &'static str,
}

pub struct Lexed {
    pub tokens: Vec<Token>,
    /// Set when a literal or comment runs off the end of its line or file.
    /// Tokens stop at `error.offset`.
    pub error: Option<Unterminated>,
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    /// Consumes a quoted literal body up to and including `quote`. Stops
    /// with `false` at a newline or end of input.
    fn quoted(&mut self, quote: char) -> bool {
        while let Some(c) = self.peek() {
            match c {
                '\n' => return false,
                '\\' => {
                    self.bump();
                    if self.peek() == Some('\n') {
                        return false;
                    }
                    self.bump();
                }
                c if c == quote => {
                    self.bump();
                    return true;
                }
                _ => {
                    self.bump();
                }
            }
        }
        false
    }
}

pub fn lex(src: &str) -> Lexed {
    let mut cur = Cursor { src, pos: 0, line: 1 };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let start = cur.pos;
        let line = cur.line;
        let unterminated = |what| Lexed {
            tokens: Vec::new(),
            error: Some(Unterminated { offset: start, line, what }),
        };

        let kind = if cur.starts_with("//") {
            while let Some(c) = cur.peek() {
                if c == '\n' || cur.starts_with("\r\n") {
                    break;
                }
                cur.bump();
            }
            TokenKind::LineComment
        } else if cur.starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                if cur.bump().is_none() {
                    let Lexed { error, .. } = unterminated("block comment");
                    return Lexed { tokens, error };
                }
            }
            TokenKind::BlockComment
        } else if cur.starts_with("\"\"\"") {
            for _ in 0..3 {
                cur.bump();
            }
            loop {
                if cur.starts_with("\"\"\"") {
                    for _ in 0..3 {
                        cur.bump();
                    }
                    break;
                }
                match cur.bump() {
                    Some('\\') => {
                        cur.bump();
                    }
                    Some(_) => {}
                    None => {
                        let Lexed { error, .. } = unterminated("text block");
                        return Lexed { tokens, error };
                    }
                }
            }
            TokenKind::TextBlock
        } else if c == '"' || c == '\'' {
            cur.bump();
            if !cur.quoted(c) {
                let what = if c == '"' { "string literal" } else { "char literal" };
                let Lexed { error, .. } = unterminated(what);
                return Lexed { tokens, error };
            }
            if c == '"' {
                TokenKind::Str
            } else {
                TokenKind::Char
            }
        } else if is_ident_start(c) {
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            TokenKind::Ident
        } else if c.is_ascii_digit() {
            while cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
                cur.bump();
            }
            TokenKind::Number
        } else {
            cur.bump();
            TokenKind::Punct
        };
        tokens.push(Token {
            kind,
            start,
            end: cur.pos,
            line,
        });
    }
    Lexed { tokens, error: None }
}
