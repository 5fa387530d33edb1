//! Tokenizer for `.m3` documents.
//!
//! Punctuation (`{ } [ ] : ;`) forms single-character tokens. Everything else
//! between whitespace and punctuation is a `Word`, so `3x3x2`, `-1/6` and
//! `1.5e-3` each arrive as one token and are interpreted by the parser.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Word(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Semi,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semi => "`;`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

fn punct(c: char) -> Option<TokenKind> {
    Some(match c {
        '{' => TokenKind::LBrace,
        '}' => TokenKind::RBrace,
        '[' => TokenKind::LBracket,
        ']' => TokenKind::RBracket,
        ':' => TokenKind::Colon,
        ';' => TokenKind::Semi,
        _ => return None,
    })
}

/// Splits `text` into tokens with 1-based line and column (in characters).
/// `#` starts a comment that runs to the end of the line.
pub(crate) fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
        } else if let Some(kind) = punct(c) {
            chars.next();
            tokens.push(Token { kind, line, column });
            column += 1;
        } else {
            let start = column;
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '#' || punct(c).is_some() {
                    break;
                }
                word.push(c);
                chars.next();
                column += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Word(word),
                line,
                column: start,
            });
        }
    }
    tokens
}
