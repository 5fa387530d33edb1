use std::collections::BTreeMap;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg2d::Matrix2;
use crate::tensor3d::{Matrix3, MultiScalar};

use super::lexer::{tokenize, Token, TokenKind};
use super::{is_valid_name, Document, Object, ParseError};

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Position reported when input ends early.
    eof: (usize, usize),
}

impl Parser {
    pub(crate) fn new(text: &str) -> Self {
        let lines = text.split('\n').count();
        let last_col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Parser {
            tokens: tokenize(text),
            pos: 0,
            eof: (lines, last_col),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.eof, |t| (t.line, t.column))
    }

    fn syntax(&self, expected: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError::Syntax {
            line,
            column,
            expected: expected.into(),
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), |t| t.kind.describe()),
        }
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        match self.peek() {
            Some(t) if t.kind == kind => Ok(self.next().expect("peeked")),
            _ => Err(self.syntax(kind.describe())),
        }
    }

    fn word(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Word(w),
                ..
            }) => {
                let w = w.clone();
                Ok((w, self.next().expect("peeked")))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Token, ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Word(w),
                ..
            }) if w == kw => Ok(self.next().expect("peeked")),
            _ => Err(self.syntax(format!("`{kw}`"))),
        }
    }

    fn positive_int(&mut self, what: &str) -> Result<(usize, Token), ParseError> {
        let pos = self.pos;
        let (w, tok) = self.word(what)?;
        match w.parse::<usize>() {
            Ok(v) if w.bytes().all(|b| b.is_ascii_digit()) => Ok((v, tok)),
            _ => {
                self.pos = pos;
                Err(self.syntax(what))
            }
        }
    }

    fn element(&mut self, spec: FieldSpec) -> Result<FieldElement, ParseError> {
        let (w, tok) = self.word("a field element")?;
        spec.parse_element(&w)
            .map_err(|source| ParseError::FieldLiteral {
                line: tok.line,
                column: tok.column,
                source,
            })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub(crate) fn document(mut self) -> Result<Document, ParseError> {
        let header = self.keyword("field")?;
        let spec = self.field_spec(header.line)?;
        if let Some(t) = self.peek() {
            if t.line == header.line {
                return Err(self.syntax("end of line after the field header"));
            }
        }
        let mut doc = Document::new(spec);
        if self.at_end() {
            return Err(self.syntax("an object definition"));
        }
        while !self.at_end() {
            let (name, tok) = self.word("an object name")?;
            if !is_valid_name(&name) {
                self.pos -= 1;
                return Err(self.syntax("an object name matching [A-Za-z_][A-Za-z0-9_]*"));
            }
            self.expect(TokenKind::Colon)?;
            let obj = self.object(spec)?;
            if doc.objects.contains_key(&name) {
                return Err(ParseError::DuplicateName {
                    line: tok.line,
                    column: tok.column,
                    name,
                });
            }
            doc.objects.insert(name, obj);
        }
        Ok(doc)
    }

    /// A single object with no header or name, e.g. `mscalar 2 [25 -6]`.
    pub(crate) fn bare_object(mut self, spec: FieldSpec) -> Result<Object, ParseError> {
        let obj = self.object(spec)?;
        if !self.at_end() {
            return Err(self.syntax("end of input"));
        }
        Ok(obj)
    }

    fn field_spec(&mut self, line: usize) -> Result<FieldSpec, ParseError> {
        let same_line = |p: &Parser| p.peek().is_some_and(|t| t.line == line);
        if !same_line(self) {
            return Err(self.syntax("`rational`, `gf` or `float` on the header line"));
        }
        let (kind, tok) = self.word("`rational`, `gf` or `float`")?;
        let literal_err = |source| ParseError::FieldLiteral {
            line: tok.line,
            column: tok.column,
            source,
        };
        match kind.as_str() {
            "rational" => Ok(FieldSpec::Rational),
            "gf" => {
                if !same_line(self) {
                    return Err(self.syntax("a prime modulus"));
                }
                let (q, _) = self.positive_int("a prime modulus")?;
                FieldSpec::prime(q as u64).map_err(literal_err)
            }
            "float" => {
                if !same_line(self) {
                    return Ok(FieldSpec::Float(Default::default()));
                }
                let (t, ttok) = self.word("a tolerance")?;
                let tol: f64 = t.parse().map_err(|_| {
                    self.pos -= 1;
                    self.syntax("a tolerance")
                })?;
                FieldSpec::float(tol).map_err(|source| ParseError::FieldLiteral {
                    line: ttok.line,
                    column: ttok.column,
                    source,
                })
            }
            _ => {
                self.pos -= 1;
                Err(self.syntax("`rational`, `gf` or `float`"))
            }
        }
    }

    fn object(&mut self, spec: FieldSpec) -> Result<Object, ParseError> {
        let (kind, _) = self.word("`matrix` or `mscalar`")?;
        match kind.as_str() {
            "matrix" => self.matrix(spec).map(Object::Matrix),
            "mscalar" => self.mscalar(spec).map(Object::MultiScalar),
            _ => {
                self.pos -= 1;
                Err(self.syntax("`matrix` or `mscalar`"))
            }
        }
    }

    /// `m x n x p`, written as one word (`3x3x2`) or spread over several.
    fn dims(&mut self) -> Result<(usize, usize, usize), ParseError> {
        let (line, column) = self.here();
        let mut text = String::new();
        while let Some(Token {
            kind: TokenKind::Word(w),
            ..
        }) = self.peek()
        {
            text.push_str(w);
            self.pos += 1;
        }
        let parts: Vec<&str> = text.split('x').collect();
        let parsed: Option<Vec<usize>> = (parts.len() == 3)
            .then(|| {
                parts
                    .iter()
                    .map(|p| {
                        p.bytes()
                            .all(|b| b.is_ascii_digit())
                            .then(|| p.parse().ok())
                            .flatten()
                    })
                    .collect()
            })
            .flatten();
        match parsed.as_deref() {
            Some(&[m, n, p]) => {
                if m == 0 || n == 0 || p == 0 {
                    Err(ParseError::Shape {
                        line,
                        column,
                        message: "dimensions must be positive".into(),
                    })
                } else {
                    Ok((m, n, p))
                }
            }
            _ => Err(ParseError::Syntax {
                line,
                column,
                expected: "dimensions `MxNxP`".into(),
                found: if text.is_empty() {
                    "nothing".into()
                } else {
                    format!("`{text}`")
                },
            }),
        }
    }

    fn matrix(&mut self, spec: FieldSpec) -> Result<Matrix3, ParseError> {
        let (m, n, p) = self.dims()?;
        self.expect(TokenKind::LBrace)?;
        let mut layers: BTreeMap<usize, Matrix2> = BTreeMap::new();
        loop {
            if self.peek().is_some_and(|t| t.kind == TokenKind::RBrace) {
                break;
            }
            let layer_tok = self
                .keyword("layer")
                .map_err(|_| self.syntax("`layer` or `}`"))?;
            let (k, ktok) = self.positive_int("a layer index")?;
            if k == 0 || k > p {
                return Err(ParseError::Shape {
                    line: ktok.line,
                    column: ktok.column,
                    message: format!("layer index {k} outside 1..={p}"),
                });
            }
            if layers.contains_key(&k) {
                return Err(ParseError::DuplicateLayer {
                    line: layer_tok.line,
                    column: layer_tok.column,
                    layer: k,
                });
            }
            self.expect(TokenKind::Colon)?;
            let layer = self.layer_body(spec, m, n, k)?;
            layers.insert(k, layer);
        }
        let close = self.expect(TokenKind::RBrace)?;
        if layers.len() != p {
            let missing = (1..=p).find(|k| !layers.contains_key(k)).unwrap_or(p);
            return Err(ParseError::MissingLayer {
                line: close.line,
                column: close.column,
                layer: missing,
            });
        }
        Matrix3::from_layers(layers.into_values().collect()).map_err(|e| ParseError::Shape {
            line: close.line,
            column: close.column,
            message: e.to_string(),
        })
    }

    fn layer_body(
        &mut self,
        spec: FieldSpec,
        m: usize,
        n: usize,
        k: usize,
    ) -> Result<Matrix2, ParseError> {
        let open = self.expect(TokenKind::LBracket)?;
        let mut entries = Vec::new();
        let mut rows = 0;
        loop {
            let (line, column) = self.here();
            let mut len = 0;
            while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Word(_))) {
                entries.push(self.element(spec)?);
                len += 1;
            }
            if len == 0 {
                return Err(self.syntax("a field element"));
            }
            if len != n {
                return Err(ParseError::Shape {
                    line,
                    column,
                    message: format!("layer {k} row {} has {len} entries, expected {n}", rows + 1),
                });
            }
            rows += 1;
            match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Semi) => {
                    self.pos += 1;
                }
                Some(TokenKind::RBracket) => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.syntax("`;` or `]`")),
            }
        }
        if rows != m {
            return Err(ParseError::Shape {
                line: open.line,
                column: open.column,
                message: format!("layer {k} has {rows} rows, expected {m}"),
            });
        }
        Matrix2::from_vec(spec, m, n, entries).map_err(|e| ParseError::Shape {
            line: open.line,
            column: open.column,
            message: e.to_string(),
        })
    }

    fn mscalar(&mut self, spec: FieldSpec) -> Result<MultiScalar, ParseError> {
        let (p, _) = self.positive_int("the multi-scalar depth")?;
        let open = self.expect(TokenKind::LBracket)?;
        let mut components = Vec::new();
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Word(_))) {
            components.push(self.element(spec)?);
        }
        if components.is_empty() {
            return Err(self.syntax("a field element"));
        }
        self.expect(TokenKind::RBracket)?;
        if components.len() != p {
            return Err(ParseError::Shape {
                line: open.line,
                column: open.column,
                message: format!(
                    "mscalar declares {p} components but lists {}",
                    components.len()
                ),
            });
        }
        MultiScalar::new(spec, components).map_err(|e| ParseError::Shape {
            line: open.line,
            column: open.column,
            message: e.to_string(),
        })
    }
}
