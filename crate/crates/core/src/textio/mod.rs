//! The `.m3` text format and its JSON mirror.
//!
//! ```text
//! field rational
//! # layers are indexed bottom-up; any order is accepted
//! A: matrix 3x3x2 {
//!   layer 1: [1 2 4; 8 1 1; 3 1 0]
//!   layer 2: [3 1 5; 0 2 1; 1 7 4]
//! }
//! s: mscalar 2 [3 -1/2]
//! ```
//!
//! One field per document. Elements use the field's literal syntax (see
//! [`FieldSpec::parse_element`]). Serialization is canonical: layers in
//! ascending order, rationals in lowest terms, `GF(q)` residues in `0..q`,
//! floats in shortest round-trip form.

mod json;
mod lexer;
mod parser;

use indexmap::IndexMap;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::tensor3d::{Matrix3, MultiScalar};

pub use json::{document_from_json, document_to_json};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: syntax error: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}, column {column}: layer {layer} is defined twice")]
    DuplicateLayer {
        line: usize,
        column: usize,
        layer: usize,
    },
    #[error("line {line}, column {column}: layer {layer} is missing")]
    MissingLayer {
        line: usize,
        column: usize,
        layer: usize,
    },
    #[error("line {line}, column {column}: shape error: {message}")]
    Shape {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: {source}")]
    FieldLiteral {
        line: usize,
        column: usize,
        source: FieldError,
    },
    #[error("line {line}, column {column}: object `{name}` is defined twice")]
    DuplicateName {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("line {line}, column {column}: JSON error: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::DuplicateLayer { line, .. }
            | ParseError::MissingLayer { line, .. }
            | ParseError::Shape { line, .. }
            | ParseError::FieldLiteral { line, .. }
            | ParseError::DuplicateName { line, .. }
            | ParseError::Json { line, .. } => *line,
        }
    }

    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. }
            | ParseError::DuplicateLayer { column, .. }
            | ParseError::MissingLayer { column, .. }
            | ParseError::Shape { column, .. }
            | ParseError::FieldLiteral { column, .. }
            | ParseError::DuplicateName { column, .. }
            | ParseError::Json { column, .. } => *column,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Object {
    Matrix(Matrix3),
    MultiScalar(MultiScalar),
}

impl Object {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Object::Matrix(m) => m.spec(),
            Object::MultiScalar(s) => s.spec(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Object::Matrix(_) => "matrix",
            Object::MultiScalar(_) => "mscalar",
        }
    }
}

impl From<Matrix3> for Object {
    fn from(m: Matrix3) -> Self {
        Object::Matrix(m)
    }
}

impl From<MultiScalar> for Object {
    fn from(s: MultiScalar) -> Self {
        Object::MultiScalar(s)
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("invalid object name `{0}`")]
    InvalidName(String),
    #[error("object `{name}` is over {found}, document is over {expected}")]
    FieldMismatch {
        name: String,
        expected: FieldSpec,
        found: FieldSpec,
    },
}

/// Named objects over a single field, in definition order.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub field: FieldSpec,
    pub objects: IndexMap<String, Object>,
}

impl Document {
    pub fn new(field: FieldSpec) -> Self {
        Document {
            field,
            objects: IndexMap::new(),
        }
    }

    /// Adds or replaces `name`.
    pub fn insert(&mut self, name: &str, obj: impl Into<Object>) -> Result<(), DocumentError> {
        let obj = obj.into();
        if !is_valid_name(name) {
            return Err(DocumentError::InvalidName(name.to_string()));
        }
        if obj.spec() != self.field {
            return Err(DocumentError::FieldMismatch {
                name: name.to_string(),
                expected: self.field,
                found: obj.spec(),
            });
        }
        self.objects.insert(name.to_string(), obj);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.get(name)
    }
}

/// Parses a whole document: a `field` header line followed by at least one
/// `NAME: object` definition.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    parser::Parser::new(text).document()
}

/// Parses a single unnamed object such as `mscalar 2 [25 -6]` over `spec`.
pub fn parse_object(text: &str, spec: FieldSpec) -> Result<Object, ParseError> {
    parser::Parser::new(text).bare_object(spec)
}

/// Canonical multi-line text of one object (no name, no header).
pub fn serialize_object(obj: &Object) -> String {
    match obj {
        Object::MultiScalar(s) => s.to_string(),
        Object::Matrix(m) => {
            let (rows, cols, depth) = m.dims();
            let mut out = format!("matrix {rows}x{cols}x{depth} {{\n");
            for (k, layer) in m.layers().iter().enumerate() {
                out.push_str(&format!("  layer {}: {}\n", k + 1, layer));
            }
            out.push('}');
            out
        }
    }
}

pub fn serialize_document(doc: &Document) -> String {
    let mut out = format!("field {}\n", doc.field);
    for (name, obj) in &doc.objects {
        out.push_str(name);
        out.push_str(": ");
        out.push_str(&serialize_object(obj));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;

    const STACKED_3X3X2: &str = "field rational\n\
        A: matrix 3x3x2 { layer 1: [1 2 4; 8 1 1; 3 1 0] layer 2: [3 1 5; 0 2 1; 1 7 4] }\n";

    fn matrix<'a>(doc: &'a Document, name: &str) -> &'a Matrix3 {
        match doc.get(name) {
            Some(Object::Matrix(m)) => m,
            other => panic!("{name}: {other:?}"),
        }
    }

    #[test]
    fn parses_stacked_3x3x2() {
        let doc = parse_document(STACKED_3X3X2).unwrap();
        assert_eq!(doc.field, FieldSpec::Rational);
        let a = matrix(&doc, "A");
        assert_eq!(
            a.det().unwrap(),
            MultiScalar::from_i64(FieldSpec::Rational, &[25, -6]).unwrap()
        );
    }

    #[test]
    fn parses_multi_scalar_bottom_up() {
        let doc = parse_document("field rational\ns: mscalar 3 [3 5 2]").unwrap();
        assert_eq!(
            doc.get("s"),
            Some(&Object::MultiScalar(
                MultiScalar::from_i64(FieldSpec::Rational, &[3, 5, 2]).unwrap()
            ))
        );
    }

    #[test]
    fn layers_in_any_order_and_spread_dims() {
        let doc = parse_document(
            "field gf 5 # five\nB: matrix 1 x 2 x 2 {\n layer 2: [3 4]\n layer 1: [1 2]\n}\n",
        )
        .unwrap();
        let b = matrix(&doc, "B");
        assert_eq!(b.layer(1).unwrap().to_string(), "[1 2]");
        assert_eq!(b.layer(2).unwrap().to_string(), "[3 4]");
    }

    #[test]
    fn empty_body_is_a_syntax_error() {
        let err = parse_document("field rational\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }), "{err}");
        let err = parse_document("").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }), "{err}");
    }

    type Case = (&'static str, fn(&ParseError) -> bool, usize);

    #[test]
    fn error_kinds_and_positions() {
        let cases: &[Case] = &[
            (
                "field rational\nA: matrix 1x1x2 { layer 1: [1] layer 1: [2] }",
                |e| matches!(e, ParseError::DuplicateLayer { layer: 1, .. }),
                2,
            ),
            (
                "field rational\nA: matrix 1x1x3 {\n layer 1: [1]\n layer 3: [2]\n}",
                |e| matches!(e, ParseError::MissingLayer { layer: 2, .. }),
                5,
            ),
            (
                "field rational\nA: matrix 2x2x1 {\n layer 1: [1 2; 3]\n}",
                |e| matches!(e, ParseError::Shape { .. }),
                3,
            ),
            (
                "field rational\nA: matrix 2x2x1 { layer 1: [1 2] }",
                |e| matches!(e, ParseError::Shape { .. }),
                2,
            ),
            (
                "field rational\nA: matrix 1x1x1 { layer 4: [1] }",
                |e| matches!(e, ParseError::Shape { .. }),
                2,
            ),
            (
                "field gf 7\n\nx: mscalar 2 [1/2 3]",
                |e| matches!(e, ParseError::FieldLiteral { column: 15, .. }),
                3,
            ),
            (
                "field rational\ns: mscalar 3 [1 2]",
                |e| matches!(e, ParseError::Shape { .. }),
                2,
            ),
            (
                "field rational\ns: mscalar 1 [1]\ns: mscalar 1 [2]",
                |e| matches!(e, ParseError::DuplicateName { .. }),
                3,
            ),
            (
                "field rational\n9s: mscalar 1 [1]",
                |e| matches!(e, ParseError::Syntax { .. }),
                2,
            ),
            (
                "field gf 8\ns: mscalar 1 [1]",
                |e| matches!(e, ParseError::FieldLiteral { .. }),
                1,
            ),
            (
                "field rational s: mscalar 1 [1]",
                |e| matches!(e, ParseError::Syntax { .. }),
                1,
            ),
            (
                "field rational\nA: matrix 0x1x1 { layer 1: [1] }",
                |e| matches!(e, ParseError::Shape { .. }),
                2,
            ),
            (
                "field rational\nA: matrix 2x2 { }",
                |e| matches!(e, ParseError::Syntax { .. }),
                2,
            ),
            (
                "field rational\nA: tensor 1",
                |e| matches!(e, ParseError::Syntax { .. }),
                2,
            ),
        ];
        for (text, check, line) in cases {
            let err = parse_document(text).unwrap_err();
            assert!(check(&err), "{text:?} gave {err}");
            assert_eq!(err.line(), *line, "{text:?} gave {err}");
            assert!(err.to_string().starts_with(&format!("line {line},")));
        }
    }

    #[test]
    fn float_header_tolerance() {
        let doc = parse_document("field float 1e-6\nx: mscalar 1 [2.5]").unwrap();
        assert_eq!(doc.field, FieldSpec::float(1e-6).unwrap());
        let doc = parse_document("field float\nx: mscalar 1 [2.5e3]").unwrap();
        assert_eq!(doc.field, FieldSpec::float(1e-9).unwrap());
    }

    #[test]
    fn serialization_is_canonical() {
        let doc = parse_document(STACKED_3X3X2).unwrap();
        let text = serialize_document(&doc);
        assert_eq!(
            text,
            "field rational\nA: matrix 3x3x2 {\n  layer 1: [1 2 4; 8 1 1; 3 1 0]\n  layer 2: [3 1 5; 0 2 1; 1 7 4]\n}\n"
        );
        assert_eq!(parse_document(&text).unwrap(), doc);
        let inv = matrix(&doc, "A").inverse().unwrap();
        let inv_text = serialize_object(&Object::Matrix(inv));
        assert!(
            inv_text.contains("-1/6") && inv_text.contains("-31/6"),
            "{inv_text}"
        );
        assert!(inv_text.contains("layer 2: [-1/6 -31/6 3/2;"));
    }

    #[test]
    fn gf_residues_and_reduction() {
        let doc = parse_document("field gf 7\nx: mscalar 3 [-1 15 6]").unwrap();
        assert_eq!(
            serialize_document(&doc),
            "field gf 7\nx: mscalar 3 [6 1 6]\n"
        );
    }

    #[test]
    fn bare_object_round_trip() {
        let s = MultiScalar::from_i64(FieldSpec::Rational, &[25, -6]).unwrap();
        let obj = Object::MultiScalar(s);
        assert_eq!(
            parse_object(&serialize_object(&obj), FieldSpec::Rational).unwrap(),
            obj
        );
        assert!(parse_object("mscalar 1 [1] extra", FieldSpec::Rational).is_err());
    }

    #[test]
    fn document_insert_validates() {
        let mut doc = Document::new(FieldSpec::Rational);
        let s = MultiScalar::new(
            FieldSpec::Rational,
            vec![FieldElement::rational(1, 2).unwrap()],
        )
        .unwrap();
        assert!(doc.insert("ok_1", s.clone()).is_ok());
        assert!(matches!(
            doc.insert("1bad", s),
            Err(DocumentError::InvalidName(_))
        ));
        let g = MultiScalar::ones(FieldSpec::prime(3).unwrap(), 1).unwrap();
        assert!(matches!(
            doc.insert("g", g),
            Err(DocumentError::FieldMismatch { .. })
        ));
    }
}
