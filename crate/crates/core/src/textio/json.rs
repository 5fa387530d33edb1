//! JSON mirror of the `.m3` format:
//!
//! ```json
//! {"field": "rational",
//!  "objects": {"A": {"kind": "matrix", "dims": [2, 2, 1], "layers": [[["1", "2"], ["3", "4"]]]},
//!              "s": {"kind": "mscalar", "dims": [2], "layers": [[["5"]], [["1/2"]]]}}}
//! ```
//!
//! Layers are listed in ascending `k`. A multi-scalar is stored as its
//! `1 x 1 x p` matrix. Elements are strings in the text syntax; plain JSON
//! numbers are accepted on input.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg2d::Matrix2;
use crate::tensor3d::{Matrix3, MultiScalar};

use super::{is_valid_name, Document, Object, ParseError};

#[derive(Serialize, Deserialize)]
struct JsonDocument {
    field: String,
    objects: IndexMap<String, JsonObject>,
}

#[derive(Serialize, Deserialize)]
struct JsonObject {
    kind: String,
    dims: Vec<usize>,
    layers: Vec<Vec<Vec<Value>>>,
}

fn layer_rows(layer: &Matrix2) -> Vec<Vec<Value>> {
    (0..layer.rows())
        .map(|i| {
            layer
                .row(i)
                .iter()
                .map(|e| Value::String(e.to_string()))
                .collect()
        })
        .collect()
}

pub fn document_to_json(doc: &Document) -> String {
    let objects = doc
        .objects
        .iter()
        .map(|(name, obj)| {
            let json = match obj {
                Object::Matrix(m) => {
                    let (rows, cols, depth) = m.dims();
                    JsonObject {
                        kind: "matrix".into(),
                        dims: vec![rows, cols, depth],
                        layers: m.layers().iter().map(layer_rows).collect(),
                    }
                }
                Object::MultiScalar(s) => JsonObject {
                    kind: "mscalar".into(),
                    dims: vec![s.depth()],
                    layers: s
                        .components()
                        .iter()
                        .map(|c| vec![vec![Value::String(c.to_string())]])
                        .collect(),
                },
            };
            (name.clone(), json)
        })
        .collect();
    serde_json::to_string_pretty(&JsonDocument {
        field: doc.field.to_string(),
        objects,
    })
    .expect("plain data serializes")
}

fn json_err(message: impl Into<String>) -> ParseError {
    ParseError::Json {
        line: 1,
        column: 1,
        message: message.into(),
    }
}

fn element(spec: FieldSpec, v: &Value) -> Result<FieldElement, ParseError> {
    let literal = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(json_err(format!("expected an element, found {other}"))),
    };
    spec.parse_element(&literal)
        .map_err(|e| json_err(e.to_string()))
}

fn layer(spec: FieldSpec, rows: &[Vec<Value>], m: usize, n: usize) -> Result<Matrix2, ParseError> {
    if rows.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(json_err(format!("layer is not {m}x{n}")));
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|v| element(spec, v))
        .collect::<Result<_, _>>()?;
    Matrix2::from_vec(spec, m, n, entries).map_err(|e| json_err(e.to_string()))
}

pub fn document_from_json(text: &str) -> Result<Document, ParseError> {
    let raw: JsonDocument = serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line().max(1),
        column: e.column().max(1),
        message: e.to_string(),
    })?;
    let spec: FieldSpec = raw
        .field
        .parse()
        .map_err(|e: crate::field::FieldError| json_err(e.to_string()))?;
    let mut doc = Document::new(spec);
    if raw.objects.is_empty() {
        return Err(json_err("document has no objects"));
    }
    for (name, obj) in raw.objects {
        if !is_valid_name(&name) {
            return Err(json_err(format!("invalid object name `{name}`")));
        }
        let parsed = match (obj.kind.as_str(), obj.dims.as_slice()) {
            ("matrix", &[m, n, p]) => {
                if m == 0 || n == 0 || p == 0 || obj.layers.len() != p {
                    return Err(json_err(format!(
                        "`{name}`: layers do not match dims {m}x{n}x{p}"
                    )));
                }
                let layers = obj
                    .layers
                    .iter()
                    .map(|rows| layer(spec, rows, m, n))
                    .collect::<Result<_, _>>()?;
                Object::Matrix(Matrix3::from_layers(layers).map_err(|e| json_err(e.to_string()))?)
            }
            ("mscalar", &[p]) => {
                if p == 0 || obj.layers.len() != p {
                    return Err(json_err(format!("`{name}`: layers do not match depth {p}")));
                }
                let components = obj
                    .layers
                    .iter()
                    .map(|rows| layer(spec, rows, 1, 1).map(|l| l.entries()[0].clone()))
                    .collect::<Result<_, _>>()?;
                Object::MultiScalar(
                    MultiScalar::new(spec, components).map_err(|e| json_err(e.to_string()))?,
                )
            }
            (kind, dims) => {
                return Err(json_err(format!(
                    "`{name}`: unsupported kind `{kind}` with dims {dims:?}"
                )))
            }
        };
        doc.objects.insert(name, parsed);
    }
    Ok(doc)
}
