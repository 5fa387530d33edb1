#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trimat::field::FieldSpec;
use trimat::textio::{Document, Object};
use trimat::{FieldElement, Matrix2, Matrix3, MultiScalar};

pub fn rational() -> FieldSpec {
    FieldSpec::Rational
}

pub fn gf(q: u64) -> FieldSpec {
    FieldSpec::prime(q).unwrap()
}

pub fn float() -> FieldSpec {
    FieldSpec::float(1e-9).unwrap()
}

pub fn frac(spec: FieldSpec, n: i64, d: i64) -> FieldElement {
    spec.from_ratio(n, d).unwrap()
}

/// 2x2x3 matrix, layers k = 1..3 bottom-up.
pub fn fixture_2x2x3(spec: FieldSpec) -> Matrix3 {
    Matrix3::from_i64(
        spec,
        &[[[1, 4], [5, 3]], [[5, 0], [9, 1]], [[2, 3], [4, 5]]],
    )
    .unwrap()
}

/// 3x3x2 matrix, layers k = 1..2 bottom-up.
pub fn fixture_3x3x2(spec: FieldSpec) -> Matrix3 {
    Matrix3::from_i64(
        spec,
        &[
            [[1, 2, 4], [8, 1, 1], [3, 1, 0]],
            [[3, 1, 5], [0, 2, 1], [1, 7, 4]],
        ],
    )
    .unwrap()
}

/// The printed inverse of `fixture_3x3x2`, as (numerator, denominator) pairs.
pub const INVERSE_3X3X2: [[[(i64, i64); 3]; 3]; 2] = [
    [
        [(-1, 25), (4, 25), (-2, 25)],
        [(3, 25), (-12, 25), (31, 25)],
        [(1, 5), (1, 5), (-3, 5)],
    ],
    [
        [(-1, 6), (-31, 6), (3, 2)],
        [(-1, 6), (-7, 6), (1, 2)],
        [(1, 3), (10, 3), (-1, 1)],
    ],
];

pub fn inverse_3x3x2_fixture(spec: FieldSpec) -> Matrix3 {
    Matrix3::from_layers(
        INVERSE_3X3X2
            .iter()
            .map(|layer| {
                Matrix2::from_rows(
                    spec,
                    layer
                        .iter()
                        .map(|row| row.iter().map(|&(n, d)| frac(spec, n, d)).collect())
                        .collect(),
                )
                .unwrap()
            })
            .collect(),
    )
    .unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, spec: FieldSpec) -> FieldElement {
    match spec {
        FieldSpec::PrimeField(q) => spec.from_i64(rng.random_range(0..q.get() as i64)),
        FieldSpec::Rational => {
            let num = rng.random_range(-1_000_000_000_000i64..1_000_000_000_000);
            let den = rng.random_range(1..1_000_000i64);
            spec.from_ratio(num, den).unwrap()
        }
        FieldSpec::Float(_) => {
            let mantissa: f64 = rng.random_range(-1.0..1.0);
            let exp = rng.random_range(-30..30);
            spec.parse_element(&format!("{}", mantissa * 10f64.powi(exp)))
                .unwrap()
        }
    }
}

/// Document with 1..=4 objects of random kind and shape.
pub fn random_document(rng: &mut ChaCha8Rng, spec: FieldSpec) -> Document {
    let mut doc = Document::new(spec);
    let count = rng.random_range(1..=4);
    for i in 0..count {
        let name = format!("{}{i}", ["A", "b_", "_m", "Xy"][rng.random_range(0..4)]);
        let obj: Object = if rng.random_bool(0.3) {
            let p = rng.random_range(1..=5);
            MultiScalar::new(spec, (0..p).map(|_| random_element(rng, spec)).collect())
                .unwrap()
                .into()
        } else {
            let (m, n, p) = (
                rng.random_range(1..=4),
                rng.random_range(1..=4),
                rng.random_range(1..=4),
            );
            let layers = (0..p)
                .map(|_| {
                    let entries = (0..m * n).map(|_| random_element(rng, spec)).collect();
                    Matrix2::from_vec(spec, m, n, entries).unwrap()
                })
                .collect();
            Matrix3::from_layers(layers).unwrap().into()
        };
        doc.insert(&name, obj).unwrap();
    }
    doc
}

/// Random byte strings: half uniform noise, half single-byte mutations and
/// truncations of a valid document.
pub fn fuzz_inputs(seed: u64, count: usize) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seed_doc = b"field rational\nA: matrix 2x2x2 { layer 1: [1 2; 3 4] layer 2: [5 -1/2; 0 7] }\ns: mscalar 2 [3 1/3]\n";
    let alphabet = b"field rational gf float matrix mscalar layer x{}[]:;#/-.e0123456789 \n";
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let len = rng.random_range(0..200);
                (0..len).map(|_| rng.random::<u8>()).collect()
            } else {
                let mut bytes = seed_doc.to_vec();
                for _ in 0..rng.random_range(1..6) {
                    if bytes.is_empty() {
                        break;
                    }
                    let at = rng.random_range(0..bytes.len());
                    match rng.random_range(0..4) {
                        0 => bytes[at] = alphabet[rng.random_range(0..alphabet.len())],
                        1 => {
                            bytes.remove(at);
                        }
                        2 => bytes.insert(at, alphabet[rng.random_range(0..alphabet.len())]),
                        _ => bytes.truncate(at.max(1)),
                    }
                }
                bytes
            }
        })
        .collect()
}
