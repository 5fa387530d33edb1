//! Runtime-selected scalar fields.
//!
//! Every matrix in this crate is generic over one of three fields chosen at
//! runtime through a [`FieldSpec`]:
//!
//! - exact arbitrary-precision rationals,
//! - prime-order finite fields `GF(q)` with `q < 2^31`,
//! - `f64` with an explicit relative-plus-absolute tolerance.
//!
//! A [`FieldElement`] carries its field with it, so mixing elements of two
//! different fields is detected at the call site instead of producing garbage.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Upper bound (exclusive) for prime moduli. Products of two residues stay
/// below `2^62` and fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Default tolerance for the float field.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (must be a prime below 2^31)")]
    ModulusOutOfRange(u64),
    #[error("tolerance {0} must be a finite nonnegative number")]
    InvalidTolerance(f64),
    #[error("invalid {field} literal `{literal}`: {reason}")]
    Literal {
        literal: String,
        field: FieldSpec,
        reason: &'static str,
    },
    #[error("unknown field spec `{0}`")]
    UnknownSpec(String),
}

/// A validated prime modulus below [`MAX_MODULUS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if !(2..MAX_MODULUS).contains(&q) {
            return Err(FieldError::ModulusOutOfRange(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(Modulus(q as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q.is_multiple_of(2) {
        return q == 2;
    }
    let mut d = 3;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Nonnegative, finite comparison tolerance for the float field.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(t: f64) -> Result<Self, FieldError> {
        if t.is_finite() && t >= 0.0 {
            Ok(Tolerance(t))
        } else {
            Err(FieldError::InvalidTolerance(t))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_TOLERANCE)
    }
}

/// Which field the entries of a matrix live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec {
    Rational,
    PrimeField(Modulus),
    Float(Tolerance),
}

impl FieldSpec {
    pub fn prime(q: u64) -> Result<Self, FieldError> {
        Modulus::new(q).map(FieldSpec::PrimeField)
    }

    pub fn float(tolerance: f64) -> Result<Self, FieldError> {
        Tolerance::new(tolerance).map(FieldSpec::Float)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, FieldSpec::Float(_))
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u32> {
        match self {
            FieldSpec::PrimeField(q) => Some(q.get()),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match *self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldSpec::PrimeField(modulus) => FieldElement::Prime {
                residue: n.rem_euclid(modulus.get() as i64) as u32,
                modulus,
            },
            FieldSpec::Float(tolerance) => FieldElement::Float {
                value: n as f64,
                tolerance,
            },
        }
    }

    /// The element `num / den`; `den` must be invertible in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        match *self {
            FieldSpec::Rational => Ok(FieldElement::Rational(BigRational::new(
                num.into(),
                den.into(),
            ))),
            FieldSpec::Float(tolerance) => Ok(FieldElement::Float {
                value: num as f64 / den as f64,
                tolerance,
            }),
            FieldSpec::PrimeField(_) => self.from_i64(num).try_div(&self.from_i64(den)),
        }
    }

    /// Residue `r mod q` for finite fields; `None` otherwise.
    pub fn residue(&self, r: u64) -> Option<FieldElement> {
        match *self {
            FieldSpec::PrimeField(modulus) => Some(FieldElement::Prime {
                residue: (r % modulus.get() as u64) as u32,
                modulus,
            }),
            _ => None,
        }
    }

    /// Parses one element in this field's literal syntax: `n` or `n/d` for
    /// rationals, a decimal integer for `GF(q)`, a decimal real for floats.
    pub fn parse_element(&self, literal: &str) -> Result<FieldElement, FieldError> {
        let err = |reason| FieldError::Literal {
            literal: literal.to_string(),
            field: *self,
            reason,
        };
        match *self {
            FieldSpec::Rational => {
                let (num, den) = match literal.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (literal, None),
                };
                let num = parse_integer(num).ok_or_else(|| err("expected an integer or n/d"))?;
                let den = match den {
                    Some(d) => parse_integer(d).ok_or_else(|| err("expected an integer or n/d"))?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(err("zero denominator"));
                }
                Ok(FieldElement::Rational(BigRational::new(num, den)))
            }
            FieldSpec::PrimeField(modulus) => {
                if literal.contains('/') {
                    return Err(err("fractions are not allowed; write the residue"));
                }
                let n = parse_integer(literal).ok_or_else(|| err("expected a decimal integer"))?;
                let r = n.mod_floor(&BigInt::from(modulus.get()));
                Ok(FieldElement::Prime {
                    residue: r.to_u32().expect("residue below modulus"),
                    modulus,
                })
            }
            FieldSpec::Float(tolerance) => {
                let looks_numeric = !literal.is_empty()
                    && literal.bytes().all(|b| {
                        b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E')
                    });
                if !looks_numeric {
                    return Err(err("expected a decimal real"));
                }
                let value: f64 = literal
                    .parse()
                    .map_err(|_| err("expected a decimal real"))?;
                if !value.is_finite() {
                    return Err(err("value is not finite"));
                }
                Ok(FieldElement::Float { value, tolerance })
            }
        }
    }
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::PrimeField(q) => write!(f, "gf {}", q.get()),
            FieldSpec::Float(t) => write!(f, "float {}", format_f64(t.get())),
        }
    }
}

/// Accepts `rational`, `gf 7` / `gf7` / `gf:7`, and `float` / `float 1e-9` /
/// `float:1e-9`.
impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || FieldError::UnknownSpec(s.to_string());
        if s == "rational" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(rest) = s.strip_prefix("gf") {
            let rest = rest.trim_start_matches([':', ' ']);
            let q: u64 = rest.parse().map_err(|_| unknown())?;
            return FieldSpec::prime(q);
        }
        if let Some(rest) = s.strip_prefix("float") {
            let rest = rest.trim_start_matches([':', ' ']);
            if rest.is_empty() {
                return Ok(FieldSpec::Float(Tolerance::default()));
            }
            let t: f64 = rest.parse().map_err(|_| unknown())?;
            return FieldSpec::float(t);
        }
        Err(unknown())
    }
}

/// Shortest round-tripping decimal; switches to exponent form for very large
/// or very small magnitudes.
pub(crate) fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// An element of one of the supported fields.
///
/// Exact fields compare by canonical form. Float elements compare with
/// `|a - b| <= tol * max(1, |a|, |b|)`, which is not transitive, so this type
/// deliberately does not implement `Eq` or `Hash`.
#[derive(Debug, Clone)]
pub enum FieldElement {
    /// Always in lowest terms with a positive denominator.
    Rational(BigRational),
    Prime {
        residue: u32,
        modulus: Modulus,
    },
    Float {
        value: f64,
        tolerance: Tolerance,
    },
}

impl FieldElement {
    pub fn rational(num: i64, den: i64) -> Result<Self, FieldError> {
        FieldSpec::Rational.from_ratio(num, den)
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rational,
            FieldElement::Prime { modulus, .. } => FieldSpec::PrimeField(*modulus),
            FieldElement::Float { tolerance, .. } => FieldSpec::Float(*tolerance),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { residue, .. } => *residue == 0,
            FieldElement::Float { value, tolerance } => value.abs() <= tolerance.get(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.spec().one()
    }

    /// Lossy view as `f64`, used for float-field comparisons and diagnostics.
    pub fn to_f64(&self) -> f64 {
        match self {
            FieldElement::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            FieldElement::Prime { residue, .. } => *residue as f64,
            FieldElement::Float { value, .. } => *value,
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), FieldError> {
        let (l, r) = (self.spec(), other.spec());
        if l == r {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch { left: l, right: r })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (
                FieldElement::Prime {
                    residue: a,
                    modulus,
                },
                FieldElement::Prime { residue: b, .. },
            ) => FieldElement::Prime {
                residue: ((*a as u64 + *b as u64) % modulus.get() as u64) as u32,
                modulus: *modulus,
            },
            (
                FieldElement::Float {
                    value: a,
                    tolerance,
                },
                FieldElement::Float { value: b, .. },
            ) => FieldElement::Float {
                value: a + b,
                tolerance: *tolerance,
            },
            _ => unreachable!("specs checked"),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Prime {
                    residue: a,
                    modulus,
                },
                FieldElement::Prime { residue: b, .. },
            ) => FieldElement::Prime {
                residue: ((*a as u64 * *b as u64) % modulus.get() as u64) as u32,
                modulus: *modulus,
            },
            (
                FieldElement::Float {
                    value: a,
                    tolerance,
                },
                FieldElement::Float { value: b, .. },
            ) => FieldElement::Float {
                value: a * b,
                tolerance: *tolerance,
            },
            _ => unreachable!("specs checked"),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: if *residue == 0 {
                    0
                } else {
                    modulus.get() - residue
                },
                modulus: *modulus,
            },
            FieldElement::Float { value, tolerance } => FieldElement::Float {
                value: -value,
                tolerance: *tolerance,
            },
        }
    }

    /// Multiplicative inverse. For `GF(q)` this runs the extended Euclidean
    /// algorithm on `(residue, q)`.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(a) => FieldElement::Rational(a.recip()),
            FieldElement::Prime { residue, modulus } => FieldElement::Prime {
                residue: mod_inverse(*residue, modulus.get()),
                modulus: *modulus,
            },
            FieldElement::Float { value, tolerance } => FieldElement::Float {
                value: 1.0 / value,
                tolerance: *tolerance,
            },
        })
    }

    /// Absolute value for the float field; `None` for exact fields where the
    /// ordering is irrelevant to pivot selection.
    pub(crate) fn float_magnitude(&self) -> Option<f64> {
        match self {
            FieldElement::Float { value, .. } => Some(value.abs()),
            _ => None,
        }
    }
}

/// `a^{-1} mod q` for `0 < a < q`, `q` prime.
fn mod_inverse(a: u32, q: u32) -> u32 {
    let (mut old_r, mut r) = (a as i64, q as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(q as i64) as u32
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a == b,
            (
                FieldElement::Prime {
                    residue: a,
                    modulus: qa,
                },
                FieldElement::Prime {
                    residue: b,
                    modulus: qb,
                },
            ) => qa == qb && a == b,
            (
                FieldElement::Float {
                    value: a,
                    tolerance: ta,
                },
                FieldElement::Float {
                    value: b,
                    tolerance: tb,
                },
            ) => ta == tb && (a - b).abs() <= ta.get() * 1f64.max(a.abs()).max(b.abs()),
            _ => false,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Prime { residue, .. } => write!(f, "{residue}"),
            FieldElement::Float { value, .. } => f.write_str(&format_f64(*value)),
        }
    }
}

// Operator forms panic on mismatched fields. Matrix code validates field
// uniformity once at construction and then relies on these.
impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.try_add(rhs).expect("field mismatch in +")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch in -")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch in *")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}
