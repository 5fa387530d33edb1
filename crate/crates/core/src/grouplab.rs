//! Mechanical checks of the algebraic structure of 3D matrices.
//!
//! Four laws are checked on seeded random samples:
//!
//! | law         | structure                                   |
//! |-------------|---------------------------------------------|
//! | `add-group` | `(M_{n x n x p}(F), +)` is an abelian group |
//! | `semigroup` | `(M_{n x n x p}(F), ⊙)` is a monoid         |
//! | `closure`   | invertible matrices are closed under `⊙`, and `det(A ⊙ B) = det A ⊙ det B` |
//! | `gl-group`  | invertible matrices form a group under `⊙`  |
//!
//! Over small prime fields the same laws can be checked exhaustively
//! ([`verify_semigroup_exhaustive`], [`CayleyTable`]) and the size of the
//! group can be counted by brute force ([`census_gl`]).
//!
//! Failures never abort a run. They are counted in a [`VerificationReport`]
//! together with up to [`MAX_WITNESSES`] counterexamples, each reduced to the
//! first layer on which the two sides of the law disagree.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::error::{AlgebraError, Result as AlgebraResult};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg2d::Matrix2;
use crate::tensor3d::Matrix3;

pub const MAX_WITNESSES: usize = 5;
/// Redraws allowed per layer before rejection sampling gives up.
pub const MAX_REDRAWS: usize = 1000;
/// Largest number of 3D matrices any exhaustive routine will enumerate.
pub const ENUMERATION_CAP: u64 = 1 << 20;
/// Numerators and denominators of sampled rationals lie in `[-HEIGHT, HEIGHT]`.
pub const HEIGHT: i64 = 9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("rejection sampling exhausted after {attempts} draws for layer {layer}")]
    SamplingExhausted { layer: usize, attempts: usize },
    #[error("enumeration of {q}^{exponent} matrices exceeds the cap of 2^20")]
    EnumerationTooLarge { q: u32, exponent: usize },
    #[error("exhaustive enumeration needs a finite field, got {0}")]
    NotFinite(FieldSpec),
    #[error("sample count must be at least 1")]
    NoSamples,
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

/// Outcome of checking one law.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub property: String,
    pub samples: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(property: impl Into<String>) -> Self {
        VerificationReport {
            property: property.into(),
            samples: 0,
            failures: 0,
            witnesses: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, witness: Option<String>) {
        self.samples += 1;
        if let Some(w) = witness {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    /// Folds another report into this one: counts add, witnesses concatenate
    /// (still capped) in call order.
    pub fn merge(&mut self, other: VerificationReport) {
        self.samples += other.samples;
        self.failures += other.failures;
        self.elapsed += other.elapsed;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses
            .extend(other.witnesses.into_iter().take(room));
    }

    /// Line-oriented text block. Timing is left out so that identical runs
    /// print identical text.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} samples={} failures={}\n",
            self.property,
            if self.passed() { "PASS" } else { "FAIL" },
            self.samples,
            self.failures
        );
        for w in &self.witnesses {
            out.push_str("  witness: ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "property": self.property,
            "samples": self.samples,
            "failures": self.failures,
            "passed": self.passed(),
            "witnesses": self.witnesses,
            "elapsed_ms": self.elapsed.as_secs_f64() * 1e3,
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

/// Which law to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    AddGroup,
    Semigroup,
    Closure,
    GlGroup,
}

impl Law {
    /// In the order the structure is built up: additive group, monoid,
    /// closure of the invertibles, group.
    pub const ALL: [Law; 4] = [Law::AddGroup, Law::Semigroup, Law::Closure, Law::GlGroup];

    pub fn name(self) -> &'static str {
        match self {
            Law::AddGroup => "add-group",
            Law::Semigroup => "semigroup",
            Law::Closure => "closure",
            Law::GlGroup => "gl-group",
        }
    }

    pub fn verify(
        self,
        n: usize,
        p: usize,
        spec: FieldSpec,
        samples: usize,
        seed: u64,
    ) -> Result<VerificationReport> {
        match self {
            Law::AddGroup => verify_abelian_group_add(n, p, spec, samples, seed),
            Law::Semigroup => verify_semigroup_odot(n, p, spec, samples, seed),
            Law::Closure => verify_gl_closure(n, p, spec, samples, seed),
            Law::GlGroup => verify_group_gl(n, p, spec, samples, seed),
        }
    }
}

impl FromStr for Law {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Law::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| {
            format!("unknown law `{s}` (expected add-group, semigroup, closure, gl-group or all)")
        })
    }
}

/// Seeded generator of field elements and matrices.
///
/// Finite fields draw residues uniformly. Rationals (and floats, via the same
/// rationals) draw `num / den` with both in `[-9, 9]` and `den != 0`.
pub struct Sampler {
    spec: FieldSpec,
    rng: ChaCha8Rng,
    proposals: u64,
    accepted: u64,
}

impl Sampler {
    pub fn new(spec: FieldSpec, seed: u64) -> Self {
        Sampler {
            spec,
            rng: ChaCha8Rng::seed_from_u64(seed),
            proposals: 0,
            accepted: 0,
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn element(&mut self) -> FieldElement {
        match self.spec.order() {
            Some(q) => self.spec.from_i64(self.rng.random_range(0..q as i64)),
            None => {
                let num = self.rng.random_range(-HEIGHT..=HEIGHT);
                let mut den = 0;
                while den == 0 {
                    den = self.rng.random_range(-HEIGHT..=HEIGHT);
                }
                self.spec.from_ratio(num, den).expect("nonzero denominator")
            }
        }
    }

    pub fn matrix2(&mut self, rows: usize, cols: usize) -> AlgebraResult<Matrix2> {
        let entries = (0..rows * cols).map(|_| self.element()).collect();
        Matrix2::from_vec(self.spec, rows, cols, entries)
    }

    pub fn matrix3(&mut self, rows: usize, cols: usize, depth: usize) -> AlgebraResult<Matrix3> {
        if depth == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        Matrix3::from_layers(
            (0..depth)
                .map(|_| self.matrix2(rows, cols))
                .collect::<AlgebraResult<_>>()?,
        )
    }

    /// Nonsingular `n x n` layer by rejection.
    pub fn gl_layer(&mut self, n: usize, layer: usize) -> Result<Matrix2> {
        for _ in 0..MAX_REDRAWS {
            let m = self.matrix2(n, n)?;
            self.proposals += 1;
            if !m.det()?.is_zero() {
                self.accepted += 1;
                return Ok(m);
            }
        }
        Err(LabError::SamplingExhausted {
            layer,
            attempts: MAX_REDRAWS,
        })
    }

    /// `n x n x p` matrix whose layers are all nonsingular.
    pub fn gl(&mut self, n: usize, depth: usize) -> Result<Matrix3> {
        if depth == 0 {
            return Err(AlgebraError::ZeroDimension.into());
        }
        let layers = (1..=depth)
            .map(|k| self.gl_layer(n, k))
            .collect::<Result<_>>()?;
        Ok(Matrix3::from_layers(layers)?)
    }

    /// `n x n x p` matrix outside the group: one randomly chosen layer gets a
    /// last row that is a multiple of its first row (or is zero when `n = 1`).
    pub fn singular(&mut self, n: usize, depth: usize) -> Result<Matrix3> {
        let mut layers = self.matrix3(n, n, depth)?.into_layers();
        let k = self.rng.random_range(0..depth);
        let c = self.element();
        let layer = &layers[k];
        let mut entries = layer.entries().to_vec();
        for j in 0..n {
            entries[(n - 1) * n + j] = if n == 1 {
                self.spec.zero()
            } else {
                &c * &entries[j]
            };
        }
        layers[k] = Matrix2::from_vec(self.spec, n, n, entries)?;
        Ok(Matrix3::from_layers(layers)?)
    }

    /// Fraction of proposed layers accepted by [`Self::gl_layer`] so far.
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            return f64::NAN;
        }
        self.accepted as f64 / self.proposals as f64
    }
}

pub fn sample_matrix3(n: usize, p: usize, spec: FieldSpec, seed: u64) -> Result<Matrix3> {
    Ok(Sampler::new(spec, seed).matrix3(n, n, p)?)
}

pub fn sample_gl(n: usize, p: usize, spec: FieldSpec, seed: u64) -> Result<Matrix3> {
    Sampler::new(spec, seed).gl(n, p)
}

/// Compares two results of a law and, on disagreement, describes the first
/// layer where they differ together with the inputs restricted to that layer.
fn check_law(
    law: &str,
    lhs: AlgebraResult<Matrix3>,
    rhs: AlgebraResult<Matrix3>,
    inputs: &[(&str, &Matrix3)],
) -> Option<String> {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => {
            if l == r {
                return None;
            }
            let k = (1..=l.depth().min(r.depth()))
                .find(|&k| l.layer(k).ok() != r.layer(k).ok())
                .unwrap_or(1);
            let mut w = format!("{law} fails at layer {k}:");
            for (name, m) in inputs {
                if let Ok(layer) = m.layer(k) {
                    w.push_str(&format!(" {name}={layer}"));
                }
            }
            w.push_str(&format!(
                " lhs={} rhs={}",
                l.layer(k).map(ToString::to_string).unwrap_or_default(),
                r.layer(k).map(ToString::to_string).unwrap_or_default()
            ));
            Some(w)
        }
        (l, r) => {
            let err = l.err().or(r.err()).expect("one side failed");
            let mut w = format!("{law} raised `{err}`:");
            for (name, m) in inputs {
                w.push_str(&format!(" {name}={m}"));
            }
            Some(w)
        }
    }
}

fn first_failure(checks: impl IntoIterator<Item = Option<String>>) -> Option<String> {
    checks.into_iter().flatten().next()
}

fn timed(
    property: String,
    samples: usize,
    mut body: impl FnMut(&mut VerificationReport) -> Result<()>,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(LabError::NoSamples);
    }
    let start = Instant::now();
    let mut report = VerificationReport::new(property);
    body(&mut report)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

fn label(law: &str, n: usize, p: usize, spec: FieldSpec) -> String {
    format!("{law} [{spec}, {n}x{n}x{p}]")
}

/// Associativity, commutativity, `A + O = A` and `A + (-A) = O` on random
/// triples.
pub fn verify_abelian_group_add(
    n: usize,
    p: usize,
    spec: FieldSpec,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    verify_abelian_group_add_with(n, p, spec, samples, seed, Matrix3::add)
}

/// [`verify_abelian_group_add`] with a caller-supplied addition, so the
/// harness itself can be tested against a broken operation.
pub fn verify_abelian_group_add_with<F>(
    n: usize,
    p: usize,
    spec: FieldSpec,
    samples: usize,
    seed: u64,
    add: F,
) -> Result<VerificationReport>
where
    F: Fn(&Matrix3, &Matrix3) -> AlgebraResult<Matrix3>,
{
    let mut rng = Sampler::new(spec, seed);
    let zero = Matrix3::zeros(n, n, p, spec)?;
    timed(label("add-group", n, p, spec), samples, |report| {
        for _ in 0..samples {
            let a = rng.matrix3(n, n, p)?;
            let b = rng.matrix3(n, n, p)?;
            let c = rng.matrix3(n, n, p)?;
            let inputs = [("A", &a), ("B", &b), ("C", &c)];
            let assoc = check_law(
                "associativity",
                add(&a, &b).and_then(|ab| add(&ab, &c)),
                add(&b, &c).and_then(|bc| add(&a, &bc)),
                &inputs,
            );
            let comm = check_law("commutativity", add(&a, &b), add(&b, &a), &inputs[..2]);
            let ident = check_law("zero identity", add(&a, &zero), Ok(a.clone()), &inputs[..1]);
            let opp = check_law(
                "opposite",
                add(&a, &a.neg()),
                Ok(zero.clone()),
                &inputs[..1],
            );
            report.record(first_failure([assoc, comm, ident, opp]));
        }
        Ok(())
    })
}

fn semigroup_witness(a: &Matrix3, b: &Matrix3, c: &Matrix3, id: &Matrix3) -> Option<String> {
    let inputs = [("A", a), ("B", b), ("C", c)];
    first_failure([
        check_law(
            "⊙ associativity",
            a.odot(b).and_then(|ab| ab.odot(c)),
            b.odot(c).and_then(|bc| a.odot(&bc)),
            &inputs,
        ),
        check_law("left identity", id.odot(a), Ok(a.clone()), &inputs[..1]),
        check_law("right identity", a.odot(id), Ok(a.clone()), &inputs[..1]),
    ])
}

/// `⊙`-associativity and two-sided identity on random triples.
pub fn verify_semigroup_odot(
    n: usize,
    p: usize,
    spec: FieldSpec,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = Sampler::new(spec, seed);
    let id = Matrix3::identity(n, p, spec)?;
    timed(label("semigroup", n, p, spec), samples, |report| {
        for _ in 0..samples {
            let a = rng.matrix3(n, n, p)?;
            let b = rng.matrix3(n, n, p)?;
            let c = rng.matrix3(n, n, p)?;
            report.record(semigroup_witness(&a, &b, &c, &id));
        }
        Ok(())
    })
}

fn closure_witness(a: &Matrix3, b: &Matrix3) -> AlgebraResult<Option<String>> {
    let det_ab = a.odot(b)?.det()?;
    let expected = a.det()?.componentwise_mul(&b.det()?)?;
    if !det_ab.is_absolutely_nonzero() {
        return Ok(Some(format!(
            "product left the group: det(A⊙B)={det_ab} A={a} B={b}"
        )));
    }
    if det_ab != expected {
        return Ok(Some(format!(
            "det(A⊙B)={det_ab} but det(A)⊙det(B)={expected}: A={a} B={b}"
        )));
    }
    Ok(None)
}

/// For random pairs of invertible matrices, the product is invertible and
/// its determinant is the componentwise product of the factors'.
pub fn verify_gl_closure(
    n: usize,
    p: usize,
    spec: FieldSpec,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = Sampler::new(spec, seed);
    timed(label("closure", n, p, spec), samples, |report| {
        for _ in 0..samples {
            let a = rng.gl(n, p)?;
            let b = rng.gl(n, p)?;
            report.record(closure_witness(&a, &b)?);
        }
        Ok(())
    })
}

fn group_witness(a: &Matrix3, id: &Matrix3) -> Option<String> {
    let inv = match a.inverse() {
        Ok(inv) => inv,
        Err(e) => return Some(format!("inverse raised `{e}`: A={a}")),
    };
    let inputs = [("A", a)];
    let det_check = match (inv.det(), a.det().and_then(|d| d.hat())) {
        (Ok(d_inv), Ok(hat)) if d_inv == hat && d_inv.is_absolutely_nonzero() => None,
        (Ok(d_inv), Ok(hat)) => Some(format!("det(A⁻¹)={d_inv} but hat(det A)={hat}: A={a}")),
        (Err(e), _) | (_, Err(e)) => Some(format!("determinant raised `{e}`: A={a}")),
    };
    first_failure([
        check_law("right inverse", a.odot(&inv), Ok(id.clone()), &inputs),
        check_law("left inverse", inv.odot(a), Ok(id.clone()), &inputs),
        det_check,
    ])
}

/// For random invertible `A`: `A ⊙ A⁻¹ = A⁻¹ ⊙ A = I` and
/// `det(A⁻¹) = hat(det A)`.
pub fn verify_group_gl(
    n: usize,
    p: usize,
    spec: FieldSpec,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    verify_group_gl_with(n, p, spec, samples, seed, &[])
}

/// [`verify_group_gl`] that also checks the given fixed matrices, before the
/// random ones. Pinned cases count toward `samples`.
pub fn verify_group_gl_with(
    n: usize,
    p: usize,
    spec: FieldSpec,
    samples: usize,
    seed: u64,
    pinned: &[Matrix3],
) -> Result<VerificationReport> {
    let mut rng = Sampler::new(spec, seed);
    let id = Matrix3::identity(n, p, spec)?;
    timed(label("gl-group", n, p, spec), samples, |report| {
        for a in pinned.iter().take(samples) {
            report.record(group_witness(a, &id));
        }
        for _ in pinned.len().min(samples)..samples {
            let a = rng.gl(n, p)?;
            report.record(group_witness(&a, &id));
        }
        Ok(())
    })
}

/// Runs every law in [`Law::ALL`] order.
pub fn verify_all(
    n: usize,
    p: usize,
    spec: FieldSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    Law::ALL
        .iter()
        .map(|law| law.verify(n, p, spec, samples, seed))
        .collect()
}

fn enumeration_size(n: usize, p: usize, spec: FieldSpec) -> Result<(u32, u64)> {
    let q = spec.order().ok_or(LabError::NotFinite(spec))?;
    let exponent = n * n * p;
    let total = u32::try_from(exponent)
        .ok()
        .and_then(|e| (q as u64).checked_pow(e))
        .filter(|&t| t <= ENUMERATION_CAP)
        .ok_or(LabError::EnumerationTooLarge { q, exponent })?;
    Ok((q, total))
}

/// Every `n x n x p` matrix over `GF(q)`, in lexicographic order of the
/// residues (layer 1 first, row-major within a layer).
pub fn enumerate_matrix3(
    n: usize,
    p: usize,
    spec: FieldSpec,
) -> Result<impl Iterator<Item = Matrix3>> {
    if n == 0 || p == 0 {
        return Err(AlgebraError::ZeroDimension.into());
    }
    let (q, total) = enumeration_size(n, p, spec)?;
    let cells = n * n * p;
    Ok((0..total).map(move |mut index| {
        let mut digits = vec![0u64; cells];
        for d in digits.iter_mut().rev() {
            *d = index % q as u64;
            index /= q as u64;
        }
        let layers = digits
            .chunks(n * n)
            .map(|chunk| {
                let entries = chunk
                    .iter()
                    .map(|&r| spec.residue(r).expect("finite field"))
                    .collect();
                Matrix2::from_vec(spec, n, n, entries).expect("n x n layer")
            })
            .collect();
        Matrix3::from_layers(layers).expect("uniform layers")
    }))
}

/// ⊙-associativity and identity over *all* triples of `n x n x p` matrices.
pub fn verify_semigroup_exhaustive(
    n: usize,
    p: usize,
    spec: FieldSpec,
) -> Result<VerificationReport> {
    let elements: Vec<Matrix3> = enumerate_matrix3(n, p, spec)?.collect();
    let triples = (elements.len() as u64).pow(3);
    if triples > ENUMERATION_CAP {
        return Err(LabError::EnumerationTooLarge {
            q: spec.order().unwrap_or(0),
            exponent: 3 * n * n * p,
        });
    }
    let id = Matrix3::identity(n, p, spec)?;
    timed(
        format!("semigroup exhaustive [{spec}, {n}x{n}x{p}]"),
        1,
        |report| {
            for a in &elements {
                for b in &elements {
                    for c in &elements {
                        report.record(semigroup_witness(a, b, c, &id));
                    }
                }
            }
            Ok(())
        },
    )
}

/// Multiplication table of the invertible `n x n x p` matrices over a prime
/// field, indexed by position in [`Self::elements`].
#[derive(Debug, Clone)]
pub struct CayleyTable {
    pub spec: FieldSpec,
    pub elements: Vec<Matrix3>,
    /// `table[i][j]` is the index of `elements[i] ⊙ elements[j]`, or `None`
    /// when the product is not among the elements.
    pub table: Vec<Vec<Option<usize>>>,
}

impl CayleyTable {
    /// Enumerates the invertible matrices and tabulates all products.
    pub fn build(n: usize, p: usize, spec: FieldSpec) -> Result<CayleyTable> {
        let elements: Vec<Matrix3> = enumerate_matrix3(n, p, spec)?
            .filter(|m| m.det().map(|d| d.is_absolutely_nonzero()).unwrap_or(false))
            .collect();
        let index: HashMap<String, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.to_string(), i))
            .collect();
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        let prod = a.odot(b)?;
                        Ok(index.get(&prod.to_string()).copied())
                    })
                    .collect::<AlgebraResult<Vec<_>>>()
            })
            .collect::<AlgebraResult<Vec<_>>>()?;
        Ok(CayleyTable {
            spec,
            elements,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Closure, associativity, a two-sided identity equal to `I`, and a
    /// two-sided inverse for each element that agrees with [`Matrix3::inverse`].
    pub fn verify_group_axioms(&self) -> VerificationReport {
        let start = Instant::now();
        let g = self.order();
        let mut report = VerificationReport::new(format!("cayley table [{}, |G|={g}]", self.spec));
        for i in 0..g {
            for j in 0..g {
                report.record(self.table[i][j].is_none().then(|| {
                    format!(
                        "closure: {} ⊙ {} left the set",
                        self.elements[i], self.elements[j]
                    )
                }));
            }
        }
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    let lhs = self.table[i][j].and_then(|ij| self.table[ij][k]);
                    let rhs = self.table[j][k].and_then(|jk| self.table[i][jk]);
                    report
                        .record((lhs != rhs).then(|| {
                            format!("associativity: ({i},{j},{k}) -> {lhs:?} vs {rhs:?}")
                        }));
                }
            }
        }
        let identity = (0..g)
            .find(|&e| (0..g).all(|x| self.table[e][x] == Some(x) && self.table[x][e] == Some(x)));
        let (m, n, p) = self.elements.first().map_or((1, 1, 1), Matrix3::dims);
        debug_assert_eq!(m, n);
        let expected_identity = Matrix3::identity(n, p, self.spec).ok();
        report.record(match identity {
            Some(e) if Some(&self.elements[e]) == expected_identity.as_ref() => None,
            Some(e) => Some(format!("identity is {} rather than I", self.elements[e])),
            None => Some("no two-sided identity".to_string()),
        });
        if let Some(e) = identity {
            for i in 0..g {
                let inverse =
                    (0..g).find(|&j| self.table[i][j] == Some(e) && self.table[j][i] == Some(e));
                report.record(match inverse {
                    None => Some(format!("{} has no inverse in the table", self.elements[i])),
                    Some(j) => match self.elements[i].inverse() {
                        Ok(inv) if inv == self.elements[j] => None,
                        Ok(inv) => Some(format!(
                            "table inverse {} differs from adjugate inverse {inv}",
                            self.elements[j]
                        )),
                        Err(err) => Some(format!("inverse of {} raised `{err}`", self.elements[i])),
                    },
                });
            }
        }
        report.elapsed = start.elapsed();
        report
    }
}

/// Brute-force count of invertible `n x n x p` matrices over `GF(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlCensus {
    pub n: usize,
    pub p: usize,
    pub field: FieldSpec,
    pub total_matrices: u64,
    pub gl_order: u64,
}

impl GlCensus {
    /// `(prod_{i<n} (q^n - q^i))^p`.
    pub fn closed_form(&self) -> u64 {
        let q = self.field.order().expect("finite field") as u64;
        gl2_order(self.n, q).pow(self.p as u32)
    }

    pub fn matches_closed_form(&self) -> bool {
        self.gl_order == self.closed_form()
    }
}

impl fmt::Display for GlCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "total={} gl={}", self.total_matrices, self.gl_order)
    }
}

/// `|GL(n, q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl2_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

/// Enumerates all `q^(n^2 p)` matrices (capped at `2^20`) and counts those
/// with an absolutely nonzero determinant.
pub fn census_gl(n: usize, p: usize, q: u64) -> Result<GlCensus> {
    let spec = FieldSpec::prime(q).map_err(AlgebraError::from)?;
    let mut total = 0u64;
    let mut gl_order = 0u64;
    for m in enumerate_matrix3(n, p, spec)? {
        total += 1;
        if m.det()?.is_absolutely_nonzero() {
            gl_order += 1;
        }
    }
    Ok(GlCensus {
        n,
        p,
        field: spec,
        total_matrices: total,
        gl_order,
    })
}
