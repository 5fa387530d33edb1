//! Layered `m x n x p` matrices and multi-scalars.
//!
//! A [`Matrix3`] is an ordered stack of `p` equally shaped [`Matrix2`] layers,
//! indexed `k = 1..=p` from the bottom (front) layer upwards. All products,
//! determinants and inverses act layer by layer, which makes
//! `M_{n x n x p}(F)` the `p`-fold direct product of `M_n(F)`.
//!
//! A [`MultiScalar`] is the `1 x 1 x p` case: one field element per layer.
//! It is the value of [`Matrix3::det`] and acts on 3D matrices by scaling each
//! layer with its own component.

use std::fmt;

use rayon::prelude::*;

use crate::error::{AlgebraError, Result};
use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::linalg2d::Matrix2;

/// Layer count times per-layer cubic cost above which layer maps run on the
/// rayon pool. Results are collected in layer order either way.
const PARALLEL_WORK: usize = 1 << 14;

fn map_layers<T, F>(layers: &[Matrix2], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Matrix2) -> Result<T> + Sync + Send,
{
    let n = layers[0].rows().max(layers[0].cols());
    let results: Vec<Result<T>> = if layers.len() > 1 && layers.len() * n * n * n >= PARALLEL_WORK {
        layers.par_iter().map(&f).collect()
    } else {
        layers.iter().map(&f).collect()
    };
    results.into_iter().collect()
}

fn zip_layers<T, F>(a: &[Matrix2], b: &[Matrix2], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Matrix2, &Matrix2) -> Result<T> + Sync + Send,
{
    let n = a[0].rows().max(a[0].cols());
    let results: Vec<Result<T>> = if a.len() > 1 && a.len() * n * n * n >= PARALLEL_WORK {
        a.par_iter()
            .zip(b.par_iter())
            .map(|(x, y)| f(x, y))
            .collect()
    } else {
        a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
    };
    results.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix3 {
    rows: usize,
    cols: usize,
    spec: FieldSpec,
    layers: Vec<Matrix2>,
}

impl Matrix3 {
    /// Stacks layers bottom-up: `layers[0]` becomes layer `k = 1`.
    pub fn from_layers(layers: Vec<Matrix2>) -> Result<Self> {
        let first = layers.first().ok_or_else(|| AlgebraError::ShapeMismatch {
            expected: "at least one layer".into(),
            found: "none".into(),
        })?;
        let (rows, cols, spec) = (first.rows(), first.cols(), first.spec());
        for (k, layer) in layers.iter().enumerate() {
            if layer.spec() != spec {
                return Err(FieldError::FieldMismatch {
                    left: spec,
                    right: layer.spec(),
                }
                .into());
            }
            if layer.shape() != (rows, cols) {
                return Err(AlgebraError::ShapeMismatch {
                    expected: format!("{rows}x{cols} layers"),
                    found: format!("layer {} is {}x{}", k + 1, layer.rows(), layer.cols()),
                });
            }
        }
        Ok(Matrix3 {
            rows,
            cols,
            spec,
            layers,
        })
    }

    /// Convenience constructor: `layers[k-1]` holds the integer rows of layer `k`.
    pub fn from_i64<L, R>(spec: FieldSpec, layers: &[L]) -> Result<Self>
    where
        L: AsRef<[R]>,
        R: AsRef<[i64]>,
    {
        Self::from_layers(
            layers
                .iter()
                .map(|l| Matrix2::from_i64(spec, l.as_ref()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn zeros(rows: usize, cols: usize, depth: usize, spec: FieldSpec) -> Result<Self> {
        if depth == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        let layer = Matrix2::zeros(spec, rows, cols)?;
        Self::from_layers(vec![layer; depth])
    }

    /// `I_{n x n x p}`: the identity in every layer.
    pub fn identity(n: usize, depth: usize, spec: FieldSpec) -> Result<Self> {
        if depth == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        let layer = Matrix2::identity(spec, n)?;
        Self::from_layers(vec![layer; depth])
    }

    /// `(m, n, p)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.layers.len())
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn layers(&self) -> &[Matrix2] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<Matrix2> {
        self.layers
    }

    /// Layer `k`, 1-based.
    pub fn layer(&self, k: usize) -> Result<&Matrix2> {
        if (1..=self.depth()).contains(&k) {
            Ok(&self.layers[k - 1])
        } else {
            Err(AlgebraError::IndexOutOfRange {
                index: k,
                bound: self.depth(),
            })
        }
    }

    /// Entry `a_{i,j,k}`, all 1-based.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Result<&FieldElement> {
        self.layer(k)?.get(i, j)
    }

    fn check_compatible(&self, other: &Matrix3) -> Result<()> {
        if self.spec != other.spec {
            return Err(FieldError::FieldMismatch {
                left: self.spec,
                right: other.spec,
            }
            .into());
        }
        if self.dims() != other.dims() {
            let (m, n, p) = other.dims();
            return Err(AlgebraError::ShapeMismatch {
                expected: self.dims_string(),
                found: format!("{m}x{n}x{p}"),
            });
        }
        Ok(())
    }

    fn dims_string(&self) -> String {
        let (m, n, p) = self.dims();
        format!("{m}x{n}x{p}")
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn with_layers(&self, layers: Vec<Matrix2>) -> Matrix3 {
        Matrix3 {
            rows: layers[0].rows(),
            cols: layers[0].cols(),
            spec: self.spec,
            layers,
        }
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Matrix3) -> Result<Matrix3> {
        self.check_compatible(other)?;
        Ok(self.with_layers(zip_layers(&self.layers, &other.layers, Matrix2::add)?))
    }

    /// The opposite matrix: every entry negated.
    pub fn neg(&self) -> Matrix3 {
        self.with_layers(self.layers.iter().map(Matrix2::neg).collect())
    }

    /// Layer-wise product `A ⊙ B`: layer `k` of the result is
    /// `A_k * B_k`. Both operands must be `n x n x p`.
    pub fn odot(&self, other: &Matrix3) -> Result<Matrix3> {
        self.require_square()?;
        other.require_square()?;
        self.check_compatible(other)?;
        Ok(self.with_layers(zip_layers(&self.layers, &other.layers, Matrix2::mul)?))
    }

    /// Multi-scalar of layer determinants.
    pub fn det(&self) -> Result<MultiScalar> {
        self.require_square()?;
        Ok(MultiScalar {
            spec: self.spec,
            components: map_layers(&self.layers, Matrix2::det)?,
        })
    }

    /// Adjugate computed page by page.
    pub fn adjugate(&self) -> Result<Matrix3> {
        self.require_square()?;
        Ok(self.with_layers(map_layers(&self.layers, Matrix2::adjugate)?))
    }

    /// `hat(det(A)) ∗ adj(A)`. Fails with every singular layer listed.
    pub fn inverse(&self) -> Result<Matrix3> {
        let det = self.det()?;
        let singular = det.zero_components();
        if !singular.is_empty() {
            return Err(AlgebraError::SingularLayers(singular));
        }
        det.hat()?.mul_matrix(&self.adjugate()?)
    }

    /// Per-layer Gauss-Jordan inverse. Shares nothing with [`Self::inverse`]
    /// beyond the layer split, so the two cross-check each other.
    pub fn inverse_gauss(&self) -> Result<Matrix3> {
        self.require_square()?;
        let results: Vec<Result<Matrix2>> =
            self.layers.iter().map(Matrix2::inverse_gauss).collect();
        let singular: Vec<usize> = results
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, Err(AlgebraError::SingularMatrix)))
            .map(|(k, _)| k + 1)
            .collect();
        if !singular.is_empty() {
            return Err(AlgebraError::SingularLayers(singular));
        }
        Ok(self.with_layers(results.into_iter().collect::<Result<_>>()?))
    }
}

/// Compact single-line form in the `.m3` object syntax.
impl fmt::Display for Matrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix {} {{", self.dims_string())?;
        for (k, layer) in self.layers.iter().enumerate() {
            write!(f, " layer {}: {}", k + 1, layer)?;
        }
        f.write_str(" }")
    }
}

/// A `1 x 1 x p` 3D matrix stored as its `p` components, `k = 1..=p`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiScalar {
    spec: FieldSpec,
    components: Vec<FieldElement>,
}

impl MultiScalar {
    pub fn new(spec: FieldSpec, components: Vec<FieldElement>) -> Result<Self> {
        if components.is_empty() {
            return Err(AlgebraError::ZeroDimension);
        }
        if let Some(bad) = components.iter().find(|c| c.spec() != spec) {
            return Err(FieldError::FieldMismatch {
                left: spec,
                right: bad.spec(),
            }
            .into());
        }
        Ok(MultiScalar { spec, components })
    }

    pub fn from_i64(spec: FieldSpec, components: &[i64]) -> Result<Self> {
        Self::new(spec, components.iter().map(|&c| spec.from_i64(c)).collect())
    }

    pub fn ones(spec: FieldSpec, depth: usize) -> Result<Self> {
        Self::new(spec, vec![spec.one(); depth])
    }

    /// The absolutely-zero multi-scalar.
    pub fn zero(spec: FieldSpec, depth: usize) -> Result<Self> {
        Self::new(spec, vec![spec.zero(); depth])
    }

    pub fn depth(&self) -> usize {
        self.components.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn components(&self) -> &[FieldElement] {
        &self.components
    }

    /// Component `k`, 1-based.
    pub fn component(&self, k: usize) -> Result<&FieldElement> {
        if (1..=self.depth()).contains(&k) {
            Ok(&self.components[k - 1])
        } else {
            Err(AlgebraError::IndexOutOfRange {
                index: k,
                bound: self.depth(),
            })
        }
    }

    /// 1-based indices of zero components.
    pub fn zero_components(&self) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_zero())
            .map(|(k, _)| k + 1)
            .collect()
    }

    /// True iff no component is zero.
    pub fn is_absolutely_nonzero(&self) -> bool {
        self.components.iter().all(|c| !c.is_zero())
    }

    /// Componentwise reciprocal.
    pub fn hat(&self) -> Result<MultiScalar> {
        if let Some(&k) = self.zero_components().first() {
            return Err(AlgebraError::NotAbsolutelyNonzero { component: k });
        }
        Ok(MultiScalar {
            spec: self.spec,
            components: self
                .components
                .iter()
                .map(FieldElement::inv)
                .collect::<Result<_, _>>()?,
        })
    }

    fn check_compatible(&self, depth: usize, spec: FieldSpec) -> Result<()> {
        if self.spec != spec {
            return Err(FieldError::FieldMismatch {
                left: self.spec,
                right: spec,
            }
            .into());
        }
        if self.depth() != depth {
            return Err(AlgebraError::DepthMismatch {
                left: self.depth(),
                right: depth,
            });
        }
        Ok(())
    }

    /// Product of two multi-scalars taken as `1 x 1 x p` matrices under ⊙,
    /// i.e. componentwise.
    pub fn componentwise_mul(&self, other: &MultiScalar) -> Result<MultiScalar> {
        self.check_compatible(other.depth(), other.spec)?;
        Ok(MultiScalar {
            spec: self.spec,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// The action `a ∗ A`: layer `k` of `A` scaled by component `k`.
    pub fn mul_matrix(&self, a: &Matrix3) -> Result<Matrix3> {
        self.check_compatible(a.depth(), a.spec())?;
        let layers = a
            .layers()
            .iter()
            .zip(&self.components)
            .map(|(layer, c)| layer.scale(c))
            .collect::<Result<_>>()?;
        Ok(a.with_layers(layers))
    }

    pub fn to_matrix3(&self) -> Matrix3 {
        Matrix3 {
            rows: 1,
            cols: 1,
            spec: self.spec,
            layers: self
                .components
                .iter()
                .map(|c| Matrix2::from_vec(self.spec, 1, 1, vec![c.clone()]).expect("1x1 layer"))
                .collect(),
        }
    }

    /// Inverse of [`Self::to_matrix3`]; requires a `1 x 1 x p` matrix.
    pub fn from_matrix3(a: &Matrix3) -> Result<MultiScalar> {
        if (a.rows, a.cols) != (1, 1) {
            return Err(AlgebraError::ShapeMismatch {
                expected: format!("1x1x{}", a.depth()),
                found: a.dims_string(),
            });
        }
        Ok(MultiScalar {
            spec: a.spec,
            components: a.layers.iter().map(|l| l.at(0, 0).clone()).collect(),
        })
    }
}

impl fmt::Display for MultiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mscalar {} [", self.depth())?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn fixture_2x2x3() -> Matrix3 {
        Matrix3::from_i64(q(), &[[[1, 4], [5, 3]], [[5, 0], [9, 1]], [[2, 3], [4, 5]]]).unwrap()
    }

    fn fixture_3x3x2() -> Matrix3 {
        Matrix3::from_i64(
            q(),
            &[
                [[1, 2, 4], [8, 1, 1], [3, 1, 0]],
                [[3, 1, 5], [0, 2, 1], [1, 7, 4]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let gf2 = FieldSpec::prime(2).unwrap();
        let id = Matrix3::identity(2, 2, gf2).unwrap();
        assert_eq!(id.layers().len(), 2);
        assert!(id
            .layers()
            .iter()
            .all(|l| *l == Matrix2::identity(gf2, 2).unwrap()));
        assert_eq!(
            Matrix3::identity(3, 4, q()).unwrap().det().unwrap(),
            MultiScalar::ones(q(), 4).unwrap()
        );
        let a = Matrix3::from_i64(q(), &[[[1, 2, 3], [4, 5, 6]], [[0, 1, 0], [7, 8, 9]]]).unwrap();
        let o = Matrix3::zeros(2, 3, 2, q()).unwrap();
        assert_eq!(o.add(&a).unwrap(), a);
        assert_eq!(a.add(&a.neg()).unwrap(), o);
        assert_eq!(
            Matrix3::zeros(1, 1, 0, q()),
            Err(AlgebraError::ZeroDimension)
        );
    }

    #[test]
    fn characteristic_two_doubling_vanishes() {
        let gf2 = FieldSpec::prime(2).unwrap();
        let a = Matrix3::from_i64(gf2, &[[[1, 1], [0, 1]], [[1, 0], [1, 1]]]).unwrap();
        assert_eq!(a.add(&a).unwrap(), Matrix3::zeros(2, 2, 2, gf2).unwrap());
    }

    #[test]
    fn odot_on_one_by_one_layers_gf3() {
        let gf3 = FieldSpec::prime(3).unwrap();
        let a = Matrix3::from_i64(gf3, &[[[2]], [[2]]]).unwrap();
        let b = Matrix3::from_i64(gf3, &[[[2]], [[1]]]).unwrap();
        assert_eq!(
            a.odot(&b).unwrap(),
            Matrix3::from_i64(gf3, &[[[1]], [[2]]]).unwrap()
        );
    }

    #[test]
    fn odot_rejects_bad_shapes() {
        let rect = Matrix3::zeros(2, 3, 2, q()).unwrap();
        assert!(matches!(
            rect.odot(&rect),
            Err(AlgebraError::NotSquare { .. })
        ));
        let a = Matrix3::identity(2, 2, q()).unwrap();
        let b = Matrix3::identity(2, 3, q()).unwrap();
        assert!(matches!(
            a.odot(&b),
            Err(AlgebraError::ShapeMismatch { .. })
        ));
        let c = Matrix3::identity(2, 2, FieldSpec::prime(5).unwrap()).unwrap();
        assert!(matches!(a.odot(&c), Err(AlgebraError::Field(_))));
    }

    #[test]
    fn multi_scalar_action_fixture() {
        let s = MultiScalar::from_i64(q(), &[3, 5, 2]).unwrap();
        let expected = Matrix3::from_i64(
            q(),
            &[[[3, 12], [15, 9]], [[25, 0], [45, 5]], [[4, 6], [8, 10]]],
        )
        .unwrap();
        assert_eq!(s.mul_matrix(&fixture_2x2x3()).unwrap(), expected);
        let ones = MultiScalar::ones(q(), 3).unwrap();
        assert_eq!(ones.mul_matrix(&fixture_2x2x3()).unwrap(), fixture_2x2x3());
        let zero = MultiScalar::zero(q(), 3).unwrap();
        assert_eq!(
            zero.mul_matrix(&fixture_2x2x3()).unwrap(),
            Matrix3::zeros(2, 2, 3, q()).unwrap()
        );
        let short = MultiScalar::ones(q(), 2).unwrap();
        assert_eq!(
            short.mul_matrix(&fixture_2x2x3()),
            Err(AlgebraError::DepthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn componentwise_products() {
        let a = MultiScalar::from_i64(q(), &[-2, 5, -17]).unwrap();
        let ones = MultiScalar::ones(q(), 3).unwrap();
        assert_eq!(a.componentwise_mul(&ones).unwrap(), a);
        let x = MultiScalar::from_i64(q(), &[-6, 25]).unwrap();
        let y = MultiScalar::from_i64(q(), &[25, -6]).unwrap();
        assert_eq!(
            x.componentwise_mul(&y).unwrap(),
            MultiScalar::from_i64(q(), &[-150, -150]).unwrap()
        );
        let z = MultiScalar::zero(q(), 3).unwrap();
        assert_eq!(a.componentwise_mul(&z).unwrap(), z);
    }

    #[test]
    fn determinants() {
        assert_eq!(
            fixture_2x2x3().det().unwrap(),
            MultiScalar::from_i64(q(), &[-17, 5, -2]).unwrap()
        );
        assert_eq!(
            fixture_3x3x2().det().unwrap(),
            MultiScalar::from_i64(q(), &[25, -6]).unwrap()
        );
        let o = Matrix3::zeros(3, 3, 2, q()).unwrap();
        assert_eq!(o.det().unwrap(), MultiScalar::zero(q(), 2).unwrap());
        let id = Matrix3::identity(2, 3, q()).unwrap();
        let a = fixture_2x2x3();
        assert_eq!(
            a.odot(&id).unwrap().det().unwrap(),
            a.det()
                .unwrap()
                .componentwise_mul(&id.det().unwrap())
                .unwrap()
        );
    }

    #[test]
    fn absolute_nonzeroness_and_hat() {
        let d = MultiScalar::from_i64(q(), &[-6, 25]).unwrap();
        assert!(d.is_absolutely_nonzero());
        assert_eq!(
            d.hat().unwrap(),
            MultiScalar::new(
                q(),
                vec![
                    FieldElement::rational(-1, 6).unwrap(),
                    FieldElement::rational(1, 25).unwrap()
                ]
            )
            .unwrap()
        );
        let s = MultiScalar::from_i64(q(), &[3, 5, 2]).unwrap();
        let expected: Vec<_> = [3, 5, 2]
            .iter()
            .map(|&d| FieldElement::rational(1, d).unwrap())
            .collect();
        assert_eq!(s.hat().unwrap().components(), expected.as_slice());
        let with_zero = MultiScalar::from_i64(q(), &[2, 0, 3]).unwrap();
        assert!(!with_zero.is_absolutely_nonzero());
        assert_eq!(
            with_zero.hat(),
            Err(AlgebraError::NotAbsolutelyNonzero { component: 2 })
        );
        assert!(!MultiScalar::zero(q(), 2).unwrap().is_absolutely_nonzero());
        let ones = MultiScalar::ones(q(), 4).unwrap();
        assert_eq!(ones.hat().unwrap(), ones);
    }

    #[test]
    fn adjugate_page_by_page() {
        let expected = Matrix3::from_i64(
            q(),
            &[
                [[-1, 4, -2], [3, -12, 31], [5, 5, -15]],
                [[1, 31, -9], [1, 7, -3], [-2, -20, 6]],
            ],
        )
        .unwrap();
        assert_eq!(fixture_3x3x2().adjugate().unwrap(), expected);
        let id = Matrix3::identity(3, 2, q()).unwrap();
        assert_eq!(id.adjugate().unwrap(), id);
        let scalars = Matrix3::from_i64(q(), &[[[4]], [[-3]], [[0]]]).unwrap();
        assert_eq!(
            scalars.adjugate().unwrap(),
            Matrix3::identity(1, 3, q()).unwrap()
        );
    }

    #[test]
    fn inverse_of_3x3x2_fixture() {
        let a = fixture_3x3x2();
        let inv = a.inverse().unwrap();
        let f = |n, d| FieldElement::rational(n, d).unwrap();
        let expected = Matrix3::from_layers(vec![
            Matrix2::from_rows(
                q(),
                vec![
                    vec![f(-1, 25), f(4, 25), f(-2, 25)],
                    vec![f(3, 25), f(-12, 25), f(31, 25)],
                    vec![f(1, 5), f(1, 5), f(-3, 5)],
                ],
            )
            .unwrap(),
            Matrix2::from_rows(
                q(),
                vec![
                    vec![f(-1, 6), f(-31, 6), f(3, 2)],
                    vec![f(-1, 6), f(-7, 6), f(1, 2)],
                    vec![f(1, 3), f(10, 3), f(-1, 1)],
                ],
            )
            .unwrap(),
        ])
        .unwrap();
        assert_eq!(inv, expected);
        assert_eq!(inv, a.inverse_gauss().unwrap());
        let id = Matrix3::identity(3, 2, q()).unwrap();
        assert_eq!(a.odot(&inv).unwrap(), id);
        assert_eq!(inv.odot(&a).unwrap(), id);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn singular_inverse_names_every_layer() {
        let a = Matrix3::from_i64(q(), &[[[1, 2], [2, 4]], [[1, 0], [0, 1]], [[0, 0], [0, 0]]])
            .unwrap();
        let err = a.inverse().unwrap_err();
        assert_eq!(err, AlgebraError::SingularLayers(vec![1, 3]));
        assert!(err.to_string().contains("1, 3"));
        assert_eq!(a.inverse_gauss().unwrap_err(), err);
    }

    #[test]
    fn layer_access_and_round_trip() {
        let a = fixture_3x3x2();
        assert_eq!(
            a.layer(2).unwrap(),
            &Matrix2::from_i64(q(), &[[3, 1, 5], [0, 2, 1], [1, 7, 4]]).unwrap()
        );
        assert!(matches!(
            a.layer(3),
            Err(AlgebraError::IndexOutOfRange { index: 3, bound: 2 })
        ));
        assert!(matches!(
            a.layer(0),
            Err(AlgebraError::IndexOutOfRange { .. })
        ));
        let rebuilt = Matrix3::from_layers(a.layers().to_vec()).unwrap();
        assert_eq!(rebuilt, a);
        let single = Matrix3::from_layers(vec![a.layer(1).unwrap().clone()]).unwrap();
        assert_eq!(single.dims(), (3, 3, 1));
        assert!(Matrix3::from_layers(vec![]).is_err());
        let mixed = vec![
            Matrix2::identity(q(), 2).unwrap(),
            Matrix2::identity(q(), 3).unwrap(),
        ];
        assert!(matches!(
            Matrix3::from_layers(mixed),
            Err(AlgebraError::ShapeMismatch { .. })
        ));
        assert_eq!(a.get(1, 3, 2).unwrap(), &q().from_i64(5));
    }

    #[test]
    fn multi_scalar_matrix_conversion() {
        let s = MultiScalar::from_i64(q(), &[3, 5, 2]).unwrap();
        let m = s.to_matrix3();
        assert_eq!(m.dims(), (1, 1, 3));
        assert_eq!(MultiScalar::from_matrix3(&m).unwrap(), s);
        assert!(MultiScalar::from_matrix3(&fixture_3x3x2()).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(
            MultiScalar::from_i64(q(), &[25, -6]).unwrap().to_string(),
            "mscalar 2 [25 -6]"
        );
        assert_eq!(
            Matrix3::identity(2, 1, q()).unwrap().to_string(),
            "matrix 2x2x1 { layer 1: [1 0; 0 1] }"
        );
    }

    #[test]
    fn parallel_path_matches_sequential() {
        // 16 layers of 16x16 crosses the parallel threshold.
        let gf7 = FieldSpec::prime(7).unwrap();
        let layers: Vec<Matrix2> = (0..16)
            .map(|k| {
                let entries = (0..256)
                    .map(|i| gf7.from_i64((i * 7 + k * 3 + i / 5) as i64))
                    .collect();
                Matrix2::from_vec(gf7, 16, 16, entries).unwrap()
            })
            .collect();
        let a = Matrix3::from_layers(layers.clone()).unwrap();
        let prod = a.odot(&a).unwrap();
        for (k, layer) in layers.iter().enumerate() {
            assert_eq!(prod.layer(k + 1).unwrap(), &layer.mul(layer).unwrap());
        }
        let det = a.det().unwrap();
        for (k, layer) in layers.iter().enumerate() {
            assert_eq!(det.component(k + 1).unwrap(), &layer.det().unwrap());
        }
    }
}
