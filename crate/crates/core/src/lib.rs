//! Exact algebra of layered 3D matrices.
//!
//! An `m x n x p` 3D matrix is a stack of `p` ordinary `m x n` matrices over a
//! field. Addition is entrywise; the product `⊙` multiplies corresponding
//! layers; determinants are *multi-scalars* (one determinant per layer); and
//! a square 3D matrix is invertible exactly when every layer determinant is
//! nonzero, in which case `A^{-1} = hat(det A) ∗ adj(A)`.
//!
//! Modules:
//! - [`field`]: rationals, `GF(q)` and tolerance-compared floats.
//! - [`linalg2d`]: dense 2D matrices (determinant, cofactors, adjugate, inverses).
//! - [`tensor3d`]: [`Matrix3`] and [`MultiScalar`].
//! - [`grouplab`]: randomized and exhaustive checks of the group/semigroup laws.
//! - [`textio`]: the `.m3` text format and its JSON mirror.
//! - [`cli`]: the `trimat` command-line driver.

pub mod cli;
pub mod error;
pub mod field;
pub mod grouplab;
pub mod linalg2d;
pub mod tensor3d;
pub mod textio;

pub use error::{AlgebraError, Result};
pub use field::{FieldElement, FieldError, FieldSpec};
pub use linalg2d::Matrix2;
pub use tensor3d::{Matrix3, MultiScalar};
