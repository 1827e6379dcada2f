//! Exact linear algebra for complete projective resolutions over tensor rings
//! `T_R(M)` of finite-dimensional algebras, and the Gorenstein projective
//! modules they produce.
//!
//! Everything is generic over a [`Scalar`] field; [`F2`], [`F3`] and [`Q`]
//! are the concrete choices used by the command-line tool.

pub mod algebra;
pub mod bimodule;
pub mod error;
pub mod exactlin;
pub mod format;
pub mod scalar;
pub mod search;
pub mod special_rings;
pub mod resolution;
pub mod tensor_ring;

pub use error::{Error, Result};
pub use exactlin::Matrix;
pub use scalar::{FieldSpec, Fp, Scalar};

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type Q = num_rational::BigRational;

pub type MatrixF2 = Matrix<F2>;
pub type MatrixF3 = Matrix<F3>;
pub type MatrixQ = Matrix<Q>;
