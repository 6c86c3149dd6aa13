//! Fractional heat semigroup on Euclidean space, the restricted Dirichlet
//! fractional Laplacian on intervals, and a verification harness for the
//! estimates the two satisfy.
//!
//! Everything numerical is generic over the scalar type through [`Real`];
//! concrete `f64` aliases for the main domain types live at the crate root.

// Tabulated quadrature nodes and frozen reference values keep their full
// 17-digit forms; domain guards use negated comparisons to reject NaN.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod scalar;

pub mod discrete;
pub mod fraclap;
pub mod kernel;
pub mod linalg;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;
pub use discrete::{DiscreteOperator, Grid1D, SpectralDecomposition};
pub use fraclap::{ScalarField1D, Smoothness};
pub use kernel::KernelQuery;
pub use specfun::{FractionalOrder, NormalizationConstant};
pub use verify::{CheckReport, SectorPoint};

/// Double-precision aliases used by the CLI and the acceptance suite.
pub type Order64 = FractionalOrder<f64>;
pub type Grid64 = Grid1D<f64>;
pub type Operator64 = DiscreteOperator<f64>;
pub type Spectrum64 = SpectralDecomposition<f64>;
pub type Field64 = ScalarField1D<f64>;
