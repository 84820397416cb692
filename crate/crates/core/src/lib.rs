//! Polynomial root finding in three stages.
//!
//! 1. [`realroots`]: real roots of a real polynomial, recursing down the
//!    derivative chain and bisecting on the monotone pieces.
//! 2. [`bivariate`]: the finite real solution set of two bivariate equations,
//!    lowering the degree in `y` with 2x2 determinant eliminations until one
//!    equation depends on `x` alone.
//! 3. [`complexroots`]: every complex root of a complex polynomial, by
//!    splitting `p(x + iy)` into real and imaginary parts and solving that
//!    real system.
//!
//! [`oracle`] holds an independent simultaneous-iteration solver used only to
//! cross-check the pipeline.

// `!(a < b)` is used on purpose where a NaN must take the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bivariate;
pub mod complexroots;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod realroots;
pub mod tolerances;

pub use bivariate::{BivarPoly, Solution, SolutionSet};
pub use complexroots::{complex_roots, split, ComplexRootReport, SplitPair};
pub use error::{Error, Result};
pub use poly::{ComplexPoly, Poly, RealPoly};
pub use realroots::{real_roots, RootReport};
pub use tolerances::Tolerances;

pub use num_complex::Complex64;
