#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

//! Verification toolkit for cohomogeneity-one nearly Kähler structures on
//! six-manifolds.
//!
//! The exact layer ([`lie`]) is generic over any [`scalar::Field`], including
//! exact rationals; the geometric layers are generic over [`scalar::Real`].
//! Concrete aliases below fix the scalar types used by the command-line tool.

pub mod jet;
pub mod lie;
pub mod matrix;
pub mod classifier;
pub mod cli;
pub mod curvature;
pub mod geometry;
pub mod nk;
pub mod report;
pub mod scalar;

use num_rational::Rational64;

/// Exact rational scalar used for structure constants.
pub type Q = Rational64;

pub type ExactAlgebra = lie::LieAlgebraModel<Q>;
pub type ExactSplit = lie::ReductiveSplit<Q>;
pub type RealSplit = lie::ReductiveSplit<f64>;
pub type Matrix = matrix::Mat<f64>;
