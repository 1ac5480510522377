//! Exact compact Lie algebras and the reductive splits used by the
//! cohomogeneity-one models.

mod algebra;
mod split;

pub use algebra::{build_algebra, build_algebra_named, AlgebraName, BilinearForm, LieAlgebraModel};
pub use split::{
    build_split_su2su2, build_split_su2su2_embedded, build_split_su3, rotation_speed,
    su2su2_split_exact, su3_split_exact, ReductiveSplit, SplitKind,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("unknown algebra `{0}` (expected su2, su3 or su2+su2)")]
    UnknownAlgebra(String),
    #[error("structure constant array has {found} entries, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("structure constants are not antisymmetric")]
    NotAntisymmetric,
    #[error("Jacobi identity fails (residual {0})")]
    Jacobi(f64),
    #[error("basis change matrix is singular")]
    SingularBasisChange,
    #[error("commutator left the span of the basis")]
    NotInSpan,
    #[error("invalid reductive split: {0}")]
    Split(String),
}
