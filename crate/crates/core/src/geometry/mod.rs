//! Invariant metrics along the normal geodesic: profiles, the adapted frame,
//! the Levi-Civita connection and `∇J`.

mod connection;
mod frame;
mod nabla;
mod profile;

pub use connection::{koszul_solve, ConnectionTable};
pub use frame::FramePoint;
pub use nabla::{
    d_omega, gray_defect, DOmegaMax, lemma_deviation, nabla_j, nabla_j_closed_form, LemmaCase, NablaJ,
};
pub use profile::{sphere_coefficients, RANDOM_DOMAIN, Profile, ProfileKind, ProfileSet, ProfileValues};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("scale function is not positive at t = {t} (value {scale})")]
    Degenerate { t: f64, scale: f64 },
    #[error("Gram matrix is singular at t = {t}")]
    SingularGram { t: f64 },
    #[error("profiles do not match the split: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Unsupported(String),
}
