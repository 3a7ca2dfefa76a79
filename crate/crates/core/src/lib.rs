//! Exact computations around Kleinian singularities and their deformations:
//! affine quiver root data, parameter analysis, Weyl group translations,
//! semi-invariants of the type-A moment fiber, truncated deformed
//! preprojective algebras and lower-triangular Z-algebras.

pub mod cli;
pub mod error;
pub mod fiber;
pub mod linalg;
pub mod molien;
pub mod params;
pub mod preproj;
pub mod quiver;
pub mod rational;
pub mod roots;
pub mod weyl;
pub mod zalgebra;

pub use error::{Error, Result};
pub use params::ParamVector;
pub use quiver::{build_extended_dynkin, build_from_label, LatticeVector, Quiver, QuiverType};
pub use rational::Q;
