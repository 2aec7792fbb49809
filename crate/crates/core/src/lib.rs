//! Certification of characteristic tensors (R₀, T₀, λ) of infinitesimally homogeneous affine
//! manifolds with G-structure, and synthesis of the Lie algebra a = h ⊕ m they determine.
//!
//! All algebra is exact over ℚ ([`exact_linalg`]); only [`realizer`] works in floating point.

pub mod app;
pub mod conditions;
pub mod corpus;
pub mod error;
pub mod exact_linalg;
pub mod instance;
pub mod lie_builder;
pub mod realizer;
pub mod subalgebra;
pub mod tensor_algebra;
pub mod torsion_reduction;

pub use conditions::{run_certificate, CertificateReport, CharTriple};
pub use error::{Error, Result};
pub use exact_linalg::{Matrix, Rational, Vector};
pub use instance::InstanceFile;
pub use lie_builder::{build_bracket, LieAlgebraStructure};
pub use subalgebra::{CheckResult, GroupGenerators, LieSubalgebra, Witness};
pub use tensor_algebra::{CurvatureTensor, Lifting, TorsionTensor};

#[cfg(test)]
mod testutil;
