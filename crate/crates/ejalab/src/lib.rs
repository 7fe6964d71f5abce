//! Euclidean Jordan algebra toolkit with a spectral-optimization layer and
//! a verification harness for commutation principles.
//!
//! The crate is organized in four layers:
//! - [`algebra`]: algebras, elements, eigenvalue map, Jordan frames, and
//!   the operator / strong commutativity tests;
//! - [`spectral`]: spectral sets E = λ⁻¹(Q), spectral functions φ∘λ,
//!   orbit linear optimization, projections, and normal-cone membership;
//! - [`solvers`]: reduction solvers, projected gradient, frame-manifold
//!   orbit search, and VI / cone-complementarity fixed-point iteration;
//! - [`suite`]: the configuration-driven check suite behind the CLI.

pub mod algebra;
pub mod error;
pub mod json;
pub mod solvers;
pub mod spectral;
pub mod suite;

pub use algebra::{
    operator_commute, strong_commute, Algebra, AlgebraSpec, CommutationReport, Element,
    OrderedJordanFrame, SpectralDecomposition, DEFAULT_TOL,
};
pub use error::{EjaError, Result};
