//! Tangent and cotangent bundle operations over open regions of R^n,
//! built on exact forward-mode jet differentiation, with vector fields
//! as bundle cross-sections, trajectories as integral curves of those
//! fields, and a path/test correlation that recovers tangents and
//! cotangents as observable behaviors.
//!
//! The crate is organized bottom-up:
//!
//! * [`vecspace`] — vectors, matrices, norms, inner products, and
//!   randomized axiom batteries;
//! * [`smoothmap`] — smooth maps as expression objects, jets, the
//!   finite-difference oracle, and the textual notation;
//! * [`tangent`] — the tangent functor, second tangent map, canonical
//!   flip, bundle projection, monad structure, and covector
//!   pullback/pushforward;
//! * [`testing`] — paths, tests, the correlation pairing, and the
//!   equivalence quotient it induces;
//! * [`dynamics`] — vector fields as cross-sections, the clock,
//!   integral-curve solvers, and relatedness checks;
//! * [`newton`] — gravity fields in configuration and phase space with
//!   conservation diagnostics.
//!
//! Everything is immutable after construction and pure, so values can be
//! shared freely across threads.

pub mod dynamics;
pub mod error;
pub mod newton;
pub mod smoothmap;
pub mod tangent;
pub mod testing;
pub mod vecspace;

pub use error::{Error, Result};
pub use smoothmap::{compose, Bilinear, Expr, Guard, JetValue, SmoothMap};
pub use vecspace::{InnerProduct, Matrix, NormSpec, Vector};
