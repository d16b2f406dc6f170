//! Mechanical verification of Euler's three methods for double zeta values.
//!
//! The crate has two independent engines:
//!
//! * a symbolic engine ([`algebra`], [`relations`], [`genfun`]) that brings
//!   every identity into a canonical normal form over exact rationals and
//!   certifies it as a member of the span of double shuffle relations;
//! * a numeric engine ([`numerics`]) that evaluates single and double zeta
//!   values to arbitrary precision with Euler–Maclaurin summation.
//!
//! [`verify`] combines both and produces structured [`verify::Report`]s.

pub mod algebra;
pub mod error;
pub mod exact;
pub mod genfun;
pub mod numerics;
pub mod relations;
pub mod verify;

pub use algebra::{Atom, FormalValue, Mono, Rule};
pub use error::{Error, Result};
pub use exact::{bernoulli, binom, BernoulliCache, BigRat};
pub use genfun::BiPoly;
pub use numerics::{NumericValue, Real, RealCtx};
pub use relations::{Axioms, Certificate, Membership, RelationId, RelationRow, RelationSet};
pub use verify::{IdentityKind, Mode, Report, Status, VerifyOptions};
