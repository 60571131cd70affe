//! Certified computation of the Narayana numbers that are products of two
//! Fibonacci numbers.
//!
//! The crate runs the whole Baker-method argument with rigorous ball
//! arithmetic: lower bounds for linear forms in logarithms, continued
//! fraction reduction, and a final exhaustive search. Every analytic
//! inequality is decided on certified enclosures; the result is a
//! [`pipeline::Certificate`].

pub mod algebraic;
pub mod baker;
pub mod error;
pub mod numerics;
pub mod pipeline;
pub mod reduction;
pub mod search;
pub mod sequences;
mod serde_ball;

pub use algebraic::{AlgebraicNumber, ConstantsTable};
pub use baker::LinearFormInstance;
pub use error::{Error, Result};
pub use numerics::{Ball, Certainty, Dyadic, IntPolynomial, PrecisionPolicy};
pub use pipeline::Certificate;
pub use reduction::{ContinuedFraction, ReductionInstance, ReductionResult, ReductionStatus};
pub use search::SolutionTriple;
pub use sequences::SequenceKind;
