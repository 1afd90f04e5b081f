//! Equivariant complexes of twisted line-bundle sums on projective space and
//! the fiberwise descent criterion.
//!
//! A complex descends to a perfect complex on the quotient exactly when, at
//! every point, the stabilizer acts trivially on every cohomology group of the
//! derived fiber. Since all terms are sums of line bundles, the derived fiber
//! is the termwise evaluation, and it splits into blocks by the character the
//! stabilizer acts with on each summand. The criterion then reduces to exact
//! rank computations on the nontrivial blocks.

mod complex;
mod descent;
mod fiber;
mod sandwich;

pub use complex::{
    monomial_character, monomials_with_character, poly, EquivariantComplex, TwistedSummand, Violation,
};
pub use descent::{
    check_bundle_descent, check_star, CheckConfig, CohomologyEntry, CoverageStatus, DescentReport,
    PointSource, PointTable, StratumCoverage, Verdict, Witness,
};
pub(crate) use descent::{support_label, LiftCache};
pub use fiber::{
    block_cohomology, euler_characteristics, fiber_character, fiber_restrict, invariant_part,
    CohomologyTable, FiberBlock, FiberComplex,
};
pub use sandwich::{sandwich_check, GradedSpace, SandwichError, SandwichVerdict};

use crate::action::ActionError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EqSheafError {
    #[error("complex is not a valid equivariant complex: {}", summarize(.0))]
    Invalid(Vec<Violation>),
    #[error("malformed complex: {0}")]
    Structure(String),
    #[error(
        "internal consistency failure at {point}: d^{degree}[{from_summand}->{to_summand}] joins distinct fiber characters"
    )]
    CrossBlock { point: String, degree: i64, from_summand: usize, to_summand: usize },
    #[error(transparent)]
    Action(#[from] ActionError),
}

fn summarize(v: &[Violation]) -> String {
    let parts: Vec<String> = v.iter().take(3).map(ToString::to_string).collect();
    if v.len() > 3 {
        format!("{}; and {} more", parts.join("; "), v.len() - 3)
    } else {
        parts.join("; ")
    }
}
