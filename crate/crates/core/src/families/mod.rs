//! The two parametric families of systems and their variants.
//!
//! Division points are never taken from closed forms: every constructor
//! describes which block climbs to which level and lets
//! [`ScheduleBuilder`](crate::system::ScheduleBuilder) derive the times.

mod crosscheck;
mod family_a;
mod family_b;

use thiserror::Error;

use crate::exponents::EngineError;
use crate::system::SystemError;

pub use crosscheck::{
    crosscheck_family_a, crosscheck_family_b, crosscheck_printed_formulas, printed_f,
    printed_family_a_points, printed_w, CrossCheckEntry, CrossCheckReport, FamilyParams,
    LinearFractional,
};
pub use family_a::{
    build_family_a, build_family_a_infinite, shifted_pair_divergence, DivergenceReport,
    FamilyAParams, InfiniteFamilyA,
};
pub use family_b::{build_family_b, default_params_b, FamilyBParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("conditions violated: {}", .0.join("; "))]
    ConditionsViolated(Vec<String>),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
