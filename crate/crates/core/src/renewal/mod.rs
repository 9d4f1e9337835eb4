//! Renewal sums, residue processes and their limits, the stopping identity,
//! and numeric checks of the phase linearisation and the oscillatory bound.

mod approx;
mod limit;
mod osc;
mod process;
mod stopping;
mod target;

pub use approx::{in_filtered_set, lambda_approx_check, lambda_gap, LambdaRow, LambdaSetup, LambdaTable};
pub use limit::{limit_oracle, profile_integral, LimitVariant};
pub use osc::{osc_bound_check, OscBound, OSC_TOL};
pub use process::{
    crossing_balance, crossing_records, renewal_sum, residue_crossing, CrossingRecord, RenewalEstimate, RenewalPlan,
    ResidueVariant, ScalarKind, Truncation, CAP_HIT_LIMIT,
};
pub use stopping::{stopping_identity_check, CircleFunction, StoppingCheck};
pub use target::{Arity, Profile, TargetFunction, SHOULDER};
