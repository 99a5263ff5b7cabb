//! Reference solvers and structural checks.
//!
//! * [`brute_force_optimum`]: exhaustive search for small instances.
//! * [`ccmsp1_optimum`], [`odd_optimum`]: constructive optima for the
//!   polynomial-time variants.
//! * [`property_odd_check`], [`cov_balanced_condition`]: characterizations of
//!   optimal and locally optimal equal solutions.
//! * [`balanced_partition_dp`], [`reduce_partition`]: the equal-cardinality
//!   partition problem and its embedding into even-sized instances.

mod brute;
mod constructive;
mod partition;

pub use brute::{brute_force_optimum, BRUTE_FORCE_LIMIT};
pub use constructive::{
    ccmsp1_bounds, ccmsp1_optimum, cov_balanced_condition, cov_balanced_holds, odd_allocation,
    odd_optimum, property_odd_check, PropertyOdd,
};
pub use partition::{
    balanced_partition_dp, reduce_partition, reduce_partition_with, Reduction, ReductionParams,
};
