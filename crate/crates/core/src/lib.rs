//! Chance-constrained makespan scheduling on two identical machines.
//!
//! Jobs come in groups; jobs of one group that share a machine covary. The
//! probabilistic makespan constraint is replaced by its one-sided Chebyshev
//! surrogate `l'_t = E[l_t] + sqrt(((1 - gamma) / gamma) var[l_t])`, and the
//! fitness of an assignment is `max(l'_0, l'_1)`.
//!
//! The crate provides
//!  * the data model and exact incremental load counters ([`LoadState`]),
//!  * randomized local search and the (1+1) EA ([`solver`]),
//!  * exact and constructive reference solvers, the balanced-partition DP and
//!    the partition reduction ([`oracle`]),
//!  * seeded instance generators for the benchmark grids ([`suite`]),
//!  * a flat key-value text format for instances and configs ([`doc`]).
//!
//! Everything real-valued is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix it to `f64`.

pub mod doc;
mod error;
mod instance;
mod load;
pub mod oracle;
mod scalar;
pub mod seed;
mod solution;
pub mod solver;
pub mod suite;

pub use error::{Error, Result};
pub use instance::{Instance, Variant};
pub use load::{
    chance_bound, classify, fitness, machine_stats, one_sided_chebyshev, Fitness, LoadState,
    Machine, MachineStats, SolutionClass,
};
pub use scalar::Scalar;
pub use solution::Solution;

pub type Instance64 = Instance<f64>;
pub type Instance32 = Instance<f32>;
pub type Fitness64 = Fitness<f64>;
pub type RunRecord64 = solver::RunRecord<f64>;
pub type StopCriterion64 = solver::StopCriterion<f64>;
pub type Reduction64 = oracle::Reduction<f64>;

/// `C(x, 2)`.
#[inline]
pub fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}
