use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::cov_balanced_holds;
use crate::Scalar;

use super::SearchState;

/// When a run ends. `FirstOf` fires with the reason of its first member that fires.
#[derive(Debug, Clone, PartialEq)]
pub enum StopCriterion<T> {
    /// Fitness at most `value + tol` (absolute tolerance).
    TargetFitness {
        value: T,
        tol: T,
    },
    /// The local-optimality predicate for even job counts holds.
    CovBalanced,
    /// `limit` iterations have been performed.
    IterationCap(u64),
    FirstOf(Vec<StopCriterion<T>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StopReason {
    Target,
    CovBalanced,
    Cap,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Target => "target",
            StopReason::CovBalanced => "cov_balanced",
            StopReason::Cap => "cap",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "target" => Ok(StopReason::Target),
            "cov_balanced" => Ok(StopReason::CovBalanced),
            "cap" => Ok(StopReason::Cap),
            other => Err(Error::InvalidStop(format!("unknown stop reason `{other}`"))),
        }
    }
}

impl<T: Scalar> StopCriterion<T> {
    pub fn target(value: T, tol: T) -> Self {
        StopCriterion::TargetFitness { value, tol }
    }

    /// `criterion` or the cap, whichever fires first.
    pub fn capped(criterion: StopCriterion<T>, cap: u64) -> Self {
        StopCriterion::FirstOf(vec![criterion, StopCriterion::IterationCap(cap)])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StopCriterion::TargetFitness { value, tol } => {
                if !value.is_finite() {
                    return Err(Error::InvalidStop(format!("target {value} is not finite")));
                }
                if !(tol.is_finite() && *tol >= T::zero()) {
                    return Err(Error::InvalidStop(format!("tolerance {tol} must be >= 0")));
                }
                Ok(())
            }
            StopCriterion::CovBalanced | StopCriterion::IterationCap(_) => Ok(()),
            StopCriterion::FirstOf(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidStop("empty FIRST_OF".into()));
                }
                list.iter().try_for_each(|c| c.validate())
            }
        }
    }

    /// Smallest iteration cap anywhere in the criterion.
    pub fn cap(&self) -> Option<u64> {
        match self {
            StopCriterion::IterationCap(limit) => Some(*limit),
            StopCriterion::FirstOf(list) => list.iter().filter_map(|c| c.cap()).min(),
            _ => None,
        }
    }

    pub fn targets(&self) -> Vec<(T, T)> {
        match self {
            StopCriterion::TargetFitness { value, tol } => vec![(*value, *tol)],
            StopCriterion::FirstOf(list) => list.iter().flat_map(|c| c.targets()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn uses_cov_balanced(&self) -> bool {
        match self {
            StopCriterion::CovBalanced => true,
            StopCriterion::FirstOf(list) => list.iter().any(|c| c.uses_cov_balanced()),
            _ => false,
        }
    }

    /// `memo` caches the predicate between state changes; clear it on every
    /// accepted move.
    pub(crate) fn fires(
        &self,
        state: &SearchState<'_, T>,
        iterations: u64,
        memo: &mut Option<bool>,
    ) -> Option<StopReason> {
        match self {
            StopCriterion::TargetFitness { value, tol } => {
                (state.fitness().value <= *value + *tol).then_some(StopReason::Target)
            }
            StopCriterion::CovBalanced => {
                let holds = *memo.get_or_insert_with(|| {
                    cov_balanced_holds(state.instance(), state.load()).unwrap_or(false)
                });
                holds.then_some(StopReason::CovBalanced)
            }
            StopCriterion::IterationCap(limit) => (iterations >= *limit).then_some(StopReason::Cap),
            StopCriterion::FirstOf(list) => {
                list.iter().find_map(|c| c.fires(state, iterations, memo))
            }
        }
    }
}

impl<T: Scalar> fmt::Display for StopCriterion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopCriterion::TargetFitness { value, tol } => write!(f, "target({value},{tol})"),
            StopCriterion::CovBalanced => f.write_str("cov_balanced"),
            StopCriterion::IterationCap(limit) => write!(f, "cap({limit})"),
            StopCriterion::FirstOf(list) => {
                f.write_str("first_of(")?;
                for (i, c) in list.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}
