//! Machine load statistics and the Chebyshev surrogate fitness.
//!
//! A [`LoadState`] stores only integer counters. Every real-valued statistic
//! is recomputed from them on demand, so a state reached through any number
//! of incremental flips evaluates bit-for-bit like one built from scratch.

use crate::error::{Error, Result};
use crate::{choose2, Instance, Scalar, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Machine {
    M0,
    M1,
}

impl Machine {
    pub const BOTH: [Machine; 2] = [Machine::M0, Machine::M1];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn other(self) -> Machine {
        match self {
            Machine::M0 => Machine::M1,
            Machine::M1 => Machine::M0,
        }
    }

    #[inline]
    pub fn from_index(t: usize) -> Machine {
        if t == 0 {
            Machine::M0
        } else {
            Machine::M1
        }
    }
}

/// Derived statistics of one machine's load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineStats<T> {
    pub expected: T,
    pub var_sum: T,
    pub cov: T,
    pub variance: T,
    pub surrogate: T,
}

/// Surrogate makespan `L(x)` and the machine attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness<T> {
    pub value: T,
    pub argmax: Machine,
}

/// Exact per-machine counters for a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadState {
    per_group: [Vec<u64>; 2],
    count: [u64; 2],
    pairs: [u64; 2],
}

impl LoadState {
    /// Builds the counters from scratch.
    pub fn new<T: Scalar>(inst: &Instance<T>, sol: &Solution) -> Result<Self> {
        check_len(inst, sol)?;
        let k = inst.k();
        let mut per_group = [vec![0u64; k], vec![0u64; k]];
        for j in 0..inst.n() {
            per_group[sol.machine_of(j)][inst.group_of(j)] += 1;
        }
        let count = [per_group[0].iter().sum(), per_group[1].iter().sum()];
        let pairs = [
            per_group[0].iter().map(|&x| choose2(x)).sum(),
            per_group[1].iter().map(|&x| choose2(x)).sum(),
        ];
        Ok(LoadState {
            per_group,
            count,
            pairs,
        })
    }

    /// Moves job `bit` to the other machine and toggles it in `sol`.
    pub fn apply_flip<T: Scalar>(
        &mut self,
        inst: &Instance<T>,
        sol: &mut Solution,
        bit: usize,
    ) -> Result<()> {
        check_len(inst, sol)?;
        if bit >= sol.len() {
            return Err(Error::IndexOutOfRange {
                index: bit,
                len: sol.len(),
            });
        }
        self.move_job(inst.group_of(bit), sol.machine_of(bit));
        sol.flip(bit);
        Ok(())
    }

    /// Unchecked counter update for a job of `group` leaving machine `from`.
    #[inline]
    pub(crate) fn move_job(&mut self, group: usize, from: usize) {
        let to = 1 - from;
        let leaving = self.per_group[from][group];
        debug_assert!(leaving > 0);
        self.pairs[from] -= leaving - 1;
        self.per_group[from][group] = leaving - 1;
        self.count[from] -= 1;

        let arriving = self.per_group[to][group];
        self.pairs[to] += arriving;
        self.per_group[to][group] = arriving + 1;
        self.count[to] += 1;
    }

    /// Number of jobs on machine `t`.
    #[inline]
    pub fn count(&self, t: Machine) -> u64 {
        self.count[t.index()]
    }

    /// Jobs of `group` on machine `t` (`alpha_i` for `M0`, `beta_i` for `M1`).
    #[inline]
    pub fn group_count(&self, t: Machine, group: usize) -> u64 {
        self.per_group[t.index()][group]
    }

    pub fn group_counts(&self, t: Machine) -> &[u64] {
        &self.per_group[t.index()]
    }

    /// `sum_i C(count_i, 2)` on machine `t`.
    #[inline]
    pub fn pair_count(&self, t: Machine) -> u64 {
        self.pairs[t.index()]
    }

    pub fn cov<T: Scalar>(&self, inst: &Instance<T>, t: Machine) -> T {
        let two = T::of(2.0);
        match inst.uniform_cov() {
            Some(c) => two * c * T::of_count(self.pairs[t.index()]),
            None => self.per_group[t.index()]
                .iter()
                .zip(inst.cov())
                .fold(T::zero(), |acc, (&x, &c)| {
                    acc + two * c * T::of_count(choose2(x))
                }),
        }
    }

    pub fn expected<T: Scalar>(&self, inst: &Instance<T>, t: Machine) -> T {
        T::of_count(self.count[t.index()]) * inst.a()
    }

    pub fn variance<T: Scalar>(&self, inst: &Instance<T>, t: Machine) -> T {
        T::of_count(self.count[t.index()]) * inst.d() + self.cov(inst, t)
    }

    /// `E[l_t] + sqrt(((1 - gamma) / gamma) var[l_t])`.
    #[inline]
    pub fn surrogate<T: Scalar>(&self, inst: &Instance<T>, t: Machine) -> T {
        self.expected(inst, t) + (inst.risk_factor() * self.variance(inst, t)).sqrt()
    }

    pub fn stats<T: Scalar>(&self, inst: &Instance<T>, t: Machine) -> MachineStats<T> {
        let expected = self.expected(inst, t);
        let var_sum = T::of_count(self.count[t.index()]) * inst.d();
        let cov = self.cov(inst, t);
        let variance = var_sum + cov;
        MachineStats {
            expected,
            var_sum,
            cov,
            variance,
            surrogate: expected + (inst.risk_factor() * variance).sqrt(),
        }
    }

    /// `max(l'_0, l'_1)`, ties resolved to `M0`.
    #[inline]
    pub fn fitness<T: Scalar>(&self, inst: &Instance<T>) -> Fitness<T> {
        let s0 = self.surrogate(inst, Machine::M0);
        let s1 = self.surrogate(inst, Machine::M1);
        if s1 > s0 {
            Fitness {
                value: s1,
                argmax: Machine::M1,
            }
        } else {
            Fitness {
                value: s0,
                argmax: Machine::M0,
            }
        }
    }

    /// One-sided Chebyshev bound on `Pr(l_t > bound)`.
    pub fn chance_bound<T: Scalar>(&self, inst: &Instance<T>, t: Machine, bound: T) -> Result<T> {
        let expected = self.expected(inst, t);
        // also rejects NaN
        if bound.partial_cmp(&expected) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::NonPositiveSlack {
                machine: t.index(),
                bound: bound.as_f64(),
                expected: expected.as_f64(),
            });
        }
        Ok(one_sided_chebyshev(
            self.variance(inst, t),
            bound - expected,
        ))
    }

    pub fn classify<T: Scalar>(&self, inst: &Instance<T>) -> SolutionClass {
        let is_equal = self.count[0].abs_diff(self.count[1]) <= 1;
        let is_balanced = is_equal
            && (0..inst.k()).all(|i| self.per_group[0][i].abs_diff(self.per_group[1][i]) <= 1);
        SolutionClass {
            is_equal,
            is_balanced,
            argmax: self.fitness(inst).argmax,
        }
    }
}

fn check_len<T: Scalar>(inst: &Instance<T>, sol: &Solution) -> Result<()> {
    if sol.len() != inst.n() {
        return Err(Error::LengthMismatch {
            expected: inst.n(),
            actual: sol.len(),
        });
    }
    Ok(())
}

/// `var / (var + slack^2)`, the one-sided Chebyshev (Cantelli) tail bound.
pub fn one_sided_chebyshev<T: Scalar>(variance: T, slack: T) -> T {
    if variance == T::zero() {
        return T::zero();
    }
    variance / (variance + slack * slack)
}

/// Equal / balanced classification of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionClass {
    pub is_equal: bool,
    pub is_balanced: bool,
    pub argmax: Machine,
}

pub fn machine_stats<T: Scalar>(inst: &Instance<T>, sol: &Solution) -> Result<LoadState> {
    LoadState::new(inst, sol)
}

pub fn fitness<T: Scalar>(inst: &Instance<T>, sol: &Solution) -> Result<Fitness<T>> {
    Ok(LoadState::new(inst, sol)?.fitness(inst))
}

/// Chebyshev bound for both machines at makespan `bound`.
pub fn chance_bound<T: Scalar>(inst: &Instance<T>, sol: &Solution, bound: T) -> Result<[T; 2]> {
    let state = LoadState::new(inst, sol)?;
    Ok([
        state.chance_bound(inst, Machine::M0, bound)?,
        state.chance_bound(inst, Machine::M1, bound)?,
    ])
}

pub fn classify<T: Scalar>(inst: &Instance<T>, sol: &Solution) -> Result<SolutionClass> {
    Ok(LoadState::new(inst, sol)?.classify(inst))
}
