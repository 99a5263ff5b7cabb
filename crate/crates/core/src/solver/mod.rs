//! Randomized local search (RLS) and the (1+1) EA on the surrogate fitness.
//!
//! Both algorithms keep one solution, generate one offspring per iteration
//! and replace the parent iff the offspring is not worse (`f(y) <= f(x)`,
//! compared exactly).

mod mutation;
mod stop;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::{ccmsp1_optimum, odd_optimum};
use crate::{Fitness, Instance, LoadState, Scalar, Solution, Variant};

pub use mutation::MutationSource;
pub use stop::{StopCriterion, StopReason};

/// Deterministic generator behind every run. The seed fully determines the run.
pub type RunRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Rls,
    /// (1+1) EA with standard bit mutation at rate `1/n`.
    Ea,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Rls, Algorithm::Ea];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Rls => "RLS",
            Algorithm::Ea => "EA11",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rls" => Ok(Algorithm::Rls),
            "ea" | "ea11" | "(1+1)ea" | "1+1ea" | "oneplusone" => Ok(Algorithm::Ea),
            other => Err(Error::Domain(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Current solution of a run together with its counters and fitness.
#[derive(Debug, Clone)]
pub struct SearchState<'a, T> {
    inst: &'a Instance<T>,
    solution: Solution,
    load: LoadState,
    fitness: Fitness<T>,
    scratch: Vec<usize>,
}

/// What one iteration did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub flipped: usize,
    pub accepted: bool,
}

impl<'a, T: Scalar> SearchState<'a, T> {
    pub fn new(inst: &'a Instance<T>, solution: Solution) -> Result<Self> {
        let load = LoadState::new(inst, &solution)?;
        let fitness = load.fitness(inst);
        Ok(SearchState {
            inst,
            solution,
            load,
            fitness,
            scratch: Vec::new(),
        })
    }

    pub fn instance(&self) -> &'a Instance<T> {
        self.inst
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn load(&self) -> &LoadState {
        &self.load
    }

    pub fn fitness(&self) -> Fitness<T> {
        self.fitness
    }

    pub fn into_solution(self) -> Solution {
        self.solution
    }

    /// Flips `bits`, keeps the offspring iff it is not worse, otherwise undoes
    /// the flips. Counters are integers, so undoing is exact.
    fn offer(&mut self, bits: &[usize]) -> bool {
        for &b in bits {
            self.load
                .move_job(self.inst.group_of(b), self.solution.machine_of(b));
            self.solution.flip(b);
        }
        let candidate = self.load.fitness(self.inst);
        if candidate.value <= self.fitness.value {
            self.fitness = candidate;
            return true;
        }
        for &b in bits.iter().rev() {
            self.load
                .move_job(self.inst.group_of(b), self.solution.machine_of(b));
            self.solution.flip(b);
        }
        false
    }
}

/// One RLS iteration: with probability 1/2 flip one uniform bit, otherwise a
/// uniform unordered pair of distinct bits.
pub fn rls_step<T, R>(state: &mut SearchState<'_, T>, rng: &mut R) -> Step
where
    T: Scalar,
    R: MutationSource + ?Sized,
{
    let n = state.solution.len();
    let two_bits = n >= 2 && rng.coin();
    let accepted = if two_bits {
        let (i, j) = rng.pair(n);
        state.offer(&[i, j])
    } else {
        let i = rng.index(n);
        state.offer(&[i])
    };
    Step {
        flipped: if two_bits { 2 } else { 1 },
        accepted,
    }
}

/// One (1+1) EA iteration: every bit flips independently with probability `1/n`.
/// An offspring with no flipped bit equals its parent and is accepted.
pub fn ea_step<T, R>(state: &mut SearchState<'_, T>, rng: &mut R) -> Step
where
    T: Scalar,
    R: MutationSource + ?Sized,
{
    let mut bits = std::mem::take(&mut state.scratch);
    rng.standard_bit_flips(state.solution.len(), &mut bits);
    let accepted = state.offer(&bits);
    let flipped = bits.len();
    state.scratch = bits;
    Step { flipped, accepted }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSolution {
    /// Uniform over `{0,1}^n`, drawn from the run's generator.
    Random,
    Given(Solution),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint<T> {
    pub iteration: u64,
    pub value: T,
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<T> {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub iterations: u64,
    pub final_fitness: T,
    pub final_solution: Solution,
    pub stop_reason: StopReason,
    /// Initial fitness, then every strict improvement.
    pub trajectory: Vec<TracePoint<T>>,
    pub warnings: Vec<String>,
}

impl<T: Scalar> RunRecord<T> {
    pub fn censored(&self) -> bool {
        self.stop_reason == StopReason::Cap
    }
}

/// Runs `algorithm` until `stop` fires. The generator is seeded with `seed`
/// and also draws the initial solution when none is given.
pub fn run<T: Scalar>(
    algorithm: Algorithm,
    inst: &Instance<T>,
    init: InitialSolution,
    stop: &StopCriterion<T>,
    seed: u64,
) -> Result<RunRecord<T>> {
    let mut rng = RunRng::seed_from_u64(seed);
    let mut record = run_with(algorithm, inst, init, stop, &mut rng)?;
    record.seed = seed;
    Ok(record)
}

/// As [`run`], drawing from a caller-supplied generator. `seed` is left 0.
pub fn run_with<T, R>(
    algorithm: Algorithm,
    inst: &Instance<T>,
    init: InitialSolution,
    stop: &StopCriterion<T>,
    rng: &mut R,
) -> Result<RunRecord<T>>
where
    T: Scalar,
    R: rand::RngCore,
{
    stop.validate()?;
    if stop.uses_cov_balanced() && inst.uniform_cov().is_none() {
        return Err(Error::InvalidStop(
            "the even-case predicate needs a single covariance".into(),
        ));
    }
    let warnings = target_warnings(inst, stop);

    let initial = match init {
        InitialSolution::Random => Solution::random(inst.n(), rng),
        InitialSolution::Given(s) => s,
    };
    let mut state = SearchState::new(inst, initial)?;
    let mut trajectory = vec![TracePoint {
        iteration: 0,
        value: state.fitness().value,
    }];
    let mut iterations = 0u64;
    let mut memo = None;

    let stop_reason = loop {
        if let Some(reason) = stop.fires(&state, iterations, &mut memo) {
            break reason;
        }
        let before = state.fitness().value;
        let step = match algorithm {
            Algorithm::Rls => rls_step(&mut state, rng),
            Algorithm::Ea => ea_step(&mut state, rng),
        };
        iterations += 1;
        if step.accepted && step.flipped > 0 {
            memo = None;
            let after = state.fitness().value;
            if after < before {
                trajectory.push(TracePoint {
                    iteration: iterations,
                    value: after,
                });
            }
        }
    };

    let final_fitness = state.fitness().value;
    Ok(RunRecord {
        algorithm,
        seed: 0,
        iterations,
        final_fitness,
        final_solution: state.into_solution(),
        stop_reason,
        trajectory,
        warnings,
    })
}

/// Optimum from a constructive oracle, when one applies to the instance.
pub fn known_optimum<T: Scalar>(inst: &Instance<T>) -> Option<T> {
    match inst.variant() {
        Variant::Ccmsp1 => ccmsp1_optimum(inst).ok().map(|(v, _)| v),
        Variant::Ccmsp2Plus if inst.n() % 2 == 1 => odd_optimum(inst).ok().map(|(v, _)| v),
        _ => None,
    }
}

fn target_warnings<T: Scalar>(inst: &Instance<T>, stop: &StopCriterion<T>) -> Vec<String> {
    let targets = stop.targets();
    if targets.is_empty() {
        return Vec::new();
    }
    let Some(opt) = known_optimum(inst) else {
        return Vec::new();
    };
    targets
        .into_iter()
        .filter(|&(value, tol)| value + tol < opt)
        .map(|(value, _)| {
            format!("target {value} lies below the optimum {opt}; only the cap can end the run")
        })
        .collect()
}
