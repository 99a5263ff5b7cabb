use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::{Instance, LoadState, Scalar, Solution};

/// Largest job count [`brute_force_optimum`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Prefix bits enumerated in parallel; the rest is walked in Gray-code order.
const SHARD_BITS: usize = 6;

/// Minimum fitness over all `2^n` assignments and the lexicographically
/// smallest assignment attaining it.
pub fn brute_force_optimum<T: Scalar>(inst: &Instance<T>) -> Result<(T, Solution)> {
    let n = inst.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    // f(x) = f(!x), and of x, !x the one starting with 0 is smaller, so job 0
    // stays on M0. Job j is bit (n - 1 - j) of the code: code order is
    // lexicographic order of the bit string.
    let free = n - 1;
    let shard_bits = free.min(SHARD_BITS);
    let tail_bits = free - shard_bits;

    let best = (0u64..1 << shard_bits)
        .into_par_iter()
        .map(|prefix| best_in_shard(inst, prefix, tail_bits))
        .reduce_with(pick)
        .expect("at least one shard");

    let (value, code) = best;
    let bits = (0..n).map(|j| (code >> (n - 1 - j)) & 1 == 1).collect();
    Ok((value, Solution::from_bits(bits)))
}

fn pick<T: Scalar>(a: (T, u64), b: (T, u64)) -> (T, u64) {
    if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn best_in_shard<T: Scalar>(inst: &Instance<T>, prefix: u64, tail_bits: usize) -> (T, u64) {
    let n = inst.n();
    // jobs 1..=shard_bits carry the prefix, most significant first
    let mut code = prefix << tail_bits;
    let bits = (0..n).map(|j| (code >> (n - 1 - j)) & 1 == 1).collect();
    let sol = Solution::from_bits(bits);
    let mut load = LoadState::new(inst, &sol).expect("length matches");
    let mut best = (load.fitness(inst).value, code);

    for g in 1u64..1 << tail_bits {
        let bit = g.trailing_zeros() as usize;
        let job = n - 1 - bit;
        let from = ((code >> bit) & 1) as usize;
        load.move_job(inst.group_of(job), from);
        code ^= 1 << bit;
        let value = load.fitness(inst).value;
        if value < best.0 || (value == best.0 && code < best.1) {
            best = (value, code);
        }
    }
    best
}
