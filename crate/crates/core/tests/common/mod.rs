#![allow(dead_code)]

use ccmsp::{Instance64, Solution, Variant};
use proptest::prelude::*;

/// Surrogate loads computed straight from the definition, one job pair at a time.
pub fn direct_surrogates(inst: &Instance64, sol: &Solution) -> [f64; 2] {
    let rf = (1.0 - inst.gamma()) / inst.gamma();
    let mut out = [0.0; 2];
    for (t, slot) in out.iter_mut().enumerate() {
        let jobs: Vec<usize> = (0..inst.n()).filter(|&j| sol.machine_of(j) == t).collect();
        let mut var = 0.0;
        for (x, &p) in jobs.iter().enumerate() {
            var += inst.d();
            for &q in &jobs[x + 1..] {
                let g = inst.group_of(p);
                if g == inst.group_of(q) {
                    var += 2.0 * inst.cov()[g];
                }
            }
        }
        *slot = jobs.len() as f64 * inst.a() + (rf * var).sqrt();
    }
    out
}

pub fn direct_fitness(inst: &Instance64, sol: &Solution) -> f64 {
    let [s0, s1] = direct_surrogates(inst, sol);
    s0.max(s1)
}

pub fn solution_from_code(n: usize, code: u64) -> Solution {
    Solution::from_bits((0..n).map(|j| (code >> j) & 1 == 1).collect())
}

/// Minimum of `direct_fitness` over all assignments.
pub fn exhaustive_optimum(inst: &Instance64) -> f64 {
    let n = inst.n();
    (0u64..1 << n)
        .map(|code| direct_fitness(inst, &solution_from_code(n, code)))
        .fold(f64::INFINITY, f64::min)
}

pub fn arb_sizes(max_k: usize, max_m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=max_m, 1..=max_k).prop_map(|mut v| {
        v.sort_unstable();
        v
    })
}

pub fn arb_general(max_k: usize, max_m: usize) -> impl Strategy<Value = Instance64> {
    arb_sizes(max_k, max_m).prop_flat_map(|sizes| {
        let k = sizes.len();
        (
            Just(sizes),
            1.0f64..200.0,
            0.0f64..5.0,
            prop::collection::vec(0.0f64..2.0, k),
            0.01f64..0.99,
        )
            .prop_map(|(sizes, a, d, cov, gamma)| {
                Instance64::new(Variant::General, sizes, a, d, cov, gamma).unwrap()
            })
    })
}

pub fn arb_solution(n: usize) -> impl Strategy<Value = Solution> {
    prop::collection::vec(any::<bool>(), n).prop_map(Solution::from_bits)
}
