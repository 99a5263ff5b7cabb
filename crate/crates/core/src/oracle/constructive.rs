use crate::error::{Error, Result};
use crate::{Instance, LoadState, Machine, Scalar, Solution, Variant};

/// Optimum of an equal-size instance: half of every group on each machine.
///
/// `value = n a / 2 + sqrt(((1 - gamma) / gamma) (d n / 2 + c (k m^2 / 4 - n / 2)))`.
pub fn ccmsp1_optimum<T: Scalar>(inst: &Instance<T>) -> Result<(T, Solution)> {
    if inst.variant() != Variant::Ccmsp1 {
        return Err(Error::WrongVariant(format!(
            "closed-form optimum needs CCMSP1, got {}",
            inst.variant()
        )));
    }
    let k = inst.k() as u64;
    let m = inst.sizes()[0] as u64;
    let c = inst.uniform_cov().expect("CCMSP1 has a single covariance");
    let half_n = k * m / 2;
    // k m^2 / 4 - n / 2, exact in integers because m is even
    let cov_pairs = k * (m / 2) * (m / 2) - half_n;
    let value = T::of_count(half_n) * inst.a()
        + (inst.risk_factor() * (inst.d() * T::of_count(half_n) + c * T::of_count(cov_pairs)))
            .sqrt();
    let witness = Solution::from_group_counts(inst, &vec![m as usize / 2; inst.k()])?;
    Ok((value, witness))
}

/// Lower bounds on the fitness of unequal (`A`) and equal (`B`) solutions of
/// an equal-size instance. `A > B` always.
pub fn ccmsp1_bounds<T: Scalar>(inst: &Instance<T>) -> Result<(T, T)> {
    let (b, _) = ccmsp1_optimum(inst)?;
    let k = inst.k() as u64;
    let m = inst.sizes()[0] as u64;
    let c = inst.uniform_cov().expect("CCMSP1 has a single covariance");
    let half_n = k * m / 2;
    // k m^2 / 4 + m - n / 2
    let cov_pairs = k * (m / 2) * (m / 2) + m - half_n;
    let a = T::of_count(half_n + 1) * inst.a()
        + (inst.risk_factor() * (inst.d() * T::of_count(half_n + 1) + c * T::of_count(cov_pairs)))
            .sqrt();
    Ok((a, b))
}

/// Greedy split of `fuller` jobs over groups with non-decreasing `sizes`:
/// a group that is smaller than the even share of what is left goes in
/// whole, every other group gets the rounded-up share.
pub fn odd_allocation(sizes: &[usize], fuller: usize) -> Result<Vec<usize>> {
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain(format!(
            "sizes must be non-decreasing, got {sizes:?}"
        )));
    }
    let total: usize = sizes.iter().sum();
    if fuller > total {
        return Err(Error::Domain(format!(
            "{fuller} jobs requested from {total}"
        )));
    }
    let k = sizes.len();
    let mut alloc = Vec::with_capacity(k);
    let mut left = fuller;
    for (i, &m) in sizes.iter().enumerate() {
        let groups_left = k - i;
        let take = if m * groups_left < left {
            m
        } else {
            left.div_ceil(groups_left)
        };
        alloc.push(take);
        left -= take;
    }
    debug_assert_eq!(left, 0);
    Ok(alloc)
}

/// Optimum of a CCMSP2PLUS instance with an odd number of jobs: `(n + 1) / 2`
/// jobs on `M0`, spread by [`odd_allocation`].
pub fn odd_optimum<T: Scalar>(inst: &Instance<T>) -> Result<(T, Solution)> {
    if inst.variant() != Variant::Ccmsp2Plus {
        return Err(Error::WrongVariant(format!(
            "odd-case construction needs CCMSP2PLUS, got {}",
            inst.variant()
        )));
    }
    if inst.n().is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "odd-case construction needs an odd job count, got {}",
            inst.n()
        )));
    }
    let alloc = odd_allocation(inst.sizes(), inst.n().div_ceil(2))?;
    let witness = Solution::from_group_counts(inst, &alloc)?;
    let value = LoadState::new(inst, &witness)?.fitness(inst).value;
    Ok((value, witness))
}

/// Verdict of [`property_odd_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyOdd {
    Holds,
    EvenJobCount,
    NotEqual {
        on_m0: u64,
        on_m1: u64,
    },
    /// `group` is neither complete on the fuller machine nor within one of the maximum.
    Group {
        group: usize,
        count: u64,
        max: u64,
        size: usize,
    },
}

impl PropertyOdd {
    pub fn holds(&self) -> bool {
        matches!(self, PropertyOdd::Holds)
    }
}

/// Every group is either entirely on the fuller machine or within one job of
/// the largest per-group count there.
pub fn property_odd_check<T: Scalar>(inst: &Instance<T>, sol: &Solution) -> Result<PropertyOdd> {
    let load = LoadState::new(inst, sol)?;
    if inst.n().is_multiple_of(2) {
        return Ok(PropertyOdd::EvenJobCount);
    }
    let (on_m0, on_m1) = (load.count(Machine::M0), load.count(Machine::M1));
    if on_m0.abs_diff(on_m1) != 1 {
        return Ok(PropertyOdd::NotEqual { on_m0, on_m1 });
    }
    let fuller = if on_m0 > on_m1 {
        Machine::M0
    } else {
        Machine::M1
    };
    let counts = load.group_counts(fuller);
    let max = counts.iter().copied().max().unwrap_or(0);
    for (group, (&count, &size)) in counts.iter().zip(inst.sizes()).enumerate() {
        if count != size as u64 && max - count > 1 {
            return Ok(PropertyOdd::Group {
                group,
                count,
                max,
                size,
            });
        }
    }
    Ok(PropertyOdd::Holds)
}

/// Stopping predicate for even job counts, evaluated on the counters.
///
/// With `alpha`/`beta` the per-group counts on `M0`/`M1` and `t` the argmax
/// machine, the predicate holds for an equal solution iff
///  * `|cov_0 - cov_1| <= 2c (beta_i - beta_j + 1)` for every `i, j` with
///    `alpha_i > alpha_j + 1`, or
///  * `cov_t <= (c / 4) (n^2 / k - 2n + k)`.
///
/// The first clause is not symmetric in the machines: a solution and its
/// complement can get different verdicts. Both sides carry the factor `2c`,
/// so the comparison is done on pair counts in exact integer arithmetic.
pub fn cov_balanced_holds<T: Scalar>(inst: &Instance<T>, load: &LoadState) -> Result<bool> {
    let c = inst
        .uniform_cov()
        .ok_or_else(|| Error::Domain("the even-case predicate needs a single covariance".into()))?;
    if load.count(Machine::M0).abs_diff(load.count(Machine::M1)) > 1 {
        return Ok(false);
    }
    if c == T::zero() {
        return Ok(true);
    }
    let pairs_t = load.pair_count(load.fitness(inst).argmax) as i128;
    let gap = (load.pair_count(Machine::M0) as i128 - load.pair_count(Machine::M1) as i128).abs();

    let n = inst.n() as i128;
    let k = inst.k() as i128;
    // 2c P_t <= (c/4)(n^2/k - 2n + k)  <=>  8 k P_t <= (n - k)^2
    if 8 * k * pairs_t <= (n - k) * (n - k) {
        return Ok(true);
    }

    // Min over pairs alpha_i >= alpha_j + 2 of beta_i - beta_j + 1: sort by
    // alpha and keep a prefix maximum of beta.
    let alpha = load.group_counts(Machine::M0);
    let beta = load.group_counts(Machine::M1);
    let mut order: Vec<usize> = (0..alpha.len()).collect();
    order.sort_by_key(|&i| alpha[i]);
    let sorted_alpha: Vec<u64> = order.iter().map(|&i| alpha[i]).collect();
    let mut prefix_max_beta = Vec::with_capacity(order.len());
    let mut running = i128::MIN;
    for &i in &order {
        running = running.max(beta[i] as i128);
        prefix_max_beta.push(running);
    }
    for i in 0..alpha.len() {
        if alpha[i] < 2 {
            continue;
        }
        let below = sorted_alpha.partition_point(|&a| a + 2 <= alpha[i]);
        if below == 0 {
            continue;
        }
        if gap > beta[i] as i128 - prefix_max_beta[below - 1] + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn cov_balanced_condition<T: Scalar>(inst: &Instance<T>, sol: &Solution) -> Result<bool> {
    let load = LoadState::new(inst, sol)?;
    cov_balanced_holds(inst, &load)
}
