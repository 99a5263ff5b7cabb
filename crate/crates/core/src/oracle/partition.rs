use crate::error::{Error, Result};
use crate::{choose2, Instance, LoadState, Machine, Scalar, Solution, Variant};

/// Largest reachability table [`balanced_partition_dp`] will allocate.
const DP_CELL_LIMIT: usize = 1 << 31;

/// Can `values` be split into two halves of equal size and equal sum?
///
/// Returns the indices of one half when it can. Reachability over
/// (elements seen, elements chosen, sum), `O(|S|^2 Sum)` time; the witness is
/// recovered by walking the table backwards.
pub fn balanced_partition_dp(values: &[u64]) -> Result<Option<Vec<usize>>> {
    let len = values.len();
    let total: u64 = values.iter().sum();
    if !len.is_multiple_of(2) {
        return Err(Error::Domain(format!("multiset size {len} is odd")));
    }
    if !total.is_multiple_of(2) {
        return Err(Error::Domain(format!("multiset sum {total} is odd")));
    }
    let pick = len / 2;
    let half = (total / 2) as usize;

    let width = half + 1;
    let layer = (pick + 1) * width;
    let cells = (len + 1)
        .checked_mul(layer)
        .filter(|&c| c <= DP_CELL_LIMIT)
        .ok_or_else(|| {
            Error::Domain(format!("table for |S| = {len}, sum = {total} is too large"))
        })?;
    let at = |i: usize, c: usize, s: usize| i * layer + c * width + s;

    let mut reach = vec![false; cells];
    reach[at(0, 0, 0)] = true;
    for (i, &v) in values.iter().enumerate() {
        let v = v as usize;
        for c in 0..=pick.min(i + 1) {
            for s in 0..=half {
                let skip = reach[at(i, c, s)];
                let take = c > 0 && s >= v && reach[at(i, c - 1, s - v)];
                reach[at(i + 1, c, s)] = skip || take;
            }
        }
    }
    if !reach[at(len, pick, half)] {
        return Ok(None);
    }

    let mut chosen = Vec::with_capacity(pick);
    let (mut c, mut s) = (pick, half);
    for i in (0..len).rev() {
        if reach[at(i, c, s)] {
            continue;
        }
        chosen.push(i);
        c -= 1;
        s -= values[i] as usize;
    }
    debug_assert_eq!((c, s), (0, 0));
    chosen.reverse();
    Ok(Some(chosen))
}

/// Parameters of the instance produced by [`reduce_partition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionParams<T> {
    pub gamma: T,
    pub d: T,
    pub c: T,
}

impl<T: Scalar> Default for ReductionParams<T> {
    fn default() -> Self {
        ReductionParams {
            gamma: T::of(0.05),
            d: T::of(1e-2),
            c: T::of(1e-7),
        }
    }
}

/// A CCMSP2PLUS instance encoding an equal-cardinality partition question.
///
/// Element `e` becomes a group of `2e + 1` jobs (one more than the doubled
/// element, so every group is odd). The source multiset has a balanced
/// partition iff some balanced solution puts the same covariance on both
/// machines: pair counts of `pair_lower_bound / 2` on each side. Such a
/// solution is then the unique-valued optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction<T> {
    pub source: Vec<u64>,
    pub doubled: Vec<u64>,
    pub instance: Instance<T>,
    /// Group of the instance (sizes are sorted) that element `i` of `source` became.
    pub group_of_element: Vec<usize>,
}

pub fn reduce_partition<T: Scalar>(values: &[u64]) -> Result<Reduction<T>> {
    reduce_partition_with(values, ReductionParams::default())
}

pub fn reduce_partition_with<T: Scalar>(
    values: &[u64],
    params: ReductionParams<T>,
) -> Result<Reduction<T>> {
    if !values.len().is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "multiset size {} is odd",
            values.len()
        )));
    }
    if values.is_empty() {
        return Err(Error::Domain(
            "empty multiset has no jobs to schedule".into(),
        ));
    }
    let doubled: Vec<u64> = values.iter().map(|&e| 2 * e).collect();

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| doubled[i]);
    let mut group_of_element = vec![0; values.len()];
    for (group, &i) in order.iter().enumerate() {
        group_of_element[i] = group;
    }
    let sizes: Vec<usize> = order.iter().map(|&i| doubled[i] as usize + 1).collect();

    let n: usize = sizes.iter().sum();
    let pairs: u64 = sizes.iter().map(|&m| choose2(m as u64)).sum();
    let risk = (T::one() - params.gamma) / params.gamma;
    let lhs = (risk
        * (T::of_count(n as u64) * params.d + T::of(2.0) * params.c * T::of_count(pairs)))
    .sqrt();
    let instance = Instance::uniform(
        Variant::Ccmsp2Plus,
        sizes,
        power_of_ten_above(lhs),
        params.d,
        params.c,
        params.gamma,
    )?;

    Ok(Reduction {
        source: values.to_vec(),
        doubled,
        instance,
        group_of_element,
    })
}

/// Smallest power of ten strictly greater than `x`.
fn power_of_ten_above<T: Scalar>(x: T) -> T {
    let ten = T::of(10.0);
    let mut a = T::one();
    while a / ten > x {
        a = a / ten;
    }
    while a <= x {
        a = a * ten;
    }
    a
}

impl<T: Scalar> Reduction<T> {
    /// `sum_i C(ceil(m_i/2), 2) + C(floor(m_i/2), 2)`: the least total pair
    /// count over both machines, reached only by per-group balanced splits.
    pub fn pair_lower_bound(&self) -> u64 {
        self.instance
            .sizes()
            .iter()
            .map(|&m| {
                let m = m as u64;
                choose2(m / 2) + choose2(m - m / 2)
            })
            .sum()
    }

    /// Whether `sol` splits every group evenly and leaves both machines with
    /// the same pair count.
    pub fn attains_lower_bound(&self, sol: &Solution) -> Result<bool> {
        let load = LoadState::new(&self.instance, sol)?;
        let (p0, p1) = (load.pair_count(Machine::M0), load.pair_count(Machine::M1));
        Ok(p0 == p1 && p0 + p1 == self.pair_lower_bound())
    }

    /// Balanced solution for a split of the source: groups of the elements in
    /// `half` put their larger share on `M0`, the others on `M1`.
    pub fn solution_for(&self, half: &[usize]) -> Result<Solution> {
        let mut on_m0: Vec<usize> = self.instance.sizes().iter().map(|&m| m / 2).collect();
        for &i in half {
            let g = *self
                .group_of_element
                .get(i)
                .ok_or_else(|| Error::Domain(format!("element {i} out of range")))?;
            on_m0[g] = self.instance.sizes()[g].div_ceil(2);
        }
        Solution::from_group_counts(&self.instance, &on_m0)
    }
}
