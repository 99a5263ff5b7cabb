//! Seeded instance generators for the benchmark grids.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::{Instance, Scalar, Variant};

pub const DEFAULT_KS: [usize; 6] = [4, 8, 16, 32, 64, 128];
pub const DEFAULT_SIZES: [usize; 6] = [10, 50, 100, 200, 300, 400];
pub const DEFAULT_CCMSP1_COVS: [f64; 3] = [1e-2, 1e-3, 1e-7];
pub const DEFAULT_CCMSP2PLUS_COV: f64 = 1e-7;
pub const DEFAULT_A: f64 = 100.0;
pub const DEFAULT_D: f64 = 1e-2;
pub const DEFAULT_GAMMA: f64 = 0.05;

/// Equal-size instance with `k` groups of `m` jobs; `m` must be even.
pub fn gen_ccmsp1<T: Scalar>(
    k: usize,
    m: usize,
    a: T,
    d: T,
    c: T,
    gamma: T,
) -> Result<Instance<T>> {
    if k == 0 {
        return Err(Error::Domain("at least one group is required".into()));
    }
    if !m.is_multiple_of(2) {
        return Err(Error::Domain(format!("group size must be even, got {m}")));
    }
    Instance::ccmsp1(k, m, a, d, c, gamma)
}

/// Shared parameters of generated CCMSP2PLUS instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ccmsp2PlusParams<T> {
    pub a: T,
    pub d: T,
    pub c: T,
    pub gamma: T,
}

impl<T: Scalar> Default for Ccmsp2PlusParams<T> {
    fn default() -> Self {
        Ccmsp2PlusParams {
            a: T::of(DEFAULT_A),
            d: T::of(DEFAULT_D),
            c: T::of(DEFAULT_CCMSP2PLUS_COV),
            gamma: T::of(DEFAULT_GAMMA),
        }
    }
}

/// An even instance and its odd companion (one extra job in a random group).
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionPair<T> {
    pub even: Instance<T>,
    pub odd: Instance<T>,
    /// Sizes in draw order, before sorting.
    pub drawn_sizes: Vec<usize>,
    /// Group of `even` (sorted order) that received the extra job.
    pub extra_group: usize,
}

/// Draws `k` random group sizes summing to `n`.
///
/// For `i < k`, with `r` jobs left for the remaining `k - i + 1` groups,
/// `f = ceil(r / (k - i + 1))` and `m_i = f + g` where `g` is uniform in
/// `[-ceil(f/2), ceil(f/2)]`; the last group takes the rest. A draw is
/// repeated while it would leave a group empty.
pub fn draw_sizes<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Result<Vec<usize>> {
    if k == 0 || n < k {
        return Err(Error::Domain(format!(
            "cannot split {n} jobs into {k} non-empty groups"
        )));
    }
    let mut sizes = Vec::with_capacity(k);
    let mut left = n;
    for i in 0..k - 1 {
        let groups_left = k - i;
        let f = left.div_ceil(groups_left) as i64;
        let spread = (f + 1) / 2;
        let most = (left - (groups_left - 1)) as i64;
        let m = loop {
            let m = f + rng.random_range(-spread..=spread);
            if (1..=most).contains(&m) {
                break m as usize;
            }
        };
        sizes.push(m);
        left -= m;
    }
    sizes.push(left);
    Ok(sizes)
}

/// Even instance with `n` jobs over `k` groups plus its odd companion.
/// Fails if either violates the extra constraint.
pub fn gen_ccmsp2plus<T: Scalar>(
    k: usize,
    n: usize,
    seed: u64,
    params: Ccmsp2PlusParams<T>,
) -> Result<CompanionPair<T>> {
    if !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "even instance needs an even job count, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn_sizes = draw_sizes(k, n, &mut rng)?;
    let mut sizes = drawn_sizes.clone();
    sizes.sort_unstable();
    let extra_group = rng.random_range(0..k);
    let mut odd_sizes = sizes.clone();
    odd_sizes[extra_group] += 1;
    odd_sizes.sort_unstable();

    let make = |sizes: Vec<usize>| {
        Instance::uniform(
            Variant::Ccmsp2Plus,
            sizes,
            params.a,
            params.d,
            params.c,
            params.gamma,
        )
    };
    Ok(CompanionPair {
        even: make(sizes)?,
        odd: make(odd_sizes)?,
        drawn_sizes,
        extra_group,
    })
}

pub fn validate_extra_constraint<T: Scalar>(inst: &Instance<T>) -> bool {
    inst.satisfies_extra_constraint()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Domain(format!("unknown parity `{other}`"))),
        }
    }
}

/// A benchmark grid.
///
/// `sizes` are group sizes `m` for CCMSP1 and per-group multipliers for
/// CCMSP2PLUS (`n = k * size`).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec<T> {
    pub variant: Variant,
    pub ks: Vec<usize>,
    pub sizes: Vec<usize>,
    pub cs: Vec<T>,
    pub a: T,
    pub d: T,
    pub gamma: T,
    pub seed: u64,
    /// CCMSP2PLUS only: which companions to emit.
    pub parities: Vec<Parity>,
}

impl<T: Scalar> GridSpec<T> {
    pub fn ccmsp1_default() -> Self {
        GridSpec {
            variant: Variant::Ccmsp1,
            ks: DEFAULT_KS.to_vec(),
            sizes: DEFAULT_SIZES.to_vec(),
            cs: DEFAULT_CCMSP1_COVS.iter().map(|&c| T::of(c)).collect(),
            a: T::of(DEFAULT_A),
            d: T::of(DEFAULT_D),
            gamma: T::of(DEFAULT_GAMMA),
            seed: 0,
            parities: Vec::new(),
        }
    }

    pub fn ccmsp2plus_default() -> Self {
        GridSpec {
            variant: Variant::Ccmsp2Plus,
            cs: vec![T::of(DEFAULT_CCMSP2PLUS_COV)],
            parities: vec![Parity::Even, Parity::Odd],
            ..Self::ccmsp1_default()
        }
    }

    /// Every instance of the grid, in (k, size, c, parity) order.
    pub fn points(&self) -> Result<Vec<GridPoint<T>>> {
        let mut out = Vec::new();
        for &k in &self.ks {
            for &size in &self.sizes {
                for &c in &self.cs {
                    match self.variant {
                        Variant::Ccmsp1 => {
                            let instance = gen_ccmsp1(k, size, self.a, self.d, c, self.gamma)?;
                            out.push(GridPoint {
                                id: format!("ccmsp1-k{k}-m{size}-c{c:e}"),
                                k,
                                size,
                                c,
                                parity: None,
                                instance,
                            });
                        }
                        Variant::Ccmsp2Plus => {
                            let n = k * size;
                            let params = Ccmsp2PlusParams {
                                a: self.a,
                                d: self.d,
                                c,
                                gamma: self.gamma,
                            };
                            let pair = gen_ccmsp2plus(k, n, self.pair_seed(k, n), params)?;
                            for &parity in &self.parities {
                                let (instance, jobs) = match parity {
                                    Parity::Even => (pair.even.clone(), n),
                                    Parity::Odd => (pair.odd.clone(), n + 1),
                                };
                                out.push(GridPoint {
                                    id: format!("ccmsp2p-k{k}-n{jobs}-c{c:e}-{parity}"),
                                    k,
                                    size,
                                    c,
                                    parity: Some(parity),
                                    instance,
                                });
                            }
                        }
                        other => {
                            return Err(Error::WrongVariant(format!(
                                "grids exist for CCMSP1 and CCMSP2PLUS, not {other}"
                            )))
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Seed of the size draw for `(k, n)`.
    pub fn pair_seed(&self, k: usize, n: usize) -> u64 {
        derive_seed(self.seed, &[k as u64, n as u64])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint<T> {
    pub id: String,
    pub k: usize,
    /// `m` for CCMSP1, the multiplier `n / k` for CCMSP2PLUS.
    pub size: usize,
    pub c: T,
    pub parity: Option<Parity>,
    pub instance: Instance<T>,
}
