use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::{choose2, Scalar};

/// Problem family an instance claims to belong to. The tag decides which
/// structural constraints are enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Uniform `a`, `d`; per-group covariance allowed.
    General,
    /// Equal, even group sizes and a single covariance.
    Ccmsp1,
    /// Arbitrary group sizes, single covariance.
    Ccmsp2,
    /// As `Ccmsp2`, plus the variance term can never outweigh one job.
    Ccmsp2Plus,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::General => "GENERAL",
            Variant::Ccmsp1 => "CCMSP1",
            Variant::Ccmsp2 => "CCMSP2",
            Variant::Ccmsp2Plus => "CCMSP2PLUS",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s
            .trim()
            .to_ascii_uppercase()
            .replace('+', "PLUS")
            .replace(['-', '_'], "")
            .as_str()
        {
            "GENERAL" => Ok(Variant::General),
            "CCMSP1" => Ok(Variant::Ccmsp1),
            "CCMSP2" => Ok(Variant::Ccmsp2),
            "CCMSP2PLUS" => Ok(Variant::Ccmsp2Plus),
            other => Err(Error::InvalidInstance(format!("unknown variant `{other}`"))),
        }
    }
}

/// A two-machine instance: `k` groups of jobs with identical expected time `a`
/// and variance `d`; jobs of group `i` sharing a machine covary by `cov[i]`.
///
/// Jobs are indexed group by group, so job `j` of group `i` sits at
/// `offset(i) + j` in a [`Solution`](crate::Solution).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    variant: Variant,
    sizes: Vec<usize>,
    a: T,
    d: T,
    cov: Vec<T>,
    gamma: T,
    n: usize,
    offsets: Vec<usize>,
    group_of: Vec<u32>,
    uniform_cov: Option<T>,
    risk_factor: T,
}

impl<T: Scalar> Instance<T> {
    pub fn new(
        variant: Variant,
        sizes: Vec<usize>,
        a: T,
        d: T,
        cov: Vec<T>,
        gamma: T,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidInstance(msg));

        if sizes.is_empty() {
            return invalid("at least one group is required".into());
        }
        if let Some(i) = sizes.iter().position(|&m| m == 0) {
            return invalid(format!("group {i} is empty"));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return invalid(format!("group sizes must be non-decreasing, got {sizes:?}"));
        }
        if cov.len() != sizes.len() {
            return invalid(format!(
                "{} covariances given for {} groups",
                cov.len(),
                sizes.len()
            ));
        }
        if !(a.is_finite() && a > T::zero()) {
            return invalid(format!(
                "expected processing time must be positive, got {a}"
            ));
        }
        if !(d.is_finite() && d >= T::zero()) {
            return invalid(format!("variance must be non-negative, got {d}"));
        }
        if let Some(c) = cov.iter().find(|c| !(c.is_finite() && **c >= T::zero())) {
            return invalid(format!("covariance must be non-negative, got {c}"));
        }
        // gamma = 0 makes the surrogate divide by zero.
        if !(gamma > T::zero() && gamma < T::one()) {
            return invalid(format!("gamma must lie in (0, 1), got {gamma}"));
        }

        let uniform_cov = if cov.iter().all(|&c| c == cov[0]) {
            Some(cov[0])
        } else {
            None
        };

        match variant {
            Variant::General => {}
            Variant::Ccmsp1 => {
                if sizes.iter().any(|&m| m != sizes[0]) || !sizes[0].is_multiple_of(2) {
                    return invalid(format!(
                        "CCMSP1 requires equal, even group sizes, got {sizes:?}"
                    ));
                }
                if uniform_cov.is_none() {
                    return invalid("CCMSP1 requires a single covariance".into());
                }
            }
            Variant::Ccmsp2 | Variant::Ccmsp2Plus => {
                if uniform_cov.is_none() {
                    return invalid(format!("{variant} requires a single covariance"));
                }
            }
        }

        let n: usize = sizes.iter().sum();
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut group_of = Vec::with_capacity(n);
        let mut acc = 0;
        for (i, &m) in sizes.iter().enumerate() {
            offsets.push(acc);
            acc += m;
            group_of.extend(std::iter::repeat_n(i as u32, m));
        }
        offsets.push(acc);

        let inst = Instance {
            variant,
            sizes,
            a,
            d,
            cov,
            gamma,
            n,
            offsets,
            group_of,
            uniform_cov,
            risk_factor: (T::one() - gamma) / gamma,
        };

        if variant == Variant::Ccmsp2Plus && !inst.satisfies_extra_constraint() {
            return invalid(format!(
                "CCMSP2PLUS extra constraint violated: variance term {} >= a = {}",
                inst.extra_constraint_lhs(),
                inst.a
            ));
        }
        Ok(inst)
    }

    /// Instance with one covariance shared by all groups.
    pub fn uniform(
        variant: Variant,
        sizes: Vec<usize>,
        a: T,
        d: T,
        c: T,
        gamma: T,
    ) -> Result<Self> {
        let k = sizes.len();
        Self::new(variant, sizes, a, d, vec![c; k], gamma)
    }

    pub fn ccmsp1(k: usize, m: usize, a: T, d: T, c: T, gamma: T) -> Result<Self> {
        Self::uniform(Variant::Ccmsp1, vec![m; k], a, d, c, gamma)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn cov(&self) -> &[T] {
        &self.cov
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// The shared covariance, if every group has the same one.
    pub fn uniform_cov(&self) -> Option<T> {
        self.uniform_cov
    }

    /// `(1 - gamma) / gamma`, the factor applied to the variance in the surrogate.
    pub fn risk_factor(&self) -> T {
        self.risk_factor
    }

    #[inline]
    pub fn group_of(&self, job: usize) -> usize {
        self.group_of[job] as usize
    }

    pub fn group_range(&self, group: usize) -> Range<usize> {
        self.offsets[group]..self.offsets[group + 1]
    }

    /// Total covariance mass if every job sat on one machine: `sum_i 2 c_i C(m_i, 2)`.
    pub fn max_cov(&self) -> T {
        self.sizes
            .iter()
            .zip(&self.cov)
            .fold(T::zero(), |acc, (&m, &c)| {
                acc + T::of(2.0) * c * T::of_count(choose2(m as u64))
            })
    }

    /// `sqrt(((1 - gamma) / gamma) * (n d + sum_i 2 c_i C(m_i, 2)))`.
    pub fn extra_constraint_lhs(&self) -> T {
        (self.risk_factor * (T::of_count(self.n as u64) * self.d + self.max_cov())).sqrt()
    }

    /// Whether the variance term of any machine load stays strictly below `a`.
    pub fn satisfies_extra_constraint(&self) -> bool {
        self.extra_constraint_lhs() < self.a
    }

    /// The same parameters with different (sorted) sizes and variant tag.
    pub fn with_sizes(&self, variant: Variant, sizes: Vec<usize>) -> Result<Self> {
        let c = self
            .uniform_cov
            .ok_or_else(|| Error::InvalidInstance("resizing needs a single covariance".into()))?;
        Self::uniform(variant, sizes, self.a, self.d, c, self.gamma)
    }
}
