use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::{Instance, Scalar};

/// Assignment of jobs to machines: bit `false` puts a job on `M0`, `true` on `M1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    bits: Vec<bool>,
}

impl Solution {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Solution { bits }
    }

    /// Every job on `M0`.
    pub fn zeros(n: usize) -> Self {
        Solution {
            bits: vec![false; n],
        }
    }

    /// Uniform over `{0,1}^n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Solution {
            bits: (0..n).map(|_| rng.random::<bool>()).collect(),
        }
    }

    /// Puts the first `on_m0[i]` jobs of group `i` on `M0` and the rest on `M1`.
    pub fn from_group_counts<T: Scalar>(inst: &Instance<T>, on_m0: &[usize]) -> Result<Self> {
        if on_m0.len() != inst.k() {
            return Err(Error::Domain(format!(
                "{} group counts given for {} groups",
                on_m0.len(),
                inst.k()
            )));
        }
        let mut bits = Vec::with_capacity(inst.n());
        for (i, &alpha) in on_m0.iter().enumerate() {
            let m = inst.sizes()[i];
            if alpha > m {
                return Err(Error::Domain(format!(
                    "group {i} has {m} jobs, cannot place {alpha} on M0"
                )));
            }
            bits.extend(std::iter::repeat_n(false, alpha));
            bits.extend(std::iter::repeat_n(true, m - alpha));
        }
        Ok(Solution { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    /// Machine index (0 or 1) of job `index`.
    #[inline]
    pub fn machine_of(&self, index: usize) -> usize {
        self.bits[index] as usize
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        self.bits[index] = !self.bits[index];
    }

    /// Swaps every job to the other machine.
    pub fn complement(&self) -> Self {
        Solution {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for Solution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line: 1,
                    message: format!("bit {i} is `{other}`, expected 0 or 1"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Solution::from_bits)
    }
}
