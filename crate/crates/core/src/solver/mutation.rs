use rand::{Rng, RngCore};
use rand_distr::{Distribution, Geometric};

/// Random decisions consumed by the mutation operators.
///
/// Blanket-implemented for every [`RngCore`]; tests can implement it on a
/// script to force particular offspring.
pub trait MutationSource {
    /// Fair coin: `false` selects a one-bit RLS move, `true` a two-bit move.
    fn coin(&mut self) -> bool;

    /// Uniform index in `0..n`, `n >= 1`.
    fn index(&mut self, n: usize) -> usize;

    /// Uniform unordered pair `(i, j)` with `i < j < n`, `n >= 2`.
    fn pair(&mut self, n: usize) -> (usize, usize) {
        let i = self.index(n);
        let mut j = self.index(n - 1);
        if j >= i {
            j += 1;
        }
        (i.min(j), i.max(j))
    }

    /// Fills `out` (ascending) with the positions flipped when each of `n`
    /// bits flips independently with probability `1/n`.
    fn standard_bit_flips(&mut self, n: usize, out: &mut Vec<usize>);
}

impl<R: RngCore + ?Sized> MutationSource for R {
    fn coin(&mut self) -> bool {
        self.random::<bool>()
    }

    fn index(&mut self, n: usize) -> usize {
        self.random_range(0..n)
    }

    fn standard_bit_flips(&mut self, n: usize, out: &mut Vec<usize>) {
        out.clear();
        if n == 0 {
            return;
        }
        if n == 1 {
            out.push(0);
            return;
        }
        // Gaps between successive flips of a Bernoulli(1/n) sequence are geometric.
        let gaps = Geometric::new(1.0 / n as f64).expect("1/n is a valid probability");
        let mut pos = 0u64;
        loop {
            pos = pos.saturating_add(gaps.sample(self));
            if pos >= n as u64 {
                break;
            }
            out.push(pos as usize);
            pos += 1;
        }
    }
}
