//! Multi-index combinatorics for the symmetric basis.
//!
//! A symmetric m-mode tensor over an n-dimensional space is indexed by the
//! nondecreasing tuples in {1..n}^m. This module provides that index type,
//! its lexicographic rank/unrank bijection, and the multiplicity coefficient
//! c(i) = m!/(m_1! ... m_b!) counting how many plain tuples sort to a given
//! nondecreasing one. Multiplicities are exact 64-bit integers where they
//! fit; log-space variants cover the rest.

use crate::error::{Error, Result};

/// Binomial coefficient with explicit overflow detection.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        // Quotient of a prefix product of binomial form is exact at each step.
    }
    u64::try_from(acc).ok()
}

/// Dimension of the space of symmetric m-mode tensors over C^n:
/// binomial(n+m-1, m).
pub fn dim_sym(n: u32, m: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1".into(),
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: "must be at least 1".into(),
        });
    }
    let a = n as u64 + m as u64 - 1;
    binomial(a, m as u64).ok_or(Error::Overflow {
        what: "dim_sym",
        n,
        m,
    })
}

/// A nondecreasing multi-index in {1..n}^m, the address of one symmetric
/// basis vector. Entries are 1-based as in all user-facing formats.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
    n: u32,
}

impl MultiIndex {
    /// Builds a multi-index, validating range and nondecreasing order.
    pub fn new(n: u32, entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter {
                name: "entries",
                reason: "multi-index must have at least one mode".into(),
            });
        }
        for &e in &entries {
            if e == 0 || e > n {
                return Err(Error::EntryOutOfRange { entry: e, n });
            }
        }
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotNondecreasing);
        }
        Ok(MultiIndex { entries, n })
    }

    /// Sorts an arbitrary tuple in {1..n}^m into its nondecreasing
    /// representative.
    pub fn ascending_of(n: u32, tuple: &[u32]) -> Result<Self> {
        let mut entries = tuple.to_vec();
        if entries.is_empty() {
            return Err(Error::InvalidParameter {
                name: "tuple",
                reason: "must have at least one mode".into(),
            });
        }
        for &e in &entries {
            if e == 0 || e > n {
                return Err(Error::EntryOutOfRange { entry: e, n });
            }
        }
        entries.sort_unstable();
        Ok(MultiIndex { entries, n })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.entries.len() as u32
    }

    /// Sizes of the blocks of equal entries, in order of appearance.
    pub fn block_sizes(&self) -> Vec<u64> {
        let mut blocks = Vec::new();
        let mut run = 1u64;
        for w in self.entries.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                blocks.push(run);
                run = 1;
            }
        }
        blocks.push(run);
        blocks
    }

    /// Occurrence count of each symbol 1..=n (the exponent vector of the
    /// monomial v_{i_1} ... v_{i_m}).
    pub fn exponents(&self) -> Vec<u32> {
        let mut exps = vec![0u32; self.n as usize];
        for &e in &self.entries {
            exps[(e - 1) as usize] += 1;
        }
        exps
    }

    /// Multiplicity coefficient c(i): the number of plain tuples whose sorted
    /// form is this index.
    pub fn multiplicity(&self) -> Result<Multiplicity> {
        Multiplicity::from_blocks(self.block_sizes(), self.n, self.m())
    }

    /// Lexicographic position among all nondecreasing tuples in {1..n}^m.
    pub fn rank(&self) -> u64 {
        let m = self.entries.len() as u32;
        let mut rank = 0u64;
        let mut low = 1u32;
        for (k, &e) in self.entries.iter().enumerate() {
            let remaining = m - k as u32 - 1;
            for c in low..e {
                rank += count_suffixes(self.n, c, remaining);
            }
            low = e;
        }
        rank
    }

    /// Inverse of [`MultiIndex::rank`].
    pub fn unrank(rank: u64, n: u32, m: u32) -> Result<Self> {
        let dim = dim_sym(n, m)?;
        if rank >= dim {
            return Err(Error::RankOutOfRange { rank, dim });
        }
        let mut entries = Vec::with_capacity(m as usize);
        let mut remaining_rank = rank;
        let mut low = 1u32;
        for k in 0..m {
            let remaining = m - k - 1;
            let mut c = low;
            loop {
                let block = count_suffixes(n, c, remaining);
                if remaining_rank < block {
                    break;
                }
                remaining_rank -= block;
                c += 1;
            }
            entries.push(c);
            low = c;
        }
        Ok(MultiIndex { entries, n })
    }
}

/// Number of nondecreasing tuples of the given length with entries in c..=n.
fn count_suffixes(n: u32, c: u32, len: u32) -> u64 {
    if len == 0 {
        return 1;
    }
    let choices = (n - c + 1) as u64;
    binomial(choices + len as u64 - 1, len as u64)
        .expect("suffix count bounded by dim_sym, already checked")
}

/// Multiplicity coefficient together with the block sizes it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicity {
    pub value: u64,
    pub block_sizes: Vec<u64>,
}

impl Multiplicity {
    fn from_blocks(block_sizes: Vec<u64>, n: u32, m: u32) -> Result<Self> {
        let value = multinomial(&block_sizes).ok_or(Error::Overflow {
            what: "multiplicity",
            n,
            m,
        })?;
        Ok(Multiplicity { value, block_sizes })
    }
}

/// Exact multinomial (sum b_j)! / prod b_j!, as a product of binomials.
pub fn multinomial(blocks: &[u64]) -> Option<u64> {
    let mut total = 0u64;
    let mut acc = 1u64;
    for &b in blocks {
        total = total.checked_add(b)?;
        acc = acc.checked_mul(binomial(total, b)?)?;
    }
    Some(acc)
}

/// ln k!, valid for any k.
pub fn ln_factorial(k: u64) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}

/// ln of the multinomial coefficient for the given block sizes.
pub fn ln_multinomial(blocks: &[u64]) -> f64 {
    let total: u64 = blocks.iter().sum();
    ln_factorial(total) - blocks.iter().map(|&b| ln_factorial(b)).sum::<f64>()
}

/// sqrt(c(i)) as f64, exact when c(i) fits in 64 bits, log-space otherwise.
pub fn sqrt_multiplicity(blocks: &[u64]) -> f64 {
    match multinomial(blocks) {
        Some(c) => (c as f64).sqrt(),
        None => (0.5 * ln_multinomial(blocks)).exp(),
    }
}

/// Iterator over all nondecreasing tuples in {1..n}^m in lexicographic
/// order, yielding raw entry vectors.
pub struct MultiIndexIter {
    n: u32,
    next: Option<Vec<u32>>,
}

impl MultiIndexIter {
    pub fn new(n: u32, m: u32) -> Self {
        let next = if n == 0 || m == 0 {
            None
        } else {
            Some(vec![1u32; m as usize])
        };
        MultiIndexIter { n, next }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        // Advance: bump the rightmost entry below n, reset the tail to it.
        let mut succ = current.clone();
        let mut pos = None;
        for (k, &e) in succ.iter().enumerate().rev() {
            if e < self.n {
                pos = Some(k);
                break;
            }
        }
        if let Some(k) = pos {
            let v = succ[k] + 1;
            for e in succ.iter_mut().skip(k) {
                *e = v;
            }
            self.next = Some(succ);
        }
        Some(current)
    }
}
