use num_bigint::BigInt;
use num_traits::Zero;

use super::sequences::{exact_div, CountSeq, Provenance, SeqName, Sequences};
use crate::chain::shortest_walk_length;
use crate::tree::Pair;
use crate::Result;

/// `A_k(n)`: occurrences at depth `3n + (k mod 3)` of any pair whose shortest
/// walk has `k` branches.
///
/// Rows 0..=2 come from `A11`, `B`: `A_0 = A11`,
/// `A_1(n) = (A11(n+1) - B(n+1)) / 4`, `A_2(n) = A11(n+1) - 4 A11(n)`.
/// Higher rows use the shortest-walk reduction
/// `A_k(n) = A_{k-2}(n + e) - A_{k-3}(n)` with `e = 1` exactly when
/// `k = 2 (mod 3)`, valid from `n = k / 3`; below that the count is zero.
#[derive(Clone, Debug, Default)]
pub struct Counter {
    seqs: Sequences,
    rows: Vec<Vec<BigInt>>,
}

impl Counter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_sequences(seqs: Sequences) -> Self {
        Counter {
            seqs,
            rows: Vec::new(),
        }
    }

    pub fn sequences(&self) -> &Sequences {
        &self.seqs
    }

    pub fn sequences_mut(&mut self) -> &mut Sequences {
        &mut self.seqs
    }

    pub fn s(&mut self, n: usize) -> BigInt {
        self.seqs.ensure(n);
        self.seqs.s(n).clone()
    }

    pub fn b(&mut self, n: usize) -> BigInt {
        self.seqs.ensure(n);
        self.seqs.b(n).clone()
    }

    pub fn a11(&mut self, n: usize) -> BigInt {
        self.seqs.ensure(n);
        self.seqs.a11(n).clone()
    }

    pub fn d(&mut self, n: usize) -> BigInt {
        self.seqs.ensure(n);
        self.seqs.d(n).clone()
    }

    pub fn ak(&mut self, k: usize, n: usize) -> BigInt {
        self.ensure_row(k, n + 1);
        self.rows[k][n].clone()
    }

    /// `A_(a,b)(n)` through the pair's shortest-walk length.
    pub fn count_pair(&mut self, p: Pair, n: usize) -> Result<BigInt> {
        let k = shortest_walk_length(p)?;
        Ok(self.ak(k, n))
    }

    /// Row `k` as a sequence of its first `len` values.
    pub fn row(&mut self, k: usize, len: usize) -> CountSeq {
        self.ensure_row(k, len);
        let provenance = if k < 3 {
            Provenance::Recurrence
        } else {
            Provenance::Reduction
        };
        CountSeq::from_values(SeqName::Ak(k), provenance, self.rows[k][..len].to_vec())
    }

    pub(crate) fn rows_ref(&self, k: usize) -> &[BigInt] {
        &self.rows[k]
    }

    /// Makes `A_k(0..len)` available.
    pub fn ensure_row(&mut self, k: usize, len: usize) {
        if self.rows.len() <= k {
            self.rows.resize_with(k + 1, Vec::new);
        }
        let have = self.rows[k].len();
        if have >= len {
            return;
        }
        let first = k / 3;
        match k {
            0..=2 => self.seqs.ensure(len),
            _ => {
                let shift = usize::from(k % 3 == 2);
                self.ensure_row(k - 2, len + shift);
                self.ensure_row(k - 3, len);
            }
        }
        for n in have..len {
            let v = match k {
                0 => self.seqs.a11(n).clone(),
                1 => exact_div(
                    &(self.seqs.a11(n + 1) - self.seqs.b(n + 1)),
                    &BigInt::from(4),
                    "A_1(n)",
                ),
                2 => self.seqs.a11(n + 1) - self.seqs.a11(n) * 4,
                _ if n < first => BigInt::zero(),
                _ => {
                    let shift = usize::from(k % 3 == 2);
                    &self.rows[k - 2][n + shift] - &self.rows[k - 3][n]
                }
            };
            self.rows[k].push(v);
        }
    }
}
