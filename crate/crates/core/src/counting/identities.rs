use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::family::Counter;
use super::sequences::binomial;
use crate::{Error, Result};

/// Largest shortest-walk length covered by [`Identity::CoprimePair3`].
pub const COPRIME_PAIR3_MAX_K: usize = 8;

/// Exact relations between the counting sequences, each checkable at a
/// single index with big-integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `A11(n) = sum_{i<n} A11(i) S(n-i)`, `n >= 1`.
    AFormula,
    /// `B(n) = B(n-1) + sum_{i<=n-2} B(i) S(n-i)`, `n >= 1`.
    BFormula,
    /// `A11(n) = B(n) + 4 sum_{i<n} A11(i) B(n-1-i)`.
    AbFormula,
    /// `sum_k B(k) B(n-k) = S(n+1)`, `n >= 1`.
    Lemma60,
    /// `A11(n+2) - 16 A11(n+1) + 64 A11(n) = B(n+2) + 4 S(n+2)`.
    Lemma61,
    /// `D(n) = A11(n+1) - 8 A11(n)`.
    Eqn11,
    /// `S(n) <= B(n) <= A11(n)`, `n >= 2`.
    Eqn3,
    /// `S(n) = C(3n-1,n-1) - C(3n-3,n-1) - sum_{k=2}^{n-1} C(3n-3k,n-k) S(k)`, `n >= 2`.
    SRecurrence,
    /// `A11(n+1) - B(n+1) = 4 sum_{i<=n} A11(i) B(n-i)`.
    Cor52,
    /// `A11(n+1) - 4 A11(n) = sum_{i<=n} A_(1,2)(i) B(n-i)` with `A_(1,2)`
    /// itself taken from the convolution.
    Cor54,
    /// `A_k(n)` equals the convolution of `A_{k-1}` with `B` (shifted by one
    /// when `k = 0 mod 3`), for every `1 <= k <= 8` with `n >= k/3`.
    CoprimePair3,
    /// `A11(n) < 2 C(3n, n)`.
    AInequality,
    /// `S(n+1)^2 < S(n) S(n+2)`, `n >= 2`.
    Lemma41,
    /// `A11(n+1)^2 < A11(n) A11(n+2)`, `n >= 1`.
    Lemma42,
    /// `5 A11(n) < A11(n+1) < 6.75 A11(n)`, `n >= 1`.
    ARatio,
}

impl Identity {
    pub const ALL: [Identity; 15] = [
        Identity::AFormula,
        Identity::BFormula,
        Identity::AbFormula,
        Identity::Lemma60,
        Identity::Lemma61,
        Identity::Eqn11,
        Identity::Eqn3,
        Identity::SRecurrence,
        Identity::Cor52,
        Identity::Cor54,
        Identity::CoprimePair3,
        Identity::AInequality,
        Identity::Lemma41,
        Identity::Lemma42,
        Identity::ARatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::AFormula => "aformula",
            Identity::BFormula => "bformula",
            Identity::AbFormula => "abformula",
            Identity::Lemma60 => "lemma60",
            Identity::Lemma61 => "lemma61",
            Identity::Eqn11 => "eqn11",
            Identity::Eqn3 => "eqn3",
            Identity::SRecurrence => "srecurrence",
            Identity::Cor52 => "cor52",
            Identity::Cor54 => "cor54",
            Identity::CoprimePair3 => "coprimepair3",
            Identity::AInequality => "ainequality",
            Identity::Lemma41 => "lemma41",
            Identity::Lemma42 => "lemma42",
            Identity::ARatio => "aratio",
        }
    }

    /// Smallest index at which the relation is stated.
    pub fn min_index(self) -> usize {
        match self {
            Identity::AFormula | Identity::BFormula | Identity::Lemma60 => 1,
            Identity::Lemma42 | Identity::ARatio => 1,
            Identity::Eqn3 | Identity::SRecurrence | Identity::Lemma41 => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == lower)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Convolution `sum_{i=lo}^{hi} x(i) B(hi - i)` over a closure-supplied `x`.
fn conv_b(c: &Counter, lo: usize, hi: usize, x: impl Fn(usize) -> BigInt) -> BigInt {
    if lo > hi {
        return BigInt::zero();
    }
    (lo..=hi).map(|i| x(i) * c.sequences().b(hi - i)).sum()
}

impl Counter {
    /// Evaluates `id` at index `n`.
    pub fn check_identity(&mut self, id: Identity, n: usize) -> Result<bool> {
        if n < id.min_index() {
            return Err(Error::IdentityOutOfRange { name: id.name(), n });
        }
        self.sequences_mut().ensure(n + 2);
        if id == Identity::CoprimePair3 {
            for k in 1..=COPRIME_PAIR3_MAX_K {
                self.ensure_row(k, n + 1);
            }
        }
        let q = self.sequences();
        let s = |i: usize| q.s(i).clone();
        let b = |i: usize| q.b(i).clone();
        let a = |i: usize| q.a11(i).clone();
        let ok = match id {
            Identity::AFormula => a(n) == (0..n).map(|i| a(i) * q.s(n - i)).sum::<BigInt>(),
            Identity::BFormula => {
                let tail: BigInt = (0..n.saturating_sub(1)).map(|i| b(i) * q.s(n - i)).sum();
                b(n) == b(n - 1) + tail
            }
            Identity::AbFormula => {
                let sum: BigInt = if n == 0 {
                    BigInt::zero()
                } else {
                    conv_b(self, 0, n - 1, a)
                };
                a(n) == b(n) + sum * 4
            }
            Identity::Lemma60 => (0..=n).map(|k| b(k) * q.b(n - k)).sum::<BigInt>() == s(n + 1),
            Identity::Lemma61 => a(n + 2) - a(n + 1) * 16 + a(n) * 64 == b(n + 2) + s(n + 2) * 4,
            Identity::Eqn11 => q.d(n) == &(a(n + 1) - a(n) * 8),
            Identity::Eqn3 => s(n) <= b(n) && b(n) <= a(n),
            Identity::SRecurrence => {
                let mut rhs = binomial(3 * n - 1, n - 1) - binomial(3 * n - 3, n - 1);
                for k in 2..n {
                    rhs -= binomial(3 * n - 3 * k, n - k) * q.s(k);
                }
                s(n) == rhs
            }
            Identity::Cor52 => a(n + 1) - b(n + 1) == conv_b(self, 0, n, a) * 4,
            Identity::Cor54 => {
                let a12 = |i: usize| conv_b(self, 0, i, a);
                a(n + 1) - a(n) * 4 == conv_b(self, 0, n, a12)
            }
            Identity::CoprimePair3 => {
                (1..=COPRIME_PAIR3_MAX_K).all(|k| self.coprime_pair3_holds(k, n))
            }
            Identity::AInequality => a(n) < q.binom3n(n) * 2,
            Identity::Lemma41 => s(n + 1) * s(n + 1) < s(n) * q.s(n + 2),
            Identity::Lemma42 => a(n + 1) * a(n + 1) < a(n) * q.a11(n + 2),
            Identity::ARatio => a(n) * 5 < a(n + 1) && a(n + 1) * 4 < a(n) * 27,
        };
        Ok(ok)
    }

    /// Rows `k - 1` and `k` must already hold index `n`.
    fn coprime_pair3_holds(&self, k: usize, n: usize) -> bool {
        if n < k / 3 {
            return true;
        }
        let prev = |i: usize| self.rows_ref(k - 1)[i].clone();
        let lo = (k - 1) / 3;
        let rhs = if k % 3 == 0 {
            if n == 0 {
                BigInt::zero()
            } else {
                conv_b(self, lo, n - 1, prev)
            }
        } else {
            conv_b(self, lo, n, prev)
        };
        self.rows_ref(k)[n] == rhs
    }
}
