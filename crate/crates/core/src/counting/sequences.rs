use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Which counting sequence a [`CountSeq`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeqName {
    /// Primitive `(1, 1)` occurrences at depth `3n`.
    S,
    /// Zero-avoiding `(1, 1)` occurrences at depth `3n`.
    B,
    /// All `(1, 1)` occurrences at depth `3n`.
    A11,
    /// First difference `A11(n + 1) - 8 A11(n)`.
    D,
    /// Occurrences of any pair whose shortest walk has `k` branches.
    Ak(usize),
}

impl fmt::Display for SeqName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqName::S => f.write_str("S"),
            SeqName::B => f.write_str("B"),
            SeqName::A11 => f.write_str("A11"),
            SeqName::D => f.write_str("D"),
            SeqName::Ak(k) => write!(f, "A{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Recurrence,
    Reduction,
    Convolution,
}

/// An index-addressed prefix of an integer sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeq {
    pub name: SeqName,
    pub provenance: Provenance,
    values: Vec<BigInt>,
}

impl CountSeq {
    pub fn new(name: SeqName, provenance: Provenance) -> Self {
        CountSeq {
            name,
            provenance,
            values: Vec::new(),
        }
    }

    pub(crate) fn from_values(name: SeqName, provenance: Provenance, values: Vec<BigInt>) -> Self {
        CountSeq {
            name,
            provenance,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub(crate) fn push(&mut self, v: BigInt) {
        self.values.push(v);
    }

    fn at(&self, n: usize) -> &BigInt {
        self.values.get(n).unwrap_or_else(|| {
            panic!(
                "{}({n}) requested but only {} terms computed",
                self.name,
                self.len()
            )
        })
    }
}

/// Divides, asserting the quotient is exact.
pub(crate) fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> BigInt {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "{what}: {den} does not divide exactly");
    q
}

/// `C(3n, n)` from scratch, independent of the incremental update.
pub fn central_trinomial_binomial(n: usize) -> BigInt {
    binomial(3 * n, n)
}

/// `C(n, k)` by the multiplicative formula.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Cached prefixes of `S`, `B`, `A11` and `D`.
///
/// `C(3n, n)` is carried forward by its exact ratio
/// `(3n+1)(3n+2)(3n+3) / ((n+1)(2n+1)(2n+2))`; `S` and `B` are exact
/// quotients of it. `A11` and `D` come from the coupled linear recurrence
/// `A11(n+1) = 8 A11(n) + D(n)`, `D(n+1) = 8 D(n) + B(n+2) + 4 S(n+2)`.
#[derive(Clone, Debug)]
pub struct Sequences {
    s: CountSeq,
    b: CountSeq,
    a11: CountSeq,
    d: CountSeq,
    /// `C(3m, m)` for `m = b.len() - 1`.
    last_binom: BigInt,
}

impl Default for Sequences {
    fn default() -> Self {
        Self::new()
    }
}

impl Sequences {
    pub fn new() -> Self {
        let mut seqs = Sequences {
            s: CountSeq::new(SeqName::S, Provenance::ClosedForm),
            b: CountSeq::new(SeqName::B, Provenance::ClosedForm),
            a11: CountSeq::new(SeqName::A11, Provenance::Recurrence),
            d: CountSeq::new(SeqName::D, Provenance::Recurrence),
            last_binom: BigInt::one(),
        };
        seqs.s.push(BigInt::zero());
        seqs.b.push(BigInt::one());
        seqs.a11.push(BigInt::one());
        seqs.d.push(BigInt::from(-3));
        seqs
    }

    /// Table with `A11` and `D` known through index `n`.
    pub fn with_len(n: usize) -> Self {
        let mut seqs = Self::new();
        seqs.ensure(n);
        seqs
    }

    /// Rebuilds a table from stored prefixes. The caller is responsible for
    /// the values being consistent.
    pub(crate) fn from_parts(
        s: Vec<BigInt>,
        b: Vec<BigInt>,
        a11: Vec<BigInt>,
        d: Vec<BigInt>,
    ) -> Self {
        let m = b.len() - 1;
        let last_binom = &b[m] * BigInt::from(2 * m + 1);
        Sequences {
            s: CountSeq::from_values(SeqName::S, Provenance::ClosedForm, s),
            b: CountSeq::from_values(SeqName::B, Provenance::ClosedForm, b),
            a11: CountSeq::from_values(SeqName::A11, Provenance::Recurrence, a11),
            d: CountSeq::from_values(SeqName::D, Provenance::Recurrence, d),
            last_binom,
        }
    }

    /// Highest index at which every accessor is available.
    pub fn top(&self) -> usize {
        self.a11.len().min(self.d.len()) - 1
    }

    /// Extends so that `a11(n)`, `d(n)` and `s`/`b` through `n + 1` exist.
    pub fn ensure(&mut self, n: usize) {
        self.ensure_closed_forms(n + 1);
        while self.a11.len() <= n {
            let j = self.a11.len() - 1;
            let a = self.a11.at(j) * 8 + self.d.at(j);
            let d = self.d.at(j) * 8 + self.b.at(j + 2) + self.s.at(j + 2) * 4;
            self.a11.push(a);
            self.d.push(d);
        }
    }

    fn ensure_closed_forms(&mut self, n: usize) {
        while self.b.len() <= n {
            let m = self.b.len() - 1;
            let num = BigInt::from((3 * m + 1) * (3 * m + 2) * (3 * m + 3));
            let den = BigInt::from((m + 1) * (2 * m + 1) * (2 * m + 2));
            let binom = exact_div(&(&self.last_binom * num), &den, "C(3n,n) ratio");
            let next = m + 1;
            self.b
                .push(exact_div(&binom, &BigInt::from(2 * next + 1), "B(n)"));
            let s = if next == 1 {
                BigInt::from(5)
            } else {
                // 2/(3n-1) C(3n-1, n-1) with C(3n-1, n-1) = C(3n, n) / 3.
                exact_div(&(&binom * 2), &BigInt::from(3 * (3 * next - 1)), "S(n)")
            };
            self.s.push(s);
            self.last_binom = binom;
        }
    }

    pub fn s(&self, n: usize) -> &BigInt {
        self.s.at(n)
    }

    pub fn b(&self, n: usize) -> &BigInt {
        self.b.at(n)
    }

    pub fn a11(&self, n: usize) -> &BigInt {
        self.a11.at(n)
    }

    pub fn d(&self, n: usize) -> &BigInt {
        self.d.at(n)
    }

    /// `C(3n, n) = (2n + 1) B(n)`.
    pub fn binom3n(&self, n: usize) -> BigInt {
        self.b(n) * BigInt::from(2 * n + 1)
    }

    pub fn seq(&self, name: SeqName) -> Option<&CountSeq> {
        match name {
            SeqName::S => Some(&self.s),
            SeqName::B => Some(&self.b),
            SeqName::A11 => Some(&self.a11),
            SeqName::D => Some(&self.d),
            SeqName::Ak(_) => None,
        }
    }
}

/// `A11(0..=n)` by the convolution over primitive returns,
/// `A11(n) = sum_{i<n} A11(i) S(n - i)`. Quadratic; a cross-check only.
pub fn a11_by_convolution(seqs: &Sequences, n: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::one()];
    for m in 1..=n {
        let v = (0..m).map(|i| &a[i] * seqs.s(m - i)).sum();
        a.push(v);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_values() {
        let seqs = Sequences::with_len(6);
        assert_eq!(seqs.s.values()[..5], ints(&[0, 5, 2, 7, 30])[..]);
        assert_eq!(seqs.b.values()[..5], ints(&[1, 1, 3, 12, 55])[..]);
        assert_eq!(seqs.a11.values()[..5], ints(&[1, 5, 27, 152, 879])[..]);
        assert_eq!(seqs.d.values()[..4], ints(&[-3, -13, -64, -337])[..]);
    }

    #[test]
    fn closed_forms_match_direct_binomials() {
        let seqs = Sequences::with_len(60);
        for n in 0..=60 {
            let c = central_trinomial_binomial(n);
            assert_eq!(seqs.binom3n(n), c);
            if n >= 2 {
                let s = binomial(3 * n - 1, n - 1) * 2 / BigInt::from(3 * n - 1);
                assert_eq!(seqs.s(n), &s, "S({n})");
            }
        }
    }

    #[test]
    fn convolution_matches_recurrence() {
        let seqs = Sequences::with_len(80);
        let conv = a11_by_convolution(&seqs, 80);
        for (n, v) in conv.iter().enumerate() {
            assert_eq!(v, seqs.a11(n));
        }
    }

    #[test]
    fn d_is_first_difference() {
        let seqs = Sequences::with_len(50);
        for n in 0..50 {
            assert_eq!(seqs.d(n), &(seqs.a11(n + 1) - seqs.a11(n) * 8));
        }
    }

    #[test]
    #[should_panic(expected = "only")]
    fn unevaluated_index_panics() {
        let seqs = Sequences::with_len(3);
        let _ = seqs.a11(10);
    }
}
