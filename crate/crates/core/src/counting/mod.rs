//! Exact arbitrary-precision values of `S`, `B`, `A_(1,1)`, `D` and the
//! general family `A_k`, plus every exact identity relating them.

pub mod cache;
mod family;
mod identities;
mod sequences;

pub use family::Counter;
pub use identities::{Identity, COPRIME_PAIR3_MAX_K};
pub use sequences::{
    a11_by_convolution, binomial, central_trinomial_binomial, CountSeq, Provenance, SeqName,
    Sequences,
};

use num_bigint::BigInt;

use crate::tree::Pair;
use crate::Result;

pub fn seq_s(n: usize) -> BigInt {
    Counter::new().s(n)
}

pub fn seq_b(n: usize) -> BigInt {
    Counter::new().b(n)
}

pub fn seq_a11(n: usize) -> BigInt {
    Counter::new().a11(n)
}

pub fn seq_d(n: usize) -> BigInt {
    Counter::new().d(n)
}

/// `A11(n)` by the quadratic convolution route.
pub fn seq_a11_convolution(n: usize) -> BigInt {
    let seqs = Sequences::with_len(n);
    a11_by_convolution(&seqs, n).pop().expect("non-empty")
}

pub fn seq_ak(k: usize, n: usize) -> BigInt {
    Counter::new().ak(k, n)
}

pub fn count_pair(p: Pair, n: usize) -> Result<BigInt> {
    Counter::new().count_pair(p, n)
}

pub fn check_identity(name: &str, n: usize) -> Result<bool> {
    Counter::new().check_identity(name.parse()?, n)
}
