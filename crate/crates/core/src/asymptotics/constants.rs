use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantFamily {
    /// Leading-coefficient ratios `t_k = C_k / C_0`.
    T,
    /// Second-order coefficients `s_k`.
    S,
}

impl fmt::Display for ConstantFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantFamily::T => "t",
            ConstantFamily::S => "s",
        })
    }
}

/// An exact rational member of the `t` or `s` family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalConstant {
    pub family: ConstantFamily,
    pub k: usize,
    pub value: BigRational,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn half_pow(q: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << q)
}

/// Closed form of `t_k` by residue of `k` mod 3.
pub fn t_closed(k: usize) -> BigRational {
    let (q, r) = (k / 3, k % 3);
    let qr = BigRational::from_integer(BigInt::from(q));
    let inner = match r {
        0 => BigRational::one() + qr / ratio(3, 1),
        1 => ratio(5, 3) + qr / ratio(2, 1),
        _ => ratio(11, 4) + qr * ratio(3, 4),
    };
    half_pow(q) * inner
}

/// `t_0..=t_k` from `t_0 = 1, t_1 = 5/3, t_2 = 11/4` and
/// `t_k = c t_{k-2} - t_{k-3}` with `c = 27/4` when `3 | k + 1`, else `1`.
pub fn t_by_recurrence(k: usize) -> Vec<BigRational> {
    let mut t = vec![ratio(1, 1), ratio(5, 3), ratio(11, 4)];
    for j in 3..=k {
        let c = if (j + 1) % 3 == 0 {
            ratio(27, 4)
        } else {
            ratio(1, 1)
        };
        let next = c * &t[j - 2] - &t[j - 3];
        t.push(next);
    }
    t.truncate(k + 1);
    t
}

/// `s_0..=s_k` from the three published initial values and
/// `t_k s_k = t_{k-2} s_{k-2} - t_{k-3} s_{k-3}` (with `2 s_{k-2} - 3` in
/// place of `s_{k-2}` when `3 | k + 1`).
pub fn s_by_recurrence(k: usize) -> Vec<BigRational> {
    let t: Vec<BigRational> = (0..=k.max(2)).map(t_closed).collect();
    let mut s = vec![ratio(-1387, 72), ratio(-60877, 2880), ratio(-18173, 792)];
    for j in 3..=k {
        let carried = if (j + 1) % 3 == 0 {
            &s[j - 2] * ratio(2, 1) - ratio(3, 1)
        } else {
            s[j - 2].clone()
        };
        let num = &t[j - 2] * carried - &s[j - 3] * &t[j - 3];
        s.push(num / &t[j]);
    }
    s.truncate(k + 1);
    s
}

pub fn t_constant(k: usize) -> RationalConstant {
    RationalConstant {
        family: ConstantFamily::T,
        k,
        value: t_closed(k),
    }
}

pub fn s_constant(k: usize) -> RationalConstant {
    RationalConstant {
        family: ConstantFamily::S,
        k,
        value: s_by_recurrence(k).pop().expect("non-empty"),
    }
}

/// Enclosure of a rational at `prec` bits.
pub fn rational_interval(r: &BigRational, prec: u32) -> Interval {
    if r.is_zero() {
        return Interval::from_i64(0, prec);
    }
    Interval::from_ratio(r.numer(), r.denom(), prec)
}
