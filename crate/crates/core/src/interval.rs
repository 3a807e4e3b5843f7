//! Outward-rounded interval arithmetic on dyadic endpoints.
//!
//! Every endpoint is `mantissa * 2^exp` with an arbitrary-precision mantissa.
//! Operations compute the exact result where that is cheap (sums, products)
//! and then round the lower endpoint toward `-inf` and the upper toward
//! `+inf` to at most `prec` significant bits, so each interval is a sound
//! enclosure of the real value it stands for.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// An exact dyadic rational `mant * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => -((-num).div_floor(den)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Keeps at most `prec` significant bits, rounding in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= u64::from(prec) {
            return self.clone();
        }
        let shift = bits - u64::from(prec);
        let mant = div_round(&self.mant, &pow2(shift), dir);
        Dyadic::new(mant, self.exp + shift as i64)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let exp = self.exp.min(other.exp);
        let x = &self.mant << (self.exp - exp) as u64;
        let y = &other.mant << (other.exp - exp) as u64;
        (x, y, exp)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (x, y, exp) = self.aligned(other);
        Dyadic::new(x + y, exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (x, y, exp) = self.aligned(other);
        Dyadic::new(x - y, exp)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mant, self.exp)
    }

    /// Multiplies by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mant.clone(), self.exp + k)
    }

    /// `self / other` rounded to `prec` bits. Panics on division by zero.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift =
            (i64::from(prec) + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as u64;
        // Normalise the sign onto the numerator so floor/ceil act on the value.
        let (num, den) = if other.mant.is_negative() {
            (-num, -&other.mant)
        } else {
            (num, other.mant.clone())
        };
        let q = div_round(&num, &den, dir);
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, dir)
    }

    /// Square root of a non-negative value, rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.mant.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * i64::from(prec) + 4;
        let mut shift = (want - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1;
        }
        Dyadic::new(r, (self.exp - shift) / 2).round(prec, dir)
    }

    /// `floor` or `ceil` of `self * 10^k`, for decimal rendering.
    fn scaled_decimal(&self, k: i64, dir: Round) -> BigInt {
        let mut num = self.mant.clone();
        let mut den = BigInt::one();
        if k >= 0 {
            num *= BigInt::from(10).pow(k as u32);
        } else {
            den *= BigInt::from(10).pow((-k) as u32);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        div_round(&num, &den, dir)
    }

    /// Approximate `log10 |self|` from the bit length; exact enough to pick a
    /// decimal exponent.
    fn log10_estimate(&self) -> i64 {
        let bits = self.mant.bits() as i64 + self.exp;
        ((bits as f64 - 1.0) * std::f64::consts::LOG10_2).floor() as i64
    }

    /// Decimal rendering with `digits` significant digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut e10 = self.log10_estimate();
        let mut scaled;
        loop {
            scaled = self.scaled_decimal(i64::from(digits) - 1 - e10, dir);
            let len = scaled.abs().to_string().len() as u32;
            match len.cmp(&digits) {
                Ordering::Greater => e10 += 1,
                Ordering::Less => e10 -= 1,
                Ordering::Equal => break,
            }
        }
        let s = scaled.abs().to_string();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let (head, tail) = s.split_at(1);
        if (-5..=15).contains(&e10) && e10 >= 0 && e10 < i64::from(digits) {
            let (int, frac) = s.split_at(e10 as usize + 1);
            return format!("{sign}{int}.{frac}")
                .trim_end_matches('.')
                .to_string();
        }
        if (-5..0).contains(&e10) {
            let zeros = "0".repeat((-e10 - 1) as usize);
            return format!("{sign}0.{zeros}{s}");
        }
        format!("{sign}{head}.{tail}e{e10}")
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (x, y, _) = self.aligned(other);
        x.cmp(&y)
    }
}

/// A closed interval `[lo, hi]` whose endpoints carry at most `prec` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    fn make(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    /// Tightest `prec`-bit enclosure of an exact integer.
    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        let d = Dyadic::from_int(v.clone());
        Interval::make(d.clone(), d, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Interval::from_int(&BigInt::from(v), prec)
    }

    pub fn from_dyadic(d: Dyadic, prec: u32) -> Self {
        Interval::make(d.clone(), d, prec)
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let n = Dyadic::from_int(num.clone());
        let d = Dyadic::from_int(den.clone());
        Interval {
            lo: n.div(&d, prec, Round::Down),
            hi: n.div(&d, prec, Round::Up),
            prec,
        }
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval::make(lo, hi, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        self.lo.add(&self.hi).shl(-1).to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::make(self.lo.add(&o.lo), self.hi.add(&o.hi), self.prec)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::make(self.lo.sub(&o.hi), self.hi.sub(&o.lo), self.prec)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let products = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval::make(lo, hi, self.prec)
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(
            o.lo.signum() > 0 || o.hi.signum() < 0,
            "interval division by an interval containing zero"
        );
        let p = self.prec;
        let quotients_lo = [
            self.lo.div(&o.lo, p, Round::Down),
            self.lo.div(&o.hi, p, Round::Down),
            self.hi.div(&o.lo, p, Round::Down),
            self.hi.div(&o.hi, p, Round::Down),
        ];
        let quotients_hi = [
            self.lo.div(&o.lo, p, Round::Up),
            self.lo.div(&o.hi, p, Round::Up),
            self.hi.div(&o.lo, p, Round::Up),
            self.hi.div(&o.hi, p, Round::Up),
        ];
        Interval::make(
            quotients_lo.into_iter().min().expect("four quotients"),
            quotients_hi.into_iter().max().expect("four quotients"),
            p,
        )
    }

    pub fn sqrt(&self) -> Interval {
        assert!(
            self.lo.signum() >= 0,
            "square root of an interval with negative part"
        );
        Interval {
            lo: self.lo.sqrt(self.prec, Round::Down),
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        }
    }

    /// Integer power of a non-negative interval by repeated squaring.
    pub fn powi(&self, mut e: u64) -> Interval {
        assert!(
            self.lo.signum() >= 0,
            "powi expects a non-negative interval"
        );
        let mut base = self.clone();
        let mut acc = Interval::from_i64(1, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale_pow2(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
            prec: self.prec,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec,
        }
    }

    /// Enclosure of `pi` to `prec` bits via Machin's formula
    /// `pi = 16 atan(1/5) - 4 atan(1/239)` in fixed point with a counted
    /// truncation error.
    pub fn pi(prec: u32) -> Interval {
        let work = u64::from(prec) + 32;
        let (a5, e5) = atan_inv_fixed(5, work);
        let (a239, e239) = atan_inv_fixed(239, work);
        let approx = a5 * 16 - a239 * 4;
        let err = BigInt::from(16 * e5 + 4 * e239);
        let scale = -(work as i64);
        Interval::make(
            Dyadic::new(&approx - &err, scale),
            Dyadic::new(&approx + &err, scale),
            prec,
        )
    }

    /// Enclosure of `exp(num / den)` for `|num / den| <= 1`.
    pub fn exp_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Interval {
        assert!(
            den.is_positive(),
            "exp_ratio expects a positive denominator"
        );
        assert!(num.abs() <= *den, "exp_ratio expects |x| <= 1");
        let work = u64::from(prec) + 32;
        let one = pow2(work);
        // term_k = floor(2^work x^k / k!) up to a rounding error below k ulps.
        let mut term = one.clone();
        let mut sum = one;
        let mut k = 0u64;
        let mut err = 0u64;
        loop {
            k += 1;
            term = (&term * num).div_floor(&(den * BigInt::from(k)));
            err += 1;
            if term.is_zero() {
                break;
            }
            sum += &term;
            if term.abs() <= BigInt::one() {
                break;
            }
        }
        // Tail after the last term: |x|^{k+1}/(k+1)! * e <= 3 ulps once a
        // term has reached one ulp, plus the accumulated floor errors.
        let err = BigInt::from(err + 3) + BigInt::from(k);
        let scale = -(work as i64);
        Interval::make(
            Dyadic::new(&sum - &err, scale),
            Dyadic::new(&sum + &err, scale),
            prec,
        )
    }

    /// Decimal rendering `[lo, hi]` with endpoints rounded outward.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        (
            self.lo.to_decimal(digits, Round::Down),
            self.hi.to_decimal(digits, Round::Up),
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal(17);
        write!(f, "[{lo}, {hi}]")
    }
}

/// `atan(1/x) * 2^work` in fixed point and a bound on its error in ulps.
fn atan_inv_fixed(x: u64, work: u64) -> (BigInt, u64) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = pow2(work).div_floor(&x); // 2^work / x^(2k+1)
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut err = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        // power carries up to k+1 accumulated floor errors, each below one
        // ulp; dividing by 2k+1 and flooring adds one more.
        err += 2;
        power = power.div_floor(&x2);
        k += 1;
    }
    // Alternating tail is bounded by the first omitted term, below one ulp.
    (sum, err + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: i64) -> Interval {
        Interval::from_i64(v, 128)
    }

    #[test]
    fn pi_encloses_known_digits() {
        let pi = Interval::pi(256);
        let (lo, hi) = pi.to_decimal(40);
        assert!(
            lo.starts_with("3.14159265358979323846264338327950288419"),
            "{lo}"
        );
        assert!(
            hi.starts_with("3.1415926535897932384626433832795028841"),
            "{hi}"
        );
        assert!(pi.width().to_f64() < 1e-70);
        // The nearest double lies just below pi.
        assert!(pi.lo() > &Dyadic::new(BigInt::from(7074237752028440u64), -51));
    }

    #[test]
    fn sqrt_two_squared_encloses_two() {
        let r = iv(2).sqrt();
        let sq = r.mul(&r);
        assert!(sq.contains(&Dyadic::from_int(2)));
        assert!(r.width().to_f64() < 1e-35);
        assert!((r.mid_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exp_one_encloses_e() {
        let e = Interval::exp_ratio(&BigInt::from(1), &BigInt::from(1), 128);
        assert!((e.mid_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!(e.width().to_f64() < 1e-30);
        let em = Interval::exp_ratio(&BigInt::from(-1), &BigInt::from(1), 128);
        assert!(e.mul(&em).contains(&Dyadic::from_int(1)));
    }

    #[test]
    fn division_encloses_quotient() {
        let third = iv(1).div(&iv(3));
        assert!(third.mul(&iv(3)).contains(&Dyadic::from_int(1)));
        let neg = iv(-7).div(&iv(2));
        assert!(neg.contains(&Dyadic::new(BigInt::from(-7), -1)));
        let r = Interval::from_ratio(&BigInt::from(23), &BigInt::from(-7), 64);
        assert!(r.hi().to_f64() < -3.2857 && r.lo().to_f64() > -3.2858);
    }

    #[test]
    fn rounding_directions() {
        let d = Dyadic::from_int(0b1011_0111);
        assert_eq!(d.round(4, Round::Down), Dyadic::from_int(0b1011_0000));
        assert_eq!(d.round(4, Round::Up), Dyadic::from_int(0b1100_0000));
        let n = Dyadic::from_int(-0b1011_0111);
        assert_eq!(n.round(4, Round::Down), Dyadic::from_int(-0b1100_0000));
        assert_eq!(n.round(4, Round::Up), Dyadic::from_int(-0b1011_0000));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(
            Dyadic::from_int(3628800).to_decimal(10, Round::Down),
            "3628800.000"
        );
        assert_eq!(
            Dyadic::new(BigInt::from(1), -1).to_decimal(5, Round::Down),
            "0.50000"
        );
        let big = Dyadic::from_int(BigInt::from(10).pow(30));
        assert_eq!(big.to_decimal(3, Round::Up), "1.00e30");
        let third = iv(1).div(&iv(3));
        let (lo, hi) = third.to_decimal(6);
        assert_eq!((lo.as_str(), hi.as_str()), ("0.333333", "0.333334"));
    }

    #[test]
    fn powi_matches_exact_power() {
        let x = Interval::from_ratio(&BigInt::from(27), &BigInt::from(4), 200);
        let p = x.powi(50);
        let exact = Dyadic::new(BigInt::from(27).pow(50), -100);
        assert!(p.contains(&exact));
    }
}
