use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::constants::{rational_interval, t_closed};
use crate::chain::shortest_walk_length;
use crate::counting::Counter;
use crate::interval::Interval;
use crate::tree::Pair;
use crate::{Error, Result};

pub const START_PRECISION: u32 = 128;
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Named bound families that can be certified index by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertId {
    /// `sqrt(2 pi n)(n/e)^n e^{1/(12n+1)} < n! < sqrt(2 pi n)(n/e)^n e^{1/(12n)}`.
    Robbins,
    /// Two-sided bound on `C(3n, n)`.
    Binom3n,
    /// Two-sided bound on `S(n)`.
    Cor31S,
    /// Two-sided bound on `B(n)`.
    Cor31B,
    /// Two-sided bound on `A11(n)`.
    ThmA,
    /// Two-sided bound on the negative difference `D(n)`.
    DIneq,
    /// Two-sided bound on `A_(1,2)(n)`.
    A12,
    /// Two-sided bound on `A_(2,1)(n)`.
    A21,
    /// `A11(n) < 2 C(3n, n)`, exact.
    AInequality,
    /// `A11(n) < sqrt(3) (27/4)^n / sqrt(pi n)`. Diagnostic: only claimed up
    /// to a `1 + o(1)` factor.
    Cor41,
}

impl CertId {
    pub const ALL: [CertId; 10] = [
        CertId::Robbins,
        CertId::Binom3n,
        CertId::Cor31S,
        CertId::Cor31B,
        CertId::ThmA,
        CertId::DIneq,
        CertId::A12,
        CertId::A21,
        CertId::AInequality,
        CertId::Cor41,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CertId::Robbins => "robbins",
            CertId::Binom3n => "binom3n",
            CertId::Cor31S => "cor31s",
            CertId::Cor31B => "cor31b",
            CertId::ThmA => "thmA",
            CertId::DIneq => "dineq",
            CertId::A12 => "a12",
            CertId::A21 => "a21",
            CertId::AInequality => "ainequality",
            CertId::Cor41 => "cor41",
        }
    }

    pub fn is_diagnostic(self) -> bool {
        self == CertId::Cor41
    }
}

impl fmt::Display for CertId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CertId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CertId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCertificate(s.to_string()))
    }
}

/// Parses a certificate id, expanding `cor31` to both of its halves.
pub fn parse_cert_ids(s: &str) -> Result<Vec<CertId>> {
    if s.eq_ignore_ascii_case("cor31") {
        return Ok(vec![CertId::Cor31S, CertId::Cor31B]);
    }
    if s.eq_ignore_ascii_case("all") {
        return Ok(CertId::ALL.to_vec());
    }
    Ok(vec![s.parse()?])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Outcome of checking `lower < value < upper` at one index.
///
/// `Holds` and `Fails` are only reported when the enclosures of the two
/// sides being compared are disjoint (or both exact).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCertificate {
    pub id: CertId,
    pub n: usize,
    pub verdict: Verdict,
    pub precision: u32,
    pub value: Interval,
    pub lower: Option<Interval>,
    pub upper: Option<Interval>,
}

/// Flat, printable form of a [`BoundCertificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateRecord {
    pub id: String,
    pub n: usize,
    pub verdict: Verdict,
    pub precision: u32,
    pub lhs_lo: String,
    pub lhs_hi: String,
    pub rhs_lower_lo: String,
    pub rhs_lower_hi: String,
    pub rhs_upper_lo: String,
    pub rhs_upper_hi: String,
}

impl CertificateRecord {
    pub const CSV_HEADER: &'static str =
        "id,n,verdict,precision,lhs_lo,lhs_hi,rhs_lower_lo,rhs_lower_hi,rhs_upper_lo,rhs_upper_hi";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.n,
            self.verdict,
            self.precision,
            self.lhs_lo,
            self.lhs_hi,
            self.rhs_lower_lo,
            self.rhs_lower_hi,
            self.rhs_upper_lo,
            self.rhs_upper_hi
        )
    }
}

impl BoundCertificate {
    /// Endpoints rendered with `digits` significant decimal digits, rounded
    /// outward. Missing sides are empty strings.
    pub fn record(&self, digits: u32) -> CertificateRecord {
        let pair = |iv: Option<&Interval>| iv.map(|i| i.to_decimal(digits)).unwrap_or_default();
        let (lhs_lo, lhs_hi) = pair(Some(&self.value));
        let (rhs_lower_lo, rhs_lower_hi) = pair(self.lower.as_ref());
        let (rhs_upper_lo, rhs_upper_hi) = pair(self.upper.as_ref());
        CertificateRecord {
            id: self.id.name().to_string(),
            n: self.n,
            verdict: self.verdict,
            precision: self.precision,
            lhs_lo,
            lhs_hi,
            rhs_lower_lo,
            rhs_lower_hi,
            rhs_upper_lo,
            rhs_upper_hi,
        }
    }
}

/// Exact integers feeding one certificate: the bounded quantity and, for the
/// exact comparison, the right-hand side.
struct Exact {
    value: BigInt,
    aux: Option<BigInt>,
}

struct Consts {
    pi: Interval,
    sqrt_pi: Interval,
    sqrt3: Interval,
    sqrt_3pi: Interval,
}

impl Consts {
    fn new(prec: u32) -> Self {
        let pi = Interval::pi(prec);
        let three = Interval::from_i64(3, prec);
        Consts {
            sqrt_pi: pi.sqrt(),
            sqrt3: three.sqrt(),
            sqrt_3pi: three.mul(&pi).sqrt(),
            pi,
        }
    }
}

fn int(v: i64, prec: u32) -> Interval {
    Interval::from_i64(v, prec)
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(27/4)^n`, exact before a single outward rounding.
fn growth(n: usize, prec: u32) -> Interval {
    Interval::from_int(&BigInt::from(27).pow(n as u32), prec).scale_pow2(-2 * n as i64)
}

/// `n^{3/2}`.
fn n_three_halves(n: usize, prec: u32) -> Interval {
    let ni = Interval::from_int(&BigInt::from(n), prec);
    ni.mul(&ni.sqrt())
}

/// `g(n) = (27/4)^n / n^{3/2}`.
fn g(n: usize, prec: u32) -> Interval {
    growth(n, prec).div(&n_three_halves(n, prec))
}

/// `1 + c1/n + c2/n^2` as an enclosure of an exact rational.
fn correction(n: usize, c1: BigRational, c2: BigRational, prec: u32) -> Interval {
    let nr = BigRational::from_integer(BigInt::from(n));
    let v = BigRational::one() + c1 / &nr + c2 / (&nr * &nr);
    rational_interval(&v, prec)
}

/// `base * (1 + c1/n + lo2/n^2)` and `base * (1 + c1/n + hi2/n^2)`.
fn two_sided(
    base: &Interval,
    n: usize,
    c1: BigRational,
    lo2: BigRational,
    hi2: BigRational,
    prec: u32,
) -> (Interval, Interval) {
    (
        base.mul(&correction(n, c1.clone(), lo2, prec)),
        base.mul(&correction(n, c1, hi2, prec)),
    )
}

type Sides = (Interval, Option<Interval>, Option<Interval>);

fn evaluate(id: CertId, n: usize, exact: &Exact, prec: u32) -> Sides {
    let c = Consts::new(prec);
    let value = Interval::from_int(&exact.value, prec);
    let zero = || rat(0, 1);
    match id {
        CertId::Robbins => {
            let nn = BigInt::from(n);
            let e_inv = Interval::exp_ratio(&BigInt::from(-1), &BigInt::one(), prec);
            let base = int(2, prec)
                .mul(&c.pi)
                .mul(&Interval::from_int(&nn, prec))
                .sqrt()
                .mul(&Interval::from_int(&nn.pow(n as u32), prec))
                .mul(&e_inv.powi(n as u64));
            let lower = base.mul(&Interval::exp_ratio(
                &BigInt::one(),
                &BigInt::from(12 * n + 1),
                prec,
            ));
            let upper = base.mul(&Interval::exp_ratio(
                &BigInt::one(),
                &BigInt::from(12 * n),
                prec,
            ));
            (value, Some(lower), Some(upper))
        }
        CertId::Binom3n => {
            // sqrt(3) (27/4)^n / (2 sqrt(pi n))
            let base = c.sqrt3.mul(&growth(n, prec)).div(
                &int(2, prec)
                    .mul(&c.sqrt_pi)
                    .mul(&Interval::from_int(&BigInt::from(n), prec).sqrt()),
            );
            let (lo, hi) = two_sided(&base, n, rat(-7, 72), zero(), rat(1, 50), prec);
            (value, Some(lo), Some(hi))
        }
        CertId::Cor31S => {
            let base = g(n, prec).div(&int(3, prec).mul(&c.sqrt_3pi));
            let (lo, hi) = two_sided(&base, n, rat(17, 72), rat(3, 40), rat(1, 10), prec);
            (value, Some(lo), Some(hi))
        }
        CertId::Cor31B => {
            let base = c.sqrt3.mul(&g(n, prec)).div(&int(4, prec).mul(&c.sqrt_pi));
            let (lo, hi) = two_sided(&base, n, rat(-43, 72), rat(1, 4), rat(1, 3), prec);
            (value, Some(lo), Some(hi))
        }
        CertId::ThmA => {
            let base = int(243, prec)
                .mul(&g(n, prec))
                .div(&int(4, prec).mul(&c.sqrt_3pi));
            let (lo, hi) = two_sided(&base, n, rat(-1387, 72), zero(), rat(5548, 9), prec);
            (value, Some(lo), Some(hi))
        }
        CertId::DIneq => {
            // Negative quantity: the larger correction gives the lower bound.
            let base = int(-405, prec)
                .mul(&c.sqrt3)
                .mul(&g(n, prec))
                .div(&int(16, prec).mul(&c.sqrt_pi));
            let (upper, lower) = two_sided(&base, n, rat(-4019, 360), zero(), rat(207, 1), prec);
            (value, Some(lower), Some(upper))
        }
        CertId::A12 => {
            let base = int(405, prec)
                .mul(&g(n, prec))
                .div(&int(4, prec).mul(&c.sqrt_3pi));
            let (lo, hi) = two_sided(&base, n, rat(-60877, 2880), rat(29, 1), rat(669, 1), prec);
            (value, Some(lo), Some(hi))
        }
        CertId::A21 => {
            let base = int(2673, prec)
                .mul(&g(n, prec))
                .div(&int(16, prec).mul(&c.sqrt_3pi));
            let (lo, hi) = two_sided(
                &base,
                n,
                rat(-18173, 792),
                rat(-16072, 99),
                rat(88768, 99),
                prec,
            );
            (value, Some(lo), Some(hi))
        }
        CertId::AInequality => {
            let rhs = exact.aux.as_ref().expect("exact right-hand side") * 2;
            (value, None, Some(Interval::from_int(&rhs, prec)))
        }
        CertId::Cor41 => {
            let upper = c.sqrt3.mul(&growth(n, prec)).div(
                &c.sqrt_pi
                    .mul(&Interval::from_int(&BigInt::from(n), prec).sqrt()),
            );
            (value, None, Some(upper))
        }
    }
}

/// `Some(true)` when every present side is strictly satisfied with disjoint
/// enclosures, `Some(false)` when some side is definitely violated.
fn decide(value: &Interval, lower: Option<&Interval>, upper: Option<&Interval>) -> Option<bool> {
    let mut settled = true;
    if let Some(l) = lower {
        if l.strictly_below(value) {
        } else if value.hi() <= l.lo() {
            return Some(false);
        } else {
            settled = false;
        }
    }
    if let Some(u) = upper {
        if value.strictly_below(u) {
        } else if u.hi() <= value.lo() {
            return Some(false);
        } else {
            settled = false;
        }
    }
    settled.then_some(true)
}

fn certify_exact(id: CertId, n: usize, exact: &Exact, start: u32, cap: u32) -> BoundCertificate {
    let mut prec = start;
    loop {
        let (value, lower, upper) = evaluate(id, n, exact, prec);
        let verdict = match decide(&value, lower.as_ref(), upper.as_ref()) {
            Some(true) => Some(Verdict::Holds),
            Some(false) => Some(Verdict::Fails),
            None if prec.saturating_mul(2) > cap => Some(Verdict::Undecided),
            None => None,
        };
        if let Some(verdict) = verdict {
            return BoundCertificate {
                id,
                n,
                verdict,
                precision: prec,
                value,
                lower,
                upper,
            };
        }
        prec *= 2;
    }
}

/// Evaluates bound certificates with interval arithmetic, doubling the
/// working precision from [`START_PRECISION`] until the verdict is decided
/// or the cap is reached.
#[derive(Clone, Debug)]
pub struct Certifier {
    counter: Counter,
    start: u32,
    cap: u32,
}

impl Default for Certifier {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION_CAP)
    }
}

impl Certifier {
    pub fn new(cap: u32) -> Self {
        Self::with_counter(Counter::new(), cap)
    }

    pub fn with_counter(counter: Counter, cap: u32) -> Self {
        Certifier {
            counter,
            start: START_PRECISION.min(cap),
            cap,
        }
    }

    /// Starting precision; mostly useful for checking that raising it never
    /// changes a decided verdict.
    pub fn with_start_precision(mut self, start: u32) -> Self {
        self.start = start.min(self.cap);
        self
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn counter(&self) -> &Counter {
        &self.counter
    }

    pub fn counter_mut(&mut self) -> &mut Counter {
        &mut self.counter
    }

    pub fn into_counter(self) -> Counter {
        self.counter
    }

    fn exact_inputs(&mut self, id: CertId, ns: &[usize]) -> Vec<Exact> {
        let top = ns.iter().copied().max().unwrap_or(0);
        if id == CertId::Robbins {
            let mut fact = BigInt::one();
            let mut out = Vec::with_capacity(ns.len());
            let mut sorted: Vec<(usize, usize)> = ns
                .iter()
                .copied()
                .enumerate()
                .map(|(i, n)| (n, i))
                .collect();
            sorted.sort_unstable();
            let mut k = 0;
            let mut slots: Vec<Option<Exact>> = (0..ns.len()).map(|_| None).collect();
            for (n, i) in sorted {
                while k < n {
                    k += 1;
                    fact *= k;
                }
                slots[i] = Some(Exact {
                    value: fact.clone(),
                    aux: None,
                });
            }
            out.extend(slots.into_iter().map(|e| e.expect("filled")));
            return out;
        }
        let c = &mut self.counter;
        c.sequences_mut().ensure(top);
        match id {
            CertId::A12 => c.ensure_row(1, top + 1),
            CertId::A21 => c.ensure_row(2, top + 1),
            _ => {}
        }
        ns.iter()
            .map(|&n| {
                let q = c.sequences();
                let value = match id {
                    CertId::Binom3n => q.binom3n(n),
                    CertId::Cor31S => q.s(n).clone(),
                    CertId::Cor31B => q.b(n).clone(),
                    CertId::DIneq => q.d(n).clone(),
                    CertId::A12 => c.rows_ref(1)[n].clone(),
                    CertId::A21 => c.rows_ref(2)[n].clone(),
                    _ => q.a11(n).clone(),
                };
                let aux = (id == CertId::AInequality).then(|| q.binom3n(n));
                Exact { value, aux }
            })
            .collect()
    }

    fn check_index(id: CertId, n: usize) -> Result<()> {
        if n == 0 && id != CertId::AInequality {
            return Err(Error::InvalidParams(format!(
                "certificate `{id}` is stated for n >= 1"
            )));
        }
        Ok(())
    }

    pub fn certify(&mut self, id: CertId, n: usize) -> Result<BoundCertificate> {
        Ok(self.certify_many(id, &[n])?.remove(0))
    }

    /// Certifies every index in `ns`, in order. Indices are independent and
    /// processed in parallel; the result does not depend on scheduling.
    pub fn certify_many(&mut self, id: CertId, ns: &[usize]) -> Result<Vec<BoundCertificate>> {
        for &n in ns {
            Self::check_index(id, n)?;
        }
        let inputs = self.exact_inputs(id, ns);
        let (start, cap) = (self.start, self.cap);
        Ok(ns
            .par_iter()
            .zip(inputs.par_iter())
            .map(|(&n, exact)| certify_exact(id, n, exact, start, cap))
            .collect())
    }

    pub fn certify_range(
        &mut self,
        id: CertId,
        lo: usize,
        hi: usize,
    ) -> Result<Vec<BoundCertificate>> {
        let ns: Vec<usize> = (lo..=hi).collect();
        self.certify_many(id, &ns)
    }
}

/// `243 t_k / (4 sqrt(3 pi))`, the leading constant for pairs whose shortest
/// walk has `k` branches.
pub fn leading_constant_k(k: usize, prec: u32) -> Interval {
    let c = Consts::new(prec);
    rational_interval(&t_closed(k), prec)
        .mul(&int(243, prec))
        .div(&int(4, prec).mul(&c.sqrt_3pi))
}

/// Leading constant of `A_(a,b)`, through the pair's shortest-walk length.
pub fn leading_constant(p: Pair, prec: u32) -> Result<Interval> {
    Ok(leading_constant_k(shortest_walk_length(p)?, prec))
}

/// Enclosures of the two sides of the Robbins bounds on `n!`.
pub fn robbins_bounds(n: usize, prec: u32) -> Result<(Interval, Interval)> {
    Certifier::check_index(CertId::Robbins, n)?;
    let exact = Exact {
        value: BigInt::one(),
        aux: None,
    };
    let (_, lo, hi) = evaluate(CertId::Robbins, n, &exact, prec);
    Ok((lo.expect("two-sided"), hi.expect("two-sided")))
}

fn shrink_until<F>(tol: f64, cap: u32, f: F) -> Result<Interval>
where
    F: Fn(u32) -> Interval,
{
    let mut prec = START_PRECISION.min(cap);
    loop {
        let v = f(prec);
        if v.width().to_f64() <= tol {
            return Ok(v);
        }
        if prec.saturating_mul(2) > cap {
            return Err(Error::PrecisionCap { cap });
        }
        prec *= 2;
    }
}

/// Enclosure of `C_n = A11(n) n^{3/2} / (27/4)^n` no wider than `tol`.
pub fn ratio_cn(counter: &mut Counter, n: usize, tol: f64) -> Result<Interval> {
    if n == 0 {
        return Err(Error::InvalidParams("C_n is defined for n >= 1".into()));
    }
    let a = counter.a11(n);
    shrink_until(tol, DEFAULT_PRECISION_CAP, |prec| {
        Interval::from_int(&a, prec)
            .mul(&n_three_halves(n, prec))
            .div(&growth(n, prec))
    })
}

/// `n (A_k(n) / (C_k g(n)) - 1)`, which tends to the second-order
/// coefficient `s_k`.
pub fn empirical_second_order(counter: &mut Counter, k: usize, n: usize) -> Result<Interval> {
    if n == 0 {
        return Err(Error::InvalidParams(
            "second-order estimate needs n >= 1".into(),
        ));
    }
    let a = counter.ak(k, n);
    shrink_until(1e-12, DEFAULT_PRECISION_CAP, |prec| {
        let ratio = Interval::from_int(&a, prec).div(&leading_constant_k(k, prec).mul(&g(n, prec)));
        ratio
            .sub(&int(1, prec))
            .mul(&Interval::from_int(&BigInt::from(n), prec))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_constant_value() {
        let c = leading_constant(Pair::ROOT, 128).unwrap();
        assert!((c.mid_f64() - 19.788_401_73).abs() < 1e-7, "{c}");
        let a12 = leading_constant(Pair::new(1, 2), 128).unwrap();
        assert!(
            (a12.mid_f64() - 405.0 / (4.0 * (3.0 * std::f64::consts::PI).sqrt())).abs() < 1e-12
        );
    }

    #[test]
    fn small_indices_hold() {
        let mut cert = Certifier::default();
        for id in [CertId::Robbins, CertId::Binom3n, CertId::AInequality] {
            for c in cert.certify_range(id, 1, 30).unwrap() {
                assert_eq!(c.verdict, Verdict::Holds, "{id} at {}", c.n);
            }
        }
        assert_eq!(
            cert.certify(CertId::AInequality, 0).unwrap().verdict,
            Verdict::Holds
        );
        // The B envelope is only claimed from n = 100; it is already wrong at n = 1.
        assert_eq!(
            cert.certify(CertId::Cor31B, 1).unwrap().verdict,
            Verdict::Fails
        );
        assert_eq!(
            cert.certify(CertId::Cor31B, 100).unwrap().verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn equality_is_a_failure() {
        let exact = Exact {
            value: BigInt::from(10),
            aux: Some(BigInt::from(5)),
        };
        let c = certify_exact(CertId::AInequality, 1, &exact, 128, 4096);
        assert_eq!(c.verdict, Verdict::Fails);
    }

    #[test]
    fn cap_below_start_is_respected() {
        let c = Certifier::new(64).certify(CertId::Binom3n, 5).unwrap();
        assert_eq!(c.precision, 64);
    }

    #[test]
    fn parse_aliases() {
        assert_eq!(
            parse_cert_ids("cor31").unwrap(),
            vec![CertId::Cor31S, CertId::Cor31B]
        );
        assert_eq!(parse_cert_ids("THMA").unwrap(), vec![CertId::ThmA]);
        assert!(parse_cert_ids("thm9").is_err());
        assert!(Certifier::default().certify(CertId::ThmA, 0).is_err());
    }
}
