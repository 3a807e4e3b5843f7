//! Escape probability of the `p`-biased random walk down the tree.
//!
//! Choosing Right with probability `p` at every branch, a walk from `(1, 1)`
//! either revisits the pair `(1, 1)` or escapes forever. A first Left always
//! returns to `(1, 1)` three branches later. After a first Right the distance
//! to `(1, 1)`, measured in shortest-walk length, moves by `+2` on Right and
//! `-1` on Left starting from 2, so escaping is the event that this integer
//! chain never hits 0. Its hitting probability from `n` is `r^n`, where `r` is
//! the root in `(0, 1]` of `p r^3 - r + (1 - p) = 0`, or 1 when `p <= 1/3`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::tree::{step, Branch, Pair};
use crate::{Error, Result};

/// Name of the generator behind every simulation, reported with results.
pub const RNG_NAME: &str = "xoshiro256++";

/// Series checks stop once the tail bound drops below this fraction of the
/// partial sum.
pub const SERIES_TAIL_TOLERANCE: f64 = 1e-14;

const THIRD: f64 = 1.0 / 3.0;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadProbability(p))
    }
}

/// `(-1 + sqrt(4/p - 3)) / 2`, the absorption root for `p > 1/3`.
fn absorption_root(p: f64) -> f64 {
    (-1.0 + (4.0 / p - 3.0).sqrt()) / 2.0
}

/// Probability that a walk from `(1, 1)` never revisits `(1, 1)`.
pub fn escape_probability(p: f64) -> Result<f64> {
    check_p(p)?;
    if p <= THIRD {
        return Ok(0.0);
    }
    Ok((3.0 * p - 2.0 + (4.0 * p - 3.0 * p * p).sqrt()) / 2.0)
}

/// Probability that the `+2 / -1` chain started at `n` ever reaches 0.
#[allow(non_snake_case)]
pub fn absorption_P(n: u32, p: f64) -> Result<f64> {
    check_p(p)?;
    if n == 0 || p <= THIRD {
        return Ok(1.0);
    }
    Ok(absorption_root(p).powi(n as i32))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WalkProbParams {
    pub p: f64,
    pub trials: u64,
    /// Number of branches simulated per trial.
    pub horizon: u64,
    pub seed: u64,
}

impl WalkProbParams {
    pub fn new(p: f64, trials: u64, horizon: u64, seed: u64) -> Result<Self> {
        check_p(p)?;
        if trials == 0 {
            return Err(Error::InvalidParams("trials must be positive".into()));
        }
        if horizon < 3 {
            return Err(Error::InvalidParams(
                "horizon must be at least 3 branches".into(),
            ));
        }
        Ok(WalkProbParams {
            p,
            trials,
            horizon,
            seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeEstimate {
    pub estimate: f64,
    /// Half-width of the 95% normal-approximation confidence interval.
    pub half_width: f64,
    pub escaped: u64,
    pub trials: u64,
    pub horizon: u64,
    pub seed: u64,
    pub rng: &'static str,
}

impl EscapeEstimate {
    /// Confidence interval clamped to `[0, 1]`.
    pub fn interval(&self) -> (f64, f64) {
        (
            (self.estimate - self.half_width).max(0.0),
            (self.estimate + self.half_width).min(1.0),
        )
    }
}

/// Independent generator for one trial, so tallies do not depend on how
/// trials are scheduled.
fn trial_rng(seed: u64, trial: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Draws Right with probability `p`: `u < p 2^64`, with `p = 1` always Right.
struct Coin {
    threshold: u64,
    always: bool,
}

impl Coin {
    fn new(p: f64) -> Self {
        Coin {
            threshold: (p * 2f64.powi(64)) as u64,
            always: p >= 1.0,
        }
    }

    #[inline]
    fn right(&self, rng: &mut Xoshiro256PlusPlus) -> bool {
        self.always || rng.gen::<u64>() < self.threshold
    }
}

/// One trial: does the walk avoid `(1, 1)` through `horizon` branches?
fn escapes(coin: &Coin, rng: &mut Xoshiro256PlusPlus, horizon: u64) -> bool {
    if !coin.right(rng) {
        return false;
    }
    let mut state = 2u64;
    let mut left = horizon - 1;
    // Each branch lowers the state by at most one, so once it exceeds the
    // remaining budget the trial has survived.
    while state <= left {
        left -= 1;
        if coin.right(rng) {
            state += 2;
        } else {
            state -= 1;
            if state == 0 {
                return false;
            }
        }
    }
    true
}

const CHUNK: u64 = 4096;

/// Monte Carlo estimate of the escape probability truncated at the horizon.
///
/// Truncation can only overcount escapes, by at most the probability of a
/// first return after the horizon.
pub fn simulate_escape(params: &WalkProbParams) -> EscapeEstimate {
    let coin = Coin::new(params.p);
    let chunks = params.trials.div_ceil(CHUNK);
    let escaped: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(params.trials);
            (c * CHUNK..end)
                .filter(|&t| escapes(&coin, &mut trial_rng(params.seed, t), params.horizon))
                .count() as u64
        })
        .sum();
    let n = params.trials as f64;
    let estimate = escaped as f64 / n;
    EscapeEstimate {
        estimate,
        half_width: 1.96 * (estimate * (1.0 - estimate) / n).sqrt(),
        escaped,
        trials: params.trials,
        horizon: params.horizon,
        seed: params.seed,
        rng: RNG_NAME,
    }
}

/// Number of `(1, 1)` pairs strictly after the root within the horizon.
fn revisits(coin: &Coin, rng: &mut Xoshiro256PlusPlus, horizon: u64) -> u64 {
    let mut count = 0;
    let mut depth = 0u64;
    let mut state = 0u64;
    loop {
        if state == 0 {
            if depth + 1 > horizon {
                return count;
            }
            if coin.right(rng) {
                depth += 1;
                state = 2;
            } else {
                // (1,0), (0,1), then back to (1,1) whatever the next two
                // branches are.
                depth += 3;
                if depth > horizon {
                    return count;
                }
                count += 1;
            }
            continue;
        }
        if state > horizon - depth {
            return count;
        }
        depth += 1;
        if coin.right(rng) {
            state += 2;
        } else {
            state -= 1;
            if state == 0 {
                count += 1;
            }
        }
    }
}

/// Histogram of the number of returns to `(1, 1)` within the horizon.
pub fn simulate_occurrences(params: &WalkProbParams) -> BTreeMap<u64, u64> {
    let coin = Coin::new(params.p);
    let chunks = params.trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(params.trials);
            let mut h = BTreeMap::new();
            for t in c * CHUNK..end {
                let k = revisits(&coin, &mut trial_rng(params.seed, t), params.horizon);
                *h.entry(k).or_insert(0u64) += 1;
            }
            h
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}

/// Exact probability of avoiding `(1, 1)` for `horizon` branches, by
/// propagating the distribution of the integer chain.
pub fn chain_escape_exact(p: f64, horizon: u32) -> Result<f64> {
    check_p(p)?;
    if horizon < 3 {
        return Err(Error::InvalidParams(
            "horizon must be at least 3 branches".into(),
        ));
    }
    let h = horizon as usize;
    let mut dist = vec![0.0; 2 * h + 3];
    dist[2] = p;
    for _ in 1..h {
        let mut next = vec![0.0; dist.len()];
        for (s, &w) in dist.iter().enumerate().skip(1) {
            if w == 0.0 {
                continue;
            }
            next[s + 2] += w * p;
            if s > 1 {
                next[s - 1] += w * (1.0 - p);
            }
        }
        dist = next;
    }
    Ok(dist.iter().sum())
}

/// The same probability summed over every branch string of length
/// `horizon` in the tree itself. Exponential; meant for `horizon <= 18`.
pub fn tree_escape_exact(p: f64, horizon: u32) -> Result<f64> {
    check_p(p)?;
    if !(3..=24).contains(&horizon) {
        return Err(Error::InvalidParams(
            "tree enumeration needs 3 <= horizon <= 24".into(),
        ));
    }
    fn go(pair: Pair, left: u32, p: f64) -> f64 {
        if left == 0 {
            return 1.0;
        }
        [(Branch::Right, p), (Branch::Left, 1.0 - p)]
            .into_iter()
            .map(|(b, w)| {
                let next = step(pair, b);
                if w == 0.0 || next == Pair::ROOT {
                    0.0
                } else {
                    w * go(next, left - 1, p)
                }
            })
            .sum()
    }
    Ok(go(Pair::ROOT, horizon, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesResiduals {
    /// `|sum_r B(r) p^r (1-p)^{2r+1} - closed form|`.
    pub arcsin: f64,
    /// `|sum_r C(3r+n, r) p^r (1-p)^{2r+n} - (1-p)^n F(x) G(x)^n|`.
    pub product: f64,
    /// Largest number of terms used by any of the sums.
    pub terms_used: usize,
}

/// Sums `sum_r c_r x^r` where `c_{r+1} / c_r = ratio(r)` and `c_0 = 1`.
/// The ratios are monotone with limit `27/4`, so the tail after a term `t`
/// is at most `t q / (1 - q)` with `q` the larger of the current and
/// limiting ratio times `x`.
fn hypergeometric_sum(
    x: f64,
    max_terms: usize,
    ratio: impl Fn(f64) -> f64,
) -> Result<(f64, usize)> {
    let limit = 6.75 * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for r in 0..max_terms {
        term *= ratio(r as f64) * x;
        sum += term;
        let q = (ratio(r as f64 + 1.0) * x).max(limit);
        if q < 1.0 && term * q / (1.0 - q) < SERIES_TAIL_TOLERANCE * sum {
            return Ok((sum, r + 2));
        }
    }
    Err(Error::SeriesTruncated { terms: max_terms })
}

/// Checks the two series identities behind the hitting
/// probability at `p` and start `n`.
pub fn series_identity_check(p: f64, n: u32, terms: usize) -> Result<SeriesResiduals> {
    check_p(p)?;
    if p <= THIRD || p >= 1.0 {
        return Err(Error::SeriesDomain(p));
    }
    let q = 1.0 - p;
    let x = p * q * q;
    let central = |r: f64| {
        (3.0 * r + 1.0) * (3.0 * r + 2.0) * (3.0 * r + 3.0)
            / ((r + 1.0) * (2.0 * r + 1.0) * (2.0 * r + 2.0))
    };
    let fuss = |r: f64| central(r) * (2.0 * r + 1.0) / (2.0 * r + 3.0);
    let nf = f64::from(n);
    let shifted = |r: f64| {
        (3.0 * r + nf + 1.0) * (3.0 * r + nf + 2.0) * (3.0 * r + nf + 3.0)
            / ((r + 1.0) * (2.0 * r + nf + 1.0) * (2.0 * r + nf + 2.0))
    };
    let (g, t1) = hypergeometric_sum(x, terms, fuss)?;
    let (f, t2) = hypergeometric_sum(x, terms, central)?;
    let (h, t3) = hypergeometric_sum(x, terms, shifted)?;

    let arg = 3.0 * 3f64.sqrt() * q * p.sqrt() / 2.0;
    let closed = 2.0 * (arg.asin() / 3.0).sin() / (3.0 * p).sqrt();
    let product = q.powi(n as i32) * f * g.powi(n as i32);
    Ok(SeriesResiduals {
        arcsin: (g * q - closed).abs(),
        product: (h * q.powi(n as i32) - product).abs(),
        terms_used: t1.max(t2).max(t3),
    })
}
