//! Tree semantics, walk predicates and the brute-force enumeration oracle.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default number of branches the exhaustive oracle will sweep (2^24 walks).
pub const DEFAULT_DEPTH_CAP: u32 = 24;

/// An ordered parent/child pair of node values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    pub a: u64,
    pub b: u64,
}

impl Pair {
    pub const ROOT: Pair = Pair { a: 1, b: 1 };

    pub const fn new(a: u64, b: u64) -> Self {
        Pair { a, b }
    }

    pub fn gcd(&self) -> u64 {
        self.a.gcd(&self.b)
    }

    pub fn is_coprime(&self) -> bool {
        self.gcd() == 1
    }

    pub fn reversed(&self) -> Pair {
        Pair::new(self.b, self.a)
    }

    /// Checks the preconditions shared by every counting operation: coprime
    /// with both entries positive.
    pub fn require_countable(&self) -> Result<()> {
        if !self.is_coprime() {
            return Err(Error::NotCoprime(*self));
        }
        if self.a == 0 || self.b == 0 {
            return Err(Error::DegeneratePair(*self));
        }
        Ok(())
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    /// Bit used when walks are packed into machine words: Left = 0, Right = 1.
    pub fn bit(self) -> u64 {
        match self {
            Branch::Left => 0,
            Branch::Right => 1,
        }
    }

    pub fn from_bit(bit: u64) -> Self {
        if bit & 1 == 0 {
            Branch::Left
        } else {
            Branch::Right
        }
    }
}

/// One branch of the tree: `(a, b)` becomes `(b, |a - b|)` on the left and
/// `(b, a + b)` on the right.
pub fn step(state: Pair, branch: Branch) -> Pair {
    match branch {
        Branch::Left => Pair::new(state.b, state.a.abs_diff(state.b)),
        Branch::Right => Pair::new(state.b, state.a + state.b),
    }
}

/// Residue mod 3 of every depth at which a coprime pair can occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityClass(u8);

impl ParityClass {
    pub fn m(self) -> u32 {
        u32::from(self.0)
    }
}

/// `0` when both entries are odd, `1` when only `b` is even, `2` when only
/// `a` is even.
pub fn parity_class(p: Pair) -> Result<ParityClass> {
    if !p.is_coprime() {
        return Err(Error::NotCoprime(p));
    }
    let m = match (p.a % 2, p.b % 2) {
        (1, 1) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        _ => unreachable!("coprime pairs are never both even"),
    };
    Ok(ParityClass(m))
}

/// A finite walk: a root pair and the branch taken at each step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    pub root: Pair,
    pub branches: Vec<Branch>,
}

impl Walk {
    pub fn new(root: Pair, branches: Vec<Branch>) -> Self {
        Walk { root, branches }
    }

    pub fn from_root(branches: Vec<Branch>) -> Self {
        Walk::new(Pair::ROOT, branches)
    }

    /// Parses a string such as `"RLL"`; any other character is rejected.
    pub fn parse(root: Pair, s: &str) -> Option<Self> {
        let branches = s
            .chars()
            .map(|c| match c {
                'L' | 'l' => Some(Branch::Left),
                'R' | 'r' => Some(Branch::Right),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Walk::new(root, branches))
    }

    /// Unpacks `len` branches from `bits`, branch `i` in bit `i`.
    pub fn from_bits(root: Pair, bits: u64, len: u32) -> Self {
        let branches = (0..len).map(|i| Branch::from_bit(bits >> i)).collect();
        Walk::new(root, branches)
    }

    pub fn to_bits(&self) -> u64 {
        assert!(self.branches.len() <= 64, "walk too long to pack");
        self.branches
            .iter()
            .enumerate()
            .fold(0, |acc, (i, b)| acc | (b.bit() << i))
    }

    pub fn depth(&self) -> usize {
        self.branches.len()
    }

    /// The node values `g_0, g_1, ..., g_{len+1}`.
    pub fn nodes(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.branches.len() + 2);
        out.push(self.root.a);
        out.push(self.root.b);
        let mut state = self.root;
        for &branch in &self.branches {
            state = step(state, branch);
            out.push(state.b);
        }
        out
    }

    /// Pairs at depth `0..=len`.
    pub fn pairs(&self) -> Vec<Pair> {
        let mut out = Vec::with_capacity(self.branches.len() + 1);
        let mut state = self.root;
        out.push(state);
        for &branch in &self.branches {
            state = step(state, branch);
            out.push(state);
        }
        out
    }

    pub fn terminal(&self) -> Pair {
        self.branches.iter().fold(self.root, |s, &b| step(s, b))
    }

    pub fn count_left(&self) -> usize {
        self.branches.iter().filter(|&&b| b == Branch::Left).count()
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.branches {
            f.write_str(match b {
                Branch::Left => "L",
                Branch::Right => "R",
            })?;
        }
        Ok(())
    }
}

/// Ballot characterisation of walks from `(1, 1)` to a primitive `(1, 1)`:
/// every proper prefix has fewer than twice as many lefts as rights, and the
/// whole walk has exactly twice as many.
///
/// Length-3 walks are special: all five depth-3 `(1, 1)` pairs count as
/// primitive (`S(1) = 5`), including the four that pass through `0`.
pub fn is_primitive_walk(w: &Walk) -> bool {
    if w.root != Pair::ROOT || w.branches.is_empty() || w.branches.len() % 3 != 0 {
        return false;
    }
    if w.branches.len() == 3 {
        return w.terminal() == Pair::ROOT;
    }
    let (mut lefts, mut rights) = (0usize, 0usize);
    let last = w.branches.len() - 1;
    for (i, &b) in w.branches.iter().enumerate() {
        match b {
            Branch::Left => lefts += 1,
            Branch::Right => rights += 1,
        }
        if i < last && lefts >= 2 * rights {
            return false;
        }
    }
    lefts == 2 * rights
}

/// True when no node after the root pair is zero.
pub fn avoids_zero(w: &Walk) -> bool {
    w.nodes().iter().skip(2).all(|&v| v != 0)
}

/// True when the walk never takes two lefts without a right in between.
pub fn is_restricted_walk(w: &Walk) -> bool {
    !w.branches
        .windows(2)
        .any(|pair| pair[0] == Branch::Left && pair[1] == Branch::Left)
}

/// Reads the node sequence backwards: a walk from `(a, b)` to `(c, d)`
/// becomes a walk from `(d, c)` to `(b, a)`.
pub fn reverse_walk(w: &Walk) -> Walk {
    let mut nodes = w.nodes();
    nodes.reverse();
    let root = Pair::new(nodes[0], nodes[1]);
    let branches = nodes
        .windows(3)
        .map(|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            if z == x.abs_diff(y) {
                Branch::Left
            } else {
                debug_assert_eq!(z, x + y);
                Branch::Right
            }
        })
        .collect();
    Walk::new(root, branches)
}

/// Which `(1, 1)` occurrences at depth `3n` the constrained oracle counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Every walk ending at `(1, 1)`: `A_(1,1)(n)`.
    Unconstrained,
    /// Walks that never visit a zero node: `B(n)`.
    ZeroAvoiding,
    /// Walks with no interior `(1, 1)` pair (and, for `n >= 2`, no zero):
    /// `S(n)`.
    Primitive,
}

/// Exhaustive enumeration of every branch string from the root.
///
/// All counts here are independent of the closed forms and recurrences in
/// [`crate::counting`]; they exist to check them.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    cap: u32,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cap: DEFAULT_DEPTH_CAP,
        }
    }
}

impl Oracle {
    pub fn new(cap: u32) -> Self {
        Oracle { cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn check_depth(&self, depth: u32) -> Result<()> {
        if depth > self.cap {
            Err(Error::DepthCapExceeded {
                depth,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    /// Number of walks of length `3n + m` ending at `target`, i.e.
    /// `A_(a,b)(n)` by brute force.
    pub fn count(&self, target: Pair, n: u32) -> Result<u64> {
        target.require_countable()?;
        let depth = 3 * n + parity_class(target)?.m();
        Ok(self.count_at_depth(&[target], depth)?[0])
    }

    /// Tallies, for each target, the walks of exactly `depth` branches that
    /// end there. One sweep serves any number of targets.
    pub fn count_at_depth(&self, targets: &[Pair], depth: u32) -> Result<Vec<u64>> {
        self.check_depth(depth)?;
        let index: HashMap<Pair, usize> =
            targets.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut tally = vec![0u64; targets.len()];
        sweep(Pair::ROOT, depth, &mut |p| {
            if let Some(&i) = index.get(&p) {
                tally[i] += 1;
            }
        });
        Ok(tally)
    }

    /// `profile[d][i]`: walks of exactly `d` branches ending at `targets[i]`,
    /// for every `d <= max_depth`, from a single sweep.
    pub fn depth_profile(&self, targets: &[Pair], max_depth: u32) -> Result<Vec<Vec<u64>>> {
        self.check_depth(max_depth)?;
        let index: HashMap<Pair, usize> =
            targets.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut profile = vec![vec![0u64; targets.len()]; max_depth as usize + 1];
        profile_sweep(Pair::ROOT, 0, max_depth, &index, &mut profile);
        Ok(profile)
    }

    /// Smallest depth `<= max_depth` at which `target` occurs.
    pub fn first_depth(&self, target: Pair, max_depth: u32) -> Result<Option<u32>> {
        self.check_depth(max_depth)?;
        for depth in 0..=max_depth {
            if self.count_at_depth(&[target], depth)?[0] > 0 {
                return Ok(Some(depth));
            }
        }
        Ok(None)
    }

    /// `A_(1,1)(n)`, `B(n)` or `S(n)` by enumeration with the matching walk
    /// predicate applied along the way.
    pub fn count_constrained(&self, n: u32, constraint: Constraint) -> Result<u64> {
        let depth = 3 * n;
        self.check_depth(depth)?;
        let mut total = 0u64;
        match constraint {
            Constraint::Unconstrained => sweep(Pair::ROOT, depth, &mut |p| {
                if p == Pair::ROOT {
                    total += 1;
                }
            }),
            Constraint::ZeroAvoiding => {
                constrained_sweep(Pair::ROOT, depth, false, true, &mut total);
            }
            Constraint::Primitive => {
                if n == 0 {
                    return Ok(0);
                }
                // At n = 1 the walks 1,1,0,1,1 have no interior (1, 1) and are
                // counted; for larger n a zero forces an interior (1, 1).
                constrained_sweep(Pair::ROOT, depth, true, n >= 2, &mut total);
            }
        }
        Ok(total)
    }
}

fn sweep(state: Pair, remaining: u32, visit: &mut impl FnMut(Pair)) {
    if remaining == 0 {
        visit(state);
        return;
    }
    sweep(step(state, Branch::Left), remaining - 1, visit);
    sweep(step(state, Branch::Right), remaining - 1, visit);
}

fn profile_sweep(
    state: Pair,
    depth: u32,
    max_depth: u32,
    index: &HashMap<Pair, usize>,
    profile: &mut [Vec<u64>],
) {
    if let Some(&i) = index.get(&state) {
        profile[depth as usize][i] += 1;
    }
    if depth == max_depth {
        return;
    }
    profile_sweep(
        step(state, Branch::Left),
        depth + 1,
        max_depth,
        index,
        profile,
    );
    profile_sweep(
        step(state, Branch::Right),
        depth + 1,
        max_depth,
        index,
        profile,
    );
}

fn constrained_sweep(
    state: Pair,
    remaining: u32,
    no_interior_root: bool,
    no_zero: bool,
    total: &mut u64,
) {
    if remaining == 0 {
        if state == Pair::ROOT {
            *total += 1;
        }
        return;
    }
    for branch in [Branch::Left, Branch::Right] {
        let next = step(state, branch);
        if no_zero && next.b == 0 {
            continue;
        }
        if no_interior_root && remaining > 1 && next == Pair::ROOT {
            continue;
        }
        constrained_sweep(next, remaining - 1, no_interior_root, no_zero, total);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Branch::{Left as L, Right as R};

    fn walk(s: &str) -> Walk {
        Walk::parse(Pair::ROOT, s).unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(Pair::new(1, 2), L), Pair::new(2, 1));
        assert_eq!(step(Pair::new(2, 3), R), Pair::new(3, 5));
        assert_eq!(step(Pair::new(1, 1), L), Pair::new(1, 0));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_class(Pair::new(1, 1)).unwrap().m(), 0);
        assert_eq!(parity_class(Pair::new(1, 2)).unwrap().m(), 1);
        assert_eq!(parity_class(Pair::new(2, 3)).unwrap().m(), 2);
        assert_eq!(
            parity_class(Pair::new(2, 4)),
            Err(Error::NotCoprime(Pair::new(2, 4)))
        );
    }

    #[test]
    fn primitive_examples() {
        assert!(is_primitive_walk(&walk("RLL")));
        assert!(is_primitive_walk(&walk("RRLLLL")));
        assert!(is_primitive_walk(&walk("LLL")));
        assert!(is_primitive_walk(&walk("LRL")));
        assert!(!is_primitive_walk(&walk("RRL")));
        assert!(!is_primitive_walk(&walk("")));
        // RLL then RLL revisits (1, 1) halfway.
        assert!(!is_primitive_walk(&walk("RLLRLL")));
        assert!(!is_primitive_walk(&walk("LLLRLL")));
    }

    #[test]
    fn depth_six_primitive_walk_nodes() {
        // The figure's depth-6 primitive walk: 1,1,2,3,1,2,1,1.
        let w = walk("RRLLLL");
        assert_eq!(w.nodes(), vec![1, 1, 2, 3, 1, 2, 1, 1]);
        assert_eq!(w.terminal(), Pair::ROOT);
    }

    #[test]
    fn zero_avoidance_examples() {
        assert!(avoids_zero(&walk("RLL")));
        assert!(!avoids_zero(&walk("LLL")));
        assert!(avoids_zero(&walk("RRLLLL")));
    }

    #[test]
    fn restricted_examples() {
        assert!(is_restricted_walk(&walk("RLRL")));
        assert!(!is_restricted_walk(&walk("RLL")));
        assert!(is_restricted_walk(&walk("")));
    }

    #[test]
    fn reverse_examples() {
        let r = reverse_walk(&walk("R"));
        assert_eq!(r.root, Pair::new(2, 1));
        assert_eq!(r.terminal(), Pair::new(1, 1));

        let r = reverse_walk(&walk("RR"));
        assert_eq!(r.root, Pair::new(3, 2));
        assert_eq!(r.nodes(), vec![3, 2, 1, 1]);
        assert_eq!(r.branches, vec![L, L]);

        let r = reverse_walk(&walk("L"));
        assert_eq!(r.root, Pair::new(0, 1));
        assert_eq!(r.terminal(), Pair::new(1, 1));
    }

    #[test]
    fn bit_packing_is_little_endian() {
        let w = walk("RLLR");
        assert_eq!(w.to_bits(), 0b1001);
        assert_eq!(Walk::from_bits(Pair::ROOT, 0b1001, 4), w);
    }

    #[test]
    fn oracle_examples() {
        let o = Oracle::default();
        assert_eq!(o.count(Pair::new(1, 1), 1).unwrap(), 5);
        assert_eq!(o.count(Pair::new(1, 2), 1).unwrap(), 6);
        assert_eq!(o.count(Pair::new(1, 1), 4).unwrap(), 879);
        assert_eq!(o.count_constrained(1, Constraint::Primitive).unwrap(), 5);
        assert_eq!(o.count_constrained(2, Constraint::ZeroAvoiding).unwrap(), 3);
        assert_eq!(o.count_constrained(2, Constraint::Primitive).unwrap(), 2);
        assert_eq!(o.count_constrained(1, Constraint::ZeroAvoiding).unwrap(), 1);
    }

    #[test]
    fn oracle_rejects_deep_requests() {
        let o = Oracle::new(6);
        assert_eq!(
            o.count(Pair::new(1, 1), 3),
            Err(Error::DepthCapExceeded { depth: 9, cap: 6 })
        );
        assert!(o.count_constrained(3, Constraint::Primitive).is_err());
    }

    #[test]
    fn counting_rejects_degenerate_pairs() {
        let o = Oracle::default();
        assert_eq!(
            o.count(Pair::new(1, 0), 1),
            Err(Error::DegeneratePair(Pair::new(1, 0)))
        );
        assert_eq!(
            o.count(Pair::new(3, 6), 1),
            Err(Error::NotCoprime(Pair::new(3, 6)))
        );
    }

    #[test]
    fn dfs_sweep_matches_bit_sweep() {
        for depth in 0..=12u32 {
            let mut by_bits: HashMap<Pair, u64> = HashMap::new();
            for bits in 0..(1u64 << depth) {
                *by_bits
                    .entry(Walk::from_bits(Pair::ROOT, bits, depth).terminal())
                    .or_default() += 1;
            }
            let mut by_dfs: HashMap<Pair, u64> = HashMap::new();
            sweep(Pair::ROOT, depth, &mut |p| {
                *by_dfs.entry(p).or_default() += 1
            });
            assert_eq!(by_bits, by_dfs, "depth {depth}");
        }
    }
}
