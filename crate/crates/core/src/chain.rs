//! Shortest walks from the root by backward reduction, and the restricted
//! tree that contains each coprime pair exactly once.

use crate::tree::{step, Branch, Pair};
use crate::{Error, Result};

/// The pairs visited by the shortest walk to a target, listed from the
/// target back down to `(1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionChain {
    pub pairs: Vec<Pair>,
}

impl ReductionChain {
    /// Number of branches in the shortest walk.
    pub fn len(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn target(&self) -> Pair {
        self.pairs[0]
    }

    /// Node values of the shortest walk read forwards from the root.
    pub fn forward_nodes(&self) -> Vec<u64> {
        let mut nodes = vec![1, 1];
        nodes.extend(self.pairs.iter().rev().skip(1).map(|p| p.b));
        nodes
    }

    /// Branches of the shortest walk read forwards from the root.
    pub fn forward_branches(&self) -> Vec<Branch> {
        self.pairs
            .windows(2)
            .rev()
            .map(|w| {
                let (next, prev) = (w[0], w[1]);
                if step(prev, Branch::Left) == next {
                    Branch::Left
                } else {
                    Branch::Right
                }
            })
            .collect()
    }
}

fn reduction_budget(p: Pair) -> u64 {
    3u64.saturating_mul(p.a.saturating_add(p.b))
        .saturating_add(3)
}

/// Walks backwards from `p`: the predecessor of `(x, y)` on a shortest walk
/// is `(|x - y|, x)`.
pub fn reduction_chain(p: Pair) -> Result<ReductionChain> {
    p.require_countable()?;
    let budget = reduction_budget(p);
    let mut pairs = vec![p];
    let mut cur = p;
    let mut steps = 0u64;
    while cur != Pair::ROOT {
        if steps >= budget {
            return Err(Error::ReductionBudget { pair: p, budget });
        }
        cur = Pair::new(cur.a.abs_diff(cur.b), cur.a);
        pairs.push(cur);
        steps += 1;
    }
    Ok(ReductionChain { pairs })
}

/// `SW_(1,1)(a, b)`: branches in the shortest walk from the root to `p`.
pub fn shortest_walk_length(p: Pair) -> Result<usize> {
    Ok(reduction_chain(p)?.len())
}

/// The last five node values `a0, a1, a2, a, b` of the shortest walk.
pub fn last_five(p: Pair) -> Result<[u64; 5]> {
    let chain = reduction_chain(p)?;
    if chain.len() < 3 {
        return Err(Error::ChainTooShort {
            pair: p,
            len: chain.len(),
        });
    }
    let nodes = chain.forward_nodes();
    let tail = &nodes[nodes.len() - 5..];
    Ok([tail[0], tail[1], tail[2], tail[3], tail[4]])
}

/// One occurrence in the restricted tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub depth: u32,
    pub pair: Pair,
}

/// Terminal pairs of every restricted walk (no two consecutive lefts) of
/// length `<= max_depth`, sorted by `(depth, a, b)`.
///
/// The degenerate left child `(1, 0)` of the root is listed at depth 1 but
/// not expanded: continuing through the zero only re-enters `(1, 1)`.
pub fn restricted_tree(max_depth: u32, cap: u32) -> Result<Vec<Occurrence>> {
    if max_depth > cap {
        return Err(Error::DepthCapExceeded {
            depth: max_depth,
            cap,
        });
    }
    let mut out = vec![Occurrence {
        depth: 0,
        pair: Pair::ROOT,
    }];
    // (pair, last branch was Left)
    let mut frontier = vec![(Pair::ROOT, false)];
    for depth in 1..=max_depth {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &(pair, after_left) in &frontier {
            if !after_left {
                let child = step(pair, Branch::Left);
                out.push(Occurrence { depth, pair: child });
                if child.b != 0 {
                    next.push((child, true));
                }
            }
            next.push((step(pair, Branch::Right), false));
            out.push(Occurrence {
                depth,
                pair: step(pair, Branch::Right),
            });
        }
        frontier = next;
    }
    out.sort();
    Ok(out)
}
