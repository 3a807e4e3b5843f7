//! Exact counting, enumeration oracles and bound certification for ordered
//! pairs in the random Fibonacci tree rooted at `(1, 1)`.
//!
//! A node `y` whose parent is `x` has a left child `|x - y|` and a right
//! child `x + y`. A *pair* `(a, b)` at depth `d` is two consecutive node
//! values `g_d, g_{d+1}` on a walk from the root.

pub mod asymptotics;
pub mod chain;
pub mod counting;
mod error;
pub mod interval;
pub mod tree;
pub mod walk_prob;

pub use error::{Error, Result};
pub use tree::{Branch, Pair, ParityClass, Walk};
