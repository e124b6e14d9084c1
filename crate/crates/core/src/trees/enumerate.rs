use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{check_n, Node, TreeMonomial};
use crate::arith::factorial;
use crate::error::{Error, Result};

/// Vertex multiset of a tree over the `{mu, xi}` alphabet.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
pub struct VertexCounts {
    pub mu: usize,
    pub xi: usize,
}

impl VertexCounts {
    pub fn arity(&self, n: usize) -> usize {
        1 + self.mu * (n - 1) + self.xi * (2 * n - 2)
    }

    pub fn weight(&self) -> usize {
        self.mu + 2 * self.xi
    }
}

/// Number of planar trees with the given vertex multiset,
/// `(N-1)! / (L! mu! xi!)` where `N = L + mu + xi` counts all nodes.
pub fn tree_count(n: usize, counts: VertexCounts) -> BigInt {
    let leaves = counts.arity(n) as u64;
    let total = leaves + counts.mu as u64 + counts.xi as u64;
    factorial(total - 1)
        / (factorial(leaves) * factorial(counts.mu as u64) * factorial(counts.xi as u64))
}

/// All planar trees with exactly `counts` vertices, in canonical order.
pub fn enumerate_trees(n: usize, counts: VertexCounts) -> Vec<TreeMonomial> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut word = Vec::with_capacity(counts.arity(n) + counts.mu + counts.xi);
    extend(n, 1, counts.mu, counts.xi, &mut word, &mut out);
    out
}

/// As [`enumerate_trees`], refusing up front when the count exceeds `cap`.
pub fn enumerate_trees_bounded(
    n: usize,
    counts: VertexCounts,
    cap: u128,
) -> Result<Vec<TreeMonomial>> {
    check_n(n)?;
    let needed = tree_count(n, counts);
    match needed.to_u128() {
        Some(k) if k <= cap => Ok(enumerate_trees(n, counts)),
        _ => Err(Error::BudgetExceeded {
            what: format!("trees with {} mu and {} xi (n={n})", counts.mu, counts.xi),
            needed: needed.to_u128().unwrap_or(u128::MAX),
            cap,
        }),
    }
}

// Depth-first over preorder words, trying symbols in the order
// leaf < mu < xi so output comes out sorted.
fn extend(
    n: usize,
    open: usize,
    mu: usize,
    xi: usize,
    word: &mut Vec<Node>,
    out: &mut Vec<TreeMonomial>,
) {
    if open == 0 {
        out.push(TreeMonomial {
            n,
            code: word.clone(),
        });
        return;
    }
    if open > 1 || (mu == 0 && xi == 0) {
        word.push(Node::Leaf);
        extend(n, open - 1, mu, xi, word, out);
        word.pop();
    }
    if mu > 0 {
        word.push(Node::Mu);
        extend(n, open - 1 + n, mu - 1, xi, word, out);
        word.pop();
    }
    if xi > 0 {
        word.push(Node::Xi);
        extend(n, open - 1 + 2 * n - 1, mu, xi - 1, word, out);
        word.pop();
    }
}
