//! Planar rooted trees whose vertices are labelled by the two generators
//! `mu` (arity `n`, degree 0, weight 1) and `xi` (arity `2n-1`, degree 1,
//! weight 2).
//!
//! A tree is stored as its preorder word over `{leaf, mu, xi}`, root first
//! and children left to right. The word determines the tree and two trees
//! are equal exactly when their words are, so the word doubles as the
//! canonical key. Positions in the word identify vertices; an internal edge
//! is identified by the position of its lower (child) vertex.

mod codec;
mod edges;
mod enumerate;
mod polynomial;

pub use edges::{
    classify_edges, contract_edge, epsilon, mu_comb, nu, spine, verify_contraction_rule,
    ContractionReport, EdgeClassification,
};
pub use enumerate::{enumerate_trees, enumerate_trees_bounded, tree_count, VertexCounts};
pub use polynomial::TreePolynomial;

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of monomials materialized per slice.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Node {
    Leaf = 0,
    Mu = 1,
    Xi = 2,
}

/// Name, arity, homological degree and weight of a generator.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GeneratorSignature {
    pub name: &'static str,
    pub arity: usize,
    pub degree: usize,
    pub weight: usize,
}

/// The two-letter alphabet of the cobar complex for a fixed `n >= 2`.
pub fn alphabet(n: usize) -> Result<[GeneratorSignature; 2]> {
    check_n(n)?;
    Ok([
        GeneratorSignature {
            name: "mu",
            arity: n,
            degree: 0,
            weight: 1,
        },
        GeneratorSignature {
            name: "xi",
            arity: 2 * n - 1,
            degree: 1,
            weight: 2,
        },
    ])
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    Ok(())
}

#[inline]
pub(crate) fn node_arity(node: Node, n: usize) -> usize {
    match node {
        Node::Leaf => 0,
        Node::Mu => n,
        Node::Xi => 2 * n - 1,
    }
}

/// A tree monomial in canonical (preorder word) form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeMonomial {
    n: usize,
    code: Vec<Node>,
}

/// Parent/children tables of a tree, indexed by word position.
#[derive(Clone, Debug)]
pub struct Shape {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl TreeMonomial {
    /// Validates the word: the running slot budget must stay positive
    /// until the last symbol and close exactly there.
    pub fn new(n: usize, code: Vec<Node>) -> Result<Self> {
        check_n(n)?;
        let mut need: isize = 1;
        for (i, &c) in code.iter().enumerate() {
            if need <= 0 {
                return Err(Error::MalformedCode {
                    code: codec::compact(&code),
                    reason: format!("word closes before position {i}"),
                });
            }
            need += node_arity(c, n) as isize - 1;
        }
        if need != 0 {
            return Err(Error::MalformedCode {
                code: codec::compact(&code),
                reason: "word does not close".into(),
            });
        }
        Ok(TreeMonomial { n, code })
    }

    pub(crate) fn from_code_unchecked(n: usize, code: Vec<Node>) -> Self {
        debug_assert!(TreeMonomial::new(n, code.clone()).is_ok());
        TreeMonomial { n, code }
    }

    /// The identity tree: a single leaf, arity 1.
    pub fn identity(n: usize) -> Self {
        TreeMonomial {
            n,
            code: vec![Node::Leaf],
        }
    }

    pub fn mu_corolla(n: usize) -> Self {
        let mut code = vec![Node::Mu];
        code.extend(std::iter::repeat_n(Node::Leaf, n));
        TreeMonomial { n, code }
    }

    pub fn xi_corolla(n: usize) -> Self {
        let mut code = vec![Node::Xi];
        code.extend(std::iter::repeat_n(Node::Leaf, 2 * n - 1));
        TreeMonomial { n, code }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn code(&self) -> &[Node] {
        &self.code
    }

    pub fn arity(&self) -> usize {
        self.code.iter().filter(|&&c| c == Node::Leaf).count()
    }

    pub fn mu_count(&self) -> usize {
        self.code.iter().filter(|&&c| c == Node::Mu).count()
    }

    pub fn xi_count(&self) -> usize {
        self.code.iter().filter(|&&c| c == Node::Xi).count()
    }

    /// Homological degree: one per `xi`.
    pub fn degree(&self) -> usize {
        self.xi_count()
    }

    pub fn weight(&self) -> usize {
        self.mu_count() + 2 * self.xi_count()
    }

    pub fn counts(&self) -> VertexCounts {
        VertexCounts {
            mu: self.mu_count(),
            xi: self.xi_count(),
        }
    }

    /// `n + 1` vertices, all `mu`.
    pub fn is_zero_tree(&self) -> bool {
        self.xi_count() == 0 && self.mu_count() == self.n + 1
    }

    /// `n - 1` `mu`-vertices and one fat `xi`-vertex.
    pub fn is_one_tree(&self) -> bool {
        self.xi_count() == 1 && self.mu_count() == self.n - 1
    }

    pub fn node(&self, pos: usize) -> Node {
        self.code[pos]
    }

    /// One past the last position of the subtree rooted at `pos`.
    pub fn subtree_end(&self, pos: usize) -> usize {
        let mut need = 1usize;
        let mut i = pos;
        while need > 0 {
            need = need - 1 + node_arity(self.code[i], self.n);
            i += 1;
        }
        i
    }

    /// Start positions of the children of `pos`, left to right.
    pub fn children(&self, pos: usize) -> Vec<usize> {
        let k = node_arity(self.code[pos], self.n);
        let mut out = Vec::with_capacity(k);
        let mut i = pos + 1;
        for _ in 0..k {
            out.push(i);
            i = self.subtree_end(i);
        }
        out
    }

    pub fn shape(&self) -> Shape {
        let len = self.code.len();
        let mut parent = vec![None; len];
        let mut children = vec![Vec::new(); len];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for (i, slot) in parent.iter_mut().enumerate() {
            if let Some(top) = stack.last_mut() {
                *slot = Some(top.0);
                children[top.0].push(i);
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            let k = node_arity(self.code[i], self.n);
            if k > 0 {
                stack.push((i, k));
            }
        }
        Shape { parent, children }
    }

    /// Positions of internal non-root vertices, i.e. the internal edges.
    pub fn internal_edges(&self) -> Vec<usize> {
        (1..self.code.len())
            .filter(|&i| self.code[i] != Node::Leaf)
            .collect()
    }

    /// Word positions of the leaves, left to right.
    pub fn leaf_positions(&self) -> Vec<usize> {
        (0..self.code.len())
            .filter(|&i| self.code[i] == Node::Leaf)
            .collect()
    }

    /// Partial composition `self ∘_slot other` (slots are 1-based) with its
    /// Koszul sign: `(-1)^(deg other * deg of the vertices of self that
    /// follow the slot in preorder)`.
    pub fn graft(&self, slot: usize, other: &TreeMonomial) -> Result<(TreeMonomial, i32)> {
        if self.n != other.n {
            return Err(Error::MismatchedN(self.n, other.n));
        }
        let leaves = self.leaf_positions();
        if slot == 0 || slot > leaves.len() {
            return Err(Error::SlotOutOfRange {
                slot,
                arity: leaves.len(),
            });
        }
        let at = leaves[slot - 1];
        let after = self.code[at + 1..]
            .iter()
            .filter(|&&c| c == Node::Xi)
            .count();
        let sign = if (other.degree() * after) % 2 == 1 {
            -1
        } else {
            1
        };
        let mut code = Vec::with_capacity(self.code.len() + other.code.len() - 1);
        code.extend_from_slice(&self.code[..at]);
        code.extend_from_slice(&other.code);
        code.extend_from_slice(&self.code[at + 1..]);
        Ok((TreeMonomial { n: self.n, code }, sign))
    }

    /// Replace the `xi` at `pos` by `mu ∘_i mu` (1-based `i`).
    pub(crate) fn expand_xi(&self, pos: usize, i: usize) -> TreeMonomial {
        debug_assert_eq!(self.code[pos], Node::Xi);
        let child = self.children(pos)[i - 1];
        let mut code = Vec::with_capacity(self.code.len() + 1);
        code.extend_from_slice(&self.code[..child]);
        code.push(Node::Mu);
        code.extend_from_slice(&self.code[child..]);
        code[pos] = Node::Mu;
        TreeMonomial { n: self.n, code }
    }

    /// Nested text form, e.g. `m(m(,,),,)`; a lone leaf prints as `|`.
    pub fn to_nested(&self) -> String {
        codec::nested(self)
    }

    /// Digit form, one digit per word symbol: 0 leaf, 1 mu, 2 xi.
    pub fn to_compact(&self) -> String {
        codec::compact(&self.code)
    }

    pub fn from_nested(n: usize, s: &str) -> Result<Self> {
        codec::parse_nested(n, s)
    }

    pub fn from_compact(n: usize, s: &str) -> Result<Self> {
        codec::parse_compact(n, s)
    }
}

impl fmt::Debug for TreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_nested())
    }
}

impl fmt::Display for TreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_nested())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_validation() {
        use Node::*;
        assert!(TreeMonomial::new(2, vec![Mu, Leaf, Leaf]).is_ok());
        assert!(TreeMonomial::new(2, vec![Mu, Leaf]).is_err());
        assert!(TreeMonomial::new(2, vec![Leaf, Leaf]).is_err());
        assert!(TreeMonomial::new(1, vec![Leaf]).is_err());
        let t = TreeMonomial::new(2, vec![Xi, Mu, Leaf, Leaf, Leaf, Leaf]).unwrap();
        assert_eq!((t.arity(), t.degree(), t.weight()), (4, 1, 3));
    }

    #[test]
    fn left_comb_by_grafting() {
        let m = TreeMonomial::mu_corolla(2);
        let (t, sign) = m.graft(1, &m).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(t.to_nested(), "m(m(,),)");
    }

    #[test]
    fn xi_into_xi() {
        let x = TreeMonomial::xi_corolla(2);
        let (t, sign) = x.graft(1, &x).unwrap();
        assert_eq!(sign, 1);
        assert_eq!((t.arity(), t.degree()), (5, 2));
        // a degree-1 insert that lands before another xi picks up a sign
        let (u, _) = x.graft(3, &x).unwrap();
        let (t2, s2) = u.graft(1, &x).unwrap();
        assert_eq!(s2, -1);
        assert_eq!(t2.degree(), 3);
    }

    #[test]
    fn graft_slot_range() {
        let m = TreeMonomial::mu_corolla(3);
        assert!(matches!(m.graft(0, &m), Err(Error::SlotOutOfRange { .. })));
        assert!(matches!(m.graft(4, &m), Err(Error::SlotOutOfRange { .. })));
        assert!(m.graft(1, &TreeMonomial::mu_corolla(2)).is_err());
    }

    #[test]
    fn shape_tables() {
        let t = TreeMonomial::from_nested(2, "m(m(,),m(,))").unwrap();
        let s = t.shape();
        assert_eq!(s.children[0], vec![1, 4]);
        assert_eq!(s.parent[4], Some(0));
        assert_eq!(t.children(0), vec![1, 4]);
        assert_eq!(t.internal_edges(), vec![1, 4]);
    }
}
