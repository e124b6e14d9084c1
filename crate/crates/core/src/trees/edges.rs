use super::{check_n, enumerate_trees_bounded, Node, TreeMonomial, TreePolynomial, VertexCounts};
use crate::arith::{factorial, Integer};
use crate::error::{Error, Result};

/// The rightmost path from the root: `v1 = root`, and `v_{k+1}` is the
/// rightmost child of `v_k` as long as that child is internal.
pub fn spine(t: &TreeMonomial) -> Vec<usize> {
    let mut out = Vec::new();
    if t.node(0) == Node::Leaf {
        return out;
    }
    let mut v = 0;
    loop {
        out.push(v);
        let last = *t.children(v).last().expect("internal vertex");
        if t.node(last) == Node::Leaf {
            return out;
        }
        v = last;
    }
}

/// Internal edges split into regular and singular ones, each listed by
/// the word position of the lower vertex.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EdgeClassification {
    pub regular: Vec<usize>,
    pub singular: Vec<usize>,
}

/// An edge `w -> v` is singular when `v` is a `mu`-vertex whose children
/// are all leaves and `v` is not on the spine. Only the main spine is
/// flattened; hanging subtrees keep their shape.
pub fn classify_edges(t: &TreeMonomial) -> Result<EdgeClassification> {
    if t.xi_count() > 1 {
        return Err(Error::WrongTreeShape {
            expected: "a tree with at most one fat vertex",
            mu: t.mu_count(),
            xi: t.xi_count(),
        });
    }
    let on_spine = {
        let mut flags = vec![false; t.code().len()];
        for v in spine(t) {
            flags[v] = true;
        }
        flags
    };
    let shape = t.shape();
    let mut regular = Vec::new();
    let mut singular = Vec::new();
    for v in t.internal_edges() {
        let bare =
            t.node(v) == Node::Mu && shape.children[v].iter().all(|&c| t.node(c) == Node::Leaf);
        if bare && !on_spine[v] {
            singular.push(v);
        } else {
            regular.push(v);
        }
    }
    Ok(EdgeClassification { regular, singular })
}

/// Collapse the edge above the `mu`-vertex at `edge` into its `mu` parent,
/// producing one fat vertex whose children are spliced in planar order.
pub fn contract_edge(t: &TreeMonomial, edge: usize) -> Result<TreeMonomial> {
    if edge == 0 || edge >= t.code().len() || t.node(edge) == Node::Leaf {
        return Err(Error::NotAnInternalEdge(edge));
    }
    let parent = t.shape().parent[edge].expect("non-root vertex");
    if t.node(edge) != Node::Mu || t.node(parent) != Node::Mu {
        return Err(Error::NotAnInternalEdge(edge));
    }
    let mut code = t.code().to_vec();
    code[parent] = Node::Xi;
    code.remove(edge);
    Ok(TreeMonomial::from_code_unchecked(t.n(), code))
}

/// `(-1)^(g+n+1) g! (n-g-1)!` with `g` the number of regular edges.
pub fn epsilon(t: &TreeMonomial) -> Result<Integer> {
    if !t.is_one_tree() {
        return Err(Error::WrongTreeShape {
            expected: "a 1-tree",
            mu: t.mu_count(),
            xi: t.xi_count(),
        });
    }
    let n = t.n();
    let g = classify_edges(t)?.regular.len();
    assert!(g < n, "regular edge count {g} out of range for n={n}");
    let magnitude = factorial(g as u64) * factorial((n - g - 1) as u64);
    Ok(if (g + n + 1).is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    })
}

/// `nu = sum over all 1-trees T of epsilon(T) T`.
pub fn nu(n: usize, budget: u128) -> Result<TreePolynomial> {
    check_n(n)?;
    let trees = enumerate_trees_bounded(n, VertexCounts { mu: n - 1, xi: 1 }, budget)?;
    let mut out = TreePolynomial::zero();
    for t in trees {
        let e = epsilon(&t)?;
        out.add_term(t, e.into());
    }
    Ok(out)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ContractionReport {
    pub n: usize,
    pub zero_trees: usize,
    pub edges_checked: usize,
    /// First few `(tree, edge)` pairs breaking the rule.
    pub violations: Vec<String>,
    /// 0-trees without a regular edge.
    pub without_regular: usize,
    /// 0-trees without a singular edge.
    pub without_singular: Vec<String>,
    pub passed: bool,
}

/// Contracting edge `e` of a 0-tree `S` lowers the number of regular edges
/// by one when `e` is regular and keeps it when `e` is singular. Checked on
/// every 0-tree and every edge, together with the two endpoint facts.
pub fn verify_contraction_rule(n: usize, budget: u128) -> Result<ContractionReport> {
    check_n(n)?;
    let trees = enumerate_trees_bounded(n, VertexCounts { mu: n + 1, xi: 0 }, budget)?;
    let mut edges_checked = 0;
    let mut violations = Vec::new();
    let mut without_regular = 0;
    let mut without_singular = Vec::new();
    for s in &trees {
        let cls = classify_edges(s)?;
        let k = cls.regular.len();
        if k == 0 {
            without_regular += 1;
        }
        if cls.singular.is_empty() {
            without_singular.push(s.to_nested());
        }
        let drops = cls
            .regular
            .iter()
            .map(|&e| (e, 1))
            .chain(cls.singular.iter().map(|&e| (e, 0)));
        for (e, drop) in drops {
            edges_checked += 1;
            let g = classify_edges(&contract_edge(s, e)?)?.regular.len();
            if g + drop != k && violations.len() < 5 {
                violations.push(format!("{s} edge {e}: {k} -> {g}"));
            }
        }
    }
    let passed = violations.is_empty()
        && without_regular == 0
        && without_singular == vec![mu_comb(n).to_nested()];
    Ok(ContractionReport {
        n,
        zero_trees: trees.len(),
        edges_checked,
        violations,
        without_regular,
        without_singular,
        passed,
    })
}

/// `mu^(n+1)`: `n + 1` copies of `mu`, each grafted at the last slot.
pub fn mu_comb(n: usize) -> TreeMonomial {
    let mut code = Vec::with_capacity(n * n + n + 1);
    for _ in 0..n {
        code.push(Node::Mu);
        code.extend(std::iter::repeat_n(Node::Leaf, n - 1));
    }
    code.push(Node::Mu);
    code.extend(std::iter::repeat_n(Node::Leaf, n));
    TreeMonomial::from_code_unchecked(n, code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::trees::enumerate_trees;

    fn zero_trees(n: usize) -> Vec<TreeMonomial> {
        enumerate_trees(n, VertexCounts { mu: n + 1, xi: 0 })
    }

    #[test]
    fn comb_shape() {
        let c = mu_comb(2);
        assert_eq!(c.to_nested(), "m(,m(,m(,)))");
        assert_eq!(c.arity(), 4);
        let c3 = mu_comb(3);
        assert_eq!(c3.arity(), 9);
        assert_eq!(spine(&c3).len(), 4);
        let e = classify_edges(&c3).unwrap();
        assert_eq!((e.regular.len(), e.singular.len()), (3, 0));
        // built by repeated last-slot grafting
        let m = TreeMonomial::mu_corolla(3);
        let mut t = m.clone();
        for _ in 0..3 {
            let a = t.arity();
            t = t.graft(a, &m).unwrap().0;
        }
        assert_eq!(t, c3);
    }

    #[test]
    fn corolla_spine() {
        assert_eq!(spine(&TreeMonomial::mu_corolla(3)), vec![0]);
    }

    /// The second 0-tree drawn for n = 3: a bare vertex in the first slot
    /// of the root and a two-level subtree in the last slot.
    fn figure_s() -> TreeMonomial {
        TreeMonomial::from_nested(3, "m(m(,,),,m(m(,,),,))").unwrap()
    }

    #[test]
    fn figure_s_classification() {
        let s = figure_s();
        assert_eq!(spine(&s).len(), 2);
        let e = classify_edges(&s).unwrap();
        assert_eq!(e.regular.len(), 1);
        assert_eq!(e.singular.len(), 2);
        let r = contract_edge(&s, e.regular[0]).unwrap();
        assert!(r.is_one_tree());
        assert_eq!(classify_edges(&r).unwrap().regular.len(), 0);
    }

    #[test]
    fn n2_one_trees() {
        // xi with mu in the middle slot
        let t1 = TreeMonomial::from_nested(2, "x(,m(,),)").unwrap();
        assert_eq!(classify_edges(&t1).unwrap().regular.len(), 0);
        assert_eq!(epsilon(&t1).unwrap(), int(-1));
        let t3 = TreeMonomial::from_nested(2, "x(,,m(,))").unwrap();
        assert_eq!(epsilon(&t3).unwrap(), int(1));
        let eps: Vec<Integer> = enumerate_trees(2, VertexCounts { mu: 1, xi: 1 })
            .iter()
            .map(|t| epsilon(t).unwrap())
            .collect();
        assert_eq!(eps.iter().filter(|e| **e == int(-1)).count(), 2);
        assert_eq!(eps.iter().filter(|e| **e == int(1)).count(), 3);
    }

    #[test]
    fn epsilon_formula_n3() {
        for t in enumerate_trees(3, VertexCounts { mu: 2, xi: 1 }) {
            let g = classify_edges(&t).unwrap().regular.len();
            let want = match g {
                0 => int(2),
                1 => int(-1),
                2 => int(2),
                _ => unreachable!(),
            };
            assert_eq!(epsilon(&t).unwrap(), want);
        }
    }

    #[test]
    fn epsilon_rejects_other_shapes() {
        assert!(epsilon(&mu_comb(2)).is_err());
        let two_fat = TreeMonomial::from_nested(2, "x(x(,,),,)").unwrap();
        assert!(classify_edges(&two_fat).is_err());
    }

    #[test]
    fn contraction_of_single_edge() {
        for i in 1..=3 {
            let m = TreeMonomial::mu_corolla(3);
            let (t, _) = m.graft(i, &m).unwrap();
            let c = contract_edge(&t, t.internal_edges()[0]).unwrap();
            assert_eq!(c, TreeMonomial::xi_corolla(3));
        }
        assert!(matches!(
            contract_edge(&mu_comb(2), 0),
            Err(Error::NotAnInternalEdge(0))
        ));
        assert!(matches!(
            contract_edge(&mu_comb(2), 1),
            Err(Error::NotAnInternalEdge(1))
        ));
    }

    #[test]
    fn middle_spine_edge_of_comb() {
        let c = mu_comb(3);
        let sp = spine(&c);
        let t = contract_edge(&c, sp[2]).unwrap();
        assert!(t.is_one_tree());
        let fat = spine(&t).into_iter().find(|&v| t.node(v) == Node::Xi);
        assert!(fat.is_some());
        assert_eq!(classify_edges(&t).unwrap().regular.len(), 2);
    }

    /// card(reg(S/e)) drops by one exactly when e is regular.
    #[test]
    fn contraction_rule_exhaustive() {
        for n in 2..=4 {
            for s in zero_trees(n) {
                let cls = classify_edges(&s).unwrap();
                let k = cls.regular.len();
                assert_eq!(k + cls.singular.len(), n);
                for &e in &cls.regular {
                    let g = classify_edges(&contract_edge(&s, e).unwrap())
                        .unwrap()
                        .regular
                        .len();
                    assert_eq!(g, k - 1, "n={n} S={s} e={e}");
                }
                for &e in &cls.singular {
                    let g = classify_edges(&contract_edge(&s, e).unwrap())
                        .unwrap()
                        .regular
                        .len();
                    assert_eq!(g, k, "n={n} S={s} e={e}");
                }
            }
        }
    }

    #[test]
    fn contraction_report() {
        for n in 2..=4 {
            let r = verify_contraction_rule(n, 1_000_000).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.edges_checked, r.zero_trees * n);
        }
    }

    #[test]
    fn endpoint_facts() {
        for n in 2..=4 {
            let mut no_singular = Vec::new();
            for s in zero_trees(n) {
                let cls = classify_edges(&s).unwrap();
                assert!(!cls.regular.is_empty());
                if cls.singular.is_empty() {
                    no_singular.push(s);
                }
            }
            assert_eq!(no_singular, vec![mu_comb(n)]);
        }
    }

    #[test]
    fn one_tree_edge_count() {
        for n in 2..=4 {
            for t in enumerate_trees(n, VertexCounts { mu: n - 1, xi: 1 }) {
                assert_eq!(t.internal_edges().len(), n - 1);
            }
        }
    }

    #[test]
    fn nu_support() {
        let v = nu(3, 1_000_000).unwrap();
        assert_eq!(
            v.len(),
            enumerate_trees(3, VertexCounts { mu: 2, xi: 1 }).len()
        );
        for (_, c) in v.iter() {
            assert!([int(2), int(-1), int(1), int(-2)].contains(&c.to_integer()));
        }
        assert!(nu(4, 10).is_err());
    }
}
