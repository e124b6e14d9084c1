//! The cobar complex on `{mu, xi}` with `d(mu) = 0` and
//! `d(xi) = sum_i mu ∘_i mu`, extended as a derivation.
//!
//! Sign rule: the `k`-th `xi` of a monomial in preorder expands with sign
//! `(-1)^(k-1)`. Together with the grafting sign of
//! [`TreeMonomial::graft`] this makes `d` a derivation of degree -1 with
//! `d∘d = 0`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorial, format_rational, Rational};
use crate::error::{Error, Result};
use crate::linalg::{solve, RationalMatrix};
use crate::trees::{
    check_n, classify_edges, contract_edge, enumerate_trees_bounded, mu_comb, nu, Node,
    TreeMonomial, TreePolynomial, VertexCounts,
};

/// `d` of a single monomial.
pub fn differential_monomial(t: &TreeMonomial) -> TreePolynomial {
    let n = t.n();
    let mut out = TreePolynomial::zero();
    let xis = t
        .code()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == Node::Xi)
        .map(|(p, _)| p);
    for (k, pos) in xis.enumerate() {
        let sign = if k % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        for i in 1..=n {
            out.add_term(t.expand_xi(pos, i), sign.clone());
        }
    }
    out
}

/// `d` extended linearly; terms are expanded in parallel and merged in
/// canonical order.
pub fn differential(x: &TreePolynomial) -> TreePolynomial {
    let terms: Vec<(&TreeMonomial, &Rational)> = x.iter().collect();
    let parts: Vec<Vec<(TreeMonomial, Rational)>> = terms
        .par_iter()
        .map(|(t, c)| {
            differential_monomial(t)
                .iter()
                .map(|(s, a)| (s.clone(), a * *c))
                .collect()
        })
        .collect();
    let mut acc: BTreeMap<TreeMonomial, Rational> = BTreeMap::new();
    for part in parts {
        for (t, c) in part {
            *acc.entry(t).or_insert_with(Rational::zero) += c;
        }
    }
    acc.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryFormulaReport {
    pub n: usize,
    pub passed: bool,
    /// Number of 1-trees in `nu`.
    pub nu_terms: usize,
    /// Number of monomials in `d(nu)`.
    pub lhs_terms: usize,
    /// Coefficient of `mu^(n+1)` in `d(nu)`.
    pub lhs_coefficient: String,
    /// `n!`.
    pub rhs_coefficient: String,
    /// `B1` is exactly `mu^(n+1)`.
    pub b1_is_comb: bool,
    pub b0_is_zero: bool,
    /// 0-trees whose coefficient in `d(nu)` was checked against the
    /// per-tree prediction from their regular-edge count.
    pub zero_trees_checked: usize,
    pub first_difference: Option<String>,
}

/// Coefficient of a 0-tree `S` with `k` regular edges in `d(nu)` as
/// predicted from the regular/singular split alone:
/// `k (-1)^(k+n) (k-1)!(n-k)! + (n-k) (-1)^(k+n+1) k!(n-k-1)!`.
pub fn predicted_coefficient(n: usize, k: usize) -> Rational {
    let mut total = num_bigint::BigInt::zero();
    if k > 0 {
        let t = factorial((k - 1) as u64) * factorial((n - k) as u64) * k;
        total += if (k + n).is_multiple_of(2) { t } else { -t };
    }
    if k < n {
        let t = factorial(k as u64) * factorial((n - k - 1) as u64) * (n - k);
        total += if (k + n + 1).is_multiple_of(2) { t } else { -t };
    }
    Rational::from_integer(total)
}

/// Checks `d(nu) = n! mu^(n+1)` together with `B1 = mu^(n+1)`, `B0 = 0`
/// and the tree-by-tree prediction for every 0-tree.
pub fn verify_boundary_formula(n: usize, budget: u128) -> Result<BoundaryFormulaReport> {
    check_n(n)?;
    let nu = nu(n, budget)?;
    let lhs = differential(&nu);
    let comb = mu_comb(n);
    let fact = Rational::from_integer(factorial(n as u64));
    let rhs = TreePolynomial::monomial(comb.clone()).scale(&fact);

    let zero_trees = enumerate_trees_bounded(n, VertexCounts { mu: n + 1, xi: 0 }, budget)?;
    let mut b1 = TreePolynomial::zero();
    let mut b0 = TreePolynomial::zero();
    let mut first_difference = None;
    for s in &zero_trees {
        let cls = classify_edges(s)?;
        if cls.singular.is_empty() {
            b1.add_term(s.clone(), Rational::one());
        }
        if cls.regular.is_empty() {
            b0.add_term(s.clone(), Rational::one());
        }
        let want = predicted_coefficient(n, cls.regular.len());
        let got = lhs.coeff(s);
        if got != want && first_difference.is_none() {
            first_difference = Some(format!(
                "0-tree {s}: coefficient {} but regular-edge count predicts {}",
                format_rational(&got),
                format_rational(&want)
            ));
        }
    }
    if first_difference.is_none() {
        let diff = lhs.sub(&rhs);
        first_difference = diff
            .iter()
            .next()
            .map(|(t, c)| format!("d(nu) - n! mu^(n+1) has {} at {t}", format_rational(c)));
    }
    let b1_is_comb = b1 == TreePolynomial::monomial(comb.clone());
    let b0_is_zero = b0.is_zero();
    Ok(BoundaryFormulaReport {
        n,
        passed: first_difference.is_none() && b1_is_comb && b0_is_zero && lhs == rhs,
        nu_terms: nu.len(),
        lhs_terms: lhs.len(),
        lhs_coefficient: format_rational(&lhs.coeff(&comb)),
        rhs_coefficient: format_rational(&fact),
        b1_is_comb,
        b0_is_zero,
        zero_trees_checked: zero_trees.len(),
        first_difference,
    })
}

/// `c_n = mu ∘_n nu - nu ∘_{n^2} mu`.
pub fn cycle_cn(n: usize, budget: u128) -> Result<TreePolynomial> {
    check_n(n)?;
    let nu = nu(n, budget)?;
    let mu = TreePolynomial::monomial(TreeMonomial::mu_corolla(n));
    let left = mu.graft(n, &nu)?;
    let right = nu.graft(n * n, &mu)?;
    Ok(left.sub(&right))
}

/// `x_n`: the fat vertex with `mu` in its first `n - 1` slots.
pub fn x_n(n: usize) -> Result<TreeMonomial> {
    check_n(n)?;
    let mut t = TreeMonomial::xi_corolla(n);
    let mu = TreeMonomial::mu_corolla(n);
    for slot in (1..n).rev() {
        t = t.graft(slot, &mu)?.0;
    }
    Ok(t)
}

/// The whistle-blower `w_n = mu ∘_n x_n`.
pub fn whistle_blower(n: usize) -> Result<TreeMonomial> {
    Ok(TreeMonomial::mu_corolla(n).graft(n, &x_n(n)?)?.0)
}

/// Exact answer to "is `target` a boundary?" on one homogeneous slice.
#[derive(Clone, Debug)]
pub struct BoundaryQuery {
    pub target_degree: usize,
    /// Monomials of degree `target_degree + 1` with matching weight and arity.
    pub basis: Vec<TreeMonomial>,
    /// Monomials indexing the equations.
    pub rows: Vec<TreeMonomial>,
    pub rank_coefficient: usize,
    pub rank_augmented: usize,
    pub witness: Option<TreePolynomial>,
}

impl BoundaryQuery {
    pub fn solvable(&self) -> bool {
        self.witness.is_some()
    }

    /// `rank [A|q] > rank A` proves infeasibility.
    pub fn certificate(&self) -> Option<(usize, usize)> {
        (!self.solvable()).then_some((self.rank_coefficient, self.rank_augmented))
    }
}

/// Solves `d(x) = target` over the rationals on the slice of `target`.
pub fn is_boundary(target: &TreePolynomial, budget: u128) -> Result<BoundaryQuery> {
    let Some((arity, degree, weight)) = target.grading() else {
        return Ok(BoundaryQuery {
            target_degree: 0,
            basis: vec![],
            rows: vec![],
            rank_coefficient: 0,
            rank_augmented: 0,
            witness: Some(TreePolynomial::zero()),
        });
    };
    let n = target.monomials().next().unwrap().n();
    let xi = degree + 1;
    let basis = if weight >= 2 * xi {
        let counts = VertexCounts {
            mu: weight - 2 * xi,
            xi,
        };
        debug_assert_eq!(counts.arity(n), arity);
        enumerate_trees_bounded(n, counts, budget)?
    } else {
        vec![]
    };
    let images: Vec<TreePolynomial> = basis.par_iter().map(differential_monomial).collect();
    let mut row_index: BTreeMap<TreeMonomial, usize> = BTreeMap::new();
    for t in images
        .iter()
        .flat_map(|p| p.monomials())
        .chain(target.monomials())
    {
        let next = row_index.len();
        row_index.entry(t.clone()).or_insert(next);
    }
    if row_index.len() as u128 > budget {
        return Err(Error::BudgetExceeded {
            what: "boundary system rows".into(),
            needed: row_index.len() as u128,
            cap: budget,
        });
    }
    let mut a = RationalMatrix::zeros(row_index.len(), basis.len());
    for (j, img) in images.iter().enumerate() {
        for (t, c) in img.iter() {
            a.set(row_index[t], j, c.clone());
        }
    }
    let mut b = vec![Rational::zero(); row_index.len()];
    for (t, c) in target.iter() {
        b[row_index[t]] = c.clone();
    }
    let sol = solve(&a, &b);
    let witness = sol
        .solution
        .map(|x| basis.iter().cloned().zip(x).collect::<TreePolynomial>());
    let mut rows: Vec<(usize, TreeMonomial)> = row_index.into_iter().map(|(t, i)| (i, t)).collect();
    rows.sort_by_key(|r| r.0);
    Ok(BoundaryQuery {
        target_degree: degree,
        basis,
        rows: rows.into_iter().map(|r| r.1).collect(),
        rank_coefficient: sol.rank_coefficient,
        rank_augmented: sol.rank_augmented,
        witness,
    })
}

/// Monomials one degree up whose differential contains `w`. Any such
/// monomial arises by contracting a `mu`-`mu` edge of `w` into a fat vertex.
pub fn boundary_preimage_monomials(w: &TreeMonomial) -> Vec<TreeMonomial> {
    let mut out: Vec<TreeMonomial> = w
        .internal_edges()
        .into_iter()
        .filter_map(|e| contract_edge(w, e).ok())
        .filter(|y| !differential_monomial(y).coeff(w).is_zero())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Arity of the vertex produced by contracting each internal edge of `w`.
pub fn contraction_arities(w: &TreeMonomial) -> Vec<usize> {
    let shape = w.shape();
    let arity = |p: usize| shape.children[p].len();
    w.internal_edges()
        .into_iter()
        .map(|e| arity(e) + arity(shape.parent[e].unwrap()) - 1)
        .collect()
}

/// `dim H` of the slice `(weight, degree)` over the rationals, by exact ranks
/// of the incoming and outgoing differentials. Exploratory only.
pub fn homology_dimension(n: usize, weight: usize, degree: usize, budget: u128) -> Result<usize> {
    check_n(n)?;
    let slice = |d: usize| -> Result<Vec<TreeMonomial>> {
        if weight < 2 * d {
            return Ok(vec![]);
        }
        enumerate_trees_bounded(
            n,
            VertexCounts {
                mu: weight - 2 * d,
                xi: d,
            },
            budget,
        )
    };
    let rank_of = |source: &[TreeMonomial], target: &[TreeMonomial]| -> usize {
        if source.is_empty() || target.is_empty() {
            return 0;
        }
        let mut m = RationalMatrix::zeros(target.len(), source.len());
        for (j, s) in source.iter().enumerate() {
            for (t, c) in differential_monomial(s).iter() {
                let i = target
                    .binary_search(t)
                    .expect("differential stays in the slice");
                m.set(i, j, c.clone());
            }
        }
        m.rank()
    };
    let here = slice(degree)?;
    let below = if degree > 0 {
        slice(degree - 1)?
    } else {
        vec![]
    };
    let above = slice(degree + 1)?;
    let kernel = here.len() - rank_of(&here, &below);
    Ok(kernel - rank_of(&above, &here))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::trees::enumerate_trees;
    use proptest::prelude::*;

    #[test]
    fn differential_of_generators() {
        let d = differential_monomial(&TreeMonomial::xi_corolla(2));
        let want: TreePolynomial = ["m(m(,),)", "m(,m(,))"]
            .iter()
            .map(|s| (TreeMonomial::from_nested(2, s).unwrap(), rat(1, 1)))
            .collect();
        assert_eq!(d, want);
        assert!(differential_monomial(&mu_comb(3)).is_zero());
    }

    #[test]
    fn nu_for_n2_matches_the_worked_example() {
        let v = nu(2, 100).unwrap();
        let mut coeffs: Vec<i64> = v
            .iter()
            .map(|(_, c)| c.to_integer().try_into().unwrap())
            .collect();
        coeffs.sort();
        assert_eq!(coeffs, vec![-1, -1, 1, 1, 1]);
        assert_eq!(
            differential(&v),
            TreePolynomial::monomial(mu_comb(2)).scale(&rat(2, 1))
        );
    }

    #[test]
    fn boundary_formula_small_n() {
        for n in 2..=4 {
            let r = verify_boundary_formula(n, 1_000_000).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.lhs_terms, 1);
            assert_eq!(r.lhs_coefficient, factorial(n as u64).to_string());
        }
    }

    #[test]
    fn predicted_coefficient_cancels_in_the_middle() {
        for n in 2..=7 {
            assert_eq!(
                predicted_coefficient(n, n),
                Rational::from_integer(factorial(n as u64))
            );
            let sign = if n % 2 == 1 { int(1) } else { int(-1) };
            assert_eq!(
                predicted_coefficient(n, 0),
                Rational::from_integer(sign * factorial(n as u64))
            );
            for k in 1..n {
                assert!(predicted_coefficient(n, k).is_zero());
            }
        }
    }

    #[test]
    fn whistle_blower_shape() {
        let w3 = whistle_blower(3).unwrap();
        assert_eq!(w3.to_nested(), "m(,,x(m(,,),m(,,),,,))");
        for n in 2..=4 {
            let x = x_n(n).unwrap();
            assert_eq!(
                TreeMonomial::mu_corolla(n).graft(n, &x).unwrap().0,
                whistle_blower(n).unwrap()
            );
            let nu = nu(n, 1_000_000).unwrap();
            let want = factorial((n - 1) as u64) * if n % 2 == 1 { int(1) } else { int(-1) };
            assert_eq!(nu.coeff(&x), Rational::from_integer(want.clone()));
            assert_eq!(crate::trees::epsilon(&x).unwrap(), want);
        }
    }

    #[test]
    fn cycle_is_closed_and_carries_the_whistle_blower() {
        for n in 2..=4 {
            let c = cycle_cn(n, 1_000_000).unwrap();
            assert_eq!(c.grading(), Some((n * n + n - 1, 1, n + 2)));
            assert!(differential(&c).is_zero(), "n={n}");
            let want = factorial((n - 1) as u64) * if n % 2 == 1 { int(1) } else { int(-1) };
            assert_eq!(
                c.coeff(&whistle_blower(n).unwrap()),
                Rational::from_integer(want)
            );
        }
        assert!(cycle_cn(2, 1_000_000).unwrap().len() <= 10);
    }

    #[test]
    fn cycle_is_not_a_boundary() {
        for n in 2..=3 {
            let q = is_boundary(&cycle_cn(n, 1_000_000).unwrap(), 1_000_000).unwrap();
            assert!(!q.solvable());
            let (ra, rb) = q.certificate().unwrap();
            assert_eq!(rb, ra + 1);
        }
    }

    #[test]
    fn boundaries_are_boundaries() {
        assert!(is_boundary(&TreePolynomial::zero(), 10).unwrap().solvable());
        for y in enumerate_trees(3, VertexCounts { mu: 1, xi: 2 })
            .into_iter()
            .step_by(7)
        {
            let q = is_boundary(&differential_monomial(&y), 1_000_000).unwrap();
            let w = q.witness.expect("solvable");
            assert_eq!(differential(&w), differential_monomial(&y));
        }
    }

    #[test]
    fn whistle_blower_has_no_preimage() {
        for n in 2..=5 {
            let w = whistle_blower(n).unwrap();
            assert!(boundary_preimage_monomials(&w).is_empty());
            assert!(contraction_arities(&w).iter().all(|&a| a == 3 * n - 2));
        }
        // a 0-tree is hit by the 1-trees that contract onto it
        assert!(boundary_preimage_monomials(&mu_comb(2)).len() == 2);
        let w = TreeMonomial::from_nested(2, "x(m(m(,),),,)").unwrap();
        let pre = boundary_preimage_monomials(&w);
        assert_eq!(
            pre,
            vec![TreeMonomial::from_nested(2, "x(x(,,),,)").unwrap()]
        );
        let lone = TreeMonomial::mu_corolla(2)
            .graft(1, &TreeMonomial::xi_corolla(2))
            .unwrap()
            .0;
        assert!(boundary_preimage_monomials(&lone).is_empty());
    }

    #[test]
    fn d_squared_vanishes_on_degree_two() {
        for n in 2..=4 {
            for mu in 0..=2 {
                for y in enumerate_trees(n, VertexCounts { mu, xi: 2 }) {
                    assert!(
                        differential(&differential_monomial(&y)).is_zero(),
                        "n={n} {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn low_weight_homology_is_computable() {
        // weight 2, degree 1: xi maps injectively onto the relation
        assert_eq!(homology_dimension(2, 2, 1, 1000).unwrap(), 0);
        assert_eq!(homology_dimension(3, 2, 0, 1000).unwrap(), 2);
    }

    fn random_tree(n: usize, mu: usize, xi: usize, pick: prop::sample::Index) -> TreeMonomial {
        let all = enumerate_trees(n, VertexCounts { mu, xi });
        all[pick.index(all.len())].clone()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn d_squared_vanishes_on_degree_three(n in 2usize..4, mu in 0usize..3, pick in any::<prop::sample::Index>()) {
            let y = random_tree(n, mu, 3, pick);
            prop_assert!(differential(&differential_monomial(&y)).is_zero());
        }

        #[test]
        fn differential_is_a_derivation(
            n in 2usize..4,
            (fm, fx, gm, gx) in (0usize..3, 0usize..3, 0usize..3, 0usize..3),
            pf in any::<prop::sample::Index>(),
            pg in any::<prop::sample::Index>(),
            ps in any::<prop::sample::Index>(),
        ) {
            let f = random_tree(n, fm, fx, pf);
            let g = random_tree(n, gm, gx, pg);
            let slot = ps.index(f.arity()) + 1;
            let fp = TreePolynomial::monomial(f.clone());
            let gp = TreePolynomial::monomial(g.clone());
            let lhs = differential(&fp.graft(slot, &gp).unwrap());
            let sign = if f.degree().is_multiple_of(2) { rat(1, 1) } else { rat(-1, 1) };
            let mut rhs = differential(&fp).graft(slot, &gp).unwrap();
            rhs.add_assign(&fp.graft(slot, &differential(&gp)).unwrap().scale(&sign));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
