//! Dimensions of the operad on one `n`-ary generator `mu` with the single
//! relation `sum_i mu ∘_i mu = 0`, by rank of the relation's consequences.
//!
//! In weight `w` the ideal is spanned by the trees with `w - 2` copies of
//! `mu` and one slot of arity `2n - 1` into which the relation is inserted.
//! A tree carrying the relation in several slots is already in that span:
//! expand all but one of them into monomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, PrimeField, Rational};
use crate::cobar::differential_monomial;
use crate::error::{Error, Result};
use crate::linalg::{rank_mod_p, SparseMatrix};
use crate::series::TruncatedSeries;
use crate::trees::{check_n, enumerate_trees_bounded, TreeMonomial, VertexCounts};

/// Default cap on the column count of a consequence matrix.
pub const DEFAULT_COLUMN_BUDGET: u128 = 100_000;

/// Number of planar trees with `w` vertices of arity `n`.
pub fn free_dim(n: usize, w: usize) -> BigInt {
    binomial((n * w) as u64, w as u64) / (w * (n - 1) + 1)
}

/// Number of slot trees in weight `w`: `C(nw - 1, w - 2)`.
pub fn consequence_count(n: usize, w: usize) -> BigInt {
    if w < 2 {
        return BigInt::zero();
    }
    binomial((n * w - 1) as u64, (w - 2) as u64)
}

#[derive(Clone, Debug)]
pub struct ConsequenceMatrix {
    pub n: usize,
    pub weight: usize,
    /// Slot trees: the slot is the single `xi` vertex.
    pub rows: Vec<TreeMonomial>,
    /// `mu`-only trees in canonical order.
    pub columns: Vec<TreeMonomial>,
    pub matrix: SparseMatrix,
}

pub fn build_consequence_matrix(n: usize, w: usize, budget: u128) -> Result<ConsequenceMatrix> {
    check_n(n)?;
    if w < 2 {
        return Err(Error::Verification(format!("no relations in weight {w}")));
    }
    let cols = free_dim(n, w).to_u128().unwrap_or(u128::MAX);
    if cols > budget {
        return Err(Error::BudgetExceeded {
            what: format!("columns in weight {w}"),
            needed: cols,
            cap: budget,
        });
    }
    let columns = enumerate_trees_bounded(n, VertexCounts { mu: w, xi: 0 }, budget)?;
    let rows = enumerate_trees_bounded(n, VertexCounts { mu: w - 2, xi: 1 }, budget)?;
    let entries: Vec<Vec<(u32, i64)>> = rows
        .par_iter()
        .map(|t| {
            differential_monomial(t)
                .iter()
                .map(|(s, c)| {
                    let j = columns
                        .binary_search(s)
                        .expect("expansion is a mu-only tree");
                    (j as u32, c.to_integer().to_i64().expect("small entry"))
                })
                .collect()
        })
        .collect();
    let mut matrix = SparseMatrix::new(columns.len());
    for e in entries {
        matrix.push_row(e);
    }
    Ok(ConsequenceMatrix {
        n,
        weight: w,
        rows,
        columns,
        matrix,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightRecord {
    pub weight: usize,
    pub free: u64,
    pub consequences: u64,
    /// Rank over each configured prime.
    pub rank: BTreeMap<u64, usize>,
    /// Rank over the rationals, where computed.
    pub exact_rank: Option<usize>,
    pub dim: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionSeries {
    pub n: usize,
    pub weights: Vec<WeightRecord>,
}

impl DimensionSeries {
    /// `sum_w dim_w t^(w(n-1)+1)`.
    pub fn series(&self) -> TruncatedSeries {
        let step = self.n - 1;
        let order = self.weights.last().map_or(1, |r| r.weight * step + 1);
        TruncatedSeries::from_terms(
            self.weights
                .iter()
                .map(|r| (r.weight * step + 1, Rational::from_integer(r.dim.into()))),
            order,
        )
    }

    pub fn dims(&self) -> Vec<u64> {
        self.weights.iter().map(|r| r.dim).collect()
    }
}

/// Weight-by-weight dimensions from weight 0 up to `max_weight`. Ranks are
/// taken over every prime in `primes`; they must agree. Weights up to
/// `exact_upto` are also ranked over the rationals.
pub fn poincare_series(
    n: usize,
    max_weight: usize,
    primes: &[u64],
    exact_upto: usize,
    budget: u128,
) -> Result<DimensionSeries> {
    check_n(n)?;
    let fields = primes
        .iter()
        .map(|&p| PrimeField::new(p))
        .collect::<Result<Vec<_>>>()?;
    if fields.is_empty() {
        return Err(Error::Verification("no primes configured".into()));
    }
    let mut weights = Vec::new();
    for w in 0..=max_weight {
        let free = free_dim(n, w).to_u64().expect("fits");
        let consequences = consequence_count(n, w).to_u64().expect("fits");
        let (rank, exact_rank) = if w < 2 {
            (
                primes.iter().map(|&p| (p, 0)).collect(),
                (w <= exact_upto).then_some(0),
            )
        } else {
            let m = build_consequence_matrix(n, w, budget)?;
            let rank: BTreeMap<u64, usize> = fields
                .iter()
                .map(|f| (f.modulus(), rank_mod_p(&m.matrix, *f)))
                .collect();
            let exact = (w <= exact_upto).then(|| m.matrix.to_rational().rank());
            (rank, exact)
        };
        let mut values: Vec<usize> = rank.values().copied().collect();
        values.extend(exact_rank);
        values.dedup();
        if values.len() > 1 {
            return Err(Error::PrimeDisagreement(format!(
                "weight {w}: ranks {rank:?}, rational {exact_rank:?}"
            )));
        }
        let r = values[0] as u64;
        assert!(r <= consequences && r <= free);
        weights.push(WeightRecord {
            weight: w,
            free,
            consequences,
            rank,
            exact_rank,
            dim: free - r,
        });
    }
    Ok(DimensionSeries { n, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, DEFAULT_PRIMES};
    use crate::linalg::RationalMatrix;
    use crate::trees::{enumerate_trees, tree_count, Node};

    #[test]
    fn free_dimensions() {
        assert_eq!(free_dim(8, 2), int(8));
        assert_eq!(free_dim(8, 3), int(92));
        assert_eq!(free_dim(2, 3), int(5));
        for n in 2..=5 {
            for w in 0..=4 {
                assert_eq!(free_dim(n, w), tree_count(n, VertexCounts { mu: w, xi: 0 }));
            }
        }
    }

    #[test]
    fn free_dim_in_weight_n_plus_one() {
        for n in 2..=8usize {
            assert_eq!(
                free_dim(n, n + 1),
                binomial((n * n + n - 1) as u64, (n - 1) as u64)
            );
        }
    }

    #[test]
    fn consequence_counts() {
        assert_eq!(consequence_count(8, 3), int(23));
        assert_eq!(consequence_count(8, 5), int(9139));
        for n in 2..=5 {
            assert_eq!(consequence_count(n, 2), int(1));
            for w in 2..=4 {
                assert_eq!(
                    consequence_count(n, w),
                    tree_count(n, VertexCounts { mu: w - 2, xi: 1 })
                );
            }
        }
    }

    #[test]
    fn small_matrices() {
        let m = build_consequence_matrix(8, 2, DEFAULT_COLUMN_BUDGET).unwrap();
        assert_eq!((m.matrix.nrows(), m.matrix.ncols), (1, 8));
        assert!(m.matrix.rows[0].iter().all(|e| e.1 == 1));
        let m = build_consequence_matrix(8, 3, DEFAULT_COLUMN_BUDGET).unwrap();
        assert_eq!((m.matrix.nrows(), m.matrix.ncols), (23, 92));
        assert!(m.matrix.rows.iter().all(|r| r.len() == 8));
        let m = build_consequence_matrix(2, 3, DEFAULT_COLUMN_BUDGET).unwrap();
        assert_eq!((m.matrix.nrows(), m.matrix.ncols), (5, 5));
        assert!(matches!(
            build_consequence_matrix(8, 5, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn dimensions_for_small_n() {
        let d = poincare_series(2, 2, &DEFAULT_PRIMES, 2, DEFAULT_COLUMN_BUDGET).unwrap();
        assert_eq!(d.dims(), vec![1, 1, 1]);
        let d = poincare_series(3, 4, &DEFAULT_PRIMES, 4, DEFAULT_COLUMN_BUDGET).unwrap();
        for r in &d.weights {
            assert_eq!(r.exact_rank, Some(r.rank[&DEFAULT_PRIMES[0]]));
        }
        let d = poincare_series(8, 4, &DEFAULT_PRIMES, 3, DEFAULT_COLUMN_BUDGET).unwrap();
        assert_eq!(d.dims(), vec![1, 1, 7, 69, 790]);
        assert_eq!(d.weights[3].rank[&DEFAULT_PRIMES[1]], 23);
        assert_eq!(d.weights[4].rank[&DEFAULT_PRIMES[0]], 450);
        assert_eq!(d.series().coeff(22), Rational::from_integer(69.into()));
    }

    /// Every `xi` replaced by the relation.
    fn expand_all(t: &TreeMonomial) -> Vec<TreeMonomial> {
        match t.code().iter().position(|&c| c == Node::Xi) {
            None => vec![t.clone()],
            Some(_) => differential_monomial(t)
                .monomials()
                .flat_map(expand_all)
                .collect(),
        }
    }

    #[test]
    fn single_slot_insertions_span_the_ideal() {
        let (n, w) = (2, 4);
        let m = build_consequence_matrix(n, w, DEFAULT_COLUMN_BUDGET).unwrap();
        let single = m.matrix.to_rational().rank();
        let mut rows: Vec<Vec<Rational>> = (0..m.matrix.nrows())
            .map(|r| m.matrix.to_rational().row(r).to_vec())
            .collect();
        for t in enumerate_trees(n, VertexCounts { mu: 0, xi: 2 }) {
            let mut row = vec![Rational::zero(); m.columns.len()];
            for s in expand_all(&t) {
                row[m.columns.binary_search(&s).unwrap()] += Rational::from_integer(1.into());
            }
            rows.push(row);
        }
        let all = RationalMatrix::from_rows(m.columns.len(), rows).rank();
        assert_eq!(single, all);
        assert!(single <= m.rows.len());
    }
}
