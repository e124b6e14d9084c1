//! Exact linear algebra: dense Gauss-Jordan over the rationals and sparse
//! row reduction over a prime field.

use num_traits::{One, Zero};

use crate::arith::{Integer, PrimeField, Rational};

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            cols,
            rows: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RationalMatrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.rows[r][c] = v;
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.rows[r][c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.rows[r]
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// Pivots are taken leftmost column first, topmost eligible row first.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = self.rows[r][c].recip();
            for x in self.rows[r][c..].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.rows[r][f].clone();
                }
                v
            })
            .collect()
    }
}

/// Kernel basis of an integer matrix by fraction-free Gauss-Jordan
/// elimination: every division is exact and entries stay integral. Each
/// vector has the common pivot value at its free column.
pub fn integer_nullspace(mut rows: Vec<Vec<Integer>>, cols: usize) -> Vec<Vec<Integer>> {
    let mut pivots = Vec::new();
    let mut prev = Integer::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        let d = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let v = &d * &row[j] - &f * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[c] = Integer::zero();
        }
        prev = d;
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Integer::zero(); cols];
            v[f] = prev.clone();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Outcome of solving `A x = b` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolve {
    pub rank_coefficient: usize,
    pub rank_augmented: usize,
    pub solution: Option<Vec<Rational>>,
}

/// Solves `A x = b`; the particular solution sets free variables to zero.
pub fn solve(a: &RationalMatrix, b: &[Rational]) -> LinearSolve {
    assert_eq!(a.nrows(), b.len());
    let cols = a.ncols();
    let rows = a
        .rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let mut aug = RationalMatrix::from_rows(cols + 1, rows);
    let pivots = aug.rref();
    let rank_augmented = pivots.len();
    let rank_coefficient = pivots.iter().filter(|&&p| p < cols).count();
    let solution = (rank_augmented == rank_coefficient).then(|| {
        let mut x = vec![Rational::zero(); cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.rows[r][cols].clone();
        }
        x
    });
    LinearSolve {
        rank_coefficient,
        rank_augmented,
        solution,
    }
}

/// Sparse matrix with small integer entries, rows sorted by column.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    /// Appends a row, merging repeated columns by addition.
    pub fn push_row(&mut self, mut entries: Vec<(u32, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, i64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!((c as usize) < self.ncols, "column {c} out of range");
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        self.rows.push(merged);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.nrows(), self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                m.set(r, c as usize, Rational::from_integer(v.into()));
            }
        }
        m
    }

    /// `row col value` triplets, zero based, one per line.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                out.push_str(&format!("{r} {c} {v}\n"));
            }
        }
        out
    }
}

/// Rank over `GF(p)` by row-by-row reduction against a table of pivot rows
/// keyed by leading column. Deterministic: rows are processed in order and
/// each row is reduced left to right.
pub fn rank_mod_p(m: &SparseMatrix, field: PrimeField) -> usize {
    let mut pivots: Vec<Option<Vec<(u32, u64)>>> = vec![None; m.ncols];
    let mut dense = vec![0u64; m.ncols];
    let mut rank = 0;
    for row in &m.rows {
        if row.is_empty() {
            continue;
        }
        for &(c, v) in row {
            dense[c as usize] = field.from_i64(v);
        }
        let mut c = row[0].0 as usize;
        let mut found = None;
        while c < m.ncols {
            if dense[c] != 0 {
                match &pivots[c] {
                    Some(prow) => {
                        let f = dense[c];
                        for &(j, pv) in prow {
                            let j = j as usize;
                            dense[j] = field.sub(dense[j], field.mul(f, pv));
                        }
                        debug_assert_eq!(dense[c], 0);
                    }
                    None => {
                        found = Some(c);
                        break;
                    }
                }
            }
            c += 1;
        }
        if let Some(lead) = found {
            let inv = field.inv(dense[lead]);
            let mut prow = Vec::new();
            for (j, x) in dense.iter_mut().enumerate().skip(lead) {
                if *x != 0 {
                    prow.push((j as u32, field.mul(*x, inv)));
                    *x = 0;
                }
            }
            pivots[lead] = Some(prow);
            rank += 1;
        } else {
            dense.iter_mut().for_each(|x| *x = 0);
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, DEFAULT_PRIMES};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows[0].len(),
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.nullspace();
        assert_eq!(ker.len(), 1);
        for r in 0..3 {
            let dot: Rational = a.row(r).iter().zip(&ker[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_feasible_and_infeasible() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let ok = solve(&a, &[rat(3, 1), rat(6, 1)]);
        assert_eq!(ok.solution, Some(vec![rat(3, 1), rat(0, 1)]));
        let bad = solve(&a, &[rat(3, 1), rat(7, 1)]);
        assert_eq!((bad.rank_coefficient, bad.rank_augmented), (1, 2));
        assert!(bad.solution.is_none());
    }

    #[test]
    fn fraction_free_kernel() {
        let rows: Vec<Vec<Integer>> = [[2, 4, 6, 1], [1, 3, 5, 0], [3, 7, 11, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| Integer::from(v)).collect())
            .collect();
        let ker = integer_nullspace(rows.clone(), 4);
        let rat_rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| Rational::from_integer(v.clone()))
                    .collect()
            })
            .collect();
        assert_eq!(
            ker.len(),
            RationalMatrix::from_rows(4, rat_rows).nullspace().len()
        );
        for v in &ker {
            assert!(v.iter().any(|x| !x.is_zero()));
            for r in &rows {
                assert!(r
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<Integer>()
                    .is_zero());
            }
        }
    }

    #[test]
    fn triplets() {
        let mut s = SparseMatrix::new(3);
        s.push_row(vec![(2, 1), (0, 4), (2, 1)]);
        assert_eq!(s.to_triplets(), "0 0 4\n0 2 2\n");
        s.push_row(vec![(1, 1), (1, -1)]);
        assert!(s.rows[1].is_empty());
    }

    proptest! {
        #[test]
        fn modular_rank_matches_rational_rank(
            rows in proptest::collection::vec(proptest::collection::vec((0u32..12, -3i64..4), 0..5), 1..14),
            which in 0usize..2,
        ) {
            let mut s = SparseMatrix::new(12);
            for r in rows {
                s.push_row(r);
            }
            let f = PrimeField::new(DEFAULT_PRIMES[which]).unwrap();
            prop_assert_eq!(rank_mod_p(&s, f), s.to_rational().rank());
        }
    }
}
