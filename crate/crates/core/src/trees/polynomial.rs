use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::TreeMonomial;
use crate::arith::{format_rational, Rational};
use crate::error::Result;

/// Exact rational combination of tree monomials sharing arity, degree and
/// weight. Zero coefficients are never stored; iteration follows the
/// canonical monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreePolynomial {
    terms: BTreeMap<TreeMonomial, Rational>,
}

impl TreePolynomial {
    pub fn zero() -> Self {
        TreePolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(t: TreeMonomial) -> Self {
        let mut p = Self::zero();
        p.add_term(t, Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TreeMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &TreeMonomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, t: &TreeMonomial) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(arity, degree, weight)` of the terms, `None` when zero.
    pub fn grading(&self) -> Option<(usize, usize, usize)> {
        self.terms
            .keys()
            .next()
            .map(|t| (t.arity(), t.degree(), t.weight()))
    }

    pub fn add_term(&mut self, t: TreeMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some(g) = self.grading() {
            assert_eq!(
                g,
                (t.arity(), t.degree(), t.weight()),
                "inhomogeneous term {t}"
            );
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &TreePolynomial) {
        for (t, c) in other.iter() {
            self.add_term(t.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &TreePolynomial) -> TreePolynomial {
        let mut out = self.clone();
        for (t, c) in other.iter() {
            out.add_term(t.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> TreePolynomial {
        if c.is_zero() {
            return Self::zero();
        }
        TreePolynomial {
            terms: self.terms.iter().map(|(t, a)| (t.clone(), a * c)).collect(),
        }
    }

    /// Bilinear extension of [`TreeMonomial::graft`], Koszul signs included.
    pub fn graft(&self, slot: usize, other: &TreePolynomial) -> Result<TreePolynomial> {
        let mut out = TreePolynomial::zero();
        for (f, a) in self.iter() {
            for (g, b) in other.iter() {
                let (t, sign) = f.graft(slot, g)?;
                out.add_term(t, a * b * Rational::from_integer(sign.into()));
            }
        }
        Ok(out)
    }

    /// Largest absolute coefficient, zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl FromIterator<(TreeMonomial, Rational)> for TreePolynomial {
    fn from_iter<I: IntoIterator<Item = (TreeMonomial, Rational)>>(iter: I) -> Self {
        let mut p = TreePolynomial::zero();
        for (t, c) in iter {
            p.add_term(t, c);
        }
        p
    }
}

impl fmt::Display for TreePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", format_rational(c), t)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn cancellation_removes_terms() {
        let t = TreeMonomial::mu_corolla(2);
        let mut p = TreePolynomial::monomial(t.clone());
        p.add_term(t.clone(), rat(-1, 1));
        assert!(p.is_zero());
        p.add_term(t.clone(), rat(0, 1));
        assert!(p.is_zero());
    }

    #[test]
    #[should_panic(expected = "inhomogeneous")]
    fn homogeneity_enforced() {
        let mut p = TreePolynomial::monomial(TreeMonomial::mu_corolla(2));
        p.add_term(TreeMonomial::xi_corolla(2), rat(1, 1));
    }
}
