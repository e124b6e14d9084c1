use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Integer, Rational};

/// Dense univariate polynomial with rational coefficients, lowest degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::from_ints([0, 1])
    }

    /// `a*x + b` with integer coefficients.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_ints([b, a])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut v = vec![Rational::zero(); degree + 1];
        v[degree] = c;
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&BigRational::from_integer(x.into()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * BigRational::from_integer(d.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(x + c)`, by repeated synthetic division.
    pub fn shift(&self, c: &Rational) -> Self {
        let mut a = self.coeffs.clone();
        let len = a.len();
        for i in 0..len {
            for j in (i..len.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Self::new(a)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &q * dc;
                    rem[k + j] -= t;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Scales to a primitive integer polynomial with positive content
    /// factor, so signs at every point are unchanged.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let den_lcm = self
            .coeffs
            .iter()
            .fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(Integer::zero(), |acc, c| acc.gcd(c));
        UniPoly::from_ints(ints.into_iter().map(|c| c / &g))
    }

    /// Integer coefficients when all denominators are 1.
    pub fn integer_coeffs(&self) -> Option<Vec<Integer>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        match a.leading() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    /// `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Product of `(a*x + b)` factors.
    pub fn product_of_linear(factors: impl IntoIterator<Item = (i64, i64)>) -> UniPoly {
        factors
            .into_iter()
            .fold(UniPoly::from_ints([1]), |acc, (a, b)| {
                &acc * &UniPoly::linear(a, b)
            })
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(UniPoly::from_ints([1]), |acc, _| &acc * self)
    }

    /// `p(x^k)`.
    pub fn inflate(&self, k: usize) -> UniPoly {
        let mut v = vec![Rational::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (d, c) in self.coeffs.iter().enumerate() {
            v[d * k] = c.clone();
        }
        UniPoly::new(v)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let body = super::format_rational(&a);
            match d {
                0 => write!(f, "{body}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{body}*")?;
                    }
                    if d == 1 {
                        write!(f, "n")?
                    } else {
                        write!(f, "n^{d}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    #[test]
    fn eval_examples() {
        let p = UniPoly::from_ints([-1, 0, 1]);
        assert_eq!(p.eval(&rat(3, 1)), rat(8, 1));
        assert_eq!(UniPoly::zero().eval(&rat(7, 3)), rat(0, 1));
        assert_eq!(p.eval(&rat(1, 2)), rat(-3, 4));
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = UniPoly::from_ints([5, -3, 0, 2, 1]);
        let c = rat(-7, 3);
        let q = p.shift(&c);
        for x in -3..4 {
            let x = rat_int(x);
            assert_eq!(q.eval(&x), p.eval(&(&x + &c)));
        }
    }

    #[test]
    fn division_identity() {
        let a = UniPoly::from_ints([3, 0, -2, 1, 4]);
        let b = UniPoly::from_ints([1, 1, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn squarefree_drops_multiplicity() {
        let p = UniPoly::product_of_linear([(1, -1), (1, -1), (1, 2)]);
        let s = p.squarefree_part();
        assert_eq!(s.degree(), Some(2));
        assert!(s.eval(&rat_int(1)).is_zero());
        assert!(s.eval(&rat_int(-2)).is_zero());
    }

    #[test]
    fn primitive_keeps_sign() {
        let p = UniPoly::new(vec![rat(1, 2), rat(-3, 4)]);
        let q = p.primitive();
        assert_eq!(q, UniPoly::from_ints([2, -3]));
    }

    #[test]
    fn display() {
        let p = UniPoly::from_ints([-1, 0, 1]);
        assert_eq!(p.to_string(), "n^2 - 1");
    }
}
