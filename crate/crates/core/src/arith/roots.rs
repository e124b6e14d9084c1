use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Integer, Rational, UniPoly};
use crate::error::{Error, Result};

/// Number of sign changes in a coefficient sequence, zeros skipped.
pub fn sign_variations<'a>(coeffs: impl IntoIterator<Item = &'a Rational>) -> usize {
    let mut last = Sign::NoSign;
    let mut count = 0;
    for c in coeffs {
        let s = c.numer().sign();
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Canonical Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<UniPoly>,
}

impl SturmSequence {
    pub fn polys(&self) -> &[UniPoly] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        let vals: Vec<Rational> = self.chain.iter().map(|p| p.eval(x)).collect();
        sign_variations(&vals)
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        sign_variations(self.chain.iter().filter_map(UniPoly::leading))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        let signed: Vec<Rational> = self
            .chain
            .iter()
            .filter_map(|p| {
                let l = p.leading()?;
                Some(if p.degree()? % 2 == 1 {
                    -l.clone()
                } else {
                    l.clone()
                })
            })
            .collect();
        sign_variations(&signed)
    }

    /// Distinct roots in the half-open interval `(a, b]`; requires the head
    /// of the chain not to vanish at `a`.
    pub fn count_in_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

/// Sturm chain `p0 = sqf(p)`, `p1 = p0'`, `p_{k+1} = -rem(p_{k-1}, p_k)`; each
/// entry is rescaled by a positive constant to a primitive integer polynomial.
pub fn sturm_sequence(p: &UniPoly) -> Result<SturmSequence> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p0 = p.squarefree_part().primitive();
    let mut chain = vec![p0.clone()];
    let p1 = p0.derivative().primitive();
    if !p1.is_zero() {
        chain.push(p1);
        loop {
            let k = chain.len();
            let (_, r) = chain[k - 2].div_rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push((-&r).primitive());
        }
    }
    Ok(SturmSequence { chain })
}

fn strip_root(p: &UniPoly, at: &Rational) -> UniPoly {
    let lin = UniPoly::new(vec![-at.clone(), Rational::from_integer(1.into())]);
    let mut q = p.clone();
    while !q.is_zero() && q.eval(at).is_zero() {
        q = q.div_rem(&lin).0;
    }
    q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootCountMethod {
    /// Sign variations of `p(x + bound)` were 0 or 1.
    Descartes,
    Sturm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RootCount {
    pub count: usize,
    pub method: RootCountMethod,
}

/// Distinct real roots strictly greater than `bound`.
pub fn count_real_roots_above(p: &UniPoly, bound: &Rational) -> Result<RootCount> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let shifted = p.shift(bound);
    let v = sign_variations(shifted.coeffs());
    if v <= 1 {
        return Ok(RootCount {
            count: v,
            method: RootCountMethod::Descartes,
        });
    }
    let q = strip_root(&p.squarefree_part(), bound);
    if q.degree() == Some(0) {
        return Ok(RootCount {
            count: 0,
            method: RootCountMethod::Sturm,
        });
    }
    let s = sturm_sequence(&q)?;
    let count = s
        .variations_at(bound)
        .saturating_sub(s.variations_at_pos_inf());
    Ok(RootCount {
        count,
        method: RootCountMethod::Sturm,
    })
}

/// Distinct real roots in the open interval `(a, b)`, `a < b`.
pub fn count_real_roots_in(p: &UniPoly, a: &Rational, b: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a >= b {
        return Ok(0);
    }
    let q = strip_root(&strip_root(&p.squarefree_part(), a), b);
    if q.degree() == Some(0) {
        return Ok(0);
    }
    let s = sturm_sequence(&q)?;
    Ok(s.count_in_half_open(a, b))
}

/// Both roots of `a x^2 + b x + c` in ascending order when they are rational.
pub fn quadratic_roots_exact(
    a: &Integer,
    b: &Integer,
    c: &Integer,
) -> Result<(Rational, Rational)> {
    if a.is_zero() {
        return Err(Error::DegenerateQuadratic);
    }
    let disc: BigInt = b * b - BigInt::from(4) * a * c;
    if disc.is_negative() {
        return Err(Error::IrrationalRoots(disc.to_string()));
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return Err(Error::IrrationalRoots(disc.to_string()));
    }
    let two_a = BigInt::from(2) * a;
    let r1 = BigRational::new(-b - &s, two_a.clone());
    let r2 = BigRational::new(-b + &s, two_a);
    Ok(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}
