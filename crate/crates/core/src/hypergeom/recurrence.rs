//! Linear recurrences with polynomial coefficients.

use std::ops::RangeInclusive;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{as_text, quadratic_roots_exact, Integer, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::linalg::integer_nullspace;

/// `s_0(n) x_n - s_1(n) x_(n-1) + s_2(n) x_(n-2) - ... = 0`: the `i`-th
/// coefficient enters with sign `(-1)^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    coeffs: Vec<UniPoly>,
}

impl Recurrence {
    pub fn new(coeffs: Vec<UniPoly>) -> Self {
        assert!(coeffs.len() >= 2, "order at least one");
        Recurrence { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest coefficient degree.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(UniPoly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &UniPoly {
        &self.coeffs[i]
    }

    /// Left side at `n`, reading `x[n - i]`.
    pub fn residual_at(&self, n: usize, x: &[Rational]) -> Rational {
        let nn = Rational::from_integer(n.into());
        let mut acc = Rational::zero();
        for (i, s) in self.coeffs.iter().enumerate() {
            let term = s.eval(&nn) * &x[n - i];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// Runs the recurrence forward from `initial` up to index `upto`.
    pub fn extend(&self, initial: &[Rational], upto: usize) -> Result<Vec<Rational>> {
        let k = self.order();
        assert!(initial.len() >= k);
        let mut x = initial.to_vec();
        while x.len() <= upto {
            let n = x.len();
            let nn = Rational::from_integer(n.into());
            let lead = self.coeffs[0].eval(&nn);
            if lead.is_zero() {
                return Err(Error::DivisionByZero(format!(
                    "leading coefficient vanishes at n = {n}"
                )));
            }
            let mut acc = Rational::zero();
            for i in 1..=k {
                let term = self.coeffs[i].eval(&nn) * &x[n - i];
                if i % 2 == 0 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            x.push(acc / lead);
        }
        Ok(x)
    }

    /// `sum_i (-1)^i alpha_i t^(k-i)` where `alpha_i` is the coefficient of
    /// `n^d` in `s_i` and `d` the common degree.
    pub fn characteristic_polynomial(&self) -> UniPoly {
        let d = self.degree();
        let k = self.order();
        let mut c = vec![Rational::zero(); k + 1];
        for (i, s) in self.coeffs.iter().enumerate() {
            let a = s.coeff(d);
            c[k - i] = if i % 2 == 0 { a } else { -a };
        }
        UniPoly::new(c)
    }

    /// Copy with `delta` added to the coefficient of `n^power` in `s_i`.
    pub fn perturbed(&self, i: usize, power: usize, delta: i64) -> Recurrence {
        let mut coeffs = self.coeffs.clone();
        let bump = UniPoly::monomial(Rational::from_integer(delta.into()), power);
        coeffs[i] = &coeffs[i] + &bump;
        Recurrence { coeffs }
    }

    /// Same solution space up to a factor at each `n`:
    /// `s_0 g_i = g_0 s_i` for every `i`.
    pub fn proportional_to(&self, other: &Recurrence) -> bool {
        self.order() == other.order()
            && !self.coeffs[0].is_zero()
            && (1..=self.order())
                .all(|i| &self.coeffs[0] * &other.coeffs[i] == &other.coeffs[0] * &self.coeffs[i])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    #[serde(serialize_with = "as_text::rational")]
    pub max_abs: Rational,
    /// Indices where the recurrence fails.
    pub nonzero_at: Vec<usize>,
}

impl ResidualReport {
    pub fn is_zero(&self) -> bool {
        self.nonzero_at.is_empty()
    }
}

pub fn residual_check(
    r: &Recurrence,
    values: &[Rational],
    range: RangeInclusive<usize>,
) -> ResidualReport {
    let mut max_abs = Rational::zero();
    let mut nonzero_at = Vec::new();
    for n in range {
        let res = r.residual_at(n, values).abs();
        if !res.is_zero() {
            nonzero_at.push(n);
            if res > max_abs {
                max_abs = res;
            }
        }
    }
    ResidualReport {
        max_abs,
        nonzero_at,
    }
}

/// Finds a recurrence of the given order and coefficient degree annihilating
/// every supplied term, by an exact nullspace computation. The result is
/// scaled to coprime integer coefficients with `s_0` having positive leading
/// coefficient.
pub fn guess_recurrence(values: &[Rational], order: usize, degree: usize) -> Option<Recurrence> {
    let unknowns = (order + 1) * (degree + 1);
    let margin = 8;
    if values.len() < order + unknowns + margin {
        return None;
    }
    let rows_wanted = unknowns + margin;
    let rows: Vec<Vec<Integer>> = (order..order + rows_wanted)
        .map(|n| {
            let den = (0..=order).fold(Integer::one(), |acc, i| acc.lcm(values[n - i].denom()));
            let mut row = Vec::with_capacity(unknowns);
            for i in 0..=order {
                let x = &values[n - i];
                let mut x = x.numer() * (&den / x.denom());
                if i % 2 == 1 {
                    x = -x;
                }
                for _ in 0..=degree {
                    row.push(x.clone());
                    x *= n;
                }
            }
            row
        })
        .collect();
    let kernel: Vec<Vec<Rational>> = integer_nullspace(rows, unknowns)
        .into_iter()
        .map(|v| v.into_iter().map(Rational::from_integer).collect())
        .collect();
    for v in kernel {
        let coeffs: Vec<UniPoly> = v
            .chunks(degree + 1)
            .map(|c| UniPoly::new(c.to_vec()))
            .collect();
        let r = normalize(Recurrence::new(coeffs));
        if r.coeffs[0].is_zero() {
            continue;
        }
        if residual_check(&r, values, order..=values.len() - 1).is_zero() {
            return Some(r);
        }
    }
    None
}

/// Smallest coefficient degree up to `max_degree` admitting a recurrence of
/// the given order.
pub fn guess_minimal(
    values: &[Rational],
    order: usize,
    max_degree: usize,
) -> Option<(usize, Recurrence)> {
    (0..=max_degree).find_map(|d| guess_recurrence(values, order, d).map(|r| (d, r)))
}

fn normalize(r: Recurrence) -> Recurrence {
    let all: Vec<Rational> = r
        .coeffs
        .iter()
        .flat_map(|p| p.coeffs().iter().cloned())
        .collect();
    let Some(scale) = common_scale(&all) else {
        return r;
    };
    let sign = match r.coeffs[0].leading() {
        Some(l) if l.is_negative() => -Rational::one(),
        _ => Rational::one(),
    };
    let factor = scale * sign;
    Recurrence {
        coeffs: r.coeffs.iter().map(|p| p.scale(&factor)).collect(),
    }
}

/// Positive `c` making every entry of `c * v` an integer with content one.
fn common_scale(v: &[Rational]) -> Option<Rational> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let den = v.iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
    let content = v
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .fold(Integer::zero(), |acc, x| acc.gcd(&x));
    Some(Rational::new(den, content))
}

/// Both characteristic roots of an order-2 recurrence, ascending.
pub fn char_roots(r: &Recurrence) -> Result<(Rational, Rational)> {
    if r.order() != 2 {
        return Err(Error::Verification(format!("order {} is not 2", r.order())));
    }
    let chi = r.characteristic_polynomial().primitive();
    let c = chi
        .integer_coeffs()
        .expect("primitive polynomial has integer coefficients");
    quadratic_roots_exact(&c[2], &c[1], &c[0])
}
