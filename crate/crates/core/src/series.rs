//! Truncated power series over the rationals.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{as_text, format_rational, parse_rational, Integer, Rational};
use crate::error::{Error, Result};

/// `c_0 + c_1 t + ... + c_N t^N`, exact modulo `t^(N+1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates `coeffs` to order `order`.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![], order)
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
            order,
        )
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational)>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            if e <= order {
                s.coeffs[e] += c;
            }
        }
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Self::from_terms([(1, Rational::one())], order)
    }

    /// `t - t^n + t^(2n-1)`.
    pub fn koszul_dual_trinomial(n: usize, order: usize) -> Self {
        Self::from_terms(
            [
                (1, Rational::one()),
                (n, -Rational::one()),
                (2 * n - 1, Rational::one()),
            ],
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn support(&self) -> Vec<(usize, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            (0..=n)
                .map(|k| &self.coeffs[k] + &other.coeffs[k])
                .collect(),
            n,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            (0..=n)
                .map(|k| &self.coeffs[k] - &other.coeffs[k])
                .collect(),
            n,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Product truncated at the smaller order, convolved over a common
    /// denominator and reduced once per coefficient.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let (a, da) = integer_form(&self.coeffs[..=n]);
        let (b, db) = integer_form(&other.coeffs[..=n]);
        let (sparse, dense) = if a.iter().filter(|c| !c.is_zero()).count()
            <= b.iter().filter(|c| !c.is_zero()).count()
        {
            (&a, &b)
        } else {
            (&b, &a)
        };
        let mut out = vec![Integer::zero(); n + 1];
        for (i, x) in sparse.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in dense[..=n - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        let den = da * db;
        Self {
            coeffs: out
                .into_iter()
                .map(|c| Rational::new(c, den.clone()))
                .collect(),
        }
    }

    /// `1/self`; needs an invertible constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let support: Vec<(usize, &Rational)> =
            self.support().into_iter().filter(|(i, _)| *i > 0).collect();
        let mut out: Vec<Rational> = vec![inv0.clone()];
        for k in 1..=self.order() {
            let mut acc = Rational::zero();
            for &(i, c) in &support {
                if i > k {
                    break;
                }
                acc += c * &out[k - i];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let coeffs = (1..=n)
            .map(|k| &self.coeffs[k] * Rational::from_integer(k.into()))
            .collect();
        Self::new(coeffs, n.saturating_sub(1))
    }

    /// `self^alpha` for a series with nonzero constant term, by the
    /// power recurrence `m c_0 P_m = sum_j ((alpha+1) j - m) c_j P_(m-j)`.
    pub fn power(&self, alpha: i64, order: usize) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let (psi, den) = integer_form(&self.coeffs[..=order.min(self.order())]);
        let q = power_numerators(&psi, alpha, order);
        let c = Rational::from_integer(psi[0].clone());
        let scale = rational_pow(&Rational::from_integer(den), -alpha);
        let mut fact = Integer::one();
        let coeffs = q
            .into_iter()
            .enumerate()
            .map(|(m, qm)| {
                if m > 0 {
                    fact *= m;
                }
                Rational::new(qm, fact.clone()) * rational_pow(&c, alpha - m as i64) * &scale
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// First strictly negative coefficient.
    pub fn scan_negative(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.is_negative())
    }

    /// One `"exponent coefficient"` line per nonzero term.
    pub fn to_text(&self) -> String {
        self.support()
            .into_iter()
            .map(|(e, c)| format!("{e} {}\n", format_rational(c)))
            .collect()
    }

    /// Reads the line format of [`to_text`](Self::to_text); `#` starts a
    /// comment. Without an explicit order the largest exponent is used.
    pub fn parse(text: &str, order: Option<usize>) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(e), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::MalformedSeries(format!(
                    "line {}: expected \"exponent coefficient\"",
                    lineno + 1
                )));
            };
            let e: usize = e.parse().map_err(|_| {
                Error::MalformedSeries(format!("line {}: bad exponent {e:?}", lineno + 1))
            })?;
            terms.push((e, parse_rational(c)?));
        }
        let order = order.unwrap_or_else(|| terms.iter().map(|t| t.0).max().unwrap_or(0));
        Ok(Self::from_terms(terms, order))
    }

    /// Parses a comma separated coefficient list `c0,c1,...`.
    pub fn parse_list(text: &str, order: Option<usize>) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        let order = order.unwrap_or(coeffs.len().saturating_sub(1));
        Ok(Self::new(coeffs, order))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.support() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag_s = format_rational(&mag);
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag_s}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag_s}t")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{mag_s}t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn rational_pow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), e.unsigned_abs() as usize)
    }
}

/// For an integer series `psi` with `c = psi_0 != 0`, integers `Q_m` with
/// `[t^m] psi^alpha = Q_m c^(alpha-m) / m!`. They satisfy
/// `Q_m = sum_j ((alpha+1) j - m) psi_j c^(j-1) (m-1)!/(m-j)! Q_(m-j)`.
fn power_numerators(psi: &[Integer], alpha: i64, order: usize) -> Vec<Integer> {
    let c = &psi[0];
    let support: Vec<(usize, &Integer)> = psi
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, x)| !x.is_zero())
        .collect();
    let c_pows: Vec<Integer> = std::iter::successors(Some(Integer::one()), |p| Some(p * c))
        .take(support.last().map_or(1, |s| s.0))
        .collect();
    let mut q = vec![Integer::one()];
    for m in 1..=order {
        let mut acc = Integer::zero();
        let mut falling = Integer::one();
        let mut last_j = 1;
        for &(j, x) in &support {
            if j > m {
                break;
            }
            // (m-1)!/(m-j)! = (m-1)(m-2)...(m-j+1)
            for i in last_j..j {
                falling *= m - i;
            }
            last_j = j;
            let w = (alpha + 1) * j as i64 - m as i64;
            if w != 0 {
                acc += x * &c_pows[j - 1] * &falling * &q[m - j] * w;
            }
        }
        q.push(acc);
    }
    q
}

/// Numerators over the least common denominator.
fn integer_form(c: &[Rational]) -> (Vec<Integer>, Integer) {
    let den = c.iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
    let nums = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

/// `g(f(t))` by Horner's rule, truncated at the smaller order.
pub fn compose(g: &TruncatedSeries, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !f.coeffs[0].is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let n = g.order().min(f.order());
    let f = f.truncate(n);
    let top = (0..=n).rev().find(|&k| !g.coeffs[k].is_zero());
    let Some(top) = top else {
        return Ok(TruncatedSeries::zero(n));
    };
    let mut acc = TruncatedSeries::from_terms([(0, g.coeffs[top].clone())], n);
    for k in (0..top).rev() {
        acc = acc.mul(&f);
        acc.coeffs[0] += &g.coeffs[k];
    }
    Ok(acc)
}

fn check_invertible(f: &TruncatedSeries) -> Result<()> {
    if !f.coeffs[0].is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if f.order() < 1 || f.coeffs[1].is_zero() {
        return Err(Error::NotInvertible);
    }
    Ok(())
}

/// Compositional inverse by `[t^k] f^<-1> = (1/k) [u^(k-1)] (u/f(u))^k`.
/// Each coefficient is extracted independently.
pub fn lagrange_invert(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_invertible(f)?;
    let n = f.order();
    // psi = f/u
    let psi = TruncatedSeries::new(f.coeffs[1..].to_vec(), n - 1);
    let tail: Vec<Rational> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let p = psi
                .power(-(k as i64), k - 1)
                .expect("psi has nonzero constant term");
            &p.coeffs[k - 1] / Rational::from_integer(k.into())
        })
        .collect();
    let mut coeffs = vec![Rational::zero()];
    coeffs.extend(tail);
    Ok(TruncatedSeries { coeffs })
}

/// Compositional inverse by Newton iteration `g <- g - (f(g) - t)/f'(g)`,
/// doubling the precision each round.
pub fn newton_invert(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_invertible(f)?;
    let n = f.order();
    let fp = f.derivative();
    let mut g = TruncatedSeries::from_terms([(1, f.coeffs[1].recip())], 1);
    let mut prec = 1;
    while prec < n {
        prec = (2 * prec).min(n);
        let g_ext = g.truncate(prec);
        let residual = compose(&f.truncate(prec), &g_ext)?.sub(&TruncatedSeries::t(prec));
        let slope = compose(&fp.truncate(prec), &g_ext)?.reciprocal()?;
        g = g_ext.sub(&residual.mul(&slope));
    }
    Ok(g.truncate(n))
}

/// `g_P(g_dual(t)) - t`; zero for a Koszul pair.
pub fn gk_residual(gp: &TruncatedSeries, gdual: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c = compose(gp, gdual)?;
    let n = c.order();
    Ok(c.sub(&TruncatedSeries::t(n)))
}

/// `g_E(t) = t - g_P^<-1>(t)`, the generator series of a minimal model.
pub fn minimal_model_generators(gp: &TruncatedSeries) -> Result<TruncatedSeries> {
    let inv = lagrange_invert(gp)?;
    Ok(TruncatedSeries::t(inv.order()).sub(&inv))
}

/// Gap in a generator series supported on exponents `w(n-1)+1`.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub n: usize,
    /// Coefficient of `t^(w(n-1)+1)` indexed by weight `w`.
    #[serde(serialize_with = "as_text::rationals")]
    pub coefficients: Vec<Rational>,
    #[serde(serialize_with = "as_text::rationals")]
    pub absolute: Vec<Rational>,
    /// First weight `q >= 2` with zero coefficient and nonzero at `q - 1`.
    pub q: Option<usize>,
    /// Run of zeros from `q`, counted inside the truncation.
    pub d: Option<usize>,
    /// Some nonzero coefficient follows the run within the truncation.
    pub nonzero_after: bool,
    /// A zero Euler characteristic only proves vanishing where generators
    /// sit in a single homological degree; that is known for weight 3.
    pub certified_zero_weights: Vec<usize>,
}

pub fn detect_gap(ge: &TruncatedSeries, n: usize) -> Result<GapReport> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    let step = n - 1;
    for (e, c) in ge.coeffs.iter().enumerate() {
        if !c.is_zero() && (e == 0 || (e - 1) % step != 0) {
            return Err(Error::ArityConstraint(e));
        }
    }
    let coefficients: Vec<Rational> = (0..)
        .map(|w| w * step + 1)
        .take_while(|&e| e <= ge.order())
        .map(|e| ge.coeff(e))
        .collect();
    let mut q = None;
    for w in 2..coefficients.len() {
        if coefficients[w].is_zero() && !coefficients[w - 1].is_zero() {
            q = Some(w);
            break;
        }
    }
    let (d, nonzero_after) = match q {
        Some(q) => {
            let run = coefficients[q..].iter().take_while(|c| c.is_zero()).count();
            (Some(run), q + run < coefficients.len())
        }
        None => (None, false),
    };
    let certified_zero_weights = match (q, d) {
        (Some(q), Some(d)) => (q..q + d).filter(|&w| w == 3).collect(),
        _ => vec![],
    };
    Ok(GapReport {
        n,
        absolute: coefficients.iter().map(|c| c.abs()).collect(),
        coefficients,
        q,
        d,
        nonzero_after,
        certified_zero_weights,
    })
}
