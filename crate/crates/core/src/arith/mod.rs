//! Exact integers, rationals, univariate polynomials, real-root counting and
//! prime-field residues.

mod field;
mod poly;
mod roots;

pub use field::{is_prime_u64, FieldElement, PrimeField, DEFAULT_PRIMES};
pub use poly::UniPoly;
pub use roots::{
    count_real_roots_above, count_real_roots_in, quadratic_roots_exact, sign_variations,
    sturm_sequence, RootCount, RootCountMethod, SturmSequence,
};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Integer {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<Integer>) -> Rational {
    BigRational::from_integer(v.into())
}

pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(Integer::one(), |acc, k| acc * k)
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::MalformedSeries(format!("cannot parse {s:?} as a rational"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"p/q"` text (just `"p"` for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for diagnostics; exact comparisons never go through this.
pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down by the same power of two before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Exact `|a - b| < tol`.
pub fn within(a: &Rational, b: &Rational, tol: &Rational) -> bool {
    (a - b).abs() < *tol
}

/// Exact decimal `10^-k` as a rational.
pub fn ten_pow_neg(k: u32) -> Rational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize))
}

/// Parses a decimal literal such as `"16.9452857"` exactly.
pub fn decimal(s: &str) -> Rational {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{whole}{frac}").parse().expect("decimal literal");
    let r = BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
    if neg {
        -r
    } else {
        r
    }
}

/// Largest power of `p` dividing `v` together with the cofactor (v != 0).
pub fn split_prime_power(v: &Integer, p: u64) -> (u32, Integer) {
    let p = BigInt::from(p);
    let mut rest = v.clone();
    let mut e = 0;
    while !rest.is_zero() && rest.is_multiple_of(&p) {
        rest /= &p;
        e += 1;
    }
    (e, rest)
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod as_text {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn option<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn integer<S: Serializer>(v: &super::Integer, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(16, 2), int(120));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(factorial(5), int(120));
        assert_eq!(factorial(0), int(1));
    }

    #[test]
    fn rational_text_round_trip() {
        let r = parse_rational("-77813/276830").unwrap();
        assert_eq!(format_rational(&r), "-77813/276830");
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn decimal_literal_is_exact() {
        assert_eq!(decimal("16.944"), rat(16944, 1000));
        assert_eq!(decimal("-0.5"), rat(-1, 2));
        assert_eq!(ten_pow_neg(2), rat(1, 100));
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = num_traits::pow(int(10), 500);
        let r = BigRational::new(big.clone() * 3, big);
        assert!((to_f64(&r) - 3.0).abs() < 1e-12);
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..500).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn rational_field_laws(x in small_rat(), y in small_rat()) {
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                let q = &(&x * &y) / &y;
                prop_assert_eq!(&q, &x);
                prop_assert!(num_integer::Integer::gcd(q.numer(), q.denom()).is_one());
                prop_assert!(q.denom().is_positive());
            }
        }
    }
}
