//! Coefficients of the compositional inverse of `t - t^8 + t^15`, the
//! three-term recurrence they satisfy, and a positivity certificate.
//!
//! The inverse is `t h(t^7)` with `h = sum a_n s^n`.

mod certificate;
mod recurrence;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{as_text, binomial, Integer, Rational, UniPoly};
use crate::error::{Error, Result};
use crate::series::{lagrange_invert, TruncatedSeries};

pub use certificate::{
    positivity_certificate, positivity_certificate_with, CertificateStep, PositivityReport,
    StepStatus,
};
pub use recurrence::{
    char_roots, guess_minimal, guess_recurrence, residual_check, Recurrence, ResidualReport,
};

/// `a_n = 1/(7n+1) sum_k (-1)^k C(7n+k, k) C(7n+1, n-3k)`.
pub fn a_closed(n: usize) -> Rational {
    let m = 7 * n as u64;
    let mut sum = Integer::zero();
    for k in 0..=n / 3 {
        let term = binomial(m + k as u64, k as u64) * binomial(m + 1, (n - 3 * k) as u64);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Rational::new(sum, Integer::from(m + 1))
}

/// `a_0 .. a_upto` read off the inverse series.
pub fn a_from_inversion(upto: usize) -> Result<Vec<Rational>> {
    let order = 7 * upto + 1;
    let inv = lagrange_invert(&TruncatedSeries::koszul_dual_trinomial(8, order))?;
    Ok((0..=upto).map(|n| inv.coeff(7 * n + 1)).collect())
}

fn falling(a: i64, b: i64, count: i64) -> UniPoly {
    // prod_{k < count} (a n + b - k)
    UniPoly::product_of_linear((0..count).map(|k| (a, b - k)))
}

fn poly(coeffs_high_first: &[&str]) -> UniPoly {
    let mut c: Vec<Rational> = coeffs_high_first
        .iter()
        .map(|s| Rational::from_integer(s.parse::<Integer>().expect("integer literal")))
        .collect();
    c.reverse();
    UniPoly::new(c)
}

/// The order-2 recurrence for `a_n`, kept in the factored form
/// `s_0 = 2187 prod_{k=0}^{13} (7n+1-k) p_0(n)`,
/// `s_1 = prod_{k=0}^{6} (7n-6-k) p_1(n)`,
/// `s_2 = 15 (15n-14) prod_{k=0}^{12} (15n-16-k) p_2(n)`.
pub fn three_term_recurrence() -> Recurrence {
    let p0 = poly(&[
        "215870371",
        "-1295222226",
        "2527684225",
        "-658627050",
        "-3846578936",
        "4812446376",
        "-1760658480",
    ]);
    let p1 = poly(&[
        "13362081892033179314",
        "-126939777974315203483",
        "485734175892096120376",
        "-848711700458546819207",
        "123881005609280551032",
        "2596574853470043847011",
        "-6061259307194791053272",
        "7497470293244974003099",
        "-5912167336650049878706",
        "3092269284168816801572",
        "-1062333018859963548504",
        "228076143949070673408",
        "-27319025166066426240",
        "1361946602938521600",
    ]);
    let p2 = poly(&[
        "215870371",
        "0",
        "-710371340",
        "817295010",
        "-370521431",
        "73255350",
        "-5085720",
    ]);
    let s0 = &(&falling(7, 1, 14) * &p0) * &UniPoly::constant(Rational::from_integer(2187.into()));
    let s1 = &falling(7, -6, 7) * &p1;
    let s2 = &(&(&falling(15, -16, 13) * &UniPoly::linear(15, -14)) * &p2)
        * &UniPoly::constant(Rational::from_integer(15.into()));
    Recurrence::new(vec![s0, s1, s2])
}

/// Expected characteristic polynomial of [`three_term_recurrence`].
pub fn expected_characteristic() -> UniPoly {
    poly(&[
        "320194878522045287813073",
        "-11004249007610680591789502",
        "94528316575149444580078125",
    ])
}

/// `5^15 / 21^7` and `3^15 / 7^7`.
pub fn expected_roots() -> (Rational, Rational) {
    (
        Rational::new(30517578125u64.into(), 1801088541u64.into()),
        Rational::new(14348907u64.into(), 823543u64.into()),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Initial,
    ClosedForm,
    Recurrence,
    Inversion,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceTable {
    pub name: String,
    #[serde(serialize_with = "as_text::rationals")]
    pub values: Vec<Rational>,
    pub provenance: Vec<Provenance>,
}

impl SequenceTable {
    pub fn a_closed(upto: usize) -> Self {
        SequenceTable {
            name: "a".into(),
            values: (0..=upto).map(a_closed).collect(),
            provenance: vec![Provenance::ClosedForm; upto + 1],
        }
    }

    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `b_0 = 0`, `b_1 = 1`, continued by the recurrence.
pub fn b_table(r: &Recurrence, upto: usize) -> Result<SequenceTable> {
    let values = r.extend(&[Rational::zero(), Rational::one()], upto.max(1))?;
    let mut provenance = vec![Provenance::Initial; 2];
    provenance.resize(values.len(), Provenance::Recurrence);
    Ok(SequenceTable {
        name: "b".into(),
        values,
        provenance,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusReport {
    /// `1 - 8u + 15u^2 = (1 - 3u)(1 - 5u)` with `u = t^7`.
    pub derivative_factors: bool,
    /// `u` at the first critical point.
    #[serde(serialize_with = "as_text::rational")]
    pub critical_u: Rational,
    /// `(f(t_0)/t_0)` at the critical point, `1 - u + u^2`.
    #[serde(serialize_with = "as_text::rational")]
    pub critical_ratio: Rational,
    /// `f(t_0)^7 = u (1 - u + u^2)^7`.
    #[serde(serialize_with = "as_text::rational")]
    pub radius: Rational,
    pub radius_is_21_7_over_5_15: bool,
    #[serde(serialize_with = "as_text::rational")]
    pub lambda_minus_times_radius: Rational,
    pub passed: bool,
}

/// Radius of convergence of `h` from the critical point of `t - t^8 + t^15`.
pub fn radius_facts() -> RadiusReport {
    // f'(t) = 1 - 8t^7 + 15t^14 as a polynomial in u = t^7
    let derivative = UniPoly::from_ints([1, -8, 15]);
    let derivative_factors = derivative == &UniPoly::linear(-3, 1) * &UniPoly::linear(-5, 1);
    let critical_u = Rational::new(1.into(), 5.into());
    let critical_ratio = UniPoly::from_ints([1, -1, 1]).eval(&critical_u);
    let radius = &critical_u * num_traits::pow(critical_ratio.clone(), 7);
    let expected = Rational::new(Integer::from(21u64).pow(7), Integer::from(5u64).pow(15));
    let radius_is_21_7_over_5_15 = radius == expected;
    let lambda_minus_times_radius = &expected_roots().0 * &radius;
    RadiusReport {
        passed: derivative_factors
            && radius_is_21_7_over_5_15
            && lambda_minus_times_radius.is_one(),
        derivative_factors,
        critical_u,
        critical_ratio,
        radius,
        radius_is_21_7_over_5_15,
        lambda_minus_times_radius,
    }
}

/// Validates that `values` has what a certificate over `1..=n` needs.
fn need_terms(values: &[Rational], n: usize) -> Result<()> {
    if values.len() <= n {
        return Err(Error::NotEnoughTerms {
            needed: n + 1,
            have: values.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use num_traits::Signed;

    #[test]
    fn closed_form_values() {
        let want = [1, 1, 7, 69, 790, 9842, 129459];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(a_closed(n), rat(*w, 1));
        }
        for n in 0..=300 {
            assert!(a_closed(n).is_integer(), "a_{n}");
        }
    }

    #[test]
    fn closed_form_matches_inversion() {
        let inv = a_from_inversion(50).unwrap();
        for (n, v) in inv.iter().enumerate() {
            assert_eq!(*v, a_closed(n), "n = {n}");
        }
        assert_eq!(inv[3], rat(69, 1));
        assert_eq!(inv[4], rat(790, 1));
    }

    #[test]
    fn recurrence_shape() {
        let r = three_term_recurrence();
        for s in r.coeffs() {
            assert_eq!(s.degree(), Some(20));
        }
        let lead = Integer::from(2187) * Integer::from(7).pow(14) * Integer::from(215870371);
        assert_eq!(r.coeff(0).leading().unwrap(), &Rational::from_integer(lead));
        assert_eq!(r.characteristic_polynomial(), expected_characteristic());
        let (lo, hi) = char_roots(&r).unwrap();
        assert_eq!((lo.clone(), hi.clone()), expected_roots());
        assert_eq!(
            lo,
            Rational::new(Integer::from(5).pow(15), Integer::from(21).pow(7))
        );
        assert_eq!(
            hi,
            Rational::new(Integer::from(3).pow(15), Integer::from(7).pow(7))
        );
        assert_ne!(lo.abs(), hi.abs());
        let chi = expected_characteristic();
        assert!(chi.eval(&lo).is_zero() && chi.eval(&hi).is_zero());
    }

    #[test]
    fn recurrence_annihilates_a() {
        let r = three_term_recurrence();
        let a = SequenceTable::a_closed(300);
        assert!(residual_check(&r, &a.values, 2..=300).is_zero());
        let mut bad = a.values.clone();
        bad[10] += rat(1, 1);
        assert_eq!(
            residual_check(&r, &bad, 2..=300).nonzero_at,
            vec![10, 11, 12]
        );
        assert!(!residual_check(&r.perturbed(1, 3, 1), &a.values, 2..=300).is_zero());
    }

    #[test]
    fn guessed_recurrence_agrees() {
        let a = SequenceTable::a_closed(120);
        let g = guess_recurrence(&a.values, 2, 20).unwrap();
        assert!(g.proportional_to(&three_term_recurrence()));
        assert_eq!(char_roots(&g).unwrap(), expected_roots());
        assert!(residual_check(&g, &SequenceTable::a_closed(300).values, 2..=300).is_zero());
        assert!(guess_recurrence(&a.values, 2, 19).is_none());
        assert!(guess_recurrence(&a.values, 1, 40).is_none());
    }

    #[test]
    fn b_sequence() {
        let r = three_term_recurrence();
        let b = b_table(&r, 300).unwrap();
        assert_eq!(b.values[..2], [rat(0, 1), rat(1, 1)]);
        let two = rat(2, 1);
        assert_eq!(b.values[2], r.coeff(1).eval(&two) / r.coeff(0).eval(&two));
        assert!(residual_check(&r, &b.values, 2..=300).is_zero());
        let c = &b.values[50] / &b.values[49];
        assert!(crate::arith::within(
            &c,
            &crate::arith::decimal("16.9452857"),
            &crate::arith::ten_pow_neg(6)
        ));
        assert_eq!(b.provenance[7], Provenance::Recurrence);
    }

    #[test]
    fn radius() {
        let r = radius_facts();
        assert!(r.passed, "{r:?}");
        assert_eq!(
            r.radius,
            Rational::new(1801088541u64.into(), 30517578125u64.into())
        );
    }
}
