use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{
    b_table, char_roots, expected_characteristic, expected_roots, need_terms, radius_facts,
    residual_check, Recurrence, SequenceTable,
};
use crate::arith::{
    count_real_roots_above, decimal, format_rational, ten_pow_neg, to_f64, within, Rational,
    UniPoly,
};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateStep {
    pub index: usize,
    pub claim: String,
    pub method: String,
    /// Exact values, rationals as `"p/q"`.
    pub witnesses: BTreeMap<String, String>,
    pub status: StepStatus,
    pub counterexample: Option<String>,
}

impl CertificateStep {
    fn new(index: usize, claim: &str, method: &str) -> Self {
        CertificateStep {
            index,
            claim: claim.into(),
            method: method.into(),
            witnesses: BTreeMap::new(),
            status: StepStatus::Pass,
            counterexample: None,
        }
    }

    fn witness(&mut self, key: &str, value: impl ToString) {
        self.witnesses.insert(key.into(), value.to_string());
    }

    fn rational(&mut self, key: &str, value: &Rational) {
        self.witness(key, format_rational(value));
    }

    /// Records the first failure only.
    fn fail(&mut self, why: impl Into<String>) {
        if self.status == StepStatus::Pass {
            self.status = StepStatus::Fail;
            self.counterexample = Some(why.into());
        }
    }

    fn require(&mut self, ok: bool, why: impl FnOnce() -> String) {
        if !ok {
            self.fail(why());
        }
    }

    pub fn passed(&self) -> bool {
        self.status == StepStatus::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub terms: usize,
    /// Step 0 gates the recurrence itself; steps 1 to 9 follow the proof.
    pub steps: Vec<CertificateStep>,
    /// Every step passed.
    pub verdict: StepStatus,
    /// Steps 0 to 8: the finite checks plus positivity on `1..=terms`.
    pub finitary_verdict: StepStatus,
    /// Positivity for every `n` also uses the limit theorem for
    /// recurrences, which is not machine checked.
    pub universal_claim: String,
}

impl PositivityReport {
    pub fn step(&self, index: usize) -> &CertificateStep {
        &self.steps[index]
    }

    pub fn first_failure(&self) -> Option<&CertificateStep> {
        self.steps.iter().find(|s| !s.passed())
    }
}

pub fn positivity_certificate(terms: usize) -> Result<PositivityReport> {
    positivity_certificate_with(&super::three_term_recurrence(), terms)
}

/// Positivity of `a_1 .. a_terms` and every finite ingredient of the
/// comparison with `b_n`, run against the recurrence `r`.
pub fn positivity_certificate_with(r: &Recurrence, terms: usize) -> Result<PositivityReport> {
    let terms = terms.max(51);
    let upto = terms.max(60);
    let a = SequenceTable::a_closed(upto);
    need_terms(&a.values, upto)?;
    let mut steps = Vec::new();

    // 0: the recurrence annihilates a_n, and its leading data are the expected ones.
    let mut s = CertificateStep::new(
        0,
        "the recurrence annihilates a_n; characteristic polynomial and roots as expected",
        "exact residuals on 2..=N, coefficient comparison, rational quadratic roots",
    );
    let res = residual_check(r, &a.values, 2..=upto);
    s.rational("max_abs_residual", &res.max_abs);
    s.require(res.is_zero(), || {
        format!(
            "residual nonzero at n = {:?}",
            &res.nonzero_at[..res.nonzero_at.len().min(5)]
        )
    });
    let chi = r.characteristic_polynomial();
    s.witness("chi", &chi);
    s.require(chi == expected_characteristic(), || {
        format!("characteristic polynomial {chi}")
    });
    match char_roots(r) {
        Ok((lo, hi)) => {
            s.rational("lambda_minus", &lo);
            s.rational("lambda_plus", &hi);
            s.require((lo.clone(), hi.clone()) == expected_roots(), || {
                format!("roots {lo}, {hi}")
            });
        }
        Err(e) => s.fail(e.to_string()),
    }
    let radius = radius_facts();
    s.rational(
        "lambda_minus_times_radius",
        &radius.lambda_minus_times_radius,
    );
    s.require(radius.passed, || "radius identities fail".into());
    let gate = s.passed();
    steps.push(s);
    // every later step is about this recurrence
    if !gate {
        return Ok(finish(terms, steps));
    }

    let b = match b_table(r, upto) {
        Ok(b) => b,
        Err(e) => {
            let mut s = CertificateStep::new(1, "b_n is defined", "forward recurrence");
            s.fail(e.to_string());
            steps.push(s);
            return Ok(finish(terms, steps));
        }
    };
    let (lambda_minus, lambda_plus) = expected_roots();

    // 1
    let mut s = CertificateStep::new(1, "b_n > 0 for 0 < n < 50", "exact sign of each term");
    for n in 1..50 {
        s.require(b.values[n].is_positive(), || {
            format!("b_{n} = {}", format_rational(&b.values[n]))
        });
    }
    steps.push(s);

    // 2
    let mut s = CertificateStep::new(
        2,
        "C = b_50/b_49 satisfies 16.944 < C and C > lambda_minus",
        "exact comparison",
    );
    let c = &b.values[50] / &b.values[49];
    s.rational("C", &c);
    s.witness("C_approx", format!("{:.10}", to_f64(&c)));
    let expected = decimal("16.9452857");
    s.require(within(&c, &expected, &ten_pow_neg(6)), || {
        format!("C = {:.10} is not within 1e-6 of 16.9452857", to_f64(&c))
    });
    s.require(c > decimal("16.944"), || "C <= 16.944".into());
    s.require(decimal("16.944") > lambda_minus, || {
        "16.944 <= lambda_minus".into()
    });
    s.require(c > lambda_minus, || "C <= lambda_minus".into());
    steps.push(s);

    let two = Rational::from_integer(2.into());
    // 3
    let mut s = CertificateStep::new(
        3,
        "s_0 has no real root >= 2 and is positive there",
        "root count above 2, value at 2, sampled values",
    );
    root_free_from(&mut s, r.coeff(0), &two, "s_0");
    for n in 2..=upto {
        let v = r.coeff(0).eval_int(n as i64);
        s.require(v.is_positive(), || {
            format!("s_0({n}) = {}", format_rational(&v))
        });
    }
    steps.push(s);

    // 4
    let mut s = CertificateStep::new(4, "Q(n) = C^2 s_0 - C s_1 + s_2 < 0 for n >= 25, and b_n/b_(n-1) >= C for 50 <= n <= max(N, 60)", "leading sign, root count above 25, sign change on (24, 25), direct ratios");
    let q = &(&r.coeff(0).scale(&(&c * &c)) - &r.coeff(1).scale(&c)) + r.coeff(2);
    let lead = q.leading().cloned().unwrap_or_else(Rational::zero);
    s.witness("Q_leading_sign", if lead.is_negative() { "-" } else { "+" });
    s.require(lead.is_negative(), || {
        "leading coefficient of Q is not negative".into()
    });
    let qi = q.primitive();
    let twenty_five = Rational::from_integer(25.into());
    root_free_from(&mut s, &qi, &twenty_five, "Q");
    // a sign change on [24, 25] puts a root inside
    let (q24, q25) = (qi.eval_int(24), qi.eval_int(25));
    s.witness("Q_sign_at_24", if q24.is_positive() { "+" } else { "-" });
    s.witness("Q_sign_at_25", if q25.is_positive() { "+" } else { "-" });
    s.require((&q24 * &q25).is_negative(), || {
        "Q does not change sign on (24, 25)".into()
    });
    for n in 50..=upto {
        let ratio = &b.values[n] / &b.values[n - 1];
        s.require(ratio >= c, || {
            format!("b_{n}/b_{} = {:.10} < C", n - 1, to_f64(&ratio))
        });
    }
    steps.push(s);

    // 5
    let mut s = CertificateStep::new(
        5,
        "s_2 has no real root >= 2 and is positive for n >= 3",
        "root count above 2, value at 2, sampled values",
    );
    root_free_from(&mut s, r.coeff(2), &two, "s_2");
    for n in 3..=upto {
        let v = r.coeff(2).eval_int(n as i64);
        s.require(v.is_positive(), || {
            format!("s_2({n}) = {}", format_rational(&v))
        });
    }
    steps.push(s);

    let ratio = |n: usize| &a.values[n] / &b.values[n];
    // 6
    let mut s = CertificateStep::new(6, "a_2/b_2 - a_1/b_1 = -77813/276830", "exact arithmetic");
    let dec = ratio(2) - ratio(1);
    s.rational("decrement", &dec);
    s.require(dec == Rational::new((-77813).into(), 276830.into()), || {
        format!("decrement {}", format_rational(&dec))
    });
    s.require(dec.is_negative(), || {
        "initial decrement is not negative".into()
    });
    steps.push(s);

    // 7
    let mut s = CertificateStep::new(
        7,
        "telescoping identity for 3 <= n <= N; a_n/b_n strictly decreasing and positive",
        "exact identity at every n",
    );
    for n in 3..=terms {
        let nn = Rational::from_integer(n.into());
        let lhs = ratio(n) - ratio(n - 1);
        let factor =
            r.coeff(2).eval(&nn) * &b.values[n - 2] / (r.coeff(0).eval(&nn) * &b.values[n]);
        let rhs = factor * (ratio(n - 1) - ratio(n - 2));
        s.require(lhs == rhs, || format!("identity fails at n = {n}"));
        s.require(lhs.is_negative(), || {
            format!("a_n/b_n not decreasing at n = {n}")
        });
    }
    for n in 1..=terms {
        s.require(ratio(n).is_positive(), || format!("a_{n}/b_{n} <= 0"));
    }
    s.witness(
        "a_N_over_b_N_approx",
        format!("{:.6e}", to_f64(&ratio(terms))),
    );
    steps.push(s);

    // 8
    let mut s = CertificateStep::new(8, "a_n > 0 for 1 <= n <= N", "exact sign of each term");
    for n in 1..=terms {
        s.require(a.values[n].is_positive(), || {
            format!("a_{n} = {}", format_rational(&a.values[n]))
        });
    }
    steps.push(s);

    // 9
    let mut s = CertificateStep::new(
        9,
        "|a_N/a_(N-1) - lambda_minus| < 1e-2 and |b_N/b_(N-1) - lambda_plus| < 1e-2",
        "exact comparison at n = N",
    );
    let tol = ten_pow_neg(2);
    let ra = &a.values[terms] / &a.values[terms - 1];
    let rb = &b.values[terms] / &b.values[terms - 1];
    let da = (&ra - &lambda_minus).abs();
    let db = (&rb - &lambda_plus).abs();
    s.witness("a_ratio_approx", format!("{:.6}", to_f64(&ra)));
    s.witness("b_ratio_approx", format!("{:.6}", to_f64(&rb)));
    s.witness("a_ratio_deviation", format!("{:.6}", to_f64(&da)));
    s.witness("b_ratio_deviation", format!("{:.6}", to_f64(&db)));
    s.witness(
        "a_ratio_relative_deviation",
        format!("{:.6}", to_f64(&(&da / &lambda_minus))),
    );
    s.witness(
        "b_ratio_relative_deviation",
        format!("{:.6}", to_f64(&(&db / &lambda_plus))),
    );
    s.require(da < tol, || {
        format!(
            "|a_{terms}/a_{} - lambda_minus| = {:.6}",
            terms - 1,
            to_f64(&da)
        )
    });
    s.require(db < tol, || {
        format!(
            "|b_{terms}/b_{} - lambda_plus| = {:.6}",
            terms - 1,
            to_f64(&db)
        )
    });
    steps.push(s);

    Ok(finish(terms, steps))
}

fn root_free_from(s: &mut CertificateStep, p: &UniPoly, bound: &Rational, name: &str) {
    match count_real_roots_above(p, bound) {
        Ok(rc) => {
            s.witness(&format!("{name}_roots_above_{bound}"), rc.count);
            s.witness(
                &format!("{name}_root_count_method"),
                format!("{:?}", rc.method).to_lowercase(),
            );
            s.require(rc.count == 0, || {
                format!("{name} has {} real roots above {bound}", rc.count)
            });
        }
        Err(e) => s.fail(e.to_string()),
    }
    let at = p.eval(bound);
    s.require(!at.is_zero(), || format!("{name}({bound}) = 0"));
}

fn finish(terms: usize, steps: Vec<CertificateStep>) -> PositivityReport {
    let status = |ok: bool| {
        if ok {
            StepStatus::Pass
        } else {
            StepStatus::Fail
        }
    };
    let verdict = status(steps.len() == 10 && steps.iter().all(CertificateStep::passed));
    let finitary_verdict =
        status(steps.len() == 10 && steps.iter().take(9).all(CertificateStep::passed));
    PositivityReport {
        terms,
        steps,
        verdict,
        finitary_verdict,
        universal_claim: "ASSUMED-ANALYTIC".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tampered_recurrence_fails() {
        let r = super::super::three_term_recurrence().perturbed(1, 5, 1);
        let rep = positivity_certificate_with(&r, 60).unwrap();
        assert_eq!(rep.verdict, StepStatus::Fail);
        assert_eq!(rep.finitary_verdict, StepStatus::Fail);
        assert_eq!(rep.first_failure().unwrap().index, 0);
    }

    #[test]
    fn short_run() {
        let rep = positivity_certificate(60).unwrap();
        for i in 0..=8 {
            assert!(rep.step(i).passed(), "{:?}", rep.step(i));
        }
        assert_eq!(rep.finitary_verdict, StepStatus::Pass);
        assert_eq!(rep.step(6).witnesses["decrement"], "-77813/276830");
    }
}
