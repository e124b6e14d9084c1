use std::collections::BTreeMap;
use std::path::Path;

use koszul_core::arith::{format_rational, Rational};
use koszul_core::cobar::{
    boundary_preimage_monomials, contraction_arities, cycle_cn, differential, is_boundary,
    verify_boundary_formula, whistle_blower,
};
use koszul_core::hypergeom::{
    a_closed, char_roots, expected_characteristic, expected_roots, guess_minimal, guess_recurrence,
    positivity_certificate_with, radius_facts, residual_check, three_term_recurrence, Recurrence,
    ResidualReport, SequenceTable, StepStatus,
};
use koszul_core::operad_dims::{build_consequence_matrix, free_dim, poincare_series};
use koszul_core::series::{
    compose, detect_gap, lagrange_invert, minimal_model_generators, newton_invert, TruncatedSeries,
};
use koszul_core::trees::{epsilon, nu, tree_count, verify_contraction_rule, VertexCounts};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::report::{Check, Outcome, Table};
use crate::CliError;

type Res = std::result::Result<Outcome, CliError>;

/// Dimensions of the `n = 8` operad through weight 5.
const KNOWN_N8_DIMS: [u64; 6] = [1, 1, 7, 69, 790, 9842];

pub fn recurrence_under_test(tamper: bool) -> Recurrence {
    let r = three_term_recurrence();
    if tamper {
        r.perturbed(1, 5, 1)
    } else {
        r
    }
}

pub fn verify_boundary(n: usize, budget: u128) -> Res {
    let rep = verify_boundary_formula(n, budget)?;
    let detail = match &rep.first_difference {
        None => format!(
            "d(nu) = {} mu^({}) over {} trees of nu",
            rep.lhs_coefficient,
            n + 1,
            rep.nu_terms
        ),
        Some(d) => d.clone(),
    };
    let mut result = serde_json::to_value(&rep).expect("serializable");
    let v = nu(n, budget)?;
    if v.len() <= 64 {
        let terms: BTreeMap<String, String> = v
            .iter()
            .map(|(t, c)| (t.to_nested(), format_rational(c)))
            .collect();
        result["witness"] = json!(terms);
    }
    result["status"] = json!(if rep.passed { "pass" } else { "fail" });
    Ok(Outcome {
        checks: vec![],
        result,
        table: None,
    }
    .check(format!("boundary formula n={n}"), rep.passed, detail)
    .check(format!("B1 is the comb n={n}"), rep.b1_is_comb, "")
    .check(format!("B0 vanishes n={n}"), rep.b0_is_zero, ""))
}

pub fn contraction(n: usize, budget: u128) -> Res {
    let rep = verify_contraction_rule(n, budget)?;
    let detail = format!("{} 0-trees, {} edges", rep.zero_trees, rep.edges_checked);
    let passed = rep.passed;
    Ok(Outcome::new(rep).check(format!("contraction rule n={n}"), passed, detail))
}

pub fn cycle(n: usize, check_nonboundary: bool, budget: u128) -> Res {
    let c = cycle_cn(n, budget)?;
    let dc = differential(&c);
    let w = whistle_blower(n)?;
    let coeff = c.coeff(&w);
    let want = {
        let f = koszul_core::arith::factorial((n - 1) as u64);
        Rational::from_integer(if n % 2 == 1 { f } else { -f })
    };
    let pre = boundary_preimage_monomials(&w);
    let arities = contraction_arities(&w);
    let mut result = json!({
        "n": n,
        "terms": c.len(),
        "differential_terms": dc.len(),
        "whistle_blower": w.to_nested(),
        "whistle_blower_coefficient": format_rational(&coeff),
        "expected_coefficient": format_rational(&want),
        "preimage_monomials": pre.iter().map(|t| t.to_nested()).collect::<Vec<_>>(),
        "contraction_arities": arities,
    });
    let mut out = Outcome {
        checks: vec![],
        result: Value::Null,
        table: None,
    }
    .check(
        format!("c_{n} is closed"),
        dc.is_zero(),
        format!("{} terms in c_{n}", c.len()),
    )
    .check(
        format!("whistle-blower coefficient n={n}"),
        coeff == want,
        format!(
            "{} (expected {})",
            format_rational(&coeff),
            format_rational(&want)
        ),
    )
    .check(
        format!("no monomial maps onto the whistle-blower n={n}"),
        pre.is_empty(),
        format!("every contraction gives arity {}", 3 * n - 2),
    );
    if check_nonboundary {
        let q = is_boundary(&c, budget)?;
        result["certificate"] = json!({
            "basis_size": q.basis.len(),
            "equations": q.rows.len(),
            "rank_coefficient": q.rank_coefficient,
            "rank_augmented": q.rank_augmented,
            "solvable": q.solvable(),
        });
        out = out.check(
            format!("c_{n} is not a boundary"),
            !q.solvable(),
            format!(
                "rank A = {}, rank [A|c] = {}",
                q.rank_coefficient, q.rank_augmented
            ),
        );
    }
    let passed = out.checks.iter().all(|c| c.passed);
    result["status"] = json!(if passed { "pass" } else { "fail" });
    out.result = result;
    Ok(out)
}

fn series_table(s: &TruncatedSeries) -> Table {
    let mut t = Table::new(&["exponent", "coefficient"]);
    for (e, c) in s.coeffs().iter().enumerate() {
        if !c.is_zero() {
            t.push(vec![e.to_string(), format_rational(c)]);
        }
    }
    t
}

fn series_json(s: &TruncatedSeries) -> Value {
    let terms: Vec<Value> = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| json!([e, format_rational(c)]))
        .collect();
    json!({ "order": s.order(), "terms": terms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lagrange,
    Newton,
    Both,
}

pub fn invert(f: &TruncatedSeries, method: Method) -> Res {
    let inv = match method {
        Method::Newton => newton_invert(f)?,
        _ => lagrange_invert(f)?,
    };
    let identity = compose(f, &inv)? == TruncatedSeries::t(f.order());
    let mut out = Outcome::new(json!({ "inverse": series_json(&inv), "method": method })).check(
        "f(f^<-1>) = t",
        identity,
        format!("through t^{}", f.order()),
    );
    if method == Method::Both {
        let agree = newton_invert(f)? == inv;
        out = out.check(
            "Lagrange and Newton agree",
            agree,
            "exact coefficient equality",
        );
    }
    Ok(out.table(series_table(&inv)))
}

pub fn gap(gp: &TruncatedSeries, n: usize) -> Res {
    let ge = minimal_model_generators(gp)?;
    let rep = detect_gap(&ge, n)?;
    let detail = match (rep.q, rep.d) {
        (Some(q), Some(d)) => format!(
            "zeros from weight {q}, {d} in a row{}",
            if rep.nonzero_after {
                ""
            } else {
                " up to the truncation"
            }
        ),
        _ => "no gap".into(),
    };
    let mut t = Table::new(&["weight", "exponent", "coefficient"]);
    for (w, c) in rep.coefficients.iter().enumerate() {
        t.push(vec![
            w.to_string(),
            (w * (n - 1) + 1).to_string(),
            format_rational(c),
        ]);
    }
    Ok(
        Outcome::new(json!({ "generators": series_json(&ge), "gap": rep }))
            .check("gap detection", true, detail)
            .table(t),
    )
}

pub fn scan_negative(f: &TruncatedSeries, invert: bool) -> Res {
    let s = if invert {
        lagrange_invert(f)?
    } else {
        f.clone()
    };
    let first = s.scan_negative();
    let detail = match first {
        Some(k) => format!("t^{k} has coefficient {}", format_rational(&s.coeff(k))),
        None => format!("none through t^{}", s.order()),
    };
    Ok(Outcome::new(json!({
        "first_negative": first,
        "coefficient": first.map(|k| format_rational(&s.coeff(k))),
        "order": s.order(),
        "inverted": invert,
    }))
    .check("negative coefficient scan", true, detail))
}

pub fn poincare(
    n: usize,
    max_weight: usize,
    primes: &[u64],
    exact_upto: usize,
    export: Option<&Path>,
    budget: u128,
) -> Res {
    let d = poincare_series(n, max_weight, primes, exact_upto, budget)?;
    if let Some(dir) = export {
        std::fs::create_dir_all(dir)?;
        for w in 2..=max_weight {
            let m = build_consequence_matrix(n, w, budget)?;
            let header = format!(
                "# {} {} {}\n",
                m.matrix.nrows(),
                m.matrix.ncols,
                m.matrix.nnz()
            );
            std::fs::write(
                dir.join(format!("n{n}-weight{w}.txt")),
                header + &m.matrix.to_triplets(),
            )?;
        }
    }
    let series = d.series();
    let mut t = Table::new(&["weight", "exponent", "free", "consequences", "rank", "dim"]);
    for r in &d.weights {
        let rank = r.rank.values().next().copied().unwrap_or(0);
        t.push(vec![
            r.weight.to_string(),
            (r.weight * (n - 1) + 1).to_string(),
            r.free.to_string(),
            r.consequences.to_string(),
            rank.to_string(),
            r.dim.to_string(),
        ]);
    }
    let mut out = Outcome::new(json!({ "weights": d.weights, "series": series.to_string() }))
        .check(
            "ranks agree across primes",
            true,
            format!("primes {primes:?}"),
        );
    for r in &d.weights {
        out = out.check(
            format!("rank bounds weight {}", r.weight),
            r.dim <= r.free && r.dim + r.consequences >= r.free,
            format!(
                "free {} consequences {} dim {}",
                r.free, r.consequences, r.dim
            ),
        );
    }
    if n == 8 {
        let dims = d.dims();
        let k = dims.len().min(KNOWN_N8_DIMS.len());
        out = out.check(
            "matches the known n=8 dimensions",
            dims[..k] == KNOWN_N8_DIMS[..k],
            format!("{dims:?}"),
        );
        let agree = d
            .weights
            .iter()
            .all(|r| Rational::from_integer(r.dim.into()) == a_closed(r.weight));
        out = out.check("dimensions equal a_w", agree, "closed-form alternating sum");
    }
    Ok(out.table(t))
}

pub fn recurrence_verify(terms: usize, tamper: bool) -> Res {
    let r = recurrence_under_test(tamper);
    let a = SequenceTable::a_closed(terms);
    let res = residual_check(&r, &a.values, 2..=terms);
    let chi = r.characteristic_polynomial();
    let roots = char_roots(&r);
    let roots_ok = roots.as_ref().is_ok_and(|x| *x == expected_roots());
    let degrees: Vec<usize> = r.coeffs().iter().filter_map(|p| p.degree()).collect();
    Ok(Outcome::new(json!({
        "terms": terms,
        "residual": res,
        "degrees": degrees,
        "characteristic": chi.to_string(),
        "roots": roots.as_ref().map(|(a, b)| vec![format_rational(a), format_rational(b)]).ok(),
    }))
    .check(
        "recurrence annihilates a_n",
        res.is_zero(),
        residual_detail(&res, terms),
    )
    .check(
        "characteristic polynomial",
        chi == expected_characteristic(),
        chi.to_string(),
    )
    .check(
        "characteristic roots 5^15/21^7 and 3^15/7^7",
        roots_ok,
        "exact",
    )
    .check(
        "all coefficient degrees are 20",
        degrees.len() == 3 && degrees.iter().all(|d| *d == 20),
        format!("{degrees:?}"),
    ))
}

fn residual_detail(res: &ResidualReport, terms: usize) -> String {
    match res.nonzero_at.first() {
        None => format!("zero for n = 2..={terms}"),
        Some(n) => format!(
            "first nonzero residual at n = {n}, {} indices fail, max |residual| {}",
            res.nonzero_at.len(),
            format_rational(&res.max_abs)
        ),
    }
}

pub fn recurrence_guess(
    order: usize,
    degree: usize,
    terms: usize,
    minimal: bool,
    tamper: bool,
) -> Res {
    let a = SequenceTable::a_closed(terms);
    let found = if minimal {
        guess_minimal(&a.values, order, degree)
    } else {
        guess_recurrence(&a.values, order, degree).map(|r| (degree, r))
    };
    let Some((d, g)) = found else {
        return Ok(Outcome::new(
            json!({ "found": false, "order": order, "degree": degree, "terms": terms }),
        )
        .check(
            "recurrence found",
            false,
            format!(
                "no order-{order} recurrence of degree {degree} fits {} terms",
                terms + 1
            ),
        ));
    };
    let reference = recurrence_under_test(tamper);
    let proportional = g.proportional_to(&reference);
    let roots = if g.order() == 2 {
        char_roots(&g).ok()
    } else {
        None
    };
    let coeffs: Vec<String> = g.coeffs().iter().map(|p| p.to_string()).collect();
    let mut out = Outcome::new(json!({
        "found": true,
        "order": order,
        "degree": d,
        "terms": terms,
        "coefficients": coeffs,
        "roots": roots.as_ref().map(|(a, b)| vec![format_rational(a), format_rational(b)]),
        "proportional_to_embedded": proportional,
    }))
    .check(
        "recurrence found",
        true,
        format!("order {order}, degree {d}"),
    );
    if order == 2 {
        out = out
            .check(
                "proportional to the embedded recurrence",
                proportional,
                "s_0 g_i = g_0 s_i",
            )
            .check(
                "same characteristic roots",
                roots == Some(expected_roots()),
                "exact",
            );
    }
    Ok(out)
}

pub fn radius() -> Res {
    let r = radius_facts();
    let passed = r.passed;
    Ok(Outcome::new(&r)
        .check(
            "derivative factors as (1-3u)(1-5u)",
            r.derivative_factors,
            "u = t^7",
        )
        .check(
            "radius is 21^7/5^15",
            r.radius_is_21_7_over_5_15,
            format_rational(&r.radius),
        )
        .check(
            "lambda_minus times radius is 1",
            passed,
            format_rational(&r.lambda_minus_times_radius),
        ))
}

pub fn positivity(terms: usize, tamper: bool) -> Res {
    let rep = positivity_certificate_with(&recurrence_under_test(tamper), terms)?;
    let mut t = Table::new(&["step", "status", "claim", "counterexample"]);
    let mut checks = Vec::new();
    for s in &rep.steps {
        let status = if s.passed() { "pass" } else { "fail" };
        t.push(vec![
            s.index.to_string(),
            status.into(),
            s.claim.clone(),
            s.counterexample.clone().unwrap_or_default(),
        ]);
        checks.push(Check::new(
            format!("step {}", s.index),
            s.passed(),
            s.counterexample.clone().unwrap_or_else(|| s.claim.clone()),
        ));
    }
    let finitary = rep.finitary_verdict == StepStatus::Pass;
    let mut out = Outcome::new(&rep);
    out.checks = checks;
    Ok(out
        .check(
            "finitary steps 0-8",
            finitary,
            format!("a_n > 0 for 1 <= n <= {}", rep.terms),
        )
        .table(t))
}

/// Inverse of `t - t^n + t^(2n-1)` through `t^order`.
pub fn contrast(n: usize, order: usize) -> Option<usize> {
    lagrange_invert(&TruncatedSeries::koszul_dual_trinomial(n, order))
        .ok()?
        .scan_negative()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

pub fn run_all(profile: Profile, tamper: bool, budget: u128) -> Res {
    let full = profile == Profile::Full;
    let mut checks = Vec::new();
    let mut results = serde_json::Map::new();
    let mut absorb = |key: String, o: Outcome| {
        for c in o.checks {
            checks.push(Check::new(format!("{key}: {}", c.name), c.passed, c.detail));
        }
        results.insert(key, o.result);
    };

    for n in 2..=if full { 5 } else { 4 } {
        absorb(
            format!("verify-boundary n={n}"),
            verify_boundary(n, budget)?,
        );
    }
    for n in 2..=4 {
        absorb(format!("contraction n={n}"), contraction(n, budget)?);
    }
    for n in 2..=4 {
        absorb(format!("cycle n={n}"), cycle(n, n <= 3, budget)?);
    }
    let w5 = whistle_blower(5)?;
    absorb(
        "whistle-blower n=5".into(),
        Outcome::new(json!({ "preimages": boundary_preimage_monomials(&w5).len() })).check(
            "no monomial maps onto the whistle-blower n=5",
            boundary_preimage_monomials(&w5).is_empty(),
            "",
        ),
    );

    let max_weight = if full { 5 } else { 4 };
    let primes = koszul_core::arith::DEFAULT_PRIMES;
    let dims = poincare_series(8, max_weight, &primes, 3, budget)?;
    absorb(
        "poincare n=8".into(),
        poincare(8, max_weight, &primes, 3, None, budget)?,
    );
    let ge = minimal_model_generators(&dims.series())?;
    let gap_rep = detect_gap(&ge, 8)?;
    let zeros_ok = (3..=max_weight).all(|w| ge.coeff(7 * w + 1).is_zero());
    let nonzero_ok = !ge.coeff(8).is_zero() && !ge.coeff(15).is_zero();
    absorb(
        "gap".into(),
        Outcome::new(json!({ "generators": series_json(&ge), "gap": gap_rep }))
            .check(
                "generators vanish from t^22 on",
                zeros_ok,
                format!("through t^{}", 7 * max_weight + 1),
            )
            .check("generators nonzero at t^8 and t^15", nonzero_ok, "")
            .check(
                "gap starts at weight 3",
                gap_rep.q == Some(3),
                format!("q = {:?}", gap_rep.q),
            ),
    );

    let inv = lagrange_invert(&TruncatedSeries::koszul_dual_trinomial(8, 350))?;
    absorb(
        "scan-negative n=8".into(),
        Outcome::new(json!({ "first_negative": inv.scan_negative() })).check(
            "inverse of t - t^8 + t^15 has no negative coefficient",
            inv.scan_negative().is_none(),
            "through t^350",
        ),
    );
    let mut contrast_rows = BTreeMap::new();
    let mut contrast_out = Outcome::new(json!({}));
    for n in 2..=7 {
        let k = contrast(n, 400);
        contrast_rows.insert(format!("n={n} order=400"), k);
        let detail = k.map_or("none".to_string(), |k| format!("t^{k}"));
        contrast_out = contrast_out.check(
            format!("negative coefficient n={n} within 400 terms"),
            k.is_some(),
            detail,
        );
    }
    if full {
        let k = contrast(7, 1200);
        contrast_rows.insert("n=7 order=1200".into(), k);
        let detail = k.map_or("none".to_string(), |k| format!("t^{k}"));
        contrast_out = contrast_out.check(
            "negative coefficient n=7 within 1200 terms",
            k.is_some(),
            detail,
        );
    }
    contrast_out.result = json!(contrast_rows);
    absorb("contrast".into(), contrast_out);

    absorb("radius".into(), radius()?);
    absorb("recurrence verify".into(), recurrence_verify(300, tamper)?);
    absorb(
        "recurrence guess".into(),
        recurrence_guess(2, 20, 120, false, tamper)?,
    );
    absorb("positivity".into(), positivity(300, tamper)?);

    let mut fuss = true;
    for n in 2..=6 {
        for p in 0..=5 {
            fuss &= tree_count(n, VertexCounts { mu: p, xi: 0 }) == free_dim(n, p);
        }
    }
    let identity = (2..=8usize).all(|n| {
        free_dim(n, n + 1) == koszul_core::arith::binomial((n * n + n - 1) as u64, (n - 1) as u64)
    });
    let eps_ok = nu(2, budget)?.iter().all(|(t, c)| {
        epsilon(t)
            .map(|e| Rational::from_integer(e) == *c)
            .unwrap_or(false)
    });
    absorb(
        "counts".into(),
        Outcome::new(json!({}))
            .check("Fuss-Catalan counts n <= 6, p <= 5", fuss, "")
            .check(
                "free_dim(n, n+1) = C(n^2+n-1, n-1) for n <= 8",
                identity,
                "",
            )
            .check("nu coefficients are epsilon values n=2", eps_ok, ""),
    );
    Ok(Outcome {
        checks,
        result: Value::Object(results),
        table: None,
    })
}
