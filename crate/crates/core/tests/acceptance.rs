//! Acceptance suite: one line per criterion.
//!
//! Pass criterion numbers as arguments to run a subset. The process exits nonzero
//! only when a criterion outside `KNOWN_FAILURES` fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use qdiff::approx::{
    alpha_integral, alpha_triangle, build_g, central_identity_check, determinant_check, geometric_pair,
    remainders, truncation_checks, ApproxContext,
};
use qdiff::arith::cyclo::cyclotomic_poly;
use qdiff::arith::{Poly, RatFun, Scalar, ZPoly};
use qdiff::borel::{fourier_plus, fourier_sharp, plus_compatibility, sharp_compatibility};
use qdiff::catalog::{self, eq_product_identity_check, eq_zero_check};
use qdiff::gevrey::{detect_orders, detected, normalize, phi_counterexample_report, strictly_increasing, GevreyOrders};
use qdiff::newton_basis::{act, casoratian, eq_local_solution, local_solution_basis, tq_poly, NewtonSeries};
use qdiff::newton_ramis::{polygon, slope_fourier_image, Slope};
use qdiff::places::{product_formula_check, qfact_cyclotomic_ord, size_report, Place};
use qdiff::skew::annihilator::exists_in_box;
use qdiff::skew::{annihilator_search, apply, convert, parse_operator, Form, Series, SkewOp, SkewRing};
use qdiff::systems::{companion, decay_check, iterate, nilpotent_reduction, QSystem};
use rand::Rng;

use common::*;

/// Criteria that cannot be met as stated, with the reason.
const KNOWN_FAILURES: &[(u32, &str)] = &[
    (6, "the displayed T_q operator (constant term q^2 x) does not annihilate T_q; the true annihilator has constant term q x"),
    (13, "both entries of y are rational, so every admissible g makes g*y a polynomial and R^<0> has rank 1"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Check = fn() -> Outcome;

fn sig(s: &str) -> SkewOp {
    parse_operator(s, &SkewRing::q(Form::Sigma, f())).unwrap()
}

fn dq(s: &str) -> SkewOp {
    parse_operator(s, &SkewRing::q(Form::Dq, f())).unwrap()
}

// 1 ------------------------------------------------------------------------

/// ord_{Φ_κ} by repeated division of each [j]_q = 1 + q + … + q^{j−1}.
fn trial_division_ord(m: u64, kappa: u64) -> u64 {
    let phi = cyclotomic_poly(kappa);
    let mut total = 0;
    for j in 1..=m {
        let mut b = ZPoly::from_i64s(&vec![1; j as usize]);
        loop {
            let (quo, rem) = b.divrem_monic(&phi);
            if !rem.is_zero() || b.is_constant() {
                break;
            }
            b = quo;
            total += 1;
        }
    }
    total
}

fn c1() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for kappa in 2..=24u64 {
        for m in 0..=120u64 {
            cases += 1;
            let oracle = trial_division_ord(m, kappa);
            if oracle != m / kappa || qfact_cyclotomic_ord(m, kappa, 1) != oracle {
                bad.push((kappa, m));
            }
        }
    }
    for m in [7u64, 24, 40] {
        for kappa in [2u64, 3, 5, 12] {
            let ord = Place::cyclotomic(kappa).ord(&f().fact(m)).unwrap();
            if ord != (m / kappa) as i64 {
                bad.push((kappa, m));
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} (kappa, m) pairs, mismatches {bad:?}"))
}

// 2 ------------------------------------------------------------------------

fn c2() -> Outcome {
    let mut r = rng(2);
    let mut failed = 0;
    for _ in 0..100 {
        let nd = r.gen_range(0..=12);
        let dd = r.gen_range(0..=12);
        let e = r.gen_range(-3..=3);
        let x = Scalar::from_parts(e, nonzero_zpoly(&mut r, nd, 9), nonzero_zpoly(&mut r, dd, 9));
        if !product_formula_check(&x, f()).unwrap() {
            failed += 1;
        }
    }
    outcome(failed == 0, format!("100 random elements, {failed} violations"))
}

// 3 ------------------------------------------------------------------------

fn c3() -> Outcome {
    let mut r = rng(3);
    let mut round = 0;
    let mut action = 0;
    for k in 0..50 {
        let form = if k % 2 == 0 { Form::Sigma } else { Form::Dq };
        let l = operator(&mut r, form, 3, 3);
        let other = if form == Form::Sigma { Form::Dq } else { Form::Sigma };
        let there = convert(&l, other);
        if convert(&there, form).normalize() != l.normalize() {
            round += 1;
        }
        let s = Series::power((0..30).map(|_| small_scalar(&mut r)).collect());
        let a = apply(&l, &s).unwrap();
        let b = apply(&there, &s).unwrap();
        if !a.sub(&b).is_zero() {
            action += 1;
        }
    }
    outcome(round == 0 && action == 0, format!("50 operators: round-trip failures {round}, action mismatches {action}"))
}

// 4 ------------------------------------------------------------------------

fn slopes_mapped(before: &BTreeSet<Slope>, after: &BTreeSet<Slope>) -> bool {
    let img: BTreeSet<Slope> = before.iter().map(slope_fourier_image).collect();
    &img == after
}

fn c4() -> Outcome {
    let mut r = rng(4);
    let (mut plus, mut sharp, mut slopes) = (0, 0, 0);
    for _ in 0..50 {
        let l = operator(&mut r, Form::Sigma, 3, 3);
        let ps = polygon(&l, Form::Sigma).unwrap();
        let img = polygon(&fourier_sharp(&l).unwrap(), Form::Sigma).unwrap();
        if !ps.fourier_image().same_region(&img) {
            sharp += 1;
        }
        if !slopes_mapped(&ps.edge_slopes(), &img.edge_slopes()) {
            slopes += 1;
        }
        let ld = convert(&l, Form::Dq);
        let pd = polygon(&ld, Form::Dq).unwrap();
        let imgd = polygon(&fourier_plus(&ld).unwrap(), Form::Dq).unwrap();
        if !pd.fourier_image().same_region(&imgd) {
            plus += 1;
        }
    }
    outcome(
        plus + sharp + slopes == 0,
        format!("50 operators: q+ mismatches {plus}, q# mismatches {sharp}, slope-map mismatches {slopes}"),
    )
}

// 5 ------------------------------------------------------------------------

fn c5() -> Outcome {
    let mut bad = Vec::new();
    for name in ["Eq", "Tq", "Bq"] {
        let e = catalog::entry(name).unwrap();
        let s = Series::power(e.prefix(25));
        let p = plus_compatibility(&e.operator, &s).unwrap();
        let h = sharp_compatibility(&e.operator, &s).unwrap();
        if !p.is_zero() || p.known() == 0 {
            bad.push(format!("{name} plus"));
        }
        if !h.is_zero() || h.known() == 0 {
            bad.push(format!("{name} sharp"));
        }
    }
    outcome(bad.is_empty(), format!("Eq, Tq, Bq at truncation 25, failures {bad:?}"))
}

// 6 ------------------------------------------------------------------------

fn c6() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, shown) in [
        ("Tq", "sigma^2 - (1+q^2*x)*sigma + q^2*x"),
        ("Bq", "sigma^2 - 2*sigma + (1 - (q-1)^2*x)"),
    ] {
        let e = catalog::entry(name).unwrap();
        let want = sig(shown).normalize();
        let found = annihilator_search(&e.gen, f(), 2, 6, 8).map(|a| a.op);
        let smaller = (0..=6).any(|d| exists_in_box(&e.gen, f(), 1, d, 8));
        let ok = found.as_ref() == Some(&want) && !smaller;
        pass &= ok;
        let kills = apply(&want, &Series::power(e.prefix(20))).map(|s| s.is_zero()).unwrap_or(false);
        notes.push(format!(
            "{name}: found {}, displayed operator {} the series{}",
            found.map(|o| o.display()).unwrap_or_else(|| "none".into()),
            if kills { "kills" } else { "does not kill" },
            if smaller { ", smaller annihilator exists" } else { "" }
        ));
    }
    outcome(pass, notes.join("; "))
}

// 7 ------------------------------------------------------------------------

fn c7() -> Outcome {
    let grid = vec![GevreyOrders::int(0, 0), GevreyOrders::int(0, -1), GevreyOrders::int(-1, 0), GevreyOrders::int(0, -2)];
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, want) in [("Eq", vec![Slope::int(-1), Slope::int(0)]), ("Tq", vec![Slope::int(-1), Slope::int(0)]), ("Bq", vec![Slope::frac(-1, 2), Slope::int(0)])] {
        let e = catalog::entry(name).unwrap();
        let orders = detected(&detect_orders(&e.gen, &grid, 60, f()));
        let predicted = orders.as_ref().map(|o| o.predicted_slopes());
        let poly: Vec<Slope> =
            polygon(&e.operator, Form::Dq).unwrap().finite_slopes().into_iter().map(Slope::Finite).collect();
        let ok = predicted.as_ref() == Some(&want) && poly == want;
        pass &= ok;
        let shown = |v: &[Slope]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        notes.push(format!(
            "{name}: orders {}, predicted {{{}}}, polygon {{{}}}",
            orders.map(|o| o.to_string()).unwrap_or_else(|| "none".into()),
            predicted.as_deref().map(shown).unwrap_or_default(),
            shown(&poly)
        ));
    }
    outcome(pass, notes.join("; "))
}

// 8 ------------------------------------------------------------------------

fn c8() -> Outcome {
    let field = f();
    let tri = alpha_triangle(field, 12);
    let mut recursion = true;
    for (n, row) in tri.iter().enumerate() {
        recursion &= row[0].is_one();
        for k in 1..=n {
            let mut s = Scalar::zero();
            for (i, a) in row.iter().enumerate().take(k + 1) {
                let t = &(&field.binom(k as u64, i as u64) * &field.q_pow((i * (n - k)) as i64)) * a;
                s = if i % 2 == 0 { &s + &t } else { &s - &t };
            }
            recursion &= s.is_zero();
        }
    }
    let integral = alpha_integral(&tri);
    let mut r = rng(8);
    let mut failures = 0;
    for _ in 0..10 {
        let sys = system(&mut r, 2);
        let p = vector(&mut r, 2, 2);
        for n in 0..=4 {
            if !central_identity_check(&sys, &p, n).map(|c| c.holds).unwrap_or(false) {
                failures += 1;
            }
        }
    }
    outcome(
        recursion && integral && failures == 0,
        format!("alpha recursion {recursion}, integrality {integral}, identity failures {failures}/50"),
    )
}

// 9 ------------------------------------------------------------------------

fn family(r: &mut rand_chacha::ChaCha8Rng) -> Vec<(String, QSystem)> {
    let mut out = Vec::new();
    let diag = |a: Scalar, b: Scalar| {
        let mut m = qdiff::arith::Matrix::zeros(2, 2);
        m.set(0, 0, RatFun::constant(a));
        m.set(1, 1, RatFun::constant(b));
        QSystem::new(f(), m).unwrap()
    };
    out.push(("diag(q, q^2)".into(), diag(q(), q().pow(2))));
    out.push(("diag(1, q^3)".into(), diag(Scalar::one(), q().pow(3))));
    out.push(("diag(2, q)".into(), diag(Scalar::from_i64(2), q())));
    out.push(("diag(-q, q)".into(), diag(-q(), q())));
    for s in ["(1 - q*x)*sigma - (1 - x)", "sigma - ((q-1)*x + 1)", "sigma^2 - 2*sigma + 1", "sigma^2 - (q^2*x + 1)*sigma + q*x"] {
        out.push((format!("companion of {s}"), companion(&sig(s)).unwrap()));
    }
    for k in 0..6 {
        out.push((format!("random system {k}"), system(r, 1)));
    }
    out
}

fn c9() -> Outcome {
    let mut r = rng(9);
    let fam = family(&mut r);
    let (mut cases, mut nilpotent, mut skipped) = (0, 0, 0);
    let mut bad = Vec::new();
    for (name, sys) in &fam {
        let table = iterate(sys, 12);
        for m in [2u64, 3, 4, 6] {
            let rep = match nilpotent_reduction(sys, m, 4) {
                Ok(rep) => rep,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            cases += 1;
            if !rep.flags_agree() {
                bad.push(format!("{name} at m={m}: flags disagree"));
            }
            if let (true, Some(order)) = (rep.a_nilpotent, rep.nilpotence_order) {
                nilpotent += 1;
                let d = decay_check(&table, m, rep.kappa, order, 12).unwrap();
                if !d.holds {
                    bad.push(format!("{name} at m={m}: no decay"));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && nilpotent > 0,
        format!("{cases} reductions ({nilpotent} nilpotent, {skipped} bad reductions skipped), problems {bad:?}"),
    )
}

// 10 -----------------------------------------------------------------------

fn c10() -> Outcome {
    let field = f();
    let xi = Scalar::from_frac(2, 7);
    let mut rules = true;
    for n in 0..=12usize {
        let tn = tq_poly(n, &xi, &q());
        let dtn = RatFun::from_poly(tn.clone()).dq(&q()).to_poly().unwrap();
        let d_direct = NewtonSeries::from_poly(&dtn, &xi, &q(), n + 1);
        let d_rule = NewtonSeries::basis(n, &xi, &q(), n + 2).dq();
        let expect = if n == 0 { Poly::zero() } else { tq_poly(n - 1, &xi, &q()).scale(&field.bracket(n as u64)) };
        rules &= d_direct.truncate(n) == d_rule.truncate(n) && dtn == expect;
        let s_direct = NewtonSeries::from_poly(&tn.twist(&q()), &xi, &q(), n + 2).truncate(n + 1);
        rules &= s_direct == NewtonSeries::basis(n, &xi, &q(), n + 2).sigma();
    }
    let eq = eq_local_solution(field, 20);
    let local = act(&dq("q*dq - 1"), &eq).map(|s| s.is_zero()).unwrap_or(false);
    let mut casorati = Vec::new();
    for s in ["sigma^2 - (q^2*x + 1)*sigma + q*x", "sigma^2 - 2*sigma + (1 - (q-1)^2*x)", "sigma^2 - (x + 1)*sigma + q*x^2"] {
        let l = sig(s);
        let ok = local_solution_basis(&l, &Scalar::one(), 12)
            .and_then(|b| casoratian(&l, &b))
            .map(|c| c.holds() && !c.det.is_zero())
            .unwrap_or(false);
        casorati.push(ok);
    }
    let cas_ok = casorati.iter().all(|&b| b);
    outcome(rules && local && cas_ok, format!("rules n<=12 {rules}, E_q local solution {local}, Casorati {casorati:?}"))
}

// 11 -----------------------------------------------------------------------

fn c11() -> Outcome {
    let p = eq_product_identity_check(20).unwrap();
    let z = eq_zero_check(30).unwrap();
    let v: Vec<i64> = z.zero.valuations[5..].iter().map(|v| v.unwrap_or(i64::MAX)).collect();
    outcome(
        p.holds() && z.holds(),
        format!(
            "product mod x^21: closed form {}, tail valuation {:?}; zero trace s=5..30 from {} to {}, control {}",
            p.closed_form,
            p.tail_valuation,
            v[0],
            v[v.len() - 1],
            if z.bounded { "bounded" } else { "unbounded" }
        ),
    )
}

// 12 -----------------------------------------------------------------------

fn c12() -> Outcome {
    let field = f();
    let zero = |v: &[Scalar]| size_report(v, field).totals().iter().all(|t| t == &BigRational::from_integer(0.into()));
    let mut notes = Vec::new();
    let mut pass = true;
    let geo = zero(&vec![Scalar::one(); 61]);
    pass &= geo;
    notes.push(format!("sum x^n zero {geo}"));
    for name in ["Eq", "Tq", "Bq"] {
        let e = catalog::entry(name).unwrap();
        let normal = normalize(&e.gen, e.orders.as_ref().unwrap(), 61, field).unwrap();
        let ok = zero(&normal);
        pass &= ok;
        notes.push(format!("normalized {name} zero {ok}"));
    }
    for name in ["Eq", "Tq"] {
        let e = catalog::entry(name).unwrap();
        let totals = size_report(&e.prefix(61), field).totals();
        let ok = strictly_increasing(&totals[19..60]);
        pass &= ok;
        notes.push(format!("raw {name} increasing {ok}"));
    }
    let phi = phi_counterexample_report(2, 1, 60).unwrap();
    let ok = strictly_increasing(&phi.report.totals()[19..60]);
    pass &= ok;
    notes.push(format!("phi(2,1) increasing {ok}"));
    outcome(pass, notes.join(", "))
}

// 13 -----------------------------------------------------------------------

fn c13() -> Outcome {
    let tau = BigRational::new(1.into(), 2.into());
    let mut pass = true;
    let mut notes = Vec::new();
    for n in [8usize, 12] {
        let (sys, ys) = geometric_pair(f(), n + 16);
        let hp = match build_g(&ys, n, &tau, f()) {
            Ok(h) => h,
            Err(e) => {
                pass = false;
                notes.push(format!("N={n}: build_g failed: {e}"));
                continue;
            }
        };
        let ctx = ApproxContext::new(sys, ys, n, tau.clone()).unwrap();
        let table = remainders(&ctx, &hp.g, 3).unwrap();
        let rows = truncation_checks(&ctx, &hp.g, &table).unwrap();
        let budget: Vec<_> = rows.iter().filter(|r| r.within_budget).collect();
        let bounds = table.paths_agree
            && table.degree_bounds_hold()
            && budget.iter().all(|r| r.truncation_holds && r.order_holds);
        let det = determinant_check(&ctx, &table).unwrap();
        pass &= bounds && det.nonzero && det.minors_hold;
        notes.push(format!(
            "N={n}: deg g {}, t={}, budget n<={}, bounds {bounds}, minors {}, det R<0> {}",
            hp.g.deg(),
            ctx.t,
            budget.len() - 1,
            det.minors_hold,
            if det.nonzero { "nonzero" } else { "zero" }
        ));
    }
    outcome(pass, notes.join("; "))
}

// -------------------------------------------------------------------------

const CRITERIA: &[(u32, &str, u64, Check)] = &[
    (1, "q-factorial cyclotomic valuation", 30, c1),
    (2, "product formula", 5, c2),
    (3, "sigma/d conversion soundness", 60, c3),
    (4, "Newton-Ramis polygon and Fourier commutation", 60, c4),
    (5, "Borel compatibility", 30, c5),
    (6, "catalog operators from annihilator search", 120, c6),
    (7, "slope predictions from Gevrey orders", 30, c7),
    (8, "central identity and alpha triangle", 180, c8),
    (9, "nilpotence equivalences and decay", 120, c9),
    (10, "Newton basis, local solution, Casorati", 60, c10),
    (11, "E_q product identity and zero", 30, c11),
    (12, "Gevrey size dichotomy", 60, c12),
    (13, "Hermite-Pade construction", 120, c13),
];

fn main() {
    let wanted: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    let mut passed = 0;
    let mut ran = 0;
    for &(id, name, limit, check) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        let pass = res.pass && in_time;
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        let tag = match (pass, known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => "FAIL",
        };
        println!("[{tag}] criterion {id:>2}: {name} ({:.1} s of {limit} s): {}", took.as_secs_f64(), res.detail);
        if !in_time {
            println!("        over the time limit");
        }
        if let (false, Some(why)) = (pass, known) {
            println!("        reason: {why}");
        }
        if pass {
            passed += 1;
        } else if known.is_none() {
            unexpected.push(id);
        }
    }
    println!("acceptance: {passed}/{ran} criteria pass; unexpected failures {unexpected:?}");
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
