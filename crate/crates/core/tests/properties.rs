mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use qdiff::approx::central_identity_check;
use qdiff::arith::cyclo::{cyclotomic_poly, specialize_at_root};
use qdiff::arith::qnum::value_at_one;
use qdiff::arith::{FieldElem, Matrix, Poly, RatFun, Scalar, ZPoly};
use qdiff::borel::{fourier_plus, fourier_sharp};
use qdiff::gevrey::{normalize, GevreyOrders};
use qdiff::newton_basis::{act, tq_poly, NewtonSeries};
use qdiff::newton_ramis::{polygon, Slope};
use qdiff::places::{
    gauss_log_norm, product_formula_check, qfact_log_norm, qfact_log_norm_direct, size_report, Place,
};
use qdiff::skew::{apply, convert, parse_operator, rescale_power, DqPowerExpansion, Form, ListGen, Series, SkewRing};
use qdiff::systems::iterate;
use rand_chacha::ChaCha8Rng;

use common::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn scalar(r: &mut ChaCha8Rng) -> Scalar {
    use rand::Rng;
    let e = r.gen_range(-2..=2);
    Scalar::from_parts(e, nonzero_zpoly(r, 3, 5), nonzero_zpoly(r, 3, 5))
}

fn prefix(r: &mut ChaCha8Rng, len: usize) -> Series {
    Series::power((0..len).map(|_| small_scalar(r)).collect())
}

#[test]
fn cyclotomic_products() {
    for m in 1..=64u64 {
        let prod = (1..=m).filter(|d| m % d == 0).fold(ZPoly::one(), |a, d| a.mul(&cyclotomic_poly(d)));
        assert_eq!(prod, ZPoly::monomial(BigInt::one(), m as usize).sub(&ZPoly::one()), "m = {m}");
    }
}

#[test]
fn binomials_at_one() {
    let field = f();
    for n in 0..=20u64 {
        let mut ordinary = BigInt::one();
        for k in 0..=n {
            assert_eq!(value_at_one(&field.qnum().binom_poly(n, k)), ordinary, "({n} {k})");
            ordinary = ordinary * BigInt::from(n - k) / BigInt::from(k + 1);
        }
    }
}

#[test]
fn qfactorial_norm_closed_form() {
    let field = f();
    for kappa in 2..=24 {
        let place = Place::cyclotomic(kappa);
        for m in (0..=120).step_by(7) {
            assert_eq!(qfact_log_norm(m, &place, field).unwrap(), qfact_log_norm_direct(m, &place, field).unwrap());
        }
    }
}

#[test]
fn size_dichotomy() {
    let field = f();
    let rational: Vec<Scalar> = (0..40).map(|n| field.q_pow(n).inv()).collect();
    let geometric = size_report(&rational, field);
    let theta: Vec<Scalar> = (0..40).map(|n| field.q_pow(n * (n - 1) / 2)).collect();
    let growing = size_report(&theta, field);
    let last = |r: &qdiff::places::SizeReport| r.totals().last().cloned().unwrap();
    assert!(last(&geometric) <= BigRational::from_integer(2.into()));
    assert!(last(&growing) >= BigRational::from_integer(15.into()));
}

#[test]
fn newton_sigma_rule() {
    let field = f();
    let q = field.q();
    let mut r = rng(11);
    for n in 1..=12 {
        let xi = scalar(&mut r);
        let lhs = tq_poly(n, &xi, &q).twist(&q);
        let qn = q.pow(n as i64);
        let rhs = tq_poly(n, &xi, &q)
            .scale(&qn)
            .add(&tq_poly(n - 1, &xi, &q).scale(&(&(&q.pow(n as i64 - 1) * &(&qn - &Scalar::one())) * &xi)));
        assert_eq!(lhs, rhs, "n = {n}");
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (scalar(&mut r), scalar(&mut r), scalar(&mut r));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn specialization_is_multiplicative(seed in any::<u64>(), m in 2u64..=12) {
        let mut r = rng(seed);
        let (a, b) = (scalar(&mut r), scalar(&mut r));
        if let (Ok(x), Ok(y)) = (specialize_at_root(&a, m), specialize_at_root(&b, m)) {
            prop_assert_eq!(specialize_at_root(&(&a * &b), m).unwrap(), x.mul(&y));
        }
    }

    #[test]
    fn product_formula(seed in any::<u64>()) {
        let mut r = rng(seed);
        prop_assert!(product_formula_check(&scalar(&mut r), f()).unwrap());
    }

    #[test]
    fn gauss_norm_is_multiplicative(seed in any::<u64>(), m in 1u64..=8) {
        let mut r = rng(seed);
        let a = RatFun::new(nonzero_poly_x(&mut r, 2), nonzero_poly_x(&mut r, 2));
        let b = RatFun::from_poly(nonzero_poly_x(&mut r, 3));
        for place in [Place::cyclotomic(m), Place::q_adic(), Place::q_inverse_adic()] {
            let lhs = gauss_log_norm(&(&a * &b), &place, f()).unwrap();
            let rhs = gauss_log_norm(&a, &place, f()).unwrap() + gauss_log_norm(&b, &place, f()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn operator_product_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (operator(&mut r, Form::Sigma, 3, 3), operator(&mut r, Form::Sigma, 3, 3), operator(&mut r, Form::Sigma, 3, 3));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn product_acts_as_composition(seed in any::<u64>(), dq in any::<bool>()) {
        let mut r = rng(seed);
        let form = if dq { Form::Dq } else { Form::Sigma };
        let (a, b) = (operator(&mut r, form, 2, 2), operator(&mut r, form, 2, 2));
        let s = prefix(&mut r, 30);
        let lhs = apply(&a.mul(&b).unwrap(), &s).unwrap();
        let rhs = apply(&a, &apply(&b, &s).unwrap()).unwrap();
        let k = lhs.known().min(rhs.known());
        prop_assert!(k > 0);
        prop_assert!(lhs.truncate(k as i64).sub(&rhs.truncate(k as i64)).is_zero());
    }

    #[test]
    fn conversion_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = operator(&mut r, Form::Sigma, 3, 3);
        let d = convert(&l, Form::Dq);
        prop_assert_eq!(convert(&d, Form::Sigma).normalize(), l.normalize());
        let s = prefix(&mut r, 30);
        prop_assert!(apply(&l, &s).unwrap().sub(&apply(&d, &s).unwrap()).is_zero());
    }

    #[test]
    fn parse_print_round_trip(seed in any::<u64>(), dq in any::<bool>()) {
        let mut r = rng(seed);
        let form = if dq { Form::Dq } else { Form::Sigma };
        let l = operator(&mut r, form, 3, 3);
        let back = parse_operator(&l.display(), &SkewRing::q(form, f())).unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn polygons_commute_with_fourier(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = operator(&mut r, Form::Sigma, 3, 3);
        let p = polygon(&l, Form::Sigma).unwrap();
        prop_assert!(p.fourier_image().same_region(&polygon(&fourier_sharp(&l).unwrap(), Form::Sigma).unwrap()));
        let d = convert(&l, Form::Dq);
        let pd = polygon(&d, Form::Dq).unwrap();
        prop_assert!(pd.fourier_image().same_region(&polygon(&fourier_plus(&d).unwrap(), Form::Dq).unwrap()));
    }

    #[test]
    fn dq_polygon_is_left_closure(seed in any::<u64>()) {
        let mut r = rng(seed);
        let l = operator(&mut r, Form::Sigma, 3, 3);
        let ps = polygon(&l, Form::Sigma).unwrap();
        let pd = polygon(&convert(&l, Form::Dq), Form::Dq).unwrap();
        let closed = qdiff::newton_ramis::NewtonPolygon::from_points(Form::Dq, ps.points.clone(), true).unwrap();
        prop_assert!(closed.same_region(&pd));
    }

    #[test]
    fn rescaling_divides_slopes(seed in any::<u64>(), k in 2u32..=3) {
        let mut r = rng(seed);
        let l = operator(&mut r, Form::Sigma, 2, 3);
        let before: Vec<Slope> = polygon(&l, Form::Sigma).unwrap().finite_slopes().into_iter()
            .map(|s| Slope::Finite(s / BigRational::from_integer(k.into()))).collect();
        let scaled = rescale_power(&l, k).unwrap();
        let after: Vec<Slope> = polygon(&scaled, Form::Sigma).unwrap().finite_slopes().into_iter().map(Slope::Finite).collect();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn fourier_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (operator(&mut r, Form::Sigma, 2, 2), operator(&mut r, Form::Sigma, 2, 2));
        let lhs = fourier_sharp(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, fourier_sharp(&a).unwrap().mul(&fourier_sharp(&b).unwrap()).unwrap());
        let (a, b) = (convert(&a, Form::Dq), convert(&b, Form::Dq));
        let lhs = fourier_plus(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, fourier_plus(&a).unwrap().mul(&fourier_plus(&b).unwrap()).unwrap());
    }

    #[test]
    fn newton_action_matches_monomial_action(seed in any::<u64>()) {
        let mut r = rng(seed);
        let q = f().q();
        let l = operator(&mut r, Form::Sigma, 2, 2);
        let xi = scalar(&mut r);
        let p = poly_x(&mut r, 8);
        let lhs = act(&l, &NewtonSeries::from_poly(&p, &xi, &q, 16)).unwrap().to_poly();
        let direct = apply(&l, &Series::power(p.coeffs().to_vec())).unwrap().prefix();
        let known = Poly::from_coeffs(lhs.coeffs().iter().take(direct.len()).cloned().collect());
        prop_assert_eq!(known, Poly::from_coeffs(direct));
    }

    #[test]
    fn newton_conversion_round_trip(seed in any::<u64>(), n in 0usize..=15) {
        let mut r = rng(seed);
        let q = f().q();
        let xi = scalar(&mut r);
        let p = poly_x(&mut r, n);
        prop_assert_eq!(NewtonSeries::from_poly(&p, &xi, &q, n + 1).to_poly(), p);
    }

    #[test]
    fn normalize_is_an_involution(seed in any::<u64>(), s1 in -2i64..=2, s2 in -3i64..=3) {
        let mut r = rng(seed);
        let field = f();
        let y: Vec<Scalar> = (0..20).map(|_| scalar(&mut r)).collect();
        let o = GevreyOrders::int(s1, s2);
        let there = normalize(&ListGen(y.clone()), &o, 20, field).unwrap();
        prop_assert_eq!(normalize(&ListGen(there), &o.neg(), 20, field).unwrap(), y);
    }
}

#[test]
fn dq_power_expansion_on_monomials() {
    let field = f();
    let q = field.q();
    let ring = SkewRing::q(Form::Sigma, field);
    for n in 0..=6 {
        let op = DqPowerExpansion::new(n, &q).to_operator(&ring);
        for k in 0..=12usize {
            let xk = Series::power((0..=k).map(|i| if i == k { Scalar::one() } else { Scalar::zero() }).collect());
            let got = apply(&op, &xk).unwrap();
            let want = (0..n as u64).fold(Scalar::one(), |a, j| &a * &field.bracket((k as u64).saturating_sub(j)));
            for e in got.lo()..got.hi() {
                let c = got.coeff(e).unwrap();
                if k >= n && e == (k - n) as i64 {
                    assert_eq!(c, want, "n = {n}, k = {k}");
                } else {
                    assert!(c.is_zero(), "n = {n}, k = {k}, e = {e}");
                }
            }
        }
    }
}

#[test]
fn central_identity_on_random_systems() {
    let mut r = rng(21);
    for _ in 0..6 {
        let sys = system(&mut r, 2);
        let p = vector(&mut r, 2, 2);
        let c = central_identity_check(&sys, &p, 3).unwrap();
        assert!(c.holds, "{:?}", c.lhs_degrees);
    }
}

#[test]
fn leibniz_convolution() {
    // G_[n+s] = Σ_{i+j=n} ([n]![s]!/[n+s]!) (d_q^j/[j]!)(G_[s](q^i x)) G_[i]
    let field = f();
    let q = field.q();
    let mut r = rng(31);
    for _ in 0..4 {
        let sys = system(&mut r, 2);
        let t = iterate(&sys, 5);
        for n in 0..=3usize {
            for s in 0..=(5 - n) {
                let mut acc = Matrix::<RatFun>::zeros(2, 2);
                for i in 0..=n {
                    let j = n - i;
                    let mut g = t.g_bracket(s);
                    for _ in 0..j {
                        g = g.map(|e| e.dq(&q));
                    }
                    let g = g.map(|e| e.twist(&q.pow(i as i64)).scale(&field.fact(j as u64).inv()));
                    acc = acc.add(&g.mul(&t.g_bracket(i)));
                }
                let c = &(&field.fact(n as u64) * &field.fact(s as u64)) / &field.fact((n + s) as u64);
                assert_eq!(acc.map(|e| e.scale(&c)), t.g_bracket(n + s), "n = {n}, s = {s}");
            }
        }
    }
}
