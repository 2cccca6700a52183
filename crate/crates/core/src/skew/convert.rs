//! Changing between σ- and d-forms, and the operator constructions built on them.

use crate::arith::qnum::bracket_of;
use crate::arith::{Field, Poly, RatFun, Scalar};
use crate::error::{Error, Result};

use super::operator::{Form, SkewOp, SkewRing};

/// d^n = (−1)^n / ((t−1)^n v^n) · Σ_i c_i σ^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DqPowerExpansion {
    pub n: usize,
    pub c: Vec<Scalar>,
}

impl DqPowerExpansion {
    pub fn new(n: usize, t: &Scalar) -> Self {
        // ∏_{j<n} (σ − t^j), coefficients in increasing powers of σ
        let mut e = vec![Scalar::one()];
        for j in 0..n {
            let root = t.pow(j as i64);
            let mut next = vec![Scalar::zero(); e.len() + 1];
            for (i, v) in e.iter().enumerate() {
                next[i + 1] = &next[i + 1] + v;
                next[i] = &next[i] - &(v * &root);
            }
            e = next;
        }
        let sign = if n.is_multiple_of(2) { Scalar::one() } else { Scalar::from_i64(-1) };
        let f = &sign * &t.pow(-((n * n.saturating_sub(1) / 2) as i64));
        DqPowerExpansion { n, c: e.iter().map(|v| v * &f).collect() }
    }

    /// The expansion as a σ-form operator in `ring`.
    pub fn to_operator(&self, ring: &SkewRing) -> SkewOp {
        let t = &ring.twist;
        let n = self.n as i64;
        let sign = if n % 2 == 0 { Scalar::one() } else { Scalar::from_i64(-1) };
        let pre = &sign * &(t - &Scalar::one()).pow(-n);
        let front = RatFun::x_pow(-n).scale(&pre);
        let ring = ring.with_form(Form::Sigma);
        SkewOp::new(ring, self.c.iter().map(|c| front.scale(c)).collect())
    }
}

/// Gaussian binomial in an arbitrary twist.
fn binom_t(t: &Scalar, n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    for i in 1..=k {
        num = &num * &bracket_of(t, (n - k + i) as i64);
        den = &den * &bracket_of(t, i as i64);
    }
    num.div_by(&den)
}

/// Rewrite L in the requested form; the operator is unchanged.
pub fn convert(l: &SkewOp, target: Form) -> SkewOp {
    if l.form() == target {
        return l.clone();
    }
    let ring = l.ring().with_form(target);
    let t = l.twist().clone();
    let tm1 = &t - &Scalar::one();
    match target {
        Form::Dq => {
            // σ = 1 + (t−1) v d, so σ^j = Σ_i binom(j,i)_t (t−1)^i t^{i(i−1)/2} v^i d^i
            let nu = l.order();
            let mut out = Vec::with_capacity(nu + 1);
            for i in 0..=nu {
                let mut s = RatFun::zero();
                for j in i..=nu {
                    let b = l.coeff(j);
                    if !b.is_zero() {
                        s = &s + &b.scale(&binom_t(&t, j, i));
                    }
                }
                let f = &tm1.pow(i as i64) * &t.pow((i * i.saturating_sub(1) / 2) as i64);
                out.push(s.mul_x_pow(i as i64).scale(&f));
            }
            SkewOp::new(ring, out)
        }
        Form::Sigma => {
            let mut acc = ring.zero();
            for (n, a) in l.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let e = DqPowerExpansion::new(n, &t).to_operator(&ring);
                acc = acc.add(&e.left_scale(a)).expect("same ring");
            }
            acc
        }
    }
}

/// From L = Σ a_i σ_t^i build N = Σ a_{ν−i}(t^{−ν}v) σ_{1/t}^i, which has the same solutions.
pub fn invert_q(l: &SkewOp) -> Result<SkewOp> {
    if l.form() != Form::Sigma {
        return Err(Error::FormMismatch("inversion of the twist expects σ-form".into()));
    }
    let r = l.ring();
    let t_inv = r.twist.inv();
    let nu = l.order();
    let s = t_inv.pow(nu as i64);
    let ring = SkewRing::new(Form::Sigma, r.var, r.field, t_inv);
    let coeffs = (0..=nu).map(|j| l.coeff(nu - j).twist(&s)).collect();
    Ok(SkewOp::new(ring, coeffs))
}

/// Read L ∈ ℚ(q)(x)[σ_q] over ℚ(q̃), q̃^r = q, replacing σ_q by σ_q̃^r.
pub fn rescale_power(l: &SkewOp, r: u32) -> Result<SkewOp> {
    if l.form() != Form::Sigma {
        return Err(Error::FormMismatch("rescaling expects σ-form".into()));
    }
    let ring = l.ring();
    if ring.field.r() != 1 {
        return Err(Error::Domain("rescaling starts from an operator over ℚ(q)".into()));
    }
    let field = Field::new(r)?;
    let e = ring.twist.t_exponent();
    if !(ring.twist.num().is_one() && ring.twist.den().is_one() && (e == 1 || e == -1)) {
        return Err(Error::Domain("rescaling needs twist q or 1/q".into()));
    }
    let new = SkewRing::new(Form::Sigma, ring.var, field, Scalar::t_pow(e));
    let k = r as usize;
    let mut coeffs = vec![RatFun::zero(); l.order() * k + 1];
    for (i, a) in l.coeffs().iter().enumerate() {
        coeffs[i * k] = a.map(|c| c.inflate(k));
    }
    Ok(SkewOp::new(new, coeffs))
}

/// (d − d(a_0)/a_0)∘L: kills F + c for every constant c whenever L kills F.
pub fn shift_constant_annihilator(l: &SkewOp) -> Result<SkewOp> {
    if l.form() != Form::Dq {
        return Err(Error::FormMismatch("constant shift expects d-form".into()));
    }
    let a0 = l.coeff(0);
    if a0.is_zero() {
        return Ok(l.clone());
    }
    let t = l.twist().clone();
    let left = SkewOp::new(l.ring().clone(), vec![-&(&a0.dq(&t) / &a0), RatFun::one()]);
    left.mul(l)
}

/// The image of the generator of the other form, for cross-checks via `SkewOp::image`.
pub fn generator_in(ring: &SkewRing, from: Form) -> SkewOp {
    let t = &ring.twist;
    let tm1 = t - &Scalar::one();
    let target = ring.clone();
    match (from, ring.form) {
        (Form::Sigma, Form::Dq) => SkewOp::new(target, vec![RatFun::one(), RatFun::x_pow(1).scale(&tm1)]),
        (Form::Dq, Form::Sigma) => {
            let f = RatFun::new(Poly::one(), Poly::from_coeffs(vec![Scalar::zero(), tm1]));
            SkewOp::new(target, vec![-&f, f])
        }
        _ => ring.gen(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::series::{apply, Series};

    fn q() -> Scalar {
        Scalar::t_pow(1)
    }

    fn ring(form: Form) -> SkewRing {
        SkewRing::q(form, Field::rational())
    }

    #[test]
    fn sigma_in_d_form() {
        let s = ring(Form::Sigma).gen();
        let d = convert(&s, Form::Dq);
        let x = RatFun::x_pow(1);
        let expect = SkewOp::new(ring(Form::Dq), vec![RatFun::one(), x.scale(&(&q() - &Scalar::one()))]);
        assert_eq!(d, expect);
    }

    #[test]
    fn eq_operator_in_sigma_form() {
        let r = ring(Form::Dq);
        let l = r.gen().sub(&r.one()).unwrap();
        let s = convert(&l, Form::Sigma);
        let f = RatFun::new(Poly::one(), Poly::from_coeffs(vec![Scalar::zero(), &q() - &Scalar::one()]));
        let expect = SkewOp::new(ring(Form::Sigma), vec![&(-&f) - &RatFun::one(), f]);
        assert_eq!(s, expect);
        assert_eq!(convert(&s, Form::Dq), l);
    }

    #[test]
    fn conversion_matches_morphism_image() {
        let rs = ring(Form::Sigma);
        let x = RatFun::x_pow(1);
        let l = SkewOp::new(
            rs.clone(),
            vec![&x + &RatFun::constant(q()), x.pow(2), &x.scale(&q()) - &RatFun::one(), RatFun::one()],
        );
        let rd = ring(Form::Dq);
        let img = l.image(&rd.var_op(), &generator_in(&rd, Form::Sigma)).unwrap();
        assert_eq!(convert(&l, Form::Dq), img);
        let back = img.image(&rs.var_op(), &generator_in(&rs, Form::Dq)).unwrap();
        assert_eq!(back, l);
        assert_eq!(convert(&img, Form::Sigma), l);
    }

    #[test]
    fn dq_power_on_monomials() {
        let rs = ring(Form::Sigma);
        for n in 0..=5usize {
            let e = DqPowerExpansion::new(n, &q()).to_operator(&rs);
            for k in 0..=10i64 {
                let mut v = vec![Scalar::zero(); 2 * n + 3];
                v[0] = Scalar::one();
                let mono = Series::laurent(k, v);
                let got = apply(&e, &mono).unwrap();
                let mut expect = Scalar::one();
                for j in 0..n as i64 {
                    expect = &expect * &bracket_of(&q(), k - j);
                }
                assert_eq!(got.coeff(k - n as i64).unwrap(), expect, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn inverted_geometric() {
        let rs = ring(Form::Sigma);
        let x = RatFun::x_pow(1);
        let l = SkewOp::new(rs, vec![&x - &RatFun::one(), &RatFun::one() - &x.scale(&q())]);
        let n = invert_q(&l).unwrap();
        let y = Series::power(vec![Scalar::one(); 12]);
        assert!(apply(&n, &y).unwrap().is_zero());
    }

    #[test]
    fn rescaled_sigma_minus_one() {
        let rs = ring(Form::Sigma);
        let l = rs.gen().sub(&rs.one()).unwrap();
        let r = rescale_power(&l, 2).unwrap();
        assert_eq!(r.order(), 2);
        assert_eq!(r.display(), "sigmaqt^2 - 1");
    }

    #[test]
    fn constant_shift() {
        let f = Field::rational();
        let rd = ring(Form::Dq);
        let l = rd.gen().sub(&rd.one()).unwrap();
        let m = shift_constant_annihilator(&l).unwrap();
        let mut y: Vec<Scalar> = (0..20u64).map(|n| f.fact(n).inv()).collect();
        y[0] = &y[0] + &Scalar::from_i64(5);
        assert!(apply(&m, &Series::power(y)).unwrap().is_zero());
        let xd = SkewOp::new(rd, vec![RatFun::zero(), RatFun::x_pow(1)]);
        assert_eq!(shift_constant_annihilator(&xd).unwrap(), xd);
    }
}
