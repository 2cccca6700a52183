//! Rational functions in x, kept as x^e · num/den with den monic and both
//! num and den prime to x.

use std::fmt;

use super::poly::Poly;
use super::scalar::{forward_ops, Scalar};
use super::FieldElem;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun<F = Scalar> {
    e: i64,
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: FieldElem> RatFun<F> {
    pub fn zero() -> Self {
        RatFun { e: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun { e: 0, num: Poly::constant(c), den: Poly::one() }
    }

    /// x^k for k ∈ Z.
    pub fn x_pow(k: i64) -> Self {
        RatFun { e: k, num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let o = p.ord();
        RatFun { e: o as i64, num: p.shift_down(o), den: Poly::one() }
    }

    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        Self::from_parts(0, num, den)
    }

    pub fn from_parts(e: i64, num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (on, od) = (num.ord(), den.ord());
        let mut num = num.shift_down(on);
        let mut den = den.shift_down(od);
        let e = e + on as i64 - od as i64;
        if !den.is_constant() && !num.is_constant() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
        }
        let l = den.lc();
        if !l.is_one() {
            let li = l.inv();
            num = num.scale(&li);
            den = den.scale(&li);
        }
        RatFun { e, num, den }
    }

    fn from_coprime(e: i64, num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let on = num.ord();
        let num = if on > 0 { num.shift_down(on) } else { num };
        RatFun { e: e + on as i64, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Exponent of the x-power factored out.
    pub fn x_exponent(&self) -> i64 {
        self.e
    }

    /// Numerator prime to x (without the x-power).
    pub fn num_core(&self) -> &Poly<F> {
        &self.num
    }

    /// Monic denominator prime to x.
    pub fn den_core(&self) -> &Poly<F> {
        &self.den
    }

    /// True when the function is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || (self.e >= 0 && self.den.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.e == 0 && self.den.is_one() && self.num.is_constant())
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_zero() {
            Some(F::zero())
        } else if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn to_poly(&self) -> Option<Poly<F>> {
        if self.is_polynomial() {
            Some(self.num.shift_up(self.e.max(0) as usize))
        } else {
            None
        }
    }

    /// Full numerator and denominator with the x-power folded in.
    pub fn as_fraction(&self) -> (Poly<F>, Poly<F>) {
        if self.e >= 0 {
            (self.num.shift_up(self.e as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shift_up((-self.e) as usize))
        }
    }

    /// Valuation at x = 0.
    pub fn ord_x(&self) -> i64 {
        self.e
    }

    /// Degree (deg num − deg den).
    pub fn deg_x(&self) -> i64 {
        self.e + self.num.deg() as i64 - self.den.deg() as i64
    }

    /// Coefficient of x^k of a Laurent polynomial.
    pub fn laurent_coeff(&self, k: i64) -> F {
        debug_assert!(self.is_laurent());
        let i = k - self.e;
        if i < 0 {
            F::zero()
        } else {
            self.num.coeff(i as usize)
        }
    }

    /// Terms (exponent, coefficient) of a Laurent polynomial.
    pub fn laurent_terms(&self) -> Vec<(i64, F)> {
        debug_assert!(self.is_laurent());
        self.num
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.e + i as i64, c.clone()))
            .collect()
    }

    pub fn neg(&self) -> Self {
        RatFun { e: self.e, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RatFun { e: self.e, num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn mul_x_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        RatFun { e: self.e + k, num: self.num.clone(), den: self.den.clone() }
    }

    fn add_impl(&self, o: &Self, negate: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let e = self.e.min(o.e);
        let a = self.num.shift_up((self.e - e) as usize);
        let mut c = o.num.shift_up((o.e - e) as usize);
        if negate {
            c = c.neg();
        }
        let (b, d) = (&self.den, &o.den);
        if b == d {
            let n = a.add(&c);
            if b.is_one() {
                return Self::from_coprime(e, n, b.clone());
            }
            return Self::from_parts(e, n, b.clone());
        }
        if b.is_one() {
            return Self::from_coprime(e, a.mul(d).add(&c), d.clone());
        }
        if d.is_one() {
            return Self::from_coprime(e, a.add(&c.mul(b)), b.clone());
        }
        let g = b.gcd(d);
        if g.is_one() {
            return Self::from_coprime(e, a.mul(d).add(&c.mul(b)), b.mul(d));
        }
        let b1 = b.div_exact(&g).unwrap();
        let d1 = d.div_exact(&g).unwrap();
        let n = a.mul(&d1).add(&c.mul(&b1));
        Self::from_parts(e, n, b1.mul(d))
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let e = self.e + o.e;
        let (mut a, mut b) = (self.num.clone(), self.den.clone());
        let (mut c, mut d) = (o.num.clone(), o.den.clone());
        if !d.is_one() && !a.is_constant() {
            let g = a.gcd(&d);
            if !g.is_one() {
                a = a.div_exact(&g).unwrap();
                d = d.div_exact(&g).unwrap();
            }
        }
        if !b.is_one() && !c.is_constant() {
            let g = c.gcd(&b);
            if !g.is_one() {
                c = c.div_exact(&g).unwrap();
                b = b.div_exact(&g).unwrap();
            }
        }
        Self::from_coprime(e, a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        let l = self.num.lc().inv();
        RatFun { e: -self.e, num: self.den.scale(&l), den: self.num.scale(&l) }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.inv().pow(-k);
        }
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul_impl(self);
        }
        r
    }

    /// f(t·x).
    pub fn twist(&self, t: &F) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let num = self.num.twist(t).scale(&t.pow_i(self.e));
        let den = self.den.twist(t);
        let l = den.lc().inv();
        RatFun { e: self.e, num: num.scale(&l), den: den.scale(&l) }
    }

    /// The t-derivative (f(tx) − f(x))/((t − 1)x).
    pub fn dq(&self, t: &F) -> Self {
        let diff = self.twist(t).sub(self);
        diff.mul_x_pow(-1).scale(&t.sub(&F::one()).inv())
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() || (x.is_zero() && self.e < 0) {
            return None;
        }
        Some(self.num.eval(x).mul(&x.pow_i(self.e)).div(&d))
    }

    pub fn map<G: FieldElem>(&self, f: impl Fn(&F) -> G) -> RatFun<G> {
        RatFun::from_parts(self.e, self.num.map(&f), self.den.map(&f))
    }

    /// Coefficients of the reduced numerator and denominator, with x-powers folded.
    pub fn all_coeffs(&self) -> (Vec<F>, Vec<F>) {
        let (n, d) = self.as_fraction();
        (n.into_coeffs(), d.into_coeffs())
    }
}

trait PowI {
    fn pow_i(&self, k: i64) -> Self;
}

impl<F: FieldElem> PowI for F {
    fn pow_i(&self, k: i64) -> Self {
        if k >= 0 {
            self.pow_u(k as u64)
        } else {
            self.inv().pow_u((-k) as u64)
        }
    }
}

impl<F: FieldElem> FieldElem for RatFun<F> {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn from_i64(v: i64) -> Self {
        RatFun::constant(F::from_i64(v))
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn is_one(&self) -> bool {
        RatFun::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_impl(o, false)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add_impl(o, true)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_impl(o)
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
    fn inv(&self) -> Self {
        RatFun::inv(self)
    }
}

forward_ops!(RatFun<Scalar>);

impl RatFun<Scalar> {
    pub fn display_in(&self, x: &str, q: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (n, d) = self.as_fraction();
        let ns = n.display_in(x, q);
        if d.is_one() {
            return ns;
        }
        let ds = d.display_in(x, q);
        let wrap = |s: String, p: &Poly<Scalar>| {
            if p.terms() > 1 || s.contains('/') || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(ns, &n), wrap(ds, &d))
    }
}

impl<F: FieldElem> fmt::Debug for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}·{:?}/{:?}", self.e, self.num, self.den)
    }
}
