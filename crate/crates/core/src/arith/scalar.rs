//! Elements of Q(t), where t is the chosen root q̃ of q.
//!
//! An element is stored as t^e · num/den with num, den ∈ Z[t] coprime, both with a
//! nonzero constant term, and den having positive leading coefficient. This form is
//! unique, so equality is structural.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modp;
use super::zpoly::ZPoly;
use super::FieldElem;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    e: i64,
    num: ZPoly,
    den: ZPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { e: 0, num: ZPoly::zero(), den: ZPoly::one() }
    }

    pub fn one() -> Self {
        Scalar { e: 0, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        Scalar { e: 0, num: ZPoly::constant(v), den: ZPoly::one() }
    }

    pub fn from_ratio(v: &BigRational) -> Self {
        Self::from_parts(0, ZPoly::constant(v.numer().clone()), ZPoly::constant(v.denom().clone()))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_ratio(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// t^k for the field generator t.
    pub fn t_pow(k: i64) -> Self {
        Scalar { e: k, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_zpoly(p: ZPoly) -> Self {
        Self::from_parts(0, p, ZPoly::one())
    }

    /// Normalize t^e · num/den into canonical form.
    pub fn from_parts(e: i64, num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (on, od) = (num.ord(), den.ord());
        let mut num = num.shift_down(on);
        let mut den = den.shift_down(od);
        let e = e + on as i64 - od as i64;
        if !den.is_one() {
            let (_, n1, d1) = num.gcd_cofactors(&den);
            num = n1;
            den = d1;
        }
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Scalar { e, num, den }
    }

    /// Build from parts already known to be coprime and t-free (only the sign is fixed).
    fn from_coprime(e: i64, mut num: ZPoly, mut den: ZPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let on = num.ord();
        if on > 0 {
            num = num.shift_down(on);
        }
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Scalar { e: e + on as i64, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Power of t pulled out of the canonical form.
    pub fn t_exponent(&self) -> i64 {
        self.e
    }

    /// Numerator without the t-power.
    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    /// ord_t of the element (valuation at the place t = 0).
    pub fn ord_t(&self) -> i64 {
        assert!(!self.is_zero());
        self.e
    }

    /// deg_t num − deg_t den, counting the t-power.
    pub fn deg_t(&self) -> i64 {
        assert!(!self.is_zero());
        self.e + self.num.deg() as i64 - self.den.deg() as i64
    }

    /// True when the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.e == 0 && self.num.is_constant() && self.den.is_constant()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_rational() {
            Some(BigRational::new(self.num.lc(), self.den.lc()))
        } else {
            None
        }
    }

    /// True when the element is a polynomial in t with integer coefficients.
    pub fn is_integral_poly(&self) -> bool {
        self.is_zero() || (self.e >= 0 && self.den.is_one())
    }

    /// Numerator and denominator in Z[t] with the t-power folded in.
    pub fn as_fraction(&self) -> (ZPoly, ZPoly) {
        if self.e >= 0 {
            (self.num.shift_up(self.e as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shift_up((-self.e) as usize))
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::from_coprime(-self.e, self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Self {
        if k < 0 {
            return self.inv().pow(-k);
        }
        if self.is_zero() {
            return if k == 0 { Self::one() } else { Self::zero() };
        }
        let k32 = u32::try_from(k).expect("exponent too large");
        Self::from_coprime(self.e * k, self.num.pow(k32), self.den.pow(k32))
    }

    /// Substitute t ↦ t^k (used to view an element of Q(q) inside Q(q^(1/k))).
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_coprime(self.e * k as i64, self.num.inflate(k), self.den.inflate(k))
    }

    /// Image in Z/p under t ↦ a, or None if the denominator vanishes there.
    pub fn eval_mod(&self, a: u64, p: u64) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        let d = modp::poly_eval(&self.den.to_mod(p), a, p);
        if d == 0 || a.is_multiple_of(p) && self.e < 0 {
            return None;
        }
        let n = modp::poly_eval(&self.num.to_mod(p), a, p);
        let te = if self.e >= 0 {
            modp::pow_mod(a, self.e as u64, p)
        } else {
            modp::inv_mod(modp::pow_mod(a, (-self.e) as u64, p), p)
        };
        Some(modp::mul_mod(modp::mul_mod(n, te, p), modp::inv_mod(d, p), p))
    }

    /// Evaluate at a rational point, or None at a pole.
    pub fn eval_rational(&self, t: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        let ev = |p: &ZPoly| {
            let mut r = BigRational::zero();
            for c in p.coeffs().iter().rev() {
                r = r * t + BigRational::from_integer(c.clone());
            }
            r
        };
        let d = ev(&self.den);
        if d.is_zero() || (t.is_zero() && self.e < 0) {
            return None;
        }
        let te = if t.is_zero() {
            if self.e == 0 { BigRational::one() } else { BigRational::zero() }
        } else {
            num_traits::pow::Pow::pow(t, self.e as i32)
        };
        Some(ev(&self.num) * te / d)
    }

    fn align(&self, o: &Self) -> (i64, ZPoly, ZPoly) {
        let e = self.e.min(o.e);
        let a = self.num.shift_up((self.e - e) as usize);
        let c = o.num.shift_up((o.e - e) as usize);
        (e, a, c)
    }

    fn add_impl(&self, o: &Self, negate: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg_impl() } else { o.clone() };
        }
        let (e, a, mut c) = self.align(o);
        if negate {
            c = c.neg();
        }
        let (b, d) = (&self.den, &o.den);
        if b == d {
            let n = a.add(&c);
            if n.is_zero() {
                return Self::zero();
            }
            if b.is_one() {
                return Self::from_coprime(e, n, ZPoly::one());
            }
            return Self::from_parts(e, n, b.clone());
        }
        if b.is_one() {
            return Self::from_coprime(e, a.mul(d).add(&c), d.clone());
        }
        if d.is_one() {
            return Self::from_coprime(e, a.add(&c.mul(b)), b.clone());
        }
        let (g, b1, d1) = b.gcd_cofactors(d);
        if g.is_one() {
            let n = a.mul(d).add(&c.mul(b));
            return Self::from_coprime(e, n, b.mul(d));
        }
        let n = a.mul(&d1).add(&c.mul(&b1));
        if n.is_zero() {
            return Self::zero();
        }
        let (_, n, g2) = n.gcd_cofactors(&g);
        Self::from_coprime(e, n, g2.mul(&b1).mul(&d1))
    }

    fn neg_impl(&self) -> Self {
        Scalar { e: self.e, num: self.num.neg(), den: self.den.clone() }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let e = self.e + o.e;
        let (mut a, mut b) = (self.num.clone(), self.den.clone());
        let (mut c, mut d) = (o.num.clone(), o.den.clone());
        if !d.is_one() {
            let (_, a1, d1) = a.gcd_cofactors(&d);
            a = a1;
            d = d1;
        }
        if !b.is_one() {
            let (_, c1, b1) = c.gcd_cofactors(&b);
            c = c1;
            b = b1;
        }
        Self::from_coprime(e, a.mul(&c), b.mul(&d))
    }

    pub fn div_by(&self, o: &Self) -> Self {
        self.mul_impl(&o.inv())
    }

    /// Multiply by t^k.
    pub fn mul_t_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Scalar { e: self.e + k, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (n, d) = self.as_fraction();
        let ns = n.display_in(var);
        if d.is_one() {
            return ns;
        }
        let wrap = |s: String, p: &ZPoly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        let ds = d.display_in(var);
        format!("{}/{}", wrap(ns, &n), wrap(ds, &d))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

impl FieldElem for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_i64(v: i64) -> Self {
        Scalar::from_i64(v)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
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
        self.neg_impl()
    }
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl std::ops::Add for &$t {
            type Output = $t;
            fn add(self, o: Self) -> $t {
                FieldElem::add(self, o)
            }
        }
        impl std::ops::Sub for &$t {
            type Output = $t;
            fn sub(self, o: Self) -> $t {
                FieldElem::sub(self, o)
            }
        }
        impl std::ops::Mul for &$t {
            type Output = $t;
            fn mul(self, o: Self) -> $t {
                FieldElem::mul(self, o)
            }
        }
        impl std::ops::Div for &$t {
            type Output = $t;
            fn div(self, o: Self) -> $t {
                FieldElem::div(self, o)
            }
        }
        impl std::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                FieldElem::neg(self)
            }
        }
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, o: Self) -> $t {
                FieldElem::add(&self, &o)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, o: Self) -> $t {
                FieldElem::sub(&self, &o)
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, o: Self) -> $t {
                FieldElem::mul(&self, &o)
            }
        }
        impl std::ops::Div for $t {
            type Output = $t;
            fn div(self, o: Self) -> $t {
                FieldElem::div(&self, &o)
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                FieldElem::neg(&self)
            }
        }
    };
}
pub(crate) use forward_ops;

forward_ops!(Scalar);

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Scalar {
        Scalar::t_pow(1)
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = (t() + Scalar::one()) * (t() - Scalar::one());
        let b = t().pow(2) - Scalar::one();
        assert_eq!(a, b);
        let c = &a / &(t() - Scalar::one());
        assert_eq!(c, t() + Scalar::one());
        let h = Scalar::from_frac(1, 2);
        assert_eq!(&h + &h, Scalar::one());
    }

    #[test]
    fn t_powers_are_cheap_and_exact() {
        let x = Scalar::t_pow(-3) * (t() + Scalar::from_i64(2));
        assert_eq!(x.ord_t(), -3);
        assert_eq!(x.deg_t(), -2);
        let y = &x * &Scalar::t_pow(3);
        assert_eq!(y, t() + Scalar::from_i64(2));
    }

    #[test]
    fn subtraction_cancels() {
        let a = Scalar::one() / (t() - Scalar::from_i64(2));
        let b = t().pow(5) / (t() + Scalar::one());
        assert_eq!(&(&a + &b) - &b, a);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation() {
        let a = Scalar::one() / (t() - Scalar::from_i64(2));
        assert_eq!(a.eval_rational(&BigRational::from_integer((-1).into())),
                   Some(BigRational::new((-1).into(), 3.into())));
        assert_eq!(a.eval_rational(&BigRational::from_integer(2.into())), None);
    }
}
