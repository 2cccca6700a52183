use std::fmt;

use crate::arith::{Field, Poly, RatFun, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Sigma,
    Dq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Z,
}

/// The skew ring K(v)[g] where g is either σ_t: f(v) ↦ f(tv) or the t-derivation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewRing {
    pub form: Form,
    pub var: Var,
    pub field: Field,
    pub twist: Scalar,
}

impl SkewRing {
    pub fn new(form: Form, var: Var, field: Field, twist: Scalar) -> Self {
        assert!(!twist.is_zero() && !twist.is_one(), "twist must be a nonzero non-unit");
        SkewRing { form, var, field, twist }
    }

    /// K(x)[σ_q] or K(x)[d_q].
    pub fn q(form: Form, field: Field) -> Self {
        Self::new(form, Var::X, field, field.q())
    }

    /// K(z)[σ_p] or K(z)[d_p] with p = 1/q.
    pub fn p(form: Form, field: Field) -> Self {
        Self::new(form, Var::Z, field, field.p())
    }

    pub fn with_form(&self, form: Form) -> Self {
        SkewRing { form, ..self.clone() }
    }

    pub fn zero(&self) -> SkewOp {
        SkewOp { ring: self.clone(), coeffs: Vec::new() }
    }

    pub fn one(&self) -> SkewOp {
        self.elem(RatFun::one())
    }

    pub fn elem(&self, f: RatFun) -> SkewOp {
        SkewOp::new(self.clone(), vec![f])
    }

    pub fn scalar(&self, c: Scalar) -> SkewOp {
        self.elem(RatFun::constant(c))
    }

    /// The variable as an operator.
    pub fn var_op(&self) -> SkewOp {
        self.elem(RatFun::x_pow(1))
    }

    pub fn gen(&self) -> SkewOp {
        SkewOp::new(self.clone(), vec![RatFun::zero(), RatFun::one()])
    }

    /// Generator name used by the printer and parser.
    pub fn gen_name(&self) -> String {
        let r = self.field.r() as i64;
        let e = self.twist.t_exponent();
        let base = match self.form {
            Form::Sigma => "sigma",
            Form::Dq => "d",
        };
        let pure = self.twist.num().is_one() && self.twist.den().is_one();
        let suffix = if pure && e == r {
            "q"
        } else if pure && e == -r {
            "p"
        } else if pure && e == 1 {
            "qt"
        } else if pure && e == -1 {
            "pt"
        } else {
            "?"
        };
        match (self.form, suffix) {
            (Form::Sigma, "q") => "sigma".into(),
            _ => format!("{base}{suffix}"),
        }
    }

    pub fn var_name(&self) -> &'static str {
        match self.var {
            Var::X => "x",
            Var::Z => "z",
        }
    }

    pub fn scalar_name(&self) -> &'static str {
        if self.field.r() == 1 {
            "q"
        } else {
            "qt"
        }
    }
}

/// A linear operator Σ a_i(v) g^i with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewOp {
    ring: SkewRing,
    coeffs: Vec<RatFun>,
}

impl SkewOp {
    pub fn new(ring: SkewRing, mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewOp { ring, coeffs }
    }

    pub fn ring(&self) -> &SkewRing {
        &self.ring
    }

    pub fn form(&self) -> Form {
        self.ring.form
    }

    pub fn twist(&self) -> &Scalar {
        &self.ring.twist
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in the generator; the zero operator reports 0.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> RatFun {
        self.coeffs.last().cloned().unwrap_or_else(RatFun::zero)
    }

    fn check_ring(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring {
            return Err(Error::FormMismatch(format!(
                "operators live in different rings ({} vs {})",
                self.ring.gen_name(),
                o.ring.gen_name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_ring(o)?;
        Ok(self.add_unchecked(o))
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect();
        SkewOp::new(self.ring.clone(), c)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SkewOp { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Left multiplication by a rational function.
    pub fn left_scale(&self, f: &RatFun) -> Self {
        SkewOp::new(self.ring.clone(), self.coeffs.iter().map(|c| c * f).collect())
    }

    /// g · self, using σ f = f(tv)σ and d f = f(tv)d + d(f).
    fn gen_times(&self) -> Self {
        let t = &self.ring.twist;
        let mut out = vec![RatFun::zero(); self.coeffs.len() + 1];
        for (j, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            out[j + 1] = &out[j + 1] + &b.twist(t);
            if self.ring.form == Form::Dq {
                out[j] = &out[j] + &b.dq(t);
            }
        }
        SkewOp::new(self.ring.clone(), out)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_ring(o)?;
        let mut acc = self.ring.zero();
        let mut p = o.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                p = p.gen_times();
            }
            if !a.is_zero() {
                acc = acc.add_unchecked(&p.left_scale(a));
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = self.ring.one();
        for _ in 0..k {
            r = r.mul(self).expect("same ring");
        }
        r
    }

    /// Image under the ring morphism sending the variable to `var_img` and the
    /// generator to `gen_img` (both in the target ring). Coefficients must be
    /// polynomial unless `var_img` has order 0.
    pub fn image(&self, var_img: &SkewOp, gen_img: &SkewOp) -> Result<SkewOp> {
        let target = var_img.ring().clone();
        gen_img.check_ring(var_img)?;
        let var_is_fn = var_img.order() == 0 && !var_img.is_zero();
        let mut acc = target.zero();
        let mut gp = target.one();
        let mut var_pows: Vec<SkewOp> = vec![target.one()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                gp = gp.mul(gen_img)?;
            }
            if a.is_zero() {
                continue;
            }
            let a_img = if var_is_fn {
                target.elem(compose(a, &var_img.coeff(0)))
            } else {
                let p = a.to_poly().ok_or_else(|| {
                    Error::Domain("operator coefficients must be polynomial for this transform".into())
                })?;
                let mut s = target.zero();
                for (k, c) in p.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    while var_pows.len() <= k {
                        let next = var_pows.last().unwrap().mul(var_img)?;
                        var_pows.push(next);
                    }
                    s = s.add(&var_pows[k].left_scale(&RatFun::constant(c.clone())))?;
                }
                s
            };
            acc = acc.add(&a_img.mul(&gp)?)?;
        }
        Ok(acc)
    }

    /// Multiply on the left by the lcm of the coefficient denominators (and a power
    /// of the variable) so that every coefficient is a polynomial.
    pub fn clear_denominators(&self) -> SkewOp {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = Poly::<Scalar>::one();
        let mut emin = 0i64;
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            emin = emin.min(c.x_exponent());
            let d = c.den_core();
            if !d.is_one() {
                let g = l.gcd(d);
                l = l.mul(&d.div_exact(&g).unwrap());
            }
        }
        self.left_scale(&RatFun::from_parts(-emin, l, Poly::one()))
    }

    /// Canonical representative of K(v)^*·L: polynomial coefficients without common
    /// factor, and the lowest coefficient of the leading coefficient equal to 1.
    pub fn normalize(&self) -> SkewOp {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.clear_denominators();
        let mut g = Poly::<Scalar>::zero();
        for a in c.coeffs.iter().filter(|a| !a.is_zero()) {
            let p = a.to_poly().unwrap();
            g = g.gcd(&p);
            if g.is_one() {
                break;
            }
        }
        let c = if g.is_one() { c } else { c.left_scale(&RatFun::new(Poly::one(), g)) };
        let lead = c.leading().to_poly().unwrap();
        let low = lead.coeff(lead.ord());
        c.left_scale(&RatFun::constant(low.inv()))
    }

    /// True if every coefficient is a polynomial in the variable.
    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    pub fn with_ring(&self, ring: SkewRing) -> SkewOp {
        SkewOp::new(ring, self.coeffs.clone())
    }

    pub fn display(&self) -> String {
        let v = self.ring.var_name();
        let q = self.ring.scalar_name();
        let g = self.ring.gen_name();
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let negative = leading_negative(a);
            let c = if negative { -a } else { a.clone() };
            let gp = match i {
                0 => String::new(),
                1 => g.clone(),
                _ => format!("{g}^{i}"),
            };
            let cs = c.display_in(v, q);
            let bare = gp.is_empty();
            let term = if bare {
                cs
            } else if c.is_one() {
                gp
            } else if is_atomic(&cs) {
                format!("{cs}*{gp}")
            } else {
                format!("({cs})*{gp}")
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if negative && bare && !is_atomic(&term) {
                out.push_str(&format!("({term})"));
            } else {
                out.push_str(&term);
            }
        }
        out
    }
}

fn is_atomic(s: &str) -> bool {
    !s.contains(' ') && !s.contains('/') && !s.starts_with('-')
}

fn leading_negative(a: &RatFun) -> bool {
    let (n, _) = a.as_fraction();
    let lc = n.lc();
    let (ln, _) = lc.as_fraction();
    ln.lc() < num_bigint::BigInt::from(0)
}

/// a(g(v)) for rational functions a and g.
pub fn compose(a: &RatFun, g: &RatFun) -> RatFun {
    if *g == RatFun::x_pow(1) {
        return a.clone();
    }
    let (n, d) = a.as_fraction();
    let ev = |p: &Poly<Scalar>| {
        let mut r = RatFun::zero();
        for c in p.coeffs().iter().rev() {
            r = &(&r * g) + &RatFun::constant(c.clone());
        }
        r
    };
    &ev(&n) / &ev(&d)
}

impl fmt::Debug for SkewOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl fmt::Display for SkewOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::t_pow(1)
    }

    fn xr() -> RatFun {
        RatFun::x_pow(1)
    }

    #[test]
    fn commutation_laws() {
        let s = SkewRing::q(Form::Sigma, Field::rational());
        let lhs = s.gen().mul(&s.var_op()).unwrap();
        assert_eq!(lhs, SkewOp::new(s.clone(), vec![RatFun::zero(), xr().scale(&q())]));
        let d = SkewRing::q(Form::Dq, Field::rational());
        let lhs = d.gen().mul(&d.var_op()).unwrap();
        assert_eq!(lhs, SkewOp::new(d.clone(), vec![RatFun::one(), xr().scale(&q())]));
    }

    #[test]
    fn tchakaloff_product() {
        let s = SkewRing::q(Form::Sigma, Field::rational());
        let a = s.gen().sub(&s.one()).unwrap();
        let b = s.gen().sub(&s.var_op().left_scale(&RatFun::constant(q()))).unwrap();
        let l = a.mul(&b).unwrap();
        let q2x = xr().scale(&q().pow(2));
        let expect = SkewOp::new(s, vec![xr().scale(&q()), -&(&RatFun::one() + &q2x), RatFun::one()]);
        assert_eq!(l, expect);
        assert_eq!(l.display(), "sigma^2 - (q^2*x + 1)*sigma + q*x");
    }

    #[test]
    fn mixed_rings_rejected() {
        let s = SkewRing::q(Form::Sigma, Field::rational());
        let d = SkewRing::q(Form::Dq, Field::rational());
        assert!(matches!(s.gen().mul(&d.gen()), Err(Error::FormMismatch(_))));
    }

    #[test]
    fn normalize_is_unit_invariant() {
        let s = SkewRing::q(Form::Sigma, Field::rational());
        let l = SkewOp::new(s, vec![&RatFun::one() - &xr(), &xr().scale(&q()) - &RatFun::one()]);
        let u = RatFun::new(Poly::from_coeffs(vec![q(), Scalar::one()]), Poly::from_coeffs(vec![Scalar::one(), q()]));
        assert_eq!(l.left_scale(&u).normalize(), l.normalize());
        assert_eq!(l.normalize().display(), "-(q*x - 1)*sigma + x - 1");
    }
}
