//! Dense univariate polynomials in x over a coefficient field.

use std::fmt;

use super::scalar::Scalar;
use super::FieldElem;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F = Scalar> {
    c: Vec<F>,
}

impl<F: FieldElem> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: FieldElem> Poly<F> {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(v: F) -> Self {
        Self::from_coeffs(vec![v])
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(v: F, k: usize) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); k + 1];
        c[k] = v;
        Poly { c }
    }

    pub fn from_coeffs(c: Vec<F>) -> Self {
        let mut p = Poly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|v| v.is_zero()) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> F {
        self.c.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree in x; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    /// x-adic valuation (index of the lowest nonzero coefficient).
    pub fn ord(&self) -> usize {
        self.c.iter().position(|v| !v.is_zero()).unwrap_or(0)
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![F::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn shift_down(&self, k: usize) -> Self {
        Poly { c: self.c[k.min(self.c.len())..].to_vec() }
    }

    pub fn neg(&self) -> Self {
        Poly { c: self.c.iter().map(|v| v.neg()).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                _ => unreachable!(),
            })
            .collect();
        Self::from_coeffs(c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.sub(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.neg(),
                _ => unreachable!(),
            })
            .collect();
        Self::from_coeffs(c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        Poly { c: self.c.iter().map(|v| v.mul(s)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &F) -> F {
        let mut r = F::zero();
        for v in self.c.iter().rev() {
            r = r.mul(x).add(v);
        }
        r
    }

    /// f(t·x).
    pub fn twist(&self, t: &F) -> Self {
        let mut tp = F::one();
        let mut c = Vec::with_capacity(self.c.len());
        for v in &self.c {
            c.push(v.mul(&tp));
            tp = tp.mul(t);
        }
        Self::from_coeffs(c)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lc();
        if l.is_one() {
            return self.clone();
        }
        self.scale(&l.inv())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (Self::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        let inv = d.lc().inv();
        let mut q = vec![F::zero(); self.c.len() - dd];
        for k in (0..q.len()).rev() {
            let top = std::mem::replace(&mut r[k + dd], F::zero());
            if top.is_zero() {
                continue;
            }
            let qc = top.mul(&inv);
            for (i, di) in d.c.iter().enumerate().take(dd) {
                if !di.is_zero() {
                    r[k + i] = r[k + i].sub(&qc.mul(di));
                }
            }
            q[k] = qc;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return Self::one();
            }
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn map<G: FieldElem>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.c.iter().map(f).collect())
    }

    pub fn try_map<G: FieldElem, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Poly<G>, E> {
        let mut out = Vec::with_capacity(self.c.len());
        for v in &self.c {
            out.push(f(v)?);
        }
        Ok(Poly::from_coeffs(out))
    }

    /// Number of nonzero coefficients.
    pub fn terms(&self) -> usize {
        self.c.iter().filter(|v| !v.is_zero()).count()
    }
}

impl Poly<Scalar> {
    pub fn display_in(&self, x: &str, q: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, v) in self.c.iter().enumerate().rev() {
            if v.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => x.to_string(),
                _ => format!("{x}^{i}"),
            };
            let cs = v.display_in(q);
            let compound = cs.contains('+') || cs[1..].contains('-') || cs.contains('/');
            let term = if mono.is_empty() {
                if compound { format!("({cs})") } else { cs }
            } else if v.is_one() {
                mono
            } else if (-v.clone()).is_one() {
                format!("-{mono}")
            } else if compound {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            parts.push(term);
        }
        let mut s = String::new();
        for (k, p) in parts.into_iter().enumerate() {
            if k == 0 {
                s.push_str(&p);
            } else if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(&p);
            }
        }
        s
    }
}

impl<F: FieldElem> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}
