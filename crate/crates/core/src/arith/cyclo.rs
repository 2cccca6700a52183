//! Cyclotomic polynomials, residues in Q(ζ_m), and Φ_m-adic valuations.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use super::modp;
use super::scalar::Scalar;
use super::zpoly::ZPoly;
use super::FieldElem;
use crate::error::{Error, Result};

static CYCLO: Lazy<RwLock<HashMap<u64, ZPoly>>> = Lazy::new(|| RwLock::new(HashMap::new()));
static ROOTS: Lazy<RwLock<HashMap<u64, (u64, u64)>>> = Lazy::new(|| RwLock::new(HashMap::new()));

pub fn euler_phi(mut m: u64) -> u64 {
    let mut out = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn divisors(m: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    v.sort_unstable();
    v
}

/// The m-th cyclotomic polynomial, computed by dividing t^m − 1 by Φ_d for proper d | m.
pub fn cyclotomic_poly(m: u64) -> ZPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(p) = CYCLO.read().get(&m) {
        return p.clone();
    }
    let mut f = ZPoly::monomial(BigInt::one(), m as usize).sub(&ZPoly::one());
    for d in divisors(m) {
        if d < m {
            f = f.divrem_monic(&cyclotomic_poly(d)).0;
        }
    }
    CYCLO.write().insert(m, f.clone());
    f
}

/// Cached prime p ≡ 1 mod m with a primitive m-th root of unity ω mod p.
fn root_for(m: u64) -> (u64, u64) {
    if let Some(&v) = ROOTS.read().get(&m) {
        return v;
    }
    let v = modp::prime_with_root_of_unity(m, 0);
    ROOTS.write().insert(m, v);
    v
}

/// Whether Φ_m divides f, decided by one modular evaluation plus an exact confirmation.
pub fn divisible_by_cyclotomic(f: &ZPoly, m: u64) -> bool {
    if f.is_zero() {
        return true;
    }
    if (f.deg() as u64) < euler_phi(m) {
        return false;
    }
    let (p, w) = root_for(m);
    if modp::poly_eval(&f.to_mod(p), w, p) != 0 {
        return false;
    }
    f.divrem_monic(&cyclotomic_poly(m)).1.is_zero()
}

/// ord_{Φ_m}(f) for nonzero f.
pub fn cyclotomic_ord(f: &ZPoly, m: u64) -> u32 {
    assert!(!f.is_zero(), "valuation of zero");
    let phi = cyclotomic_poly(m);
    let mut g = f.clone();
    let mut k = 0;
    while divisible_by_cyclotomic(&g, m) {
        g = g.divrem_monic(&phi).0;
        k += 1;
    }
    k
}

/// All cyclotomic factors of f with multiplicities, plus the degree of the cofactor.
///
/// Candidates are the m with φ(m) at most the remaining degree; φ(m) > m/6 on the
/// range in use, so scanning m ≤ 6·deg + 6 is exhaustive.
pub fn cyclotomic_orders(f: &ZPoly) -> (Vec<(u64, u32)>, usize) {
    assert!(!f.is_zero());
    let mut g = f.shift_down(f.ord());
    let mut out = Vec::new();
    let mut m = 1u64;
    while g.deg() > 0 && m <= 6 * g.deg() as u64 + 6 {
        if euler_phi(m) <= g.deg() as u64 && divisible_by_cyclotomic(&g, m) {
            let phi = cyclotomic_poly(m);
            let mut k = 0;
            while divisible_by_cyclotomic(&g, m) {
                g = g.divrem_monic(&phi).0;
                k += 1;
            }
            out.push((m, k));
        }
        m += 1;
    }
    (out, g.deg())
}

type QVec = Vec<BigRational>;

fn qtrim(v: &mut QVec) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn qsub(a: &QVec, b: &QVec) -> QVec {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    let mut v: QVec = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
    qtrim(&mut v);
    v
}

fn qmul(a: &QVec, b: &QVec) -> QVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    qtrim(&mut v);
    v
}

fn qdivrem(a: &QVec, b: &QVec) -> (QVec, QVec) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] * &inv;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    r.truncate(db);
    qtrim(&mut r);
    qtrim(&mut q);
    (q, r)
}

fn zq(p: &ZPoly) -> QVec {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// An element of Q(ζ_m), stored as a polynomial in ζ of degree < φ(m).
/// The order m = 0 marks a rational constant that is compatible with every m.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    m: u64,
    c: QVec,
}

impl CycloElem {
    pub fn rational(v: BigRational) -> Self {
        let mut c = vec![v];
        qtrim(&mut c);
        CycloElem { m: 0, c }
    }

    /// ζ_m^k.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Self::reduce(m, c)
    }

    pub fn from_zpoly(p: &ZPoly, m: u64) -> Self {
        Self::reduce(m, zq(p))
    }

    fn reduce(m: u64, mut c: QVec) -> Self {
        qtrim(&mut c);
        if m == 0 {
            assert!(c.len() <= 1);
            return CycloElem { m, c };
        }
        let phi = zq(&cyclotomic_poly(m));
        if c.len() >= phi.len() {
            c = qdivrem(&c, &phi).1;
        }
        let m = if c.len() <= 1 { 0 } else { m };
        CycloElem { m, c }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// Coefficients in the power basis 1, ζ, …, ζ^{φ(m)−1}.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    fn common(&self, o: &Self) -> u64 {
        match (self.m, o.m) {
            (0, m) | (m, 0) => m,
            (a, b) => {
                assert_eq!(a, b, "mixing residues at different roots of unity");
                a
            }
        }
    }
}

impl FieldElem for CycloElem {
    fn zero() -> Self {
        CycloElem { m: 0, c: Vec::new() }
    }
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
    fn add(&self, o: &Self) -> Self {
        let m = self.common(o);
        let n = self.c.len().max(o.c.len());
        let z = BigRational::zero();
        let c = (0..n).map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z)).collect();
        Self::reduce(m, c)
    }
    fn sub(&self, o: &Self) -> Self {
        Self::reduce(self.common(o), qsub(&self.c, &o.c))
    }
    fn mul(&self, o: &Self) -> Self {
        Self::reduce(self.common(o), qmul(&self.c, &o.c))
    }
    fn neg(&self) -> Self {
        CycloElem { m: self.m, c: self.c.iter().map(|v| -v).collect() }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in a cyclotomic field");
        if self.m == 0 {
            return Self::rational(self.c[0].recip());
        }
        // extended Euclid: find s with s·a ≡ 1 mod Φ_m
        let phi = zq(&cyclotomic_poly(self.m));
        let (mut r0, mut r1) = (phi, self.c.clone());
        let (mut s0, mut s1): (QVec, QVec) = (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = qdivrem(&r0, &r1);
            let s = qsub(&s0, &qmul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r1[0].recip();
        Self::reduce(self.m, s1.iter().map(|v| v * &c).collect())
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| match i {
                0 => format!("{v}"),
                _ => format!("{v}*z{}^{i}", self.m),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

super::scalar::forward_ops!(CycloElem);

/// Image of f under q̃ ↦ ζ_m.
pub fn specialize_at_root(f: &Scalar, m: u64) -> Result<CycloElem> {
    if m == 0 {
        return Err(Error::Domain("root of unity order must be positive".into()));
    }
    if f.is_zero() {
        return Ok(CycloElem::zero());
    }
    let d = CycloElem::from_zpoly(f.den(), m);
    if d.is_zero() {
        return Err(Error::BadReduction(format!(
            "denominator {} vanishes at a primitive {m}-th root of unity",
            f.den().display_in("q")
        )));
    }
    let n = CycloElem::from_zpoly(f.num(), m);
    Ok(n.mul(&CycloElem::zeta_pow(m, f.t_exponent())).div(&d))
}

/// The rational value of a residue, if it has one.
pub fn is_rational_residue(v: &CycloElem) -> Option<BigRational> {
    match v.c.len() {
        0 => Some(BigRational::zero()),
        1 => Some(v.c[0].clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), ZPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ZPoly::from_i64s(&[1, 1]));
        assert_eq!(cyclotomic_poly(6), ZPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12).deg(), 4);
    }

    #[test]
    fn product_over_divisors() {
        for m in 1..=64u64 {
            let mut p = ZPoly::one();
            for d in divisors(m) {
                p = p.mul(&cyclotomic_poly(d));
            }
            assert_eq!(p, ZPoly::monomial(BigInt::one(), m as usize).sub(&ZPoly::one()), "m = {m}");
        }
    }

    #[test]
    fn specialization_examples() {
        let q = Scalar::t_pow(1);
        assert_eq!(specialize_at_root(&q, 3).unwrap(), CycloElem::zeta_pow(3, 1));
        let b3 = Scalar::from_zpoly(ZPoly::from_i64s(&[1, 1, 1]));
        assert!(specialize_at_root(&b3, 3).unwrap().is_zero());
        let f = (q - Scalar::from_i64(2)).inv();
        let v = specialize_at_root(&f, 2).unwrap();
        assert_eq!(is_rational_residue(&v), Some(BigRational::new((-1).into(), 3.into())));
        let bad = (Scalar::t_pow(1) + Scalar::one()).inv();
        assert!(matches!(specialize_at_root(&bad, 2), Err(Error::BadReduction(_))));
    }

    #[test]
    fn residue_inverse() {
        let z = CycloElem::zeta_pow(7, 1);
        let a = z.add(&CycloElem::from_i64(3));
        assert!(a.mul(&a.inv()).is_one());
    }

    #[test]
    fn factorial_orders() {
        let qn = super::super::qnum::Field::rational().qnum();
        let f = qn.fact_poly(12);
        let (orders, rest) = cyclotomic_orders(&f);
        assert_eq!(rest, 0);
        for (m, k) in orders {
            assert_eq!(k as u64, 12 / m);
        }
        assert_eq!(cyclotomic_ord(&qn.fact_poly(5), 3), 1);
    }
}
