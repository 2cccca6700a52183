//! Places of Q(q̃), log-norms in units of log(1/d), Gauss norms and size sums.
//!
//! A log-norm value `L` stands for |f|_v = d^{-L}; the base d is never chosen.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::cyclo::{cyclotomic_ord, cyclotomic_orders, cyclotomic_poly, euler_phi};
use crate::arith::{Field, Matrix, RatFun, Scalar, ZPoly};
use crate::error::{Error, Result};

pub type LogNorm = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    /// An irreducible primitive polynomial in q̃ other than q̃ itself.
    Finite(ZPoly),
    QAdic,
    QInverseAdic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    kind: PlaceKind,
    cyclotomic_order: Option<u64>,
}

impl Place {
    pub fn cyclotomic(m: u64) -> Self {
        Place { kind: PlaceKind::Finite(cyclotomic_poly(m)), cyclotomic_order: Some(m) }
    }

    /// A finite place given by its generator. Irreducibility is the caller's
    /// responsibility; cyclotomic generators are recognized.
    pub fn finite(v: ZPoly) -> Result<Self> {
        if v.deg() == 0 || v.coeff(0).is_zero() {
            return Err(Error::Domain("a finite place needs a nonconstant generator prime to q".into()));
        }
        let mut v = v.primitive();
        if v.lc().is_negative() {
            v = v.neg();
        }
        let d = v.deg() as u64;
        let m = (1..=6 * d + 6).find(|&m| euler_phi(m) == d && cyclotomic_poly(m) == v);
        Ok(Place { kind: PlaceKind::Finite(v), cyclotomic_order: m })
    }

    pub fn q_adic() -> Self {
        Place { kind: PlaceKind::QAdic, cyclotomic_order: None }
    }

    pub fn q_inverse_adic() -> Self {
        Place { kind: PlaceKind::QInverseAdic, cyclotomic_order: None }
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn cyclotomic_order(&self) -> Option<u64> {
        self.cyclotomic_order
    }

    fn ord_poly(&self, p: &ZPoly) -> i64 {
        match (&self.kind, self.cyclotomic_order) {
            (PlaceKind::Finite(_), Some(m)) => cyclotomic_ord(p, m) as i64,
            (PlaceKind::Finite(v), None) => {
                let mut g = p.clone();
                let mut k = 0;
                while let Some(h) = g.div_exact(v) {
                    g = h;
                    k += 1;
                }
                k
            }
            _ => unreachable!(),
        }
    }

    /// The valuation ord_v(f) in q̃ (unscaled).
    pub fn ord(&self, f: &Scalar) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::Domain("valuation of zero".into()));
        }
        Ok(match &self.kind {
            PlaceKind::QAdic => f.t_exponent(),
            PlaceKind::QInverseAdic => -f.deg_t(),
            PlaceKind::Finite(_) => self.ord_poly(f.num()) - self.ord_poly(f.den()),
        })
    }

    fn degree(&self) -> i64 {
        match &self.kind {
            PlaceKind::Finite(v) => v.deg() as i64,
            _ => 1,
        }
    }
}

fn ratio(n: i64, r: u32) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(r))
}

pub fn log_plus(v: &LogNorm) -> LogNorm {
    if v.is_positive() {
        v.clone()
    } else {
        BigRational::zero()
    }
}

/// log|f|_v, scaled by 1/r on Q(q^(1/r)).
pub fn log_norm(f: &Scalar, place: &Place, field: Field) -> Result<LogNorm> {
    let ord = place.ord(f)?;
    Ok(ratio(-place.degree() * ord, field.r()))
}

fn max_log(coeffs: &[Scalar], place: &Place, field: Field) -> Result<Option<LogNorm>> {
    let mut best: Option<LogNorm> = None;
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        let l = log_norm(c, place, field)?;
        if best.as_ref().is_none_or(|b| &l > b) {
            best = Some(l);
        }
    }
    Ok(best)
}

/// log of the Gauss norm sup|a_i|_v / sup|b_j|_v.
pub fn gauss_log_norm(f: &RatFun, place: &Place, field: Field) -> Result<LogNorm> {
    if f.is_zero() {
        return Err(Error::Domain("Gauss norm of zero".into()));
    }
    let (num, den) = f.all_coeffs();
    let a = max_log(&num, place, field)?.expect("nonzero numerator");
    let b = max_log(&den, place, field)?.expect("nonzero denominator");
    Ok(a - b)
}

/// Max over the nonzero entries of a matrix.
pub fn gauss_log_norm_matrix(m: &Matrix<RatFun>, place: &Place, field: Field) -> Result<LogNorm> {
    let mut best: Option<LogNorm> = None;
    for e in m.entries().iter().filter(|e| !e.is_zero()) {
        let l = gauss_log_norm(e, place, field)?;
        if best.as_ref().is_none_or(|b| &l > b) {
            best = Some(l);
        }
    }
    best.ok_or_else(|| Error::Domain("Gauss norm of the zero matrix".into()))
}

/// ord_{Φ_κ}([m]_q!) over Q(q̃) with q = q̃^r, in closed form.
pub fn qfact_cyclotomic_ord(m: u64, kappa: u64, r: u32) -> u64 {
    let r = r as u64;
    if kappa == 1 || r.is_multiple_of(kappa) {
        return 0;
    }
    let g = num_integer::gcd(kappa, r);
    m / (kappa / g)
}

/// log|[m]_q!|_v from the closed form.
pub fn qfact_log_norm(m: u64, place: &Place, field: Field) -> Result<LogNorm> {
    match (&place.kind, place.cyclotomic_order) {
        (PlaceKind::Finite(_), Some(k)) => {
            let ord = qfact_cyclotomic_ord(m, k, field.r()) as i64;
            Ok(ratio(-(euler_phi(k) as i64) * ord, field.r()))
        }
        (PlaceKind::Finite(_), None) => {
            Err(Error::Domain("closed form only at cyclotomic places".into()))
        }
        (PlaceKind::QAdic, _) => Ok(BigRational::zero()),
        (PlaceKind::QInverseAdic, _) => {
            let m = m as i64;
            Ok(ratio(field.r() as i64 * m * (m - 1) / 2, field.r()))
        }
    }
}

/// log|[m]_q!|_v by dividing out the place generator.
pub fn qfact_log_norm_direct(m: u64, place: &Place, field: Field) -> Result<LogNorm> {
    log_norm(&field.fact(m), place, field)
}

/// Running bookkeeping of log⁺ sup_s |y_s|_v summed over place classes.
///
/// Finite places only see the denominators, so the finite total is deg of the lcm of
/// the reduced denominators; the cyclotomic part comes from Φ_m-divisions of the
/// factors added to that lcm.
#[derive(Clone, Debug)]
pub struct PlaceTally {
    field: Field,
    lcm: ZPoly,
    cyc: BTreeMap<u64, u32>,
    q_adic: i64,
    q_inv: i64,
}

/// Raw (un-averaged) sums in log(1/d) units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSums {
    pub cyclotomic: LogNorm,
    pub noncyclotomic: LogNorm,
    pub infinite: LogNorm,
}

impl PlaceSums {
    pub fn total(&self) -> LogNorm {
        &self.cyclotomic + &self.noncyclotomic + &self.infinite
    }
}

impl PlaceTally {
    pub fn new(field: Field) -> Self {
        PlaceTally { field, lcm: ZPoly::one(), cyc: BTreeMap::new(), q_adic: 0, q_inv: 0 }
    }

    pub fn push(&mut self, y: &Scalar) {
        if y.is_zero() {
            return;
        }
        self.q_adic = self.q_adic.max(-y.t_exponent());
        self.q_inv = self.q_inv.max(y.deg_t());
        self.push_denominator(y.den());
    }

    /// Feed a denominator only (q-adic and q^{-1}-adic data untouched).
    pub fn push_denominator(&mut self, den: &ZPoly) {
        let d = den.primitive();
        if d.deg() == 0 {
            return;
        }
        let g = self.lcm.gcd(&d);
        let h = if g.deg() == 0 { d } else { d.div_exact(&g).expect("gcd divides") };
        if h.deg() == 0 {
            return;
        }
        let (orders, _) = cyclotomic_orders(&h);
        for (m, k) in orders {
            *self.cyc.entry(m).or_insert(0) += k;
        }
        self.lcm = self.lcm.mul(&h);
    }

    /// Per cyclotomic order, max_s ord_{Φ_m} of the denominators seen so far.
    pub fn cyclotomic_orders(&self) -> &BTreeMap<u64, u32> {
        &self.cyc
    }

    pub fn lcm(&self) -> &ZPoly {
        &self.lcm
    }

    /// log⁺ of the sup at the q̃-adic place alone.
    pub fn q_adic(&self) -> LogNorm {
        ratio(self.q_adic.max(0), self.field.r())
    }

    pub fn sums(&self) -> PlaceSums {
        let cyc: i64 = self.cyc.iter().map(|(&m, &k)| euler_phi(m) as i64 * k as i64).sum();
        let total = self.lcm.deg() as i64;
        let r = self.field.r();
        PlaceSums {
            cyclotomic: ratio(cyc, r),
            noncyclotomic: ratio(total - cyc, r),
            infinite: ratio(self.q_adic.max(0) + self.q_inv.max(0), r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeRow {
    pub n: usize,
    pub cyclotomic: LogNorm,
    pub noncyclotomic: LogNorm,
    pub infinite: LogNorm,
}

impl SizeRow {
    pub fn total(&self) -> LogNorm {
        &self.cyclotomic + &self.noncyclotomic + &self.infinite
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeReport {
    pub rows: Vec<SizeRow>,
}

impl SizeReport {
    pub fn totals(&self) -> Vec<LogNorm> {
        self.rows.iter().map(SizeRow::total).collect()
    }
}

fn averaged(n: usize, s: PlaceSums) -> SizeRow {
    let k = BigRational::from_integer(BigInt::from(n as u64));
    SizeRow { n, cyclotomic: s.cyclotomic / &k, noncyclotomic: s.noncyclotomic / &k, infinite: s.infinite / k }
}

/// The averaged partial sums (1/n)Σ_v log⁺ sup_{s≤n}|y_s|_v for 1 ≤ n < len.
pub fn size_report(prefix: &[Scalar], field: Field) -> SizeReport {
    let mut tally = PlaceTally::new(field);
    let mut rows = Vec::new();
    for (n, y) in prefix.iter().enumerate() {
        tally.push(y);
        if n >= 1 {
            rows.push(averaged(n, tally.sums()));
        }
    }
    SizeReport { rows }
}

/// Averaged rows from an externally maintained tally.
pub fn size_row(n: usize, tally: &PlaceTally) -> SizeRow {
    averaged(n, tally.sums())
}

/// Sum of log|f|_v over all places, with the finite total taken from the cyclotomic
/// factors found plus the degree of the remaining cofactor.
pub fn product_formula_check(f: &Scalar, field: Field) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Domain("product formula for zero".into()));
    }
    let finite = |p: &ZPoly| -> i64 {
        let (orders, rest) = cyclotomic_orders(p);
        orders.iter().map(|&(m, k)| euler_phi(m) as i64 * k as i64).sum::<i64>() + rest as i64
    };
    let finite_sum = -(finite(f.num()) - finite(f.den()));
    let total = ratio(finite_sum, field.r())
        + log_norm(f, &Place::q_adic(), field)?
        + log_norm(f, &Place::q_inverse_adic(), field)?;
    Ok(total.is_zero())
}

/// Gauss content of a polynomial over Q(q̃): t^{min e}·gcd(numerators)/lcm(denominators),
/// up to an integer unit. For every finite place v (including q̃), |p|_{v,Gauss} = |c|_v.
pub fn poly_content(coeffs: &[Scalar]) -> Scalar {
    let nz: Vec<&Scalar> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    if nz.is_empty() {
        return Scalar::zero();
    }
    let e = nz.iter().map(|c| c.t_exponent()).min().unwrap();
    let mut g = ZPoly::zero();
    let mut l = ZPoly::one();
    for c in &nz {
        if !g.is_one() {
            g = g.gcd(&c.num().primitive());
        }
        let d = c.den().primitive();
        if d.deg() > 0 {
            let h = l.gcd(&d);
            l = l.mul(&d.div_exact(&h).unwrap());
        }
    }
    Scalar::from_parts(e, g.primitive(), l)
}

/// Content of a rational function: content(num)/content(den).
pub fn ratfun_content(f: &RatFun) -> Scalar {
    let (n, d) = f.all_coeffs();
    &poly_content(&n) / &poly_content(&d)
}
