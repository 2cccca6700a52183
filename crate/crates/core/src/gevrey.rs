//! Global q-Gevrey orders: normalization, detection over a candidate grid, the
//! q ↦ q^{-1} order rule and the radical rescaling counterexample Φ.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{Field, Scalar};
use crate::error::{Error, Result};
use crate::newton_ramis::Slope;
use crate::places::{size_report, LogNorm, SizeReport};
use crate::skew::CoeffGen;

/// Orders (s₁, s₂): coefficients are divided by (q^{n(n−1)/2})^{s₁}([n]_q!)^{s₂}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GevreyOrders {
    pub s1: BigRational,
    pub s2: i64,
}

impl GevreyOrders {
    pub fn new(s1: BigRational, s2: i64) -> Self {
        GevreyOrders { s1, s2 }
    }

    pub fn int(s1: i64, s2: i64) -> Self {
        GevreyOrders { s1: BigRational::from_integer(s1.into()), s2 }
    }

    pub fn neg(&self) -> Self {
        GevreyOrders { s1: -self.s1.clone(), s2: -self.s2 }
    }

    pub fn is_zero(&self) -> bool {
        self.s1.is_zero() && self.s2 == 0
    }

    /// Finite d_q-slopes predicted by the structure theorems: with (σ₁, σ₂) = −(s₁, s₂),
    /// the set {0, −1/(σ₁+σ₂)} (just {0} when σ₁+σ₂ = 0).
    pub fn predicted_slopes(&self) -> Vec<Slope> {
        let total = -(&self.s1 + BigRational::from_integer(self.s2.into()));
        let mut out = vec![Slope::int(0)];
        if !total.is_zero() {
            out.insert(0, Slope::Finite(-total.recip()));
        }
        out
    }
}

impl fmt::Display for GevreyOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s1, self.s2)
    }
}

/// Exponent of q̃ for q^{s₁·n(n−1)/2}, failing when r·s₁ is not an integer.
fn tri_exponent(s1: &BigRational, n: usize, field: Field) -> Result<i64> {
    let rs = s1 * BigRational::from_integer(BigInt::from(field.r()));
    if !rs.is_integer() {
        return Err(Error::Domain(format!("order s1 = {s1} needs a radical index divisible by {}", s1.denom())));
    }
    let tri = (n as i64) * (n as i64 - 1) / 2;
    rs.to_integer().to_i64().map(|v| v * tri).ok_or_else(|| Error::Domain("order too large".into()))
}

/// Coefficientwise division by (q^{n(n−1)/2})^{s₁}([n]_q!)^{s₂}.
pub fn normalize(gen: &dyn CoeffGen, orders: &GevreyOrders, len: usize, field: Field) -> Result<Vec<Scalar>> {
    tri_exponent(&orders.s1, 0, field)?;
    (0..len)
        .map(|n| {
            let e = tri_exponent(&orders.s1, n, field)?;
            let f = field.fact(n as u64).pow(orders.s2);
            Ok(&gen.coeff(n) / &(&Scalar::t_pow(e) * &f))
        })
        .collect()
}

/// {−2,−1,0,1,2}/r × {−3,…,3}.
pub fn default_grid(field: Field) -> Vec<GevreyOrders> {
    let r = BigInt::from(field.r());
    let mut out = Vec::new();
    for a in -2..=2i64 {
        for b in -3..=3 {
            out.push(GevreyOrders::new(BigRational::new(a.into(), r.clone()), b));
        }
    }
    out
}

/// Growth per index of the averaged size totals over [n̄/2, n̄]; "bounded" means this
/// stays at or below the threshold. A finite diagnostic, not a proof.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub orders: GevreyOrders,
    pub window: (usize, usize),
    pub slope: LogNorm,
    pub threshold: LogNorm,
    pub bounded: bool,
    pub report: SizeReport,
}

pub fn verdict_threshold() -> LogNorm {
    BigRational::new(1.into(), 20.into())
}

/// Windowed slope of the averaged size totals; `len` is the prefix length n̄ + 1.
pub fn window_slope(report: &SizeReport, len: usize) -> (usize, usize, LogNorm) {
    let hi = len - 1;
    let lo = (hi / 2).max(1);
    let totals = report.totals();
    let at = |n: usize| totals[n - 1].clone();
    let slope = (at(hi) - at(lo)) / BigRational::from_integer(BigInt::from((hi - lo).max(1)));
    (lo, hi, slope)
}

pub fn verdict(gen: &dyn CoeffGen, orders: &GevreyOrders, nbar: usize, field: Field) -> Result<Verdict> {
    if nbar < 4 {
        return Err(Error::Truncation("detection needs n̄ ≥ 4".into()));
    }
    let prefix = normalize(gen, orders, nbar + 1, field)?;
    let report = size_report(&prefix, field);
    let (lo, hi, slope) = window_slope(&report, nbar + 1);
    let threshold = verdict_threshold();
    let bounded = slope <= threshold;
    Ok(Verdict { orders: orders.clone(), window: (lo, hi), slope, threshold, bounded, report })
}

/// One verdict per candidate compatible with the field; others are skipped.
pub fn detect_orders(gen: &dyn CoeffGen, candidates: &[GevreyOrders], nbar: usize, field: Field) -> Vec<Verdict> {
    candidates.iter().filter_map(|o| verdict(gen, o, nbar, field).ok()).collect()
}

/// The single bounded candidate, if exactly one was found.
pub fn detected(verdicts: &[Verdict]) -> Option<GevreyOrders> {
    let mut b = verdicts.iter().filter(|v| v.bounded);
    match (b.next(), b.next()) {
        (Some(v), None) => Some(v.orders.clone()),
        _ => None,
    }
}

/// Orders for q, stored as (−s₁, −s₂), to orders (s₁+s₂, −s₂) for q^{−1}.
pub fn invert_q_orders(o: &GevreyOrders) -> GevreyOrders {
    let s1 = -o.s1.clone();
    let s2 = -o.s2;
    GevreyOrders::new(&s1 + BigRational::from_integer(s2.into()), -s2)
}

/// Converse direction: (t₁, −t₂) with t₁ ≥ t₂ ≥ 0 gives (−(t₁−t₂), −t₂); `None` off that cone.
pub fn invert_q_orders_back(o: &GevreyOrders) -> Option<GevreyOrders> {
    let t1 = o.s1.clone();
    let t2 = -o.s2;
    let t2r = BigRational::from_integer(t2.into());
    if t2 < 0 || t1 < t2r {
        return None;
    }
    Some(GevreyOrders::new(-(t1 - t2r), -t2))
}

/// Coefficients (q̃;q̃)_n^t/(q;q)_n of Φ over Q(q̃), q = q̃^r.
pub fn phi_coeffs(r: u32, t: u32, len: usize) -> Result<Vec<Scalar>> {
    let field = Field::new(r)?;
    let mut out = Vec::with_capacity(len);
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    for n in 0..len {
        if n > 0 {
            num = &num * &(&Scalar::one() - &Scalar::t_pow(n as i64)).pow(t as i64);
            den = &den * &(&Scalar::one() - &field.q_pow(n as i64));
        }
        out.push(&num / &den);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct PhiReport {
    pub r: u32,
    pub t: u32,
    /// Averaged cyclotomic partial sums for n = 1..n̄.
    pub cyclotomic: Vec<LogNorm>,
    pub report: SizeReport,
    pub increasing: bool,
    /// t > r: the coefficients also blow up at the q̃^{-1}-adic place.
    pub divergent_at_infinity: bool,
}

pub fn phi_counterexample_report(r: u32, t: u32, nbar: usize) -> Result<PhiReport> {
    if r == 0 || nbar < 2 {
        return Err(Error::Domain("need r ≥ 1 and n̄ ≥ 2".into()));
    }
    let field = Field::new(r)?;
    let report = size_report(&phi_coeffs(r, t, nbar + 1)?, field);
    let cyclotomic: Vec<LogNorm> = report.rows.iter().map(|row| row.cyclotomic.clone()).collect();
    let window = &cyclotomic[cyclotomic.len() / 2..];
    let increasing = strictly_increasing(window);
    Ok(PhiReport { r, t, cyclotomic, report, increasing, divergent_at_infinity: t > r })
}

pub fn strictly_increasing(v: &[LogNorm]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// True when every value is zero.
pub fn identically_zero(v: &[LogNorm]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::FnGen;

    fn f() -> Field {
        Field::rational()
    }

    fn eq() -> FnGen {
        FnGen::new(|n| f().fact(n as u64).inv())
    }

    fn tq() -> FnGen {
        FnGen::new(|n| f().tri(n as u64).inv())
    }

    fn bq() -> FnGen {
        FnGen::new(|n| f().fact(n as u64).pow(-2))
    }

    fn grid() -> Vec<GevreyOrders> {
        vec![GevreyOrders::int(0, 0), GevreyOrders::int(0, -1), GevreyOrders::int(-1, 0), GevreyOrders::int(0, -2)]
    }

    #[test]
    fn normalization() {
        let ones = |v: Vec<Scalar>| v.iter().all(|c| c.is_one());
        assert!(ones(normalize(&eq(), &GevreyOrders::int(0, -1), 20, f()).unwrap()));
        assert!(ones(normalize(&tq(), &GevreyOrders::int(-1, 0), 20, f()).unwrap()));
        let back = normalize(&crate::skew::ListGen(normalize(&eq(), &GevreyOrders::int(1, 2), 12, f()).unwrap()), &GevreyOrders::int(-1, -2), 12, f()).unwrap();
        assert_eq!(back, eq().prefix(12));
        let half = GevreyOrders::new(BigRational::new(1.into(), 2.into()), 0);
        assert!(normalize(&eq(), &half, 5, f()).is_err());
        assert!(normalize(&eq(), &half, 5, Field::new(2).unwrap()).is_ok());
    }

    #[test]
    fn detection() {
        for (g, want) in [(eq(), GevreyOrders::int(0, -1)), (tq(), GevreyOrders::int(-1, 0)), (bq(), GevreyOrders::int(0, -2))] {
            let v = detect_orders(&g, &grid(), 60, f());
            assert_eq!(detected(&v), Some(want));
        }
    }

    #[test]
    fn q_inversion() {
        assert_eq!(invert_q_orders(&GevreyOrders::int(0, -1)), GevreyOrders::int(1, -1));
        assert_eq!(invert_q_orders(&GevreyOrders::int(-1, 0)), GevreyOrders::int(1, 0));
        assert_eq!(invert_q_orders(&GevreyOrders::int(-1, -1)), GevreyOrders::int(2, -1));
        for o in [GevreyOrders::int(0, -1), GevreyOrders::int(-3, -1), GevreyOrders::int(-2, 0)] {
            assert_eq!(invert_q_orders_back(&invert_q_orders(&o)), Some(o));
        }
    }

    #[test]
    fn predictions() {
        assert_eq!(GevreyOrders::int(0, -1).predicted_slopes(), vec![Slope::int(-1), Slope::int(0)]);
        assert_eq!(GevreyOrders::int(0, -2).predicted_slopes(), vec![Slope::frac(-1, 2), Slope::int(0)]);
    }

    #[test]
    fn phi() {
        assert!(identically_zero(&phi_counterexample_report(1, 1, 20).unwrap().report.totals()));
        assert!(phi_counterexample_report(2, 1, 40).unwrap().increasing);
        assert!(phi_counterexample_report(3, 3, 40).unwrap().increasing);
    }
}
