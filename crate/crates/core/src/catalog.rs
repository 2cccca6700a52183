//! Worked examples: E_q, the Tchakaloff series T_q, the q-Bessel-type B_q, the
//! geometric series and the rescaled family Φ, with their operators and known data.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;

use crate::arith::{Field, Poly, RatFun, Scalar};
use crate::error::{Error, Result};
use crate::gevrey::{detect_orders, detected, phi_coeffs, GevreyOrders};
use crate::newton_ramis::{polygon, Slope};
use crate::skew::annihilator::verify as kills_prefix;
use crate::skew::{annihilator_search, parse_operator, CoeffGen, FnGen, Form, SkewOp, SkewRing, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryName {
    Eq,
    Tq,
    Bq,
    Geometric,
    Phi { r: u32, t: u32 },
}

impl fmt::Display for EntryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryName::Eq => write!(f, "Eq"),
            EntryName::Tq => write!(f, "Tq"),
            EntryName::Bq => write!(f, "Bq"),
            EntryName::Geometric => write!(f, "geometric"),
            EntryName::Phi { r, t } => write!(f, "phi({r},{t})"),
        }
    }
}

impl EntryName {
    pub fn parse(name: &str) -> Result<Self> {
        let s = name.trim();
        match s {
            "Eq" | "E_q" | "eq" | "e_q" => return Ok(EntryName::Eq),
            "Tq" | "T_q" | "tq" => return Ok(EntryName::Tq),
            "Bq" | "B_q" | "bq" => return Ok(EntryName::Bq),
            "geometric" | "geom" => return Ok(EntryName::Geometric),
            _ => {}
        }
        let lower = s.to_ascii_lowercase();
        if let Some(args) = lower.strip_prefix("phi(").and_then(|a| a.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            if let [r, t] = parts[..] {
                if let (Ok(r), Ok(t)) = (r.parse::<u32>(), t.parse::<u32>()) {
                    if r >= 1 {
                        return Ok(EntryName::Phi { r, t });
                    }
                }
            }
        }
        Err(Error::UnknownEntry(format!("{name} (known: Eq, Tq, Bq, geometric, phi(r,t))")))
    }
}

pub fn names() -> Vec<&'static str> {
    vec!["Eq", "Tq", "Bq", "geometric", "phi(r,t)"]
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: EntryName,
    pub field: Field,
    pub gen: FnGen,
    /// Minimal annihilator in σ-form, normalized.
    pub operator: SkewOp,
    pub orders: Option<GevreyOrders>,
    /// Finite d_q-slopes.
    pub slopes: Option<Vec<Slope>>,
    /// Known zeros of the sum.
    pub zeros: Vec<Scalar>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("operator", &self.operator.display())
            .field("orders", &self.orders)
            .field("slopes", &self.slopes)
            .finish()
    }
}

impl CatalogEntry {
    pub fn prefix(&self, len: usize) -> Vec<Scalar> {
        self.gen.prefix(len)
    }
}

fn sigma_op(text: &str, field: Field) -> SkewOp {
    parse_operator(text, &SkewRing::q(Form::Sigma, field)).expect("catalog operator").normalize()
}

/// (1 − σ^r) − x(1 − q̃σ)^t over the twist q̃.
fn phi_operator(r: u32, t: u32, field: Field) -> SkewOp {
    let qt = field.qt();
    let ring = SkewRing::new(Form::Sigma, Var::X, field, qt.clone());
    let len = (r.max(t) + 1) as usize;
    let mut c = vec![RatFun::zero(); len];
    c[0] = RatFun::one();
    c[r as usize] = &c[r as usize] - &RatFun::one();
    let mut binom = Scalar::one();
    for i in 0..=t as usize {
        if i > 0 {
            binom = &(&binom * &Scalar::from_i64((t as usize - i + 1) as i64)) / &Scalar::from_i64(i as i64);
        }
        let w = &binom * &(-&qt).pow(i as i64);
        c[i] = &c[i] - &RatFun::x_pow(1).scale(&w);
    }
    SkewOp::new(ring, c).normalize()
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    Ok(build(EntryName::parse(name)?))
}

pub fn build(name: EntryName) -> CatalogEntry {
    let f = Field::rational();
    let q = f.q();
    match name {
        EntryName::Eq => CatalogEntry {
            name,
            field: f,
            gen: FnGen::new(move |n| f.fact(n as u64).inv()),
            operator: sigma_op("sigma - ((q-1)*x + 1)", f),
            orders: Some(GevreyOrders::int(0, -1)),
            slopes: Some(vec![Slope::int(-1), Slope::int(0)]),
            zeros: (1..=3).map(|k| &q.pow(k) / &(&Scalar::one() - &q)).collect(),
        },
        EntryName::Tq => CatalogEntry {
            name,
            field: f,
            gen: FnGen::new(move |n| f.tri(n as u64).inv()),
            operator: sigma_op("sigma^2 - (q^2*x + 1)*sigma + q*x", f),
            orders: Some(GevreyOrders::int(-1, 0)),
            slopes: Some(vec![Slope::int(-1), Slope::int(0)]),
            zeros: vec![],
        },
        EntryName::Bq => CatalogEntry {
            name,
            field: f,
            gen: FnGen::new(move |n| f.fact(n as u64).pow(-2)),
            operator: sigma_op("sigma^2 - 2*sigma + (1 - (q-1)^2*x)", f),
            orders: Some(GevreyOrders::int(0, -2)),
            slopes: Some(vec![Slope::frac(-1, 2), Slope::int(0)]),
            zeros: vec![],
        },
        EntryName::Geometric => CatalogEntry {
            name,
            field: f,
            gen: FnGen::new(|_| Scalar::one()),
            operator: sigma_op("(1 - q*x)*sigma - (1 - x)", f),
            orders: Some(GevreyOrders::int(0, 0)),
            slopes: Some(vec![Slope::int(0)]),
            zeros: vec![],
        },
        EntryName::Phi { r, t } => {
            let field = Field::new(r).expect("r ≥ 1");
            CatalogEntry {
                name,
                field,
                gen: FnGen::new(move |n| phi_coeffs(r, t, n + 1).expect("r ≥ 1").pop().unwrap()),
                operator: phi_operator(r, t, field),
                orders: (r == 1 && t == 1).then(|| GevreyOrders::int(0, 0)),
                slopes: None,
                zeros: vec![],
            }
        }
    }
}

/// Outcome of each entry invariant.
#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub annihilates: bool,
    /// The search in the (2, 6) box returns the stored operator; `None` off the q-twist.
    pub search_recovers: Option<bool>,
    pub found: Option<SkewOp>,
    pub detected: Option<GevreyOrders>,
    pub orders_match: Option<bool>,
    pub slopes_from_polygon: Option<Vec<Slope>>,
    pub slopes_match: Option<bool>,
    pub predictions_match: Option<bool>,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.annihilates
            && [self.search_recovers, self.orders_match, self.slopes_match, self.predictions_match]
                .iter()
                .all(|v| v.unwrap_or(true))
    }
}

pub fn check_entry(e: &CatalogEntry, candidates: &[GevreyOrders], nbar: usize) -> Result<EntryCheck> {
    let annihilates = kills_prefix(&e.operator, &e.gen, 40);
    let q_twist = e.operator.twist() == &e.field.q();
    let found = if q_twist { annihilator_search(&e.gen, e.field, 2, 6, 8).map(|a| a.op) } else { None };
    let search_recovers = q_twist.then(|| found.as_ref() == Some(&e.operator));
    let (det, orders_match) = match &e.orders {
        Some(o) => {
            let d = detected(&detect_orders(&e.gen, candidates, nbar, e.field));
            let m = d.as_ref() == Some(o);
            (d, Some(m))
        }
        None => (None, None),
    };
    let poly_slopes = if q_twist {
        let set: BTreeSet<BigRational> = polygon(&e.operator, Form::Dq)?.finite_slopes();
        Some(set.into_iter().map(Slope::Finite).collect::<Vec<_>>())
    } else {
        None
    };
    let slopes_match = match (&e.slopes, &poly_slopes) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let predictions_match = match (&e.orders, &e.slopes) {
        (Some(o), Some(s)) => Some(&o.predicted_slopes() == s),
        _ => None,
    };
    Ok(EntryCheck {
        annihilates,
        search_recovers,
        found,
        detected: det,
        orders_match,
        slopes_from_polygon: poly_slopes,
        slopes_match,
        predictions_match,
    })
}

/// Candidates around the catalog orders; the full grid is available from the gevrey module.
pub fn catalog_grid() -> Vec<GevreyOrders> {
    [(0, 0), (0, -1), (-1, 0), (0, -2), (-1, -1), (1, 0), (0, 1)].iter().map(|&(a, b)| GevreyOrders::int(a, b)).collect()
}

/// 1/q-adic valuation, `None` for zero.
pub fn val_inf(c: &Scalar) -> Option<i64> {
    (!c.is_zero()).then(|| -c.deg_t())
}

#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub nbar: usize,
    /// Coefficients from the q^{-1} form of Euler's product expansion agree with 1/[n]_q!.
    pub closed_form: bool,
    /// Least 1/q-adic valuation of (∏_{k≤n̄} − Σ) mod x^{n̄+1}.
    pub tail_valuation: Option<i64>,
    pub congruence: bool,
}

impl ProductCheck {
    pub fn holds(&self) -> bool {
        self.closed_form && self.congruence
    }
}

/// ∏_{k≥0}(1 − x(1−q)/q^{k+1}) against Σ xⁿ/[n]_q! mod x^{n̄+1}.
pub fn eq_product_identity_check(nbar: usize) -> Result<ProductCheck> {
    if nbar < 1 {
        return Err(Error::Domain("n̄ ≥ 1".into()));
    }
    let f = Field::rational();
    let q = f.q();
    let p = f.p();
    let one = Scalar::one();
    // Σ p^{n(n−1)/2} zⁿ/(p;p)_n = (−z;p)_∞ with z = −x(1−q)/q
    let z = -&(&(&one - &q) / &q);
    let mut closed_form = true;
    let mut poch = one.clone();
    for n in 0..=nbar {
        if n > 0 {
            poch = &poch * &(&one - &p.pow(n as i64));
        }
        let tri = (n * n.saturating_sub(1) / 2) as i64;
        let c = &(&p.pow(tri) * &z.pow(n as i64)) / &poch;
        closed_form &= c == f.fact(n as u64).inv();
    }
    let mut prod = Poly::<Scalar>::one();
    for k in 0..=nbar {
        let a = &(&one - &q) / &q.pow(k as i64 + 1);
        prod = prod.mul(&Poly::from_coeffs(vec![one.clone(), -a]));
    }
    let mut tail: Option<i64> = None;
    for n in 0..=nbar {
        let d = &prod.coeff(n) - &f.fact(n as u64).inv();
        if let Some(v) = val_inf(&d) {
            tail = Some(tail.map_or(v, |t| t.min(v)));
        }
    }
    let congruence = tail.is_none_or(|v| v > nbar as i64);
    Ok(ProductCheck { nbar, closed_form, tail_valuation: tail, congruence })
}

#[derive(Clone, Debug)]
pub struct ZeroTrace {
    pub xi: Scalar,
    /// 1/q-adic valuations of the partial sums s = 0..=n̄.
    pub valuations: Vec<Option<i64>>,
}

fn partial_sum_trace(xi: &Scalar, nbar: usize) -> ZeroTrace {
    let f = Field::rational();
    let mut s = Scalar::zero();
    let mut pw = Scalar::one();
    let mut out = Vec::with_capacity(nbar + 1);
    for n in 0..=nbar {
        if n > 0 {
            pw = &pw * xi;
        }
        s = &s + &(&pw / &f.fact(n as u64));
        out.push(val_inf(&s));
    }
    ZeroTrace { xi: xi.clone(), valuations: out }
}

#[derive(Clone, Debug)]
pub struct ZeroCheck {
    pub zero: ZeroTrace,
    pub control: ZeroTrace,
    /// Strictly increasing over s ∈ [5, n̄] at ξ = q/(1−q).
    pub increasing: bool,
    /// Constant over s ∈ [5, n̄] at ξ = 1/(1−q).
    pub bounded: bool,
}

impl ZeroCheck {
    pub fn holds(&self) -> bool {
        self.increasing && self.bounded
    }
}

pub fn eq_zero_check(nbar: usize) -> Result<ZeroCheck> {
    if nbar < 5 {
        return Err(Error::Domain("n̄ ≥ 5".into()));
    }
    let q = Field::rational().q();
    let one = Scalar::one();
    let zero = partial_sum_trace(&(&q / &(&one - &q)), nbar);
    let control = partial_sum_trace(&(&one / &(&one - &q)), nbar);
    let w = &zero.valuations[5..];
    let increasing = w.iter().all(Option::is_some) && w.windows(2).all(|p| p[0] < p[1]);
    let c = &control.valuations[5..];
    let bounded = c.iter().all(|v| v.is_some() && *v == c[0]);
    Ok(ZeroCheck { zero, control, increasing, bounded })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        assert_eq!(EntryName::parse("e_q").unwrap(), EntryName::Eq);
        assert_eq!(EntryName::parse("phi(2, 1)").unwrap(), EntryName::Phi { r: 2, t: 1 });
        assert!(matches!(entry("Zq"), Err(Error::UnknownEntry(_))));
        assert!(entry("phi(0,1)").is_err());
    }

    #[test]
    fn operators_kill_prefixes() {
        for n in ["Eq", "Tq", "Bq", "geometric", "phi(2,1)", "phi(3,3)", "phi(1,1)"] {
            let e = entry(n).unwrap();
            assert!(kills_prefix(&e.operator, &e.gen, 40), "{n}");
        }
    }

    #[test]
    fn entries_verify() {
        for n in ["Eq", "Bq", "geometric", "Tq"] {
            let e = entry(n).unwrap();
            let c = check_entry(&e, &catalog_grid(), 40).unwrap();
            assert!(c.passed(), "{n}: {c:?}");
        }
    }

    #[test]
    fn product_identity() {
        for n in [1, 10, 20] {
            assert!(eq_product_identity_check(n).unwrap().holds());
        }
    }

    #[test]
    fn zero_trace() {
        let z = eq_zero_check(30).unwrap();
        assert_eq!(z.zero.valuations[0], Some(0));
        assert!(z.holds(), "{z:?}");
    }
}
