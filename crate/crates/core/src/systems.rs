//! Matrix q-difference systems Y(qx) = A(x)Y(x): iterates, Galočkin sums, and
//! reduction at roots of unity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::cyclo::euler_phi;
use crate::arith::{specialize_at_root, CycloElem, Field, FieldElem, Matrix, Poly, RatFun, Scalar};
use crate::error::{Error, Result};
use crate::places::{gauss_log_norm_matrix, log_norm, log_plus, ratfun_content, LogNorm, Place, PlaceTally};
use crate::skew::{Form, SkewOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSystem {
    field: Field,
    a1: Matrix<RatFun>,
}

impl QSystem {
    pub fn new(field: Field, a1: Matrix<RatFun>) -> Result<Self> {
        if a1.rows() != a1.cols() || a1.rows() == 0 {
            return Err(Error::Domain("system matrix must be square and nonempty".into()));
        }
        if a1.det().is_zero() {
            return Err(Error::Domain("system matrix is singular".into()));
        }
        Ok(QSystem { field, a1 })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.a1.rows()
    }

    pub fn a1(&self) -> &Matrix<RatFun> {
        &self.a1
    }

    /// G_1 = (A_1 − 1)/((q−1)x).
    pub fn g1(&self) -> Matrix<RatFun> {
        let q = self.field.q();
        let f = RatFun::x_pow(-1).scale(&(&q - &Scalar::one()).inv());
        self.a1.sub(&Matrix::identity(self.dim())).scale(&f)
    }
}

/// Companion system of a σ_q-form operator: last row −a_i/a_ν.
pub fn companion(l: &SkewOp) -> Result<QSystem> {
    if l.form() != Form::Sigma {
        return Err(Error::FormMismatch("companion system expects σ-form".into()));
    }
    if l.ring().twist != l.field().q() {
        return Err(Error::Domain("companion system expects the twist q".into()));
    }
    let nu = l.order();
    if nu == 0 {
        return Err(Error::Domain("operator of order 0 has no companion system".into()));
    }
    let lead = l.leading();
    let mut m = Matrix::zeros(nu, nu);
    for i in 0..nu - 1 {
        m.set(i, i + 1, RatFun::one());
    }
    for i in 0..nu {
        m.set(nu - 1, i, -&(&l.coeff(i) / &lead));
    }
    QSystem::new(l.field(), m)
}

fn twist_matrix<F: FieldElem>(m: &Matrix<RatFun<F>>, t: &F) -> Matrix<RatFun<F>> {
    m.map(|e| e.twist(t))
}

fn dq_matrix<F: FieldElem>(m: &Matrix<RatFun<F>>, t: &F) -> Matrix<RatFun<F>> {
    m.map(|e| e.dq(t))
}

/// A_n and G_n for n ≤ horizon.
#[derive(Clone, Debug)]
pub struct IterationTable {
    field: Field,
    a: Vec<Matrix<RatFun>>,
    g: Vec<Matrix<RatFun>>,
}

impl IterationTable {
    pub fn horizon(&self) -> usize {
        self.a.len() - 1
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn a(&self, n: usize) -> &Matrix<RatFun> {
        &self.a[n]
    }

    pub fn g(&self, n: usize) -> &Matrix<RatFun> {
        &self.g[n]
    }

    /// G_[n] = G_n/[n]_q!.
    pub fn g_bracket(&self, n: usize) -> Matrix<RatFun> {
        let f = self.field.fact(n as u64).inv();
        self.g[n].scale(&RatFun::constant(f))
    }
}

pub fn iterate(sys: &QSystem, horizon: usize) -> IterationTable {
    let q = sys.field.q();
    let id = Matrix::identity(sys.dim());
    let g1 = sys.g1();
    let mut a = vec![id.clone()];
    let mut g = vec![id];
    for n in 0..horizon {
        a.push(twist_matrix(&a[n], &q).mul(&sys.a1));
        let next = if n == 0 { g1.clone() } else { twist_matrix(&g[n], &q).mul(&g1).add(&dq_matrix(&g[n], &q)) };
        g.push(next);
    }
    IterationTable { field: sys.field, a, g }
}

fn tally_rows(table: &IterationTable, upto: usize) -> Vec<(usize, PlaceTally)> {
    assert!(upto <= table.horizon(), "table horizon too short");
    let mut tally = PlaceTally::new(table.field);
    let mut out = Vec::with_capacity(upto);
    for s in 1..=upto {
        for e in table.g_bracket(s).entries() {
            if !e.is_zero() {
                tally.push(&ratfun_content(e));
            }
        }
        out.push((s, tally.clone()));
    }
    out
}

fn per_n(n: usize, v: LogNorm) -> LogNorm {
    v / BigRational::from_integer(BigInt::from(n))
}

/// (1/n)·Σ_{v cyclotomic} log⁺ sup_{s≤n} |G_[s]|_{v,Gauss}, for n = 1..=upto.
pub fn galockin_partial(table: &IterationTable, upto: usize) -> Vec<LogNorm> {
    tally_rows(table, upto).into_iter().map(|(n, t)| per_n(n, t.sums().cyclotomic)).collect()
}

/// The same estimator over the remaining finite places (q̃-adic included).
pub fn noncyclotomic_partial(table: &IterationTable, upto: usize) -> Vec<LogNorm> {
    tally_rows(table, upto)
        .into_iter()
        .map(|(n, t)| per_n(n, &t.sums().noncyclotomic + &t.q_adic()))
        .collect()
}

type CycloMatrix = Matrix<RatFun<CycloElem>>;

fn reduce_ratfun(f: &RatFun, m: u64) -> Result<RatFun<CycloElem>> {
    let (num, den) = f.as_fraction();
    let red = |p: &Poly<Scalar>| p.try_map(|c| specialize_at_root(c, m));
    let (n, d) = (red(&num)?, red(&den)?);
    if d.is_zero() {
        return Err(Error::BadReduction(format!("denominator of {} vanishes", f.display_in("x", "q"))));
    }
    Ok(RatFun::new(n, d))
}

fn reduce_matrix(a: &Matrix<RatFun>, m: u64) -> Result<CycloMatrix> {
    let mut rows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut row = Vec::with_capacity(a.cols());
        for j in 0..a.cols() {
            row.push(reduce_ratfun(a.get(i, j), m).map_err(|e| match e {
                Error::BadReduction(s) => Error::BadReduction(format!("entry ({i},{j}) of A_1: {s}")),
                other => other,
            })?);
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(rows))
}

/// Smallest k ≤ dim with N^k = 0.
fn nilpotency_order(n: &CycloMatrix) -> Option<usize> {
    let mut p = n.clone();
    for k in 1..=n.rows() {
        if p.is_zero() {
            return Some(k);
        }
        p = p.mul(n);
    }
    None
}

/// Conditions at the place Φ_m: (A_κ − 1) nilpotent, G_κ nilpotent, and
/// G_{nκ} ≡ 0 for some n ≤ horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotenceReport {
    pub m: u64,
    pub kappa: usize,
    pub a_nilpotent: bool,
    pub nilpotence_order: Option<usize>,
    pub g_nilpotent: bool,
    pub norm_drop: Option<usize>,
    pub horizon: usize,
}

impl NilpotenceReport {
    pub fn norm_drop_found(&self) -> bool {
        self.norm_drop.is_some()
    }

    pub fn flags_agree(&self) -> bool {
        self.a_nilpotent == self.g_nilpotent && self.g_nilpotent == self.norm_drop_found()
    }
}

pub fn nilpotent_reduction(sys: &QSystem, m: u64, horizon: usize) -> Result<NilpotenceReport> {
    if m < 2 {
        return Err(Error::Domain("reduction needs a root of unity of order at least 2".into()));
    }
    let r = sys.field.r() as u64;
    let kappa = (m / num_integer::gcd(m, r)) as usize;
    let zeta = CycloElem::zeta_pow(m, 1);
    let z = zeta.pow_u(r);
    let a1 = reduce_matrix(&sys.a1, m)?;
    let dim = sys.dim();
    let id: CycloMatrix = Matrix::identity(dim);
    let mut a = id.clone();
    for _ in 0..kappa {
        a = twist_matrix(&a, &z).mul(&a1);
    }
    let nil = nilpotency_order(&a.sub(&id));

    let f = RatFun::x_pow(-1).scale(&(&z - &CycloElem::one()).inv());
    let g1 = a1.sub(&id).scale(&f);
    let mut g = g1.clone();
    let mut g_kappa = None;
    let mut drop = None;
    for n in 1..=kappa * horizon {
        if n > 1 {
            g = twist_matrix(&g, &z).mul(&g1).add(&dq_matrix(&g, &z));
        }
        if n == kappa {
            g_kappa = Some(g.clone());
        }
        if n % kappa == 0 && g.is_zero() {
            drop = Some(n / kappa);
            break;
        }
    }
    let g_kappa = match g_kappa {
        Some(v) => v,
        None => Matrix::zeros(dim, dim),
    };
    Ok(NilpotenceReport {
        m,
        kappa,
        a_nilpotent: nil.is_some(),
        nilpotence_order: nil,
        g_nilpotent: nilpotency_order(&g_kappa).is_some(),
        norm_drop: drop,
        horizon,
    })
}

/// Finite-horizon decay at Φ_m for a reduction nilpotent of order n: for every s,
/// (1/s)·log⁺|G_[s]| ≤ (1/s)·max(0, ⌊s/(nκ)⌋·log|ϖ| − log|[s]_q!|), the exact per-s
/// inequality behind the limit bound log|ϖ|/(nκ) − log|[κ]_q|/κ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayCheck {
    /// Limit of the per-s bounds.
    pub bound: LogNorm,
    pub bounds: Vec<LogNorm>,
    pub values: Vec<LogNorm>,
    pub holds: bool,
    /// The last value is already below the limit bound.
    pub tail_below_limit: bool,
}

pub fn decay_check(table: &IterationTable, m: u64, kappa: usize, order: usize, upto: usize) -> Result<DecayCheck> {
    let field = table.field;
    let place = Place::cyclotomic(m);
    let k = BigRational::from_integer(BigInt::from(kappa));
    let nk = kappa * order;
    let uniformizer = BigRational::new(-BigInt::from(euler_phi(m)), BigInt::from(field.r()));
    let bracket = log_norm(&field.bracket(kappa as u64), &place, field)?;
    let bound = &uniformizer / BigRational::from_integer(BigInt::from(nk)) - &bracket / &k;
    let mut values = Vec::with_capacity(upto);
    let mut bounds = Vec::with_capacity(upto);
    for s in 1..=upto.min(table.horizon()) {
        let g = table.g_bracket(s);
        let v = if g.is_zero() { LogNorm::zero() } else { gauss_log_norm_matrix(&g, &place, field)? };
        values.push(per_n(s, log_plus(&v)));
        let fact = log_norm(&field.fact(s as u64), &place, field)?;
        let b = &uniformizer * BigRational::from_integer(BigInt::from(s / nk)) - fact;
        bounds.push(per_n(s, log_plus(&b)));
    }
    let holds = values.iter().zip(&bounds).all(|(v, b)| v <= b);
    let tail_below_limit = values.last().is_none_or(|v| v <= &bound);
    Ok(DecayCheck { bound, bounds, values, holds, tail_below_limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::SkewRing;

    fn q() -> Scalar {
        Scalar::t_pow(1)
    }

    fn f() -> Field {
        Field::rational()
    }

    fn one_by_one(e: RatFun) -> QSystem {
        QSystem::new(f(), Matrix::from_rows(vec![vec![e]])).unwrap()
    }

    #[test]
    fn scalar_iterates() {
        let t = iterate(&one_by_one(RatFun::x_pow(1).scale(&q())), 2);
        assert_eq!(t.a(2).get(0, 0), &RatFun::x_pow(2).scale(&q().pow(3)));
        let c = Scalar::from_i64(5);
        let t = iterate(&one_by_one(RatFun::constant(c.clone())), 2);
        let qm1 = &q() - &Scalar::one();
        let expect = &(&(&c - &Scalar::one()) * &(&c - &q())) / &(&q() * &qm1.pow(2));
        assert_eq!(t.g(2).get(0, 0), &RatFun::x_pow(-2).scale(&expect));
    }

    #[test]
    fn identity_system() {
        let s = QSystem::new(f(), Matrix::identity(2)).unwrap();
        let t = iterate(&s, 4);
        assert!((1..=4).all(|n| t.g(n).is_zero()));
        assert!(galockin_partial(&t, 4).iter().all(|v| v.is_zero()));
        assert!(noncyclotomic_partial(&t, 4).iter().all(|v| v.is_zero()));
        let rep = nilpotent_reduction(&s, 5, 3).unwrap();
        assert!(rep.a_nilpotent && rep.g_nilpotent && rep.flags_agree());
    }

    #[test]
    fn tchakaloff_companion() {
        let r = SkewRing::q(Form::Sigma, f());
        let l = crate::skew::parse_operator("sigma^2 - (1+q^2*x)*sigma + q*x", &r).unwrap();
        let s = companion(&l).unwrap();
        let x = RatFun::x_pow(1);
        assert_eq!(s.a1().get(1, 0), &x.scale(&(-q())));
        assert_eq!(s.a1().get(1, 1), &(&RatFun::one() + &x.scale(&q().pow(2))));
        assert_eq!(s.a1().get(0, 1), &RatFun::one());
    }

    #[test]
    fn scalar_reductions() {
        let rep = nilpotent_reduction(&one_by_one(RatFun::constant(q())), 3, 4).unwrap();
        assert_eq!(rep.nilpotence_order, Some(1));
        assert!(rep.flags_agree());
        let rep = nilpotent_reduction(&one_by_one(RatFun::constant(Scalar::from_i64(2))), 2, 4).unwrap();
        assert!(!rep.a_nilpotent);
        assert!(rep.flags_agree());
        let bad = one_by_one(RatFun::constant(&q() + &Scalar::one()).inv());
        assert!(matches!(nilpotent_reduction(&bad, 2, 4), Err(Error::BadReduction(_))));
    }

    #[test]
    fn geometric_is_bounded() {
        let r = SkewRing::q(Form::Sigma, f());
        let l = crate::skew::parse_operator("(1 - q*x)*sigma - (1 - x)", &r).unwrap();
        let t = iterate(&companion(&l).unwrap(), 12);
        let p = galockin_partial(&t, 12);
        assert!(p.iter().all(|v| v <= &LogNorm::from_integer(BigInt::from(2))));
    }
}
