//! Hermite–Padé approximation for q-difference systems: the auxiliary polynomial g,
//! the remainders R_n = Λⁿ(P)/[n]_q! with Λ = A₁^{-1}∘(d_q − G₁), the matrix R^{<0>},
//! the α-triangle and the identity expressing G_[n]R^{<0>} through the R^{<i>}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

mod factored;

use factored::{Bases, FMat};

use crate::arith::{Field, Matrix, Poly, RatFun, Scalar};
use crate::error::{Error, Result};
use crate::skew::DqPowerExpansion;
use crate::places::{log_norm, log_plus, LogNorm, Place, PlaceSums, PlaceTally};
use crate::systems::{iterate, QSystem};

pub type Vector = Vec<RatFun>;

/// ⌊N(1−τ)/ν⌋, the width of the vanishing band above N.
pub fn band_width(n: usize, tau: &BigRational, nu: usize) -> usize {
    let w = BigRational::from_integer(BigInt::from(n)) * (BigRational::from_integer(1.into()) - tau)
        / BigRational::from_integer(BigInt::from(nu));
    w.floor().to_integer().to_usize().unwrap_or(0)
}

fn check_tau(tau: &BigRational) -> Result<()> {
    if *tau <= BigRational::zero() || *tau >= BigRational::from_integer(1.into()) {
        return Err(Error::Domain(format!("τ = {tau} must lie in (0, 1)")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct HermitePade {
    pub g: Poly<Scalar>,
    /// Inclusive range of x-exponents where every g·y_i vanishes.
    pub band: (usize, usize),
    /// Σ_v h(g, v) split by place class.
    pub height: PlaceSums,
}

/// Nonzero g with deg g ≤ N and [x^k](g·y_i) = 0 for N < k ≤ N + ⌊N(1−τ)/ν⌋.
pub fn build_g(ys: &[Vec<Scalar>], n: usize, tau: &BigRational, field: Field) -> Result<HermitePade> {
    check_tau(tau)?;
    let nu = ys.len();
    if nu == 0 {
        return Err(Error::Domain("empty solution vector".into()));
    }
    let m = band_width(n, tau, nu);
    let need = n + m + 1;
    if ys.iter().any(|y| y.len() < need) {
        return Err(Error::Truncation(format!("prefixes must have at least {need} terms")));
    }
    let g = if m == 0 {
        Poly::one()
    } else {
        let mut rows = Vec::with_capacity(nu * m);
        for y in ys {
            for k in n + 1..=n + m {
                rows.push((0..=n).map(|j| y[k - j].clone()).collect());
            }
        }
        let ns = Matrix::from_rows(rows).nullspace_ff();
        let v = ns.into_iter().next().ok_or(Error::NoSolution)?;
        Poly::from_coeffs(v)
    };
    let height = height_sums(g.coeffs(), field);
    Ok(HermitePade { g, band: (n + 1, n + m), height })
}

fn series_mul_poly(y: &[Scalar], p: &Poly<Scalar>, len: usize) -> Vec<Scalar> {
    (0..len)
        .map(|k| {
            let mut s = Scalar::zero();
            for (j, c) in p.coeffs().iter().enumerate().take(k + 1) {
                if !c.is_zero() && k - j < y.len() {
                    s = &s + &(c * &y[k - j]);
                }
            }
            s
        })
        .collect()
}

/// The system, the solution prefixes and the degree budget.
#[derive(Clone, Debug)]
pub struct ApproxContext {
    pub sys: QSystem,
    pub ys: Vec<Vec<Scalar>>,
    pub n: usize,
    pub tau: BigRational,
    pub q1: Poly<Scalar>,
    pub t: usize,
}

fn poly_lcm(a: &Poly<Scalar>, b: &Poly<Scalar>) -> Poly<Scalar> {
    let g = a.gcd(b);
    a.mul(&b.divrem(&g).0).monic()
}

impl ApproxContext {
    /// Q₁ defaults to the lcm of the denominators of A₁^{-1}.
    pub fn new(sys: QSystem, ys: Vec<Vec<Scalar>>, n: usize, tau: BigRational) -> Result<Self> {
        check_tau(&tau)?;
        if ys.len() != sys.dim() {
            return Err(Error::Domain("solution vector length differs from the system size".into()));
        }
        let inv = sys.a1().inverse()?;
        let mut q1 = Poly::one();
        for e in inv.entries().iter().filter(|e| !e.is_zero()) {
            q1 = poly_lcm(&q1, &e.as_fraction().1);
        }
        Self::with_q1(sys, ys, n, tau, q1)
    }

    pub fn with_q1(sys: QSystem, ys: Vec<Vec<Scalar>>, n: usize, tau: BigRational, q1: Poly<Scalar>) -> Result<Self> {
        let inv = sys.a1().inverse()?;
        let mut t = q1.deg();
        for e in inv.entries() {
            let p = (e * &RatFun::from_poly(q1.clone()))
                .to_poly()
                .ok_or_else(|| Error::Domain("Q₁·A₁^{-1} is not polynomial".into()))?;
            if !p.is_zero() {
                t = t.max(p.deg());
            }
        }
        Ok(ApproxContext { sys, ys, n, tau, q1, t })
    }

    pub fn nu(&self) -> usize {
        self.sys.dim()
    }

    pub fn band(&self) -> usize {
        band_width(self.n, &self.tau, self.nu())
    }

    /// n ≤ (N/t)(1−τ)/ν.
    pub fn within_budget(&self, k: usize) -> bool {
        if self.t == 0 {
            return true;
        }
        let lhs = BigRational::from_integer(BigInt::from(k * self.t * self.nu()));
        lhs <= BigRational::from_integer(BigInt::from(self.n)) * (BigRational::from_integer(1.into()) - &self.tau)
    }

    /// P = (g·y)_{≤N}.
    pub fn p_vector(&self, g: &Poly<Scalar>) -> Vector {
        self.ys
            .iter()
            .map(|y| RatFun::from_poly(Poly::from_coeffs(series_mul_poly(y, g, self.n + 1))))
            .collect()
    }

    /// Q_0 = 1, Q_n(x) = Q₁(x)Q_{n−1}(qx).
    pub fn q_poly(&self, k: usize) -> Poly<Scalar> {
        let q = self.sys.field().q();
        let mut out = Poly::one();
        for _ in 0..k {
            out = self.q1.mul(&out.twist(&q));
        }
        out
    }
}

fn mat_vec(m: &Matrix<RatFun>, v: &[RatFun]) -> Vector {
    m.mul_vec(v)
}

/// Λ(v) = A₁^{-1}(d_q v − G₁v).
pub fn lambda(sys: &QSystem, a1_inv: &Matrix<RatFun>, v: &[RatFun]) -> Vector {
    let q = sys.field().q();
    let gv = mat_vec(&sys.g1(), v);
    let w: Vector = v.iter().zip(&gv).map(|(a, b)| &a.dq(&q) - b).collect();
    mat_vec(a1_inv, &w)
}

/// R_0, …, R_k for an arbitrary vector P.
pub fn remainder_vectors(sys: &QSystem, p: &[RatFun], k: usize) -> Result<Vec<Vector>> {
    let inv = sys.a1().inverse()?;
    let field = sys.field();
    let mut out = vec![p.to_vec()];
    for n in 1..=k {
        let b = RatFun::constant(field.bracket(n as u64).inv());
        let next = lambda(sys, &inv, &out[n - 1]).iter().map(|e| e * &b).collect();
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RemainderTable {
    pub p: Vector,
    pub r: Vec<Vector>,
    /// x^nQ_nR_n from the Λ-recursion.
    pub scaled: Vec<Vector>,
    /// x^nQ_nR_n from the σ-expansion of d_q^n.
    pub scaled_formula: Vec<Vector>,
    pub paths_agree: bool,
    pub polynomial: Vec<bool>,
    /// Largest degree of x^nQ_nR_n and the bound N + nt.
    pub degrees: Vec<(i64, usize)>,
}

impl RemainderTable {
    pub fn degree_bounds_hold(&self) -> bool {
        self.polynomial.iter().all(|&b| b) && self.degrees.iter().all(|&(d, b)| d <= b as i64)
    }
}

fn vec_degree(v: &[RatFun]) -> i64 {
    v.iter().filter(|e| !e.is_zero()).map(|e| e.deg_x()).max().unwrap_or(i64::MIN)
}

pub fn remainders(ctx: &ApproxContext, g: &Poly<Scalar>, kbar: usize) -> Result<RemainderTable> {
    let sys = &ctx.sys;
    let field = sys.field();
    let q = field.q();
    let p = ctx.p_vector(g);
    let r = remainder_vectors(sys, &p, kbar)?;
    let table = iterate(sys, kbar);
    let mut scaled = Vec::new();
    let mut formula = Vec::new();
    let mut polynomial = Vec::new();
    let mut degrees = Vec::new();
    for (n, rn) in r.iter().enumerate() {
        let qn = RatFun::from_poly(ctx.q_poly(n)).mul_x_pow(n as i64);
        let s: Vector = rn.iter().map(|e| e * &qn).collect();
        // (−1)^n/((q−1)^n[n]!) Σ c_{i,n} Q_n A_i^{-1} σ^i(P)
        let pref = &(&Scalar::from_i64(-1).pow(n as i64) / &(&q - &Scalar::one()).pow(n as i64)) / &field.fact(n as u64);
        let qn_plain = RatFun::from_poly(ctx.q_poly(n));
        let mut acc = vec![RatFun::zero(); p.len()];
        for (i, c) in DqPowerExpansion::new(n, &q).c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sp: Vector = p.iter().map(|e| e.twist(&q.pow(i as i64))).collect();
            let v = mat_vec(&table.a(i).inverse()?, &sp);
            for (a, e) in acc.iter_mut().zip(v) {
                *a = &*a + &(&e * &RatFun::constant(c.clone()));
            }
        }
        let f: Vector = acc.iter().map(|e| &(e * &qn_plain) * &RatFun::constant(pref.clone())).collect();
        polynomial.push(s.iter().all(|e| e.is_polynomial()));
        degrees.push((vec_degree(&s), ctx.n + n * ctx.t));
        scaled.push(s);
        formula.push(f);
    }
    let paths_agree = scaled == formula;
    Ok(RemainderTable { p, r, scaled, scaled_formula: formula, paths_agree, polynomial, degrees })
}

/// Truncation identity and order bound for one n.
#[derive(Clone, Debug)]
pub struct TruncationRow {
    pub n: usize,
    pub within_budget: bool,
    /// (x^nQ_n(d_q^n g/[n]!)y)_{≤N+nt} = x^nQ_nR_n.
    pub truncation_holds: bool,
    /// Order of the difference, if nonzero within the known range.
    pub order: Option<usize>,
    pub order_bound: usize,
    pub order_holds: bool,
}

/// d_q^n g/[n]_q!: coefficient of x^{k−n} is binom(k, n)_q g_k.
pub fn divided_dq(g: &Poly<Scalar>, n: usize, field: Field) -> Poly<Scalar> {
    let c: Vec<Scalar> =
        g.coeffs().iter().enumerate().skip(n).map(|(k, a)| a * &field.binom(k as u64, n as u64)).collect();
    Poly::from_coeffs(c)
}

pub fn truncation_checks(ctx: &ApproxContext, g: &Poly<Scalar>, table: &RemainderTable) -> Result<Vec<TruncationRow>> {
    let field = ctx.sys.field();
    let bound = 1 + ctx.n + ctx.band();
    let mut out = Vec::new();
    for (n, s) in table.scaled.iter().enumerate() {
        let top = (ctx.n + n * ctx.t).max(bound - 1);
        let len = top + 1;
        if ctx.ys.iter().any(|y| y.len() < len) {
            return Err(Error::Truncation(format!("need {len} solution terms for n = {n}")));
        }
        let xq = ctx.q_poly(n).shift_up(n).mul(&divided_dq(g, n, field));
        let mut trunc_ok = true;
        let mut order: Option<usize> = None;
        for (y, rn) in ctx.ys.iter().zip(s) {
            let lhs = series_mul_poly(y, &xq, len);
            let rhs = rn.to_poly().unwrap_or_else(Poly::zero);
            for (k, l) in lhs.iter().enumerate() {
                let d = l - &rhs.coeff(k);
                if !d.is_zero() {
                    if k <= ctx.n + n * ctx.t {
                        trunc_ok = false;
                    }
                    order = Some(order.map_or(k, |o: usize| o.min(k)));
                }
            }
        }
        out.push(TruncationRow {
            n,
            within_budget: ctx.within_budget(n),
            truncation_holds: trunc_ok,
            order,
            order_bound: bound,
            order_holds: order.is_none_or(|o| o >= bound),
        });
    }
    Ok(out)
}

/// α_i^{(n)} for 0 ≤ i ≤ n ≤ n̄, from Σ_{i≤k}(−1)^i binom(k,i)_q q^{i(n−k)} α_i = δ_{k,0}.
pub fn alpha_triangle(field: Field, nbar: usize) -> Vec<Vec<Scalar>> {
    (0..=nbar)
        .map(|n| {
            let mut row = vec![Scalar::one()];
            for k in 1..=n {
                let nk = (n - k) as i64;
                let mut s = Scalar::zero();
                for (i, a) in row.iter().enumerate() {
                    let term = &(&field.binom(k as u64, i as u64) * &field.q_pow(i as i64 * nk)) * a;
                    s = if i % 2 == 0 { &s + &term } else { &s - &term };
                }
                let sign = if k % 2 == 1 { Scalar::one() } else { Scalar::from_i64(-1) };
                row.push(&(&s * &sign) / &field.q_pow(k as i64 * nk));
            }
            row
        })
        .collect()
}

/// Every α has a denominator that is a power of q̃ (so |α|_v ≤ 1 away from q).
pub fn alpha_integral(tri: &[Vec<Scalar>]) -> bool {
    tri.iter().flatten().all(|a| a.den().is_one())
}

/// Both sides are kept over factored denominators, so equality is decided on
/// numerators over a common denominator without any gcd.
#[derive(Clone, Debug)]
pub struct CentralCheck {
    pub n: usize,
    pub holds: bool,
    /// Numerator and denominator degrees in x of the left side.
    pub lhs_degrees: (usize, usize),
}

/// R^{<i>}: columns binom(i+j, i)_q R_{i+j}, j < ν.
pub fn r_matrix(r: &[Vector], i: usize, field: Field) -> Matrix<RatFun> {
    let nu = r[0].len();
    let mut m = Matrix::zeros(nu, nu);
    for j in 0..nu {
        let w = RatFun::constant(field.binom((i + j) as u64, i as u64));
        for (row, e) in r[i + j].iter().enumerate() {
            m.set(row, j, e * &w);
        }
    }
    m
}

fn lcm_of_denominators<'a>(entries: impl Iterator<Item = &'a RatFun>) -> Poly<Scalar> {
    let mut l = Poly::one();
    for e in entries.filter(|e| !e.is_zero()) {
        l = poly_lcm(&l, &e.as_fraction().1);
    }
    l
}

fn polys_times(m: &Matrix<RatFun>, c: &Poly<Scalar>) -> Result<Vec<Poly<Scalar>>> {
    let c = RatFun::from_poly(c.clone());
    m.entries()
        .iter()
        .map(|e| (e * &c).to_poly().ok_or_else(|| Error::Domain("denominator does not clear".into())))
        .collect()
}

/// G_[n]R^{<0>} against Σ_i (−1)^i α_i^{(n)} (d_q^{n−i}/[n−i]_q!)(A_i R^{<i>}); P must be polynomial.
pub fn central_identity_check(sys: &QSystem, p: &[RatFun], n: usize) -> Result<CentralCheck> {
    let field = sys.field();
    let q = field.q();
    let nu = sys.dim();
    if p.len() != nu {
        return Err(Error::Domain("P has the wrong length".into()));
    }
    let p: Vec<Poly<Scalar>> = p
        .iter()
        .map(|e| e.to_poly().ok_or_else(|| Error::Domain("P must have polynomial entries".into())))
        .collect::<Result<_>>()?;
    let a1 = sys.a1();
    let inv = a1.inverse()?;
    let q1 = lcm_of_denominators(inv.entries().iter());
    let e1 = lcm_of_denominators(a1.entries().iter());
    let ctx = Bases::new(q.clone(), vec![q1.clone(), e1.clone()]);
    let a1f = FMat::from_polys(nu, nu, polys_times(a1, &e1)?).over_base(1);
    let inv_f = FMat::from_polys(nu, nu, polys_times(&inv, &q1)?).over_base(0);
    let qm1 = (&q - &Scalar::one()).inv();

    let mut r = vec![FMat::from_polys(nu, 1, p)];
    for m in 1..n + nu {
        let v = &r[m - 1];
        let lam = inv_f.mul(&v.sigma(&ctx)).sub(v, &ctx).scale(&qm1).over_x(1);
        r.push(lam.scale(&field.bracket(m as u64).inv()));
    }
    let r_mat = |i: usize| -> FMat {
        let cols: Vec<FMat> = (0..nu).map(|j| r[i + j].scale(&field.binom((i + j) as u64, i as u64))).collect();
        FMat::hcat(&cols, &ctx)
    };

    let id = FMat::identity(nu);
    let g1 = a1f.sub(&id, &ctx).scale(&qm1).over_x(1);
    let mut g = id.clone();
    let mut a = vec![id];
    for k in 0..n {
        g = if k == 0 { g1.clone() } else { g.sigma(&ctx).mul(&g1).add(&g.dq(&ctx), &ctx) };
        let next = a[k].sigma(&ctx).mul(&a1f);
        a.push(next);
    }
    let lhs = g.scale(&field.fact(n as u64).inv()).mul(&r_mat(0));

    let alpha = &alpha_triangle(field, n)[n];
    let mut rhs: Option<FMat> = None;
    for (i, al) in alpha.iter().enumerate() {
        let mut m = a[i].mul(&r_mat(i));
        for _ in 0..n - i {
            m = m.dq(&ctx);
        }
        let w = &field.fact((n - i) as u64).inv() * al;
        let w = if i % 2 == 1 { -&w } else { w };
        let term = m.scale(&w);
        rhs = Some(match rhs {
            None => term,
            Some(acc) => acc.add(&term, &ctx),
        });
    }
    let rhs = rhs.expect("α_0 exists");
    debug_assert_eq!((lhs.rows(), lhs.cols()), (rhs.rows(), rhs.cols()));
    Ok(CentralCheck { n, holds: lhs.same(&rhs, &ctx), lhs_degrees: lhs.degrees(&ctx) })
}

#[derive(Clone, Debug)]
pub struct DeterminantCheck {
    pub det: RatFun,
    pub nonzero: bool,
    pub ord: Option<i64>,
    pub deg: Option<i64>,
    /// ord of P_i y_j − P_j y_i for i < j, None when zero in the known range.
    pub minors: Vec<((usize, usize), Option<usize>)>,
    pub minor_bound: usize,
    pub minors_hold: bool,
}

pub fn determinant_check(ctx: &ApproxContext, table: &RemainderTable) -> Result<DeterminantCheck> {
    let nu = ctx.nu();
    let field = ctx.sys.field();
    if table.r.len() < nu {
        return Err(Error::Truncation(format!("need R_0..R_{}", nu - 1)));
    }
    let det = r_matrix(&table.r, 0, field).det();
    let nonzero = !det.is_zero();
    let bound = 1 + ctx.n + ctx.band();
    let len = ctx.ys.iter().map(|y| y.len()).min().unwrap_or(0);
    let mut minors = Vec::new();
    for i in 0..nu {
        for j in i + 1..nu {
            let pi = table.p[i].to_poly().unwrap_or_else(Poly::zero);
            let pj = table.p[j].to_poly().unwrap_or_else(Poly::zero);
            let a = series_mul_poly(&ctx.ys[j], &pi, len);
            let b = series_mul_poly(&ctx.ys[i], &pj, len);
            let ord = a.iter().zip(&b).position(|(u, v)| u != v);
            minors.push(((i, j), ord));
        }
    }
    let minors_hold = minors.iter().all(|(_, o)| o.is_none_or(|o| o >= bound));
    Ok(DeterminantCheck {
        ord: nonzero.then(|| det.ord_x()),
        deg: nonzero.then(|| det.deg_x()),
        det,
        nonzero,
        minors,
        minor_bound: bound,
        minors_hold,
    })
}

/// h(g, v) = sup_n log⁺|g_n|_v.
pub fn height_at(coeffs: &[Scalar], place: &Place, field: Field) -> Result<LogNorm> {
    let mut best = BigRational::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        best = best.max(log_plus(&log_norm(c, place, field)?));
    }
    Ok(best)
}

/// Σ_v h(g, v), by place class.
pub fn height_sums(coeffs: &[Scalar], field: Field) -> PlaceSums {
    let mut t = PlaceTally::new(field);
    for c in coeffs {
        t.push(c);
    }
    t.sums()
}

/// Σ_v h̃(n, v) for a vector of prefixes.
pub fn prefix_heights(ys: &[Vec<Scalar>], n: usize, field: Field) -> PlaceSums {
    let mut t = PlaceTally::new(field);
    for y in ys {
        for c in y.iter().take(n + 1) {
            t.push(c);
        }
    }
    t.sums()
}

/// The diagonal system satisfied by (1/(1−x), 1/(1−qx)) and its prefixes.
pub fn geometric_pair(field: Field, len: usize) -> (QSystem, Vec<Vec<Scalar>>) {
    let q = field.q();
    let lin = |c: Scalar| Poly::from_coeffs(vec![Scalar::one(), -c]);
    let a = RatFun::new(lin(Scalar::one()), lin(q.clone()));
    let b = RatFun::new(lin(q.clone()), lin(q.pow(2)));
    let mut m = Matrix::zeros(2, 2);
    m.set(0, 0, a);
    m.set(1, 1, b);
    let sys = QSystem::new(field, m).expect("nonsingular");
    let ys = vec![vec![Scalar::one(); len], (0..len).map(|k| q.pow(k as i64)).collect()];
    (sys, ys)
}

/// (E_q, 1/(1−x)): σE_q = (1+(q−1)x)E_q, with linearly independent entries.
pub fn eq_geometric_pair(field: Field, len: usize) -> (QSystem, Vec<Vec<Scalar>>) {
    let q = field.q();
    let a = RatFun::from_poly(Poly::from_coeffs(vec![Scalar::one(), &q - &Scalar::one()]));
    let b = RatFun::new(
        Poly::from_coeffs(vec![Scalar::one(), Scalar::from_i64(-1)]),
        Poly::from_coeffs(vec![Scalar::one(), -q]),
    );
    let mut m = Matrix::zeros(2, 2);
    m.set(0, 0, a);
    m.set(1, 1, b);
    let sys = QSystem::new(field, m).expect("nonsingular");
    let ys = vec![(0..len).map(|k| field.fact(k as u64).inv()).collect(), vec![Scalar::one(); len]];
    (sys, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::rational()
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn alpha_rows() {
        let tri = alpha_triangle(f(), 12);
        for (n, row) in tri.iter().enumerate() {
            assert!(row[0].is_one());
            if n >= 1 {
                assert_eq!(row[1], f().q_pow(1 - n as i64));
            }
        }
        assert!(alpha_integral(&tri));
        for m in [2, 3, 4] {
            assert!(log_norm(&tri[5][2], &Place::cyclotomic(m), f()).unwrap().is_zero());
        }
    }

    #[test]
    fn build_g_band() {
        let ys = vec![vec![Scalar::one(); 10]];
        let hp = build_g(&ys, 3, &half(), f()).unwrap();
        assert!(hp.g.deg() <= 3 && !hp.g.is_zero());
        assert!(series_mul_poly(&ys[0], &hp.g, 5)[4].is_zero());
        let ys = vec![vec![Scalar::one(); 12], vec![Scalar::one(); 12]];
        let mut ys2 = ys.clone();
        ys2[0] = (0..12).map(|k| if k == 0 { Scalar::one() } else { Scalar::zero() }).collect();
        let hp = build_g(&ys2, 8, &half(), f()).unwrap();
        assert_eq!(hp.band, (9, 10));
        for y in &ys2 {
            let s = series_mul_poly(y, &hp.g, 11);
            assert!(s[9].is_zero() && s[10].is_zero());
        }
    }

    #[test]
    fn trivial_system_identity() {
        let sys = QSystem::new(f(), Matrix::identity(1)).unwrap();
        let p = vec![RatFun::from_poly(Poly::from_coeffs(vec![Scalar::one(), Scalar::from_i64(2), Scalar::one()]))];
        let r = remainder_vectors(&sys, &p, 1).unwrap();
        assert_eq!(r[1][0], p[0].dq(&f().q()));
        for n in 0..4 {
            assert!(central_identity_check(&sys, &p, n).unwrap().holds);
        }
    }

    #[test]
    fn companion_identity() {
        let l = crate::skew::parse_operator(
            "sigma^2 - (1+q^2*x)*sigma + q*x",
            &crate::skew::SkewRing::q(crate::skew::Form::Sigma, f()),
        )
        .unwrap();
        let sys = crate::systems::companion(&l).unwrap();
        let x = Poly::<Scalar>::x();
        let p = vec![RatFun::from_poly(x.add(&Poly::one())), RatFun::from_poly(x.pow(2))];
        for n in 0..=3 {
            assert!(central_identity_check(&sys, &p, n).unwrap().holds, "n = {n}");
        }
    }

    #[test]
    fn geometric_pair_pipeline() {
        for n in [8usize, 12] {
            let (sys, ys) = geometric_pair(f(), n + 12);
            let ctx = ApproxContext::new(sys, ys.clone(), n, half()).unwrap();
            let hp = build_g(&ys, n, &half(), f()).unwrap();
            let table = remainders(&ctx, &hp.g, 2).unwrap();
            assert!(table.paths_agree);
            assert!(table.degree_bounds_hold());
            for row in truncation_checks(&ctx, &hp.g, &table).unwrap() {
                if row.within_budget {
                    assert!(row.truncation_holds && row.order_holds, "{row:?}");
                }
            }
            let d = determinant_check(&ctx, &table).unwrap();
            // both entries are rational, so g·y is a polynomial and R^{<0>} is singular
            assert!(!d.nonzero && d.minors_hold);
        }
    }

    #[test]
    fn eq_pair_determinant() {
        let n = 8;
        let (sys, ys) = eq_geometric_pair(f(), n + 12);
        let ctx = ApproxContext::new(sys, ys.clone(), n, half()).unwrap();
        let hp = build_g(&ys, n, &half(), f()).unwrap();
        let table = remainders(&ctx, &hp.g, 2).unwrap();
        assert!(table.paths_agree && table.degree_bounds_hold());
        for row in truncation_checks(&ctx, &hp.g, &table).unwrap() {
            if row.within_budget {
                assert!(row.truncation_holds && row.order_holds, "{row:?}");
            }
        }
        let d = determinant_check(&ctx, &table).unwrap();
        assert!(d.nonzero && d.minors_hold);
    }

    #[test]
    fn heights() {
        assert!(height_sums(&[Scalar::one()], f()).total().is_zero());
        let c = vec![&f().q() - &Scalar::one(), Scalar::one()];
        assert!(height_at(&c, &Place::cyclotomic(1), f()).unwrap().is_zero());
        let d = (&f().q() + &Scalar::one()).pow(-2);
        assert_eq!(height_at(&[d], &Place::cyclotomic(2), f()).unwrap(), BigRational::from_integer(2.into()));
    }
}
