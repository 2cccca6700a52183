//! Series in the q-Newton basis T_n(x, ξ) = (x−ξ)(x−qξ)⋯(x−q^{n−1}ξ), operators acting
//! on them, local solutions at ξ ≠ 0 and Casorati determinants.
//!
//! A `NewtonSeries` with `len` coefficients is exact modulo T_len. Multiplication by x
//! keeps that precision; σ and d each lose one step.

use crate::arith::qnum::bracket_of;
use crate::arith::{Field, Matrix, Poly, RatFun, Scalar};
use crate::error::{Error, Result};
use crate::skew::{Form, SkewOp};

/// T_n(x, ξ) in the twist t, expanded in monomials.
pub fn tq_poly(n: usize, xi: &Scalar, t: &Scalar) -> Poly<Scalar> {
    let mut p = Poly::one();
    for k in 0..n {
        let root = xi * &t.pow(k as i64);
        p = p.mul(&Poly::from_coeffs(vec![-root, Scalar::one()]));
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSeries {
    pub xi: Scalar,
    pub twist: Scalar,
    pub c: Vec<Scalar>,
}

impl NewtonSeries {
    pub fn new(xi: Scalar, twist: Scalar, c: Vec<Scalar>) -> Self {
        assert!(!xi.is_zero(), "expansion point must be nonzero");
        NewtonSeries { xi, twist, c }
    }

    /// Unit vector T_k, exact modulo T_len.
    pub fn basis(k: usize, xi: &Scalar, twist: &Scalar, len: usize) -> Self {
        let mut c = vec![Scalar::zero(); len];
        if k < len {
            c[k] = Scalar::one();
        }
        NewtonSeries::new(xi.clone(), twist.clone(), c)
    }

    /// Exact triangular change of basis (Newton divided differences at ξ, tξ, t²ξ, …).
    pub fn from_poly(p: &Poly<Scalar>, xi: &Scalar, twist: &Scalar, len: usize) -> Self {
        let mut c = Vec::with_capacity(len);
        let mut rest = p.clone();
        for k in 0..len {
            let node = xi * &twist.pow(k as i64);
            let a = rest.eval(&node);
            c.push(a.clone());
            let shifted = rest.sub(&Poly::constant(a));
            rest = shifted.divrem(&Poly::from_coeffs(vec![-node, Scalar::one()])).0;
        }
        NewtonSeries::new(xi.clone(), twist.clone(), c)
    }

    pub fn to_poly(&self) -> Poly<Scalar> {
        let mut out = Poly::zero();
        let mut t = Poly::one();
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&t.scale(a));
            }
            let root = &self.xi * &self.twist.pow(k as i64);
            t = t.mul(&Poly::from_coeffs(vec![-root, Scalar::one()]));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    fn with(&self, c: Vec<Scalar>) -> Self {
        NewtonSeries { xi: self.xi.clone(), twist: self.twist.clone(), c }
    }

    pub fn truncate(&self, len: usize) -> Self {
        self.with(self.c[..len.min(self.len())].to_vec())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        self.with((0..n).map(|i| &self.c[i] + &o.c[i]).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        self.with((0..n).map(|i| &self.c[i] - &o.c[i]).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.with(self.c.iter().map(|v| v * s).collect())
    }

    /// x·T_n = T_{n+1} + t^n ξ T_n.
    pub fn mul_x(&self) -> Self {
        let n = self.len();
        let mut out = vec![Scalar::zero(); n];
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            out[k] = &out[k] + &(a * &(&self.xi * &self.twist.pow(k as i64)));
            if k + 1 < n {
                out[k + 1] = &out[k + 1] + a;
            }
        }
        self.with(out)
    }

    pub fn mul_poly(&self, p: &Poly<Scalar>) -> Self {
        let mut acc = self.scale(&Scalar::zero());
        let mut xs = self.clone();
        for (k, c) in p.coeffs().iter().enumerate() {
            if k > 0 {
                xs = xs.mul_x();
            }
            if !c.is_zero() {
                acc = acc.add(&xs.scale(c));
            }
        }
        acc
    }

    /// σ T_n = t^n T_n + t^{n−1}(t^n − 1)ξ T_{n−1}.
    pub fn sigma(&self) -> Self {
        let n = self.len().saturating_sub(1);
        let t = &self.twist;
        let out = (0..n)
            .map(|k| {
                let tk = t.pow(k as i64);
                let a = &self.c[k] * &tk;
                let b = &self.c[k + 1] * &(&(&tk * &(&t.pow(k as i64 + 1) - &Scalar::one())) * &self.xi);
                &a + &b
            })
            .collect();
        self.with(out)
    }

    /// d T_n = [n] T_{n−1}.
    pub fn dq(&self) -> Self {
        let n = self.len().saturating_sub(1);
        self.with((0..n).map(|k| &self.c[k + 1] * &bracket_of(&self.twist, k as i64 + 1)).collect())
    }

    /// Cauchy product through the x-action: Σ a_n T_n·u = Σ a_n ∏_{k<n}(x − t^kξ)·u.
    pub fn mul(&self, u: &Self) -> Self {
        let n = self.len().min(u.len());
        let mut acc = u.truncate(n).scale(&Scalar::zero());
        let mut tu = u.truncate(n);
        for (k, a) in self.c.iter().take(n).enumerate() {
            if k > 0 {
                let root = &self.xi * &self.twist.pow(k as i64 - 1);
                tu = tu.mul_x().sub(&tu.scale(&root));
            }
            if !a.is_zero() {
                acc = acc.add(&tu.scale(a));
            }
        }
        acc
    }
}

fn polynomial_coeffs(l: &SkewOp) -> Result<Vec<Poly<Scalar>>> {
    let l = l.clear_denominators();
    l.coeffs()
        .iter()
        .map(|a| a.to_poly().ok_or_else(|| Error::Domain("operator coefficients must be polynomial".into())))
        .collect()
}

/// L·s using the three structural rules.
pub fn act(l: &SkewOp, s: &NewtonSeries) -> Result<NewtonSeries> {
    if l.twist() != &s.twist {
        return Err(Error::Domain("operator twist and basis twist differ".into()));
    }
    let coeffs: Vec<Poly<Scalar>> = l
        .coeffs()
        .iter()
        .map(|a| a.to_poly().ok_or_else(|| Error::Domain("operator coefficients must be polynomial".into())))
        .collect::<Result<_>>()?;
    if l.order() >= s.len() {
        return Err(Error::Truncation(format!(
            "order {} operator on a series exact to {} terms",
            l.order(),
            s.len()
        )));
    }
    let mut acc: Option<NewtonSeries> = None;
    let mut g = s.clone();
    for (i, a) in coeffs.iter().enumerate() {
        if i > 0 {
            g = match l.form() {
                Form::Sigma => g.sigma(),
                Form::Dq => g.dq(),
            };
        }
        if a.is_zero() {
            continue;
        }
        let term = g.mul_poly(a);
        acc = Some(match acc {
            None => term,
            Some(x) => x.add(&term),
        });
    }
    Ok(acc.unwrap_or_else(|| s.scale(&Scalar::zero())))
}

/// ν independent solutions exact modulo T_{len−ν}, found by the banded recursion
/// a_{n+ν} = −(lower terms)/pivot_n. A vanishing pivot is a hypothesis failure.
pub fn local_solution_basis(l: &SkewOp, xi: &Scalar, len: usize) -> Result<Vec<NewtonSeries>> {
    let nu = l.order();
    if nu == 0 {
        return Err(Error::Domain("order 0 operator has no nonzero solutions".into()));
    }
    if len <= nu {
        return Err(Error::Truncation("truncation must exceed the order".into()));
    }
    let l = SkewOp::new(
        l.ring().clone(),
        polynomial_coeffs(l)?.into_iter().map(RatFun::from_poly).collect(),
    );
    let t = l.twist().clone();
    let rows = len - nu;
    // column k of the equation matrix is L·T_k
    let cols: Vec<NewtonSeries> =
        (0..len).map(|k| act(&l, &NewtonSeries::basis(k, xi, &t, len))).collect::<Result<_>>()?;
    let entry = |n: usize, k: usize| cols[k].c[n].clone();
    let mut out = Vec::with_capacity(nu);
    for free in 0..nu {
        let mut a = vec![Scalar::zero(); len];
        a[free] = Scalar::one();
        for n in 0..rows {
            let pivot = entry(n, n + nu);
            if pivot.is_zero() {
                return Err(Error::Hypothesis(format!(
                    "the recursion pivot vanishes at step {n}: the leading coefficient has a zero at q^{n}·ξ"
                )));
            }
            let mut s = Scalar::zero();
            for k in 0..n + nu {
                if !a[k].is_zero() {
                    let e = entry(n, k);
                    if !e.is_zero() {
                        s = &s + &(&e * &a[k]);
                    }
                }
            }
            a[n + nu] = -&(&s / &pivot);
        }
        out.push(NewtonSeries::new(xi.clone(), t.clone(), a));
    }
    Ok(out)
}

/// Casorati determinant det(σ^i u_j) and the residual of a_ν·σC − (−1)^ν a_0·C.
#[derive(Clone, Debug)]
pub struct Casoratian {
    pub det: NewtonSeries,
    pub residual: NewtonSeries,
}

impl Casoratian {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

fn det(m: &[Vec<NewtonSeries>]) -> NewtonSeries {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<NewtonSeries> = None;
    for j in 0..n {
        let minor: Vec<Vec<NewtonSeries>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = m[0][j].mul(&det(&minor));
        let term = if j % 2 == 1 { term.scale(&Scalar::from_i64(-1)) } else { term };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.unwrap()
}

pub fn casoratian(l: &SkewOp, sols: &[NewtonSeries]) -> Result<Casoratian> {
    if l.form() != Form::Sigma {
        return Err(Error::FormMismatch("Casorati matrix uses the σ-form".into()));
    }
    let nu = l.order();
    if sols.len() < nu || nu == 0 {
        return Err(Error::Domain(format!("need {nu} solutions, got {}", sols.len())));
    }
    let mut m: Vec<Vec<NewtonSeries>> = Vec::with_capacity(nu);
    let mut row: Vec<NewtonSeries> = sols[..nu].to_vec();
    for i in 0..nu {
        if i > 0 {
            row = row.iter().map(|u| u.sigma()).collect();
        }
        m.push(row.clone());
    }
    let c = det(&m);
    let coeffs = polynomial_coeffs(l)?;
    let lhs = c.sigma().mul_poly(&coeffs[nu]);
    let rhs = c.mul_poly(&coeffs[0]);
    let residual = if nu.is_multiple_of(2) { lhs.sub(&rhs) } else { lhs.add(&rhs) };
    Ok(Casoratian { det: c, residual })
}

/// Truncated Casorati determinant is nonzero, so the solutions are independent.
pub fn independent(l: &SkewOp, sols: &[NewtonSeries]) -> Result<bool> {
    let c = casoratian(l, sols)?;
    Ok(!c.det.is_zero())
}

/// The E_q local solution Σ q^{−n}/[n]_q!·T_n(x, q²/(1−q)).
pub fn eq_local_solution(field: Field, len: usize) -> NewtonSeries {
    let q = field.q();
    let xi = &q.pow(2) / &(&Scalar::one() - &q);
    let c = (0..len).map(|n| &q.pow(-(n as i64)) / &field.fact(n as u64)).collect();
    NewtonSeries::new(xi, q, c)
}

/// Matrix helper used by callers that want the Casorati matrix itself.
pub fn casorati_matrix(sols: &[NewtonSeries]) -> Matrix<Scalar> {
    let nu = sols.len();
    let mut rows = Vec::with_capacity(nu);
    let mut cur: Vec<NewtonSeries> = sols.to_vec();
    for i in 0..nu {
        if i > 0 {
            cur = cur.iter().map(|u| u.sigma()).collect();
        }
        rows.push(cur.iter().map(|u| u.c.first().cloned().unwrap_or_else(Scalar::zero)).collect());
    }
    Matrix::from_rows(rows)
}
