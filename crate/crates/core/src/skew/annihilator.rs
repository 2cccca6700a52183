//! Guessing a q-difference operator from a coefficient stream.
//!
//! The ansatz Σ_{i≤ν, j≤D} c_{ij} x^j σ^i applied to y has n-th coefficient
//! Σ c_{ij} q^{i(n−j)} y_{n−j}. Boxes (ν, D) are tried in lexicographic order;
//! full column rank is certified cheaply modulo a prime, and only the first
//! deficient box is solved exactly.

use crate::arith::modp::{independent_rows_mod, rank_mod, PRIMES};
use crate::arith::{Field, Matrix, Poly, RatFun, Scalar};

use super::operator::{Form, SkewOp, SkewRing};
use super::series::{apply, CoeffGen, Series};

/// A found operator together with the box it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilator {
    pub op: SkewOp,
    pub order: usize,
    pub degree: usize,
}

fn equation_matrix(y: &[Scalar], q: &Scalar, nu: usize, d: usize, rows: usize) -> Matrix<Scalar> {
    let cols = (nu + 1) * (d + 1);
    let mut m = Matrix::zeros(rows, cols);
    for n in 0..rows {
        for i in 0..=nu {
            for j in 0..=d.min(n) {
                let yv = &y[n - j];
                if !yv.is_zero() {
                    m.set(n, i * (d + 1) + j, yv * &q.pow((i * (n - j)) as i64));
                }
            }
        }
    }
    m
}

fn reduce_mod(m: &Matrix<Scalar>, p: u64) -> Option<Vec<Vec<u64>>> {
    for a in [982_451_653u64, 1_000_003, 7_919_993, 31_337] {
        let mut out = Vec::with_capacity(m.rows());
        let mut ok = true;
        'rows: for r in 0..m.rows() {
            let mut row = Vec::with_capacity(m.cols());
            for v in m.row(r) {
                match v.eval_mod(a, p) {
                    Some(x) => row.push(x),
                    None => {
                        ok = false;
                        break 'rows;
                    }
                }
            }
            out.push(row);
        }
        if ok {
            return Some(out);
        }
    }
    None
}

fn to_operator(v: &[Scalar], field: Field, nu: usize, d: usize) -> SkewOp {
    let ring = SkewRing::q(Form::Sigma, field);
    let coeffs = (0..=nu)
        .map(|i| RatFun::from_poly(Poly::from_coeffs(v[i * (d + 1)..(i + 1) * (d + 1)].to_vec())))
        .collect();
    SkewOp::new(ring, coeffs)
}

fn kills(m: &Matrix<Scalar>, v: &[Scalar]) -> bool {
    m.mul_vec(v).iter().all(|x| x.is_zero())
}

/// Exact nonzero kernel vector of the (ν, D) system, if one exists.
fn solve_box(y: &[Scalar], field: Field, nu: usize, d: usize, guard: usize) -> Option<Vec<Scalar>> {
    let cols = (nu + 1) * (d + 1);
    let rows = (cols + guard).min(y.len());
    let m = equation_matrix(y, &field.q(), nu, d, rows);
    let p = PRIMES[0];
    let modm = reduce_mod(&m, p);
    if let Some(mm) = &modm {
        if rank_mod(mm.clone(), p) == cols {
            return None;
        }
    }
    let kernel = match &modm {
        Some(mm) => {
            let idx = independent_rows_mod(mm, p);
            let sub = Matrix::from_rows(idx.iter().map(|&r| m.row(r).to_vec()).collect());
            sub.nullspace_ff().into_iter().find(|v| kills(&m, v))
        }
        None => None,
    };
    kernel.or_else(|| m.nullspace_ff().into_iter().next())
}

/// Lexicographically smallest (order, degree) box holding an operator that kills
/// the first (ν+1)(D+1)+guard coefficients; the operator is returned normalized.
pub fn annihilator_search(
    gen: &dyn CoeffGen,
    field: Field,
    max_order: usize,
    max_deg: usize,
    guard: usize,
) -> Option<Annihilator> {
    let need = (max_order + 1) * (max_deg + 1) + guard;
    let y = gen.prefix(need);
    for nu in 0..=max_order {
        for d in 0..=max_deg {
            if let Some(v) = solve_box(&y, field, nu, d, guard) {
                let op = to_operator(&v, field, nu, d).normalize();
                return Some(Annihilator { order: op.order(), degree: d, op });
            }
        }
    }
    None
}

/// True if some nonzero operator of order ≤ ν and degree ≤ D kills the prefix
/// (with `guard` extra equations).
pub fn exists_in_box(gen: &dyn CoeffGen, field: Field, nu: usize, d: usize, guard: usize) -> bool {
    let y = gen.prefix((nu + 1) * (d + 1) + guard);
    solve_box(&y, field, nu, d, guard).is_some()
}

/// Residual check on `len` coefficients.
pub fn verify(op: &SkewOp, gen: &dyn CoeffGen, len: usize) -> bool {
    apply(op, &Series::power(gen.prefix(len))).map(|s| s.is_zero()).unwrap_or(false)
}
