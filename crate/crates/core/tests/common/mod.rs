#![allow(dead_code)]

use qdiff::arith::{Field, Matrix, Poly, RatFun, Scalar, ZPoly};
use qdiff::skew::{Form, SkewOp, SkewRing};
use qdiff::systems::QSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f() -> Field {
    Field::rational()
}

pub fn q() -> Scalar {
    f().q()
}

/// Integer polynomial in q of degree ≤ `deg`, coefficients in [−c, c].
pub fn zpoly(r: &mut ChaCha8Rng, deg: usize, c: i64) -> ZPoly {
    ZPoly::from_i64s(&(0..=deg).map(|_| r.gen_range(-c..=c)).collect::<Vec<_>>())
}

pub fn nonzero_zpoly(r: &mut ChaCha8Rng, deg: usize, c: i64) -> ZPoly {
    loop {
        let p = zpoly(r, deg, c);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Small scalar: a + bq with a, b ∈ [−2, 2].
pub fn small_scalar(r: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_zpoly(zpoly(r, 1, 2))
}

pub fn poly_x(r: &mut ChaCha8Rng, deg: usize) -> Poly<Scalar> {
    Poly::from_coeffs((0..=deg).map(|_| small_scalar(r)).collect())
}

pub fn nonzero_poly_x(r: &mut ChaCha8Rng, deg: usize) -> Poly<Scalar> {
    loop {
        let p = poly_x(r, deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Operator with polynomial coefficients, order 1..=max_order, degree ≤ max_deg,
/// nonzero constant and leading coefficients.
pub fn operator(r: &mut ChaCha8Rng, form: Form, max_order: usize, max_deg: usize) -> SkewOp {
    let nu = r.gen_range(1..=max_order);
    let ring = SkewRing::q(form, f());
    let mut c: Vec<RatFun> = (0..=nu)
        .map(|_| {
            let d = r.gen_range(0..=max_deg);
            RatFun::from_poly(if r.gen_bool(0.3) { Poly::zero() } else { poly_x(r, d) })
        })
        .collect();
    for i in [0, nu] {
        if c[i].is_zero() {
            let d = r.gen_range(0..=max_deg);
            c[i] = RatFun::from_poly(nonzero_poly_x(r, d));
        }
    }
    SkewOp::new(ring, c)
}

/// 2×2 system with polynomial entries of degree ≤ deg and nonzero determinant.
pub fn system(r: &mut ChaCha8Rng, deg: usize) -> QSystem {
    loop {
        let rows = (0..2).map(|_| (0..2).map(|_| RatFun::from_poly(poly_x(r, deg))).collect()).collect();
        let m = Matrix::from_rows(rows);
        if m.det().is_zero() {
            continue;
        }
        if let Ok(s) = QSystem::new(f(), m) {
            return s;
        }
    }
}

pub fn vector(r: &mut ChaCha8Rng, dim: usize, deg: usize) -> Vec<RatFun> {
    (0..dim).map(|_| RatFun::from_poly(nonzero_poly_x(r, deg))).collect()
}
