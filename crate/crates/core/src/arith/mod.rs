//! Exact arithmetic: integer polynomials, the scalar field Q(q̃), polynomials and
//! rational functions in x, matrices, q-numbers and cyclotomic residues.

pub mod cyclo;
pub mod matrix;
pub(crate) mod modp;
pub mod poly;
pub mod qnum;
pub mod ratfun;
pub mod scalar;
pub mod zpoly;

use std::fmt::Debug;

pub use cyclo::{cyclotomic_poly, specialize_at_root, CycloElem};
pub use matrix::{LinearSolution, Matrix};
pub use poly::Poly;
pub use qnum::{q_quantities, Field, QNumbers};
pub use ratfun::RatFun;
pub use scalar::Scalar;
pub use zpoly::ZPoly;

/// The operations every coefficient field must provide.
pub trait FieldElem: Clone + PartialEq + Eq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    fn pow_u(&self, k: u64) -> Self {
        let mut r = Self::one();
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }
}
