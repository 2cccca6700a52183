//! The field context (radical index r with q = q̃^r) and cached q-numbers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use super::scalar::Scalar;
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// The scalar field K = Q(q̃) with q = q̃^r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    r: u32,
}

impl Default for Field {
    fn default() -> Self {
        Field { r: 1 }
    }
}

impl Field {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("radical index must be positive".into()));
        }
        Ok(Field { r })
    }

    /// The field Q(q) itself.
    pub fn rational() -> Self {
        Field { r: 1 }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The generator q̃.
    pub fn qt(&self) -> Scalar {
        Scalar::t_pow(1)
    }

    pub fn q(&self) -> Scalar {
        Scalar::t_pow(self.r as i64)
    }

    /// p = q^{-1}.
    pub fn p(&self) -> Scalar {
        Scalar::t_pow(-(self.r as i64))
    }

    pub fn q_pow(&self, k: i64) -> Scalar {
        Scalar::t_pow(self.r as i64 * k)
    }

    /// Embed an element written as a rational function of q.
    pub fn from_q_function(&self, f: &Scalar) -> Scalar {
        f.inflate(self.r as usize)
    }

    pub fn qnum(&self) -> &'static QNumbers {
        QNumbers::for_field(*self)
    }

    pub fn bracket(&self, n: u64) -> Scalar {
        self.qnum().bracket(n)
    }

    pub fn fact(&self, n: u64) -> Scalar {
        self.qnum().fact(n)
    }

    pub fn binom(&self, n: u64, k: u64) -> Scalar {
        self.qnum().binom(n, k)
    }

    /// q^{n(n-1)/2}.
    pub fn tri(&self, n: u64) -> Scalar {
        let n = n as i64;
        self.q_pow(n * (n - 1) / 2)
    }
}

/// [k]_t = (t^k − 1)/(t − 1) for an arbitrary nonzero, non-unit twist t and k ∈ Z.
pub fn bracket_of(t: &Scalar, k: i64) -> Scalar {
    if k == 0 {
        return Scalar::zero();
    }
    (t.pow(k) - Scalar::one()) / (t - &Scalar::one())
}

/// Append-only cache of [n]_q, [n]_q! and q-binomial rows.
pub struct QNumbers {
    field: Field,
    facts: RwLock<Vec<ZPoly>>,
    binoms: RwLock<Vec<Vec<ZPoly>>>,
}

static REGISTRY: Lazy<RwLock<HashMap<u32, &'static QNumbers>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

impl QNumbers {
    pub fn for_field(field: Field) -> &'static QNumbers {
        if let Some(q) = REGISTRY.read().get(&field.r) {
            return q;
        }
        let mut w = REGISTRY.write();
        w.entry(field.r).or_insert_with(|| {
            Box::leak(Box::new(QNumbers {
                field,
                facts: RwLock::new(vec![ZPoly::one()]),
                binoms: RwLock::new(vec![vec![ZPoly::one()]]),
            }))
        })
    }

    /// [n]_q as a polynomial in q (not yet inflated).
    fn bracket_q(n: u64) -> ZPoly {
        ZPoly::from_coeffs(vec![BigInt::one(); n as usize])
    }

    pub fn bracket(&self, n: u64) -> Scalar {
        Scalar::from_zpoly(Self::bracket_q(n).inflate(self.field.r as usize))
    }

    /// [n]_q! as an integer polynomial in q̃.
    pub fn fact_poly(&self, n: u64) -> ZPoly {
        let n = n as usize;
        if let Some(f) = self.facts.read().get(n) {
            return f.clone();
        }
        let mut w = self.facts.write();
        while w.len() <= n {
            let k = w.len() as u64;
            let next = w[w.len() - 1].mul(&Self::bracket_q(k).inflate(self.field.r as usize));
            w.push(next);
        }
        w[n].clone()
    }

    pub fn fact(&self, n: u64) -> Scalar {
        Scalar::from_zpoly(self.fact_poly(n))
    }

    /// The q-binomial coefficient as an integer polynomial in q̃; zero when k > n.
    pub fn binom_poly(&self, n: u64, k: u64) -> ZPoly {
        if k > n {
            return ZPoly::zero();
        }
        let (n, k) = (n as usize, k as usize);
        if let Some(row) = self.binoms.read().get(n) {
            return row[k].clone();
        }
        let mut w = self.binoms.write();
        let r = self.field.r as usize;
        while w.len() <= n {
            let m = w.len();
            let prev = &w[m - 1];
            let mut row = Vec::with_capacity(m + 1);
            for j in 0..=m {
                let left = if j > 0 { prev[j - 1].clone() } else { ZPoly::zero() };
                let right = if j < m { prev[j].shift_up(j * r) } else { ZPoly::zero() };
                row.push(left.add(&right));
            }
            w.push(row);
        }
        w[n][k].clone()
    }

    pub fn binom(&self, n: u64, k: u64) -> Scalar {
        Scalar::from_zpoly(self.binom_poly(n, k))
    }
}

/// ([n]_q, [n]_q!, binom(n,k)_q) over Q(q).
pub fn q_quantities(n: u64, k: u64) -> Result<(Scalar, Scalar, Scalar)> {
    if k > n {
        return Err(Error::Domain(format!("binomial index k = {k} exceeds n = {n}")));
    }
    let f = Field::rational();
    Ok((f.bracket(n), f.fact(n), f.binom(n, k)))
}

/// Integer value of a polynomial at 1 (used to compare with ordinary binomials).
pub fn value_at_one(p: &ZPoly) -> BigInt {
    p.coeffs().iter().fold(BigInt::zero(), |a, b| a + b)
}
