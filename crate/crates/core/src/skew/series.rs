//! Truncated Laurent series in one variable, and operator application.
//!
//! A series knows its coefficients exactly on a window of exponents [lo, hi]. An
//! ascending series (power series in x) is zero below the window and unknown above;
//! a descending one (series in 1/z, as produced by the Borel transforms) is zero
//! above the window and unknown below.

use std::sync::Arc;

use crate::arith::qnum::bracket_of;
use crate::arith::{Poly, RatFun, Scalar};
use crate::error::{Error, Result};

use super::operator::{Form, SkewOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Ascending,
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    dir: Direction,
    lo: i64,
    c: Vec<Scalar>,
}

impl Series {
    /// y_0 + y_1 x + … + y_N x^N + O(x^{N+1}).
    pub fn power(prefix: Vec<Scalar>) -> Self {
        Series { dir: Direction::Ascending, lo: 0, c: prefix }
    }

    /// Ascending series starting at exponent `lo`.
    pub fn laurent(lo: i64, c: Vec<Scalar>) -> Self {
        Series { dir: Direction::Ascending, lo, c }
    }

    /// Σ_n c_n z^{−n−1}, known for n < c.len().
    pub fn inverse(c: Vec<Scalar>) -> Self {
        let mut c = c;
        c.reverse();
        let n = c.len() as i64;
        Series { dir: Direction::Descending, lo: -n, c }
    }

    /// Descending series with exact exponents lo..=lo+len−1.
    pub fn descending(lo: i64, c: Vec<Scalar>) -> Self {
        Series { dir: Direction::Descending, lo, c }
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64 - 1
    }

    /// Number of exactly known coefficients.
    pub fn known(&self) -> usize {
        self.c.len()
    }

    pub fn window(&self) -> &[Scalar] {
        &self.c
    }

    /// Coefficient of v^k, or None where it is not known.
    pub fn coeff(&self, k: i64) -> Option<Scalar> {
        if k >= self.lo && k <= self.hi() {
            return Some(self.c[(k - self.lo) as usize].clone());
        }
        let zero_side = match self.dir {
            Direction::Ascending => k < self.lo,
            Direction::Descending => k > self.hi(),
        };
        zero_side.then(Scalar::zero)
    }

    /// Coefficients y_0..y_N of an ascending series whose window starts at or below 0.
    pub fn prefix(&self) -> Vec<Scalar> {
        (0..=self.hi()).map(|k| self.coeff(k).unwrap()).collect()
    }

    /// For descending series: index n holds the coefficient of z^{−n−1}.
    pub fn inverse_coeffs(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        let mut k = -1;
        while let Some(c) = self.coeff(k) {
            if k < self.lo {
                break;
            }
            out.push(c);
            k -= 1;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn map(&self, f: impl Fn(i64, &Scalar) -> Scalar) -> Series {
        let c = self.c.iter().enumerate().map(|(i, v)| f(self.lo + i as i64, v)).collect();
        Series { dir: self.dir, lo: self.lo, c }
    }

    fn from_window(dir: Direction, lo: i64, hi: i64, get: impl Fn(i64) -> Scalar) -> Series {
        let c = if hi >= lo { (lo..=hi).map(get).collect() } else { Vec::new() };
        Series { dir, lo, c }
    }

    pub fn add(&self, o: &Series) -> Series {
        assert_eq!(self.dir, o.dir, "adding series of different directions");
        let (lo, hi) = match self.dir {
            Direction::Ascending => (self.lo.min(o.lo), self.hi().min(o.hi())),
            Direction::Descending => (self.lo.max(o.lo), self.hi().max(o.hi())),
        };
        Series::from_window(self.dir, lo, hi, |k| &self.coeff(k).unwrap() + &o.coeff(k).unwrap())
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.scale(&Scalar::from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Series {
        self.map(|_, v| v * s)
    }

    /// Multiply by v^j.
    pub fn shift(&self, j: i64) -> Series {
        Series { dir: self.dir, lo: self.lo + j, c: self.c.clone() }
    }

    /// v ↦ t·v.
    pub fn sigma(&self, t: &Scalar) -> Series {
        self.map(|k, v| if v.is_zero() { Scalar::zero() } else { v * &t.pow(k) })
    }

    /// The t-derivative: v^k ↦ [k]_t v^{k−1}.
    pub fn dq(&self, t: &Scalar) -> Series {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, v)| if v.is_zero() { Scalar::zero() } else { v * &bracket_of(t, self.lo + i as i64) })
            .collect();
        Series { dir: self.dir, lo: self.lo - 1, c }
    }

    /// Multiply by a rational function. Descending series accept Laurent polynomials only.
    pub fn mul_ratfun(&self, f: &RatFun) -> Result<Series> {
        if f.is_zero() {
            return Ok(Series { dir: self.dir, lo: self.lo, c: vec![Scalar::zero(); self.c.len()] });
        }
        match self.dir {
            Direction::Descending => {
                if !f.is_laurent() {
                    return Err(Error::Domain(
                        "only Laurent-polynomial coefficients act on series in 1/z".into(),
                    ));
                }
                let mut acc: Option<Series> = None;
                for (k, c) in f.laurent_terms() {
                    let t = self.scale(&c).shift(k);
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t),
                    });
                }
                Ok(acc.unwrap())
            }
            Direction::Ascending => {
                let n = self.c.len();
                let e = f.x_exponent();
                let ser = expand(f.num_core(), f.den_core(), n);
                let lo = self.lo + e;
                let c = (0..n)
                    .map(|k| {
                        let mut s = Scalar::zero();
                        for i in 0..=k {
                            if !ser[i].is_zero() && !self.c[k - i].is_zero() {
                                s = &s + &(&ser[i] * &self.c[k - i]);
                            }
                        }
                        s
                    })
                    .collect();
                Ok(Series { dir: self.dir, lo, c })
            }
        }
    }

    /// Product of two ascending series.
    pub fn mul(&self, o: &Series) -> Series {
        assert!(self.dir == Direction::Ascending && o.dir == Direction::Ascending);
        let n = self.c.len().min(o.c.len());
        let c = (0..n)
            .map(|k| {
                let mut s = Scalar::zero();
                for i in 0..=k {
                    if !self.c[i].is_zero() && !o.c[k - i].is_zero() {
                        s = &s + &(&self.c[i] * &o.c[k - i]);
                    }
                }
                s
            })
            .collect();
        Series { dir: Direction::Ascending, lo: self.lo + o.lo, c }
    }

    /// Keep only exponents up to `hi` (ascending) or down to `lo` (descending).
    pub fn truncate(&self, bound: i64) -> Series {
        match self.dir {
            Direction::Ascending => {
                let hi = self.hi().min(bound);
                Series::from_window(self.dir, self.lo, hi, |k| self.coeff(k).unwrap())
            }
            Direction::Descending => {
                let lo = self.lo.max(bound);
                Series::from_window(self.dir, lo, self.hi(), |k| self.coeff(k).unwrap())
            }
        }
    }
}

/// First n power-series coefficients of num/den, den(0) ≠ 0.
pub fn expand(num: &Poly<Scalar>, den: &Poly<Scalar>, n: usize) -> Vec<Scalar> {
    let d0 = den.coeff(0);
    assert!(!d0.is_zero(), "denominator vanishes at 0");
    let inv = d0.inv();
    let mut out: Vec<Scalar> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = num.coeff(k);
        for j in 1..=k.min(den.deg()) {
            let dj = den.coeff(j);
            if !dj.is_zero() && !out[k - j].is_zero() {
                s = &s - &(&dj * &out[k - j]);
            }
        }
        out.push(&s * &inv);
    }
    out
}

/// L applied to a truncated series; the exact window shrinks as needed.
pub fn apply(l: &SkewOp, f: &Series) -> Result<Series> {
    if l.is_zero() {
        return Ok(f.scale(&Scalar::zero()));
    }
    let t = l.twist().clone();
    let mut acc: Option<Series> = None;
    let mut g = f.clone();
    for (i, a) in l.coeffs().iter().enumerate() {
        if i > 0 {
            g = match l.form() {
                Form::Sigma => g.sigma(&t),
                Form::Dq => g.dq(&t),
            };
        }
        if a.is_zero() {
            continue;
        }
        let term = g.mul_ratfun(a)?;
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    let out = acc.unwrap();
    if out.known() == 0 {
        return Err(Error::Truncation(format!(
            "operator of order {} leaves no exact coefficients of a {}-term input",
            l.order(),
            f.known()
        )));
    }
    Ok(out)
}

/// Pull-based exact coefficient stream.
pub trait CoeffGen: Send + Sync {
    fn coeff(&self, n: usize) -> Scalar;

    fn prefix(&self, len: usize) -> Vec<Scalar> {
        (0..len).map(|n| self.coeff(n)).collect()
    }

    fn series(&self, len: usize) -> Series {
        Series::power(self.prefix(len))
    }
}

/// A generator backed by a closure.
#[derive(Clone)]
pub struct FnGen(pub Arc<dyn Fn(usize) -> Scalar + Send + Sync>);

impl FnGen {
    pub fn new(f: impl Fn(usize) -> Scalar + Send + Sync + 'static) -> Self {
        FnGen(Arc::new(f))
    }
}

impl CoeffGen for FnGen {
    fn coeff(&self, n: usize) -> Scalar {
        (self.0)(n)
    }
}

/// A generator reading from a fixed list (zero past its end).
#[derive(Clone, Debug)]
pub struct ListGen(pub Vec<Scalar>);

impl CoeffGen for ListGen {
    fn coeff(&self, n: usize) -> Scalar {
        self.0.get(n).cloned().unwrap_or_else(Scalar::zero)
    }
}
