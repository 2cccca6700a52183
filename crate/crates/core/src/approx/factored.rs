//! Matrices of rational functions whose denominators are products of x and q-shifts
//! of a few fixed base polynomials. Sums, products, σ and d_q never need a gcd:
//! denominators are combined by taking the largest multiplicity of each factor.

use std::collections::BTreeMap;

use crate::arith::{Poly, Scalar};

/// x^xpow · ∏ base_b(q^l x)^{mult}.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Den {
    xpow: u32,
    mult: BTreeMap<(usize, u32), u32>,
}

impl Den {
    fn lcm(&self, o: &Den) -> Den {
        let mut mult = self.mult.clone();
        for (k, &m) in &o.mult {
            let e = mult.entry(*k).or_insert(0);
            *e = (*e).max(m);
        }
        Den { xpow: self.xpow.max(o.xpow), mult }
    }

    fn product(&self, o: &Den) -> Den {
        let mut mult = self.mult.clone();
        for (k, &m) in &o.mult {
            *mult.entry(*k).or_insert(0) += m;
        }
        Den { xpow: self.xpow + o.xpow, mult }
    }
}

/// Shared context: q and the base polynomials.
#[derive(Clone, Debug)]
pub(crate) struct Bases {
    q: Scalar,
    bases: Vec<Poly<Scalar>>,
}

impl Bases {
    pub(crate) fn new(q: Scalar, bases: Vec<Poly<Scalar>>) -> Self {
        Bases { q, bases }
    }

    fn factor(&self, b: usize, shift: u32) -> Poly<Scalar> {
        self.bases[b].twist(&self.q.pow(shift as i64))
    }

    /// The polynomial `big / small`, assuming `small` divides `big` factorwise.
    fn cofactor(&self, big: &Den, small: &Den) -> Poly<Scalar> {
        let mut p = Poly::monomial(Scalar::one(), (big.xpow - small.xpow) as usize);
        for (&(b, l), &m) in &big.mult {
            let have = small.mult.get(&(b, l)).copied().unwrap_or(0);
            for _ in have..m {
                p = p.mul(&self.factor(b, l));
            }
        }
        p
    }
}

#[derive(Clone, Debug)]
pub(crate) struct FMat {
    rows: usize,
    cols: usize,
    num: Vec<Poly<Scalar>>,
    den: Den,
}

impl FMat {
    pub(crate) fn from_polys(rows: usize, cols: usize, num: Vec<Poly<Scalar>>) -> Self {
        assert_eq!(num.len(), rows * cols);
        FMat { rows, cols, num, den: Den::default() }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let num = (0..n * n).map(|k| if k / n == k % n { Poly::one() } else { Poly::zero() }).collect();
        Self::from_polys(n, n, num)
    }

    /// Divides by base_b(x).
    pub(crate) fn over_base(mut self, b: usize) -> Self {
        *self.den.mult.entry((b, 0)).or_insert(0) += 1;
        self
    }

    pub(crate) fn rows(&self) -> usize {
        self.rows
    }

    pub(crate) fn cols(&self) -> usize {
        self.cols
    }

    fn rebased(&self, to: &Den, ctx: &Bases) -> Vec<Poly<Scalar>> {
        let c = ctx.cofactor(to, &self.den);
        self.num.iter().map(|p| p.mul(&c)).collect()
    }

    fn combine(&self, o: &FMat, ctx: &Bases, sub: bool) -> FMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let den = self.den.lcm(&o.den);
        let a = self.rebased(&den, ctx);
        let b = o.rebased(&den, ctx);
        let num = a.iter().zip(&b).map(|(x, y)| if sub { x.sub(y) } else { x.add(y) }).collect();
        FMat { rows: self.rows, cols: self.cols, num, den }
    }

    pub(crate) fn add(&self, o: &FMat, ctx: &Bases) -> FMat {
        self.combine(o, ctx, false)
    }

    pub(crate) fn sub(&self, o: &FMat, ctx: &Bases) -> FMat {
        self.combine(o, ctx, true)
    }

    pub(crate) fn mul(&self, o: &FMat) -> FMat {
        assert_eq!(self.cols, o.rows);
        let mut num = vec![Poly::zero(); self.rows * o.cols];
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    let a = &self.num[i * self.cols + k];
                    let b = &o.num[k * o.cols + j];
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                num[i * o.cols + j] = acc;
            }
        }
        FMat { rows: self.rows, cols: o.cols, num, den: self.den.product(&o.den) }
    }

    pub(crate) fn scale(&self, s: &Scalar) -> FMat {
        FMat { num: self.num.iter().map(|p| p.scale(s)).collect(), ..self.clone() }
    }

    /// Divides by x^k.
    pub(crate) fn over_x(mut self, k: u32) -> FMat {
        self.den.xpow += k;
        self
    }

    /// F(x) ↦ F(qx).
    pub(crate) fn sigma(&self, ctx: &Bases) -> FMat {
        // x^a(qx)^{-a} = q^{-a}
        let c = ctx.q.pow(-(self.den.xpow as i64));
        let num = self.num.iter().map(|p| p.twist(&ctx.q).scale(&c)).collect();
        let mult = self.den.mult.iter().map(|(&(b, l), &m)| ((b, l + 1), m)).collect();
        FMat { rows: self.rows, cols: self.cols, num, den: Den { xpow: self.den.xpow, mult } }
    }

    /// (σF − F)/((q−1)x).
    pub(crate) fn dq(&self, ctx: &Bases) -> FMat {
        let inv = (&ctx.q - &Scalar::one()).inv();
        self.sigma(ctx).sub(self, ctx).scale(&inv).over_x(1)
    }

    /// Column j of the result is column 0 of `parts[j]`.
    pub(crate) fn hcat(parts: &[FMat], ctx: &Bases) -> FMat {
        let rows = parts[0].rows;
        let den = parts.iter().skip(1).fold(parts[0].den.clone(), |d, p| d.lcm(&p.den));
        let cols: Vec<Vec<Poly<Scalar>>> = parts.iter().map(|p| p.rebased(&den, ctx)).collect();
        let mut num = Vec::with_capacity(rows * parts.len());
        for i in 0..rows {
            for c in &cols {
                num.push(c[i * parts[0].cols].clone());
            }
        }
        FMat { rows, cols: parts.len(), num, den }
    }

    pub(crate) fn same(&self, o: &FMat, ctx: &Bases) -> bool {
        self.sub(o, ctx).num.iter().all(Poly::is_zero)
    }

    /// Largest numerator degree and the denominator degree.
    pub(crate) fn degrees(&self, ctx: &Bases) -> (usize, usize) {
        let n = self.num.iter().filter(|p| !p.is_zero()).map(Poly::deg).max().unwrap_or(0);
        let d = self.den.xpow as usize
            + self.den.mult.iter().map(|(&(b, _), &m)| ctx.bases[b].deg() * m as usize).sum::<usize>();
        (n, d)
    }
}
