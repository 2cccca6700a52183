//! Dense integer polynomials in one variable.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{self, PRIMES};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

/// Place |v| for each coefficient at bit offset slot·i, OR-ing limbs directly.
fn place(vals: &[&BigUint], slot: u64) -> BigUint {
    let total = slot as usize * vals.len() + 64;
    let mut limbs = vec![0u64; total / 64 + 2];
    for (i, v) in vals.iter().enumerate() {
        let off = slot as usize * i;
        let (w, b) = (off / 64, off % 64);
        for (k, d) in v.iter_u64_digits().enumerate() {
            limbs[w + k] |= d << b;
            if b > 0 {
                limbs[w + k + 1] |= d >> (64 - b);
            }
        }
    }
    BigUint::from_slice(&limbs.iter().flat_map(|&l| [l as u32, (l >> 32) as u32]).collect::<Vec<u32>>())
}

/// Σ c_i 2^{slot·i} as a signed integer.
fn pack(c: &[BigInt], slot: u64) -> BigInt {
    let zero = BigUint::zero();
    let pos: Vec<&BigUint> = c.iter().map(|v| if v.is_positive() { v.magnitude() } else { &zero }).collect();
    let neg: Vec<&BigUint> = c.iter().map(|v| if v.is_negative() { v.magnitude() } else { &zero }).collect();
    let p = BigInt::from(place(&pos, slot));
    if c.iter().any(|v| v.is_negative()) {
        p - BigInt::from(place(&neg, slot))
    } else {
        p
    }
}

/// Balanced base-2^slot digits of x (inverse of `pack` when every |c_i| < 2^{slot−1}).
fn unpack(x: &BigInt, slot: u64, len: usize) -> Vec<BigInt> {
    let limbs: Vec<u64> = x.magnitude().iter_u64_digits().collect();
    let get = |bit: usize| -> u64 {
        let (w, b) = (bit / 64, bit % 64);
        let lo = limbs.get(w).copied().unwrap_or(0) >> b;
        let hi = if b > 0 { limbs.get(w + 1).copied().unwrap_or(0) << (64 - b) } else { 0 };
        lo | hi
    };
    let words = slot.div_ceil(64) as usize;
    let modulus = BigInt::one() << slot;
    let half = BigInt::one() << (slot - 1);
    let mask_bits = slot as usize % 64;
    let mut carry = false;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let off = slot as usize * i;
        let mut digs: Vec<u64> = (0..words).map(|k| get(off + 64 * k)).collect();
        if mask_bits > 0 {
            let last = digs.last_mut().unwrap();
            *last &= (1u64 << mask_bits) - 1;
        }
        let mut r = BigInt::from(BigUint::from_slice(&digs.iter().flat_map(|&l| [l as u32, (l >> 32) as u32]).collect::<Vec<u32>>()));
        if carry {
            r += 1;
        }
        carry = false;
        if r >= half {
            r -= &modulus;
            carry = true;
        }
        out.push(if x.is_negative() { -r } else { r });
    }
    out
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(v: BigInt) -> Self {
        let mut p = ZPoly { c: vec![v] };
        p.trim();
        p
    }

    pub fn from_coeffs(c: Vec<BigInt>) -> Self {
        let mut p = ZPoly { c };
        p.trim();
        p
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The monomial v·t^k.
    pub fn monomial(v: BigInt, k: usize) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = v;
        ZPoly { c }
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|v| v.is_zero()) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn ord(&self) -> usize {
        self.c.iter().position(|v| !v.is_zero()).unwrap_or(0)
    }

    /// Divide by t^k, assuming the low k coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        ZPoly { c: self.c[k.min(self.c.len())..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        ZPoly { c }
    }

    pub fn neg(&self) -> Self {
        ZPoly { c: self.c.iter().map(|v| -v).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a + b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                _ => unreachable!(),
            }
        }
        Self::from_coeffs(c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a - b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(-b),
                _ => unreachable!(),
            }
        }
        Self::from_coeffs(c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        if self.c.len().min(o.c.len()) > 48 {
            return self.mul_kronecker(o);
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    fn max_bits(&self) -> u64 {
        self.c.iter().map(|v| v.bits()).max().unwrap_or(0)
    }

    /// Multiplication through a single big-integer product (Kronecker substitution).
    /// Packing and unpacking work on raw limbs so both stay linear in the total size.
    fn mul_kronecker(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len()) as u64;
        let slot = self.max_bits() + o.max_bits() + 64 - n.leading_zeros() as u64 + 2;
        let prod = pack(&self.c, slot) * pack(&o.c, slot);
        let len = self.c.len() + o.c.len() - 1;
        Self::from_coeffs(unpack(&prod, slot, len))
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        ZPoly { c: self.c.iter().map(|v| v * s).collect() }
    }

    pub fn div_scalar_exact(&self, s: &BigInt) -> Self {
        ZPoly { c: self.c.iter().map(|v| v / s).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for v in &self.c {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if g.is_one() {
            self.clone()
        } else {
            self.div_scalar_exact(&g)
        }
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        let t = BigInt::from(t);
        let mut r = BigInt::zero();
        for v in self.c.iter().rev() {
            r = r * &t + v;
        }
        r
    }

    /// Exact quotient self / d over Z[t], or None if d does not divide self.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.c.len() == 1 {
            let s = &d.c[0];
            let mut out = Vec::with_capacity(self.c.len());
            for v in &self.c {
                let (q, r) = v.div_rem(s);
                if !r.is_zero() {
                    return None;
                }
                out.push(q);
            }
            return Some(ZPoly { c: out });
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        // cheap screen: the constant terms must divide
        if !d.c[0].is_zero() && !self.c[0].is_zero() && !(&self.c[0] % &d.c[0]).is_zero() {
            return None;
        }
        if d.c.len() > 64 && self.c.len() - d.c.len() > 64 {
            return self.div_exact_modular(d);
        }
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        let lc = &d.c[dd];
        let mut q = vec![BigInt::zero(); self.c.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, di) in d.c.iter().enumerate() {
                if !di.is_zero() {
                    r[k + i] -= &qc * di;
                }
            }
            q[k] = qc;
        }
        if r.iter().any(|v| !v.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(q))
    }

    /// Exact division through quotients modulo word primes, combined by CRT until the
    /// candidate stabilizes and then confirmed by one multiplication. A nonzero
    /// remainder modulo any prime not dividing lc(d) already rules divisibility out.
    fn div_exact_modular(&self, d: &Self) -> Option<Self> {
        let qlen = self.c.len() - d.c.len() + 1;
        let mut h: Vec<BigInt> = Vec::new();
        let mut modulus = BigInt::one();
        let bound = self.max_bits() + 2;
        for &p in PRIMES.iter() {
            let lc = modp::bigint_mod(&d.lc(), p);
            if lc == 0 {
                continue;
            }
            let q = modp::poly_div_exact(self.to_mod_dense(p), &d.to_mod_dense(p), p)?;
            let pb = BigInt::from(p);
            if h.is_empty() {
                h = q.iter().map(|&c| if c > p / 2 { BigInt::from(c) - &pb } else { BigInt::from(c) }).collect();
                modulus = pb;
            } else {
                let minv = BigInt::from(modp::inv_mod(modp::bigint_mod(&modulus, p), p));
                let mut changed = false;
                for (hi, &gi) in h.iter_mut().zip(q.iter()) {
                    let hm = modp::bigint_mod(hi, p);
                    if hm == gi {
                        continue;
                    }
                    changed = true;
                    let t = (BigInt::from(modp::sub_mod(gi, hm, p)) * &minv) % &pb;
                    *hi += &modulus * t;
                }
                modulus = &modulus * &pb;
                let half = &modulus >> 1;
                for v in h.iter_mut() {
                    if *v > half {
                        *v -= &modulus;
                    }
                }
                if !changed || modulus.bits() > 4 * bound + 64 {
                    let cand = Self::from_coeffs(h.clone());
                    return (cand.c.len() == qlen && &cand.mul(d) == self).then_some(cand);
                }
            }
        }
        None
    }

    pub(crate) fn to_mod_dense(&self, p: u64) -> Vec<u64> {
        self.c.iter().map(|a| modp::bigint_mod(a, p)).collect()
    }

    /// Exact division by a monic divisor, returning quotient and remainder.
    pub fn divrem_monic(&self, d: &Self) -> (Self, Self) {
        assert!(d.lc().is_one());
        if self.c.len() < d.c.len() {
            return (Self::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        let mut q = vec![BigInt::zero(); self.c.len() - dd];
        for k in (0..q.len()).rev() {
            let qc = std::mem::take(&mut r[k + dd]);
            if qc.is_zero() {
                continue;
            }
            for (i, di) in d.c.iter().enumerate().take(dd) {
                if !di.is_zero() {
                    r[k + i] -= &qc * di;
                }
            }
            q[k] = qc;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub(crate) fn to_mod(&self, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self.c.iter().map(|a| modp::bigint_mod(a, p)).collect();
        modp::trim(&mut v);
        v
    }

    /// Greatest common divisor in Z[t], with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        self.gcd_hint(o).0
    }

    /// (g, self/g, o/g), reusing the quotient found when one primitive part divides the other.
    pub fn gcd_cofactors(&self, o: &Self) -> (Self, Self, Self) {
        let (g, hint) = self.gcd_hint(o);
        if let Some((self_is_big, quot)) = hint {
            let cg = g.content();
            let (big, small) = if self_is_big { (self, o) } else { (o, self) };
            let cb = quot.scale(&(big.content() / &cg));
            let cs = Self::constant(small.content() / &cg);
            let cs = if small.lc().is_negative() { cs.neg() } else { cs };
            let cb = if big.lc().is_negative() { cb.neg() } else { cb };
            return if self_is_big { (g, cb, cs) } else { (g, cs, cb) };
        }
        let a = if g.is_one() { self.clone() } else { self.div_exact(&g).expect("gcd divides") };
        let b = if g.is_one() { o.clone() } else { o.div_exact(&g).expect("gcd divides") };
        (g, a, b)
    }

    fn gcd_hint(&self, o: &Self) -> (Self, Option<(bool, Self)>) {
        if self.is_zero() {
            return (o.primitive().scale(&o.content()), None);
        }
        if o.is_zero() {
            return (self.primitive().scale(&self.content()), None);
        }
        let cg = self.content().gcd(&o.content());
        if self.is_constant() || o.is_constant() {
            return (Self::constant(cg), None);
        }
        let a = self.primitive();
        let b = o.primitive();
        if a == b {
            return (a.scale(&cg), Some((true, Self::one())));
        }
        let (small, big) = if a.deg() <= b.deg() { (&a, &b) } else { (&b, &a) };
        let lcg = a.lc().gcd(&b.lc());
        let mut deg_found = usize::MAX;
        let mut h: Vec<BigInt> = Vec::new();
        let mut modulus = BigInt::one();
        let mut tested_small = false;
        for &p in PRIMES.iter() {
            if modp::bigint_mod(&a.lc(), p) == 0 || modp::bigint_mod(&b.lc(), p) == 0 {
                continue;
            }
            let g = modp::poly_gcd(a.to_mod(p), b.to_mod(p), p);
            let dg = g.len() - 1;
            if dg == 0 {
                return (Self::constant(cg), None);
            }
            if dg == small.deg() && !tested_small {
                tested_small = true;
                if let Some(quot) = big.div_exact(small) {
                    return (small.scale(&cg), Some((std::ptr::eq(big, &a), quot)));
                }
            }
            if dg > deg_found {
                continue;
            }
            let l = modp::bigint_mod(&lcg, p);
            let g: Vec<u64> = g.iter().map(|&c| modp::mul_mod(c, l, p)).collect();
            let pb = BigInt::from(p);
            if dg < deg_found {
                deg_found = dg;
                h = g.iter().map(|&c| if c > p / 2 { BigInt::from(c) - &pb } else { BigInt::from(c) }).collect();
                modulus = pb;
                continue;
            }
            // Chinese remaindering: h ≡ old mod M, h ≡ g mod p
            let minv = BigInt::from(modp::inv_mod(modp::bigint_mod(&modulus, p), p));
            let mut changed = false;
            let newmod = &modulus * &pb;
            for (hi, &gi) in h.iter_mut().zip(g.iter()) {
                let hm = modp::bigint_mod(hi, p);
                let diff = BigInt::from(modp::sub_mod(gi, hm, p));
                let t = (diff * &minv) % &pb;
                if !t.is_zero() {
                    changed = true;
                    *hi += &modulus * t;
                }
            }
            modulus = newmod;
            // keep the symmetric representative so small negative coefficients stabilize
            let half = &modulus >> 1;
            for v in h.iter_mut() {
                if *v > half {
                    *v -= &modulus;
                }
            }
            if !changed {
                let cand = Self::from_coeffs(h.clone()).primitive();
                if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                    return (cand.scale(&cg), None);
                }
            }
        }
        panic!("modular gcd did not converge");
    }

    /// The polynomial t ↦ t^k substituted: self(t^k).
    pub fn inflate(&self, k: usize) -> Self {
        if k == 1 || self.c.len() <= 1 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); (self.c.len() - 1) * k + 1];
        for (i, v) in self.c.iter().enumerate() {
            c[i * k] = v.clone();
        }
        ZPoly { c }
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

impl ZPoly {
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, v) in self.c.iter().enumerate().rev() {
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            let a = v.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> ZPoly {
        ZPoly::from_i64s(c)
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = p(&[1, 1]).mul(&p(&[2, 0, 3]));
        let b = p(&[1, 1]).mul(&p(&[-5, 1]));
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(p(&[4, 6]).gcd(&p(&[6, 9])), p(&[2, 3]));
        assert_eq!(p(&[2, 2]).gcd(&p(&[4])), p(&[2]));
    }

    #[test]
    fn gcd_of_large_products() {
        // products of (t^k - 1) share many cyclotomic factors
        let mut a = ZPoly::one();
        let mut b = ZPoly::one();
        for k in 1..=12 {
            let f = ZPoly::monomial(BigInt::one(), k).sub(&ZPoly::one());
            a = a.mul(&f);
            if k % 2 == 0 {
                b = b.mul(&f).mul(&f);
            }
        }
        let g = a.gcd(&b);
        assert!(a.div_exact(&g).is_some());
        assert!(b.div_exact(&g).is_some());
        let ca = a.div_exact(&g).unwrap();
        let cb = b.div_exact(&g).unwrap();
        assert!(ca.gcd(&cb).is_one());
    }

    #[test]
    fn kronecker_matches_schoolbook() {
        let a = ZPoly::from_coeffs((0..70).map(|i| BigInt::from(i * 37 % 11 - 5)).collect());
        let b = ZPoly::from_coeffs((0..60).map(|i| BigInt::from(i * 13 % 7 - 3)).collect());
        let fast = a.mul_kronecker(&b);
        let mut c = vec![BigInt::zero(); a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            for (j, y) in b.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        assert_eq!(fast, ZPoly::from_coeffs(c));
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 1]).mul(&p(&[3, 0, 2]));
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[3, 0, 2])));
        assert_eq!(a.div_exact(&p(&[1, 2])), None);
        let (q, r) = p(&[5, 0, 0, 1]).divrem_monic(&p(&[1, 1]));
        assert_eq!(q, p(&[1, -1, 1]));
        assert_eq!(r, p(&[4]));
    }
}
