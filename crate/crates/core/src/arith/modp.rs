//! Word-sized prime fields, used for modular gcd and rank certificates.

use num_bigint::{BigInt, Sign};
use once_cell::sync::Lazy;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, in decreasing order.
pub(crate) static PRIMES: Lazy<Vec<u64>> = Lazy::new(|| {
    let mut out = Vec::with_capacity(400);
    let mut n = (1u64 << 62) - 1;
    while out.len() < 400 {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
});

/// A prime p with p ≡ 1 (mod k), together with an element of exact order k.
pub(crate) fn prime_with_root_of_unity(k: u64, skip: usize) -> (u64, u64) {
    let mut found = 0;
    let mut c = ((1u64 << 61) / k) * k + 1;
    loop {
        if is_prime_u64(c) {
            if found == skip {
                let p = c;
                // factor k to test orders
                let mut fac = Vec::new();
                let mut kk = k;
                let mut d = 2;
                while d * d <= kk {
                    if kk.is_multiple_of(d) {
                        fac.push(d);
                        while kk.is_multiple_of(d) {
                            kk /= d;
                        }
                    }
                    d += 1;
                }
                if kk > 1 {
                    fac.push(kk);
                }
                let mut g = 2u64;
                loop {
                    let w = pow_mod(g, (p - 1) / k, p);
                    if fac.iter().all(|&f| pow_mod(w, k / f, p) != 1) {
                        return (p, w);
                    }
                    g += 1;
                }
            }
            found += 1;
        }
        c += k;
    }
}

pub(crate) fn bigint_mod(a: &BigInt, p: u64) -> u64 {
    let mut r: u128 = 0;
    for d in a.magnitude().iter_u64_digits().rev() {
        r = ((r << 64) | d as u128) % p as u128;
    }
    let r = r as u64;
    if a.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Dense polynomial over Z/p, low degree first, no trailing zeros.
pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn poly_rem(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db {
        let da = a.len() - 1;
        let c = mul_mod(a[da], inv, p);
        if c != 0 {
            let off = da - db;
            for (i, &bi) in b.iter().enumerate() {
                a[off + i] = sub_mod(a[off + i], mul_mod(c, bi, p), p);
            }
        }
        a.pop();
        trim(a);
    }
}

/// Quotient a/b over Z/p when b (with invertible leading coefficient) divides a.
pub(crate) fn poly_div_exact(mut a: Vec<u64>, b: &[u64], p: u64) -> Option<Vec<u64>> {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let qlen = a.len() - db;
    let mut q = vec![0u64; qlen];
    for k in (0..qlen).rev() {
        let c = mul_mod(a[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                if bi != 0 {
                    a[k + i] = sub_mod(a[k + i], mul_mod(c, bi, p), p);
                }
            }
        }
    }
    a[..db].iter().all(|&v| v == 0).then_some(q)
}

/// Monic gcd over Z/p.
pub(crate) fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        poly_rem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = inv_mod(l, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

pub(crate) fn poly_eval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut r = 0;
    for &c in a.iter().rev() {
        r = add_mod(mul_mod(r, x, p), c, p);
    }
    r
}

/// Rank of a dense matrix over Z/p (rows consumed).
pub(crate) fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let piv = (rank..rows).find(|&r| m[r][c] != 0);
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for r in (rank + 1)..rows {
            if m[r][c] != 0 {
                let f = mul_mod(m[r][c], inv, p);
                for k in c..cols {
                    let t = mul_mod(f, m[rank][k], p);
                    m[r][k] = sub_mod(m[r][k], t, p);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Indices of a maximal set of linearly independent rows over Z/p.
pub(crate) fn independent_rows_mod(m: &[Vec<u64>], p: u64) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in m.iter().enumerate() {
        let mut r = row.clone();
        for (pc, b) in &basis {
            if r[*pc] != 0 {
                let f = r[*pc];
                for k in 0..r.len() {
                    r[k] = sub_mod(r[k], mul_mod(f, b[k], p), p);
                }
            }
        }
        if let Some(pc) = r.iter().position(|&v| v != 0) {
            let inv = inv_mod(r[pc], p);
            for v in r.iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
            basis.push((pc, r));
            chosen.push(idx);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_large() {
        assert!(PRIMES.len() >= 100);
        assert!(PRIMES.iter().all(|&p| p > (1 << 61)));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }

    #[test]
    fn root_of_unity_has_exact_order() {
        for k in [1u64, 2, 3, 6, 12, 35] {
            let (p, w) = prime_with_root_of_unity(k, 0);
            assert_eq!(pow_mod(w, k, p), 1);
            for d in 1..k {
                if k % d == 0 {
                    assert_ne!(pow_mod(w, d, p), 1);
                }
            }
        }
    }

    #[test]
    fn bigint_reduction() {
        let p = PRIMES[0];
        let a = BigInt::from(-5);
        assert_eq!(bigint_mod(&a, p), p - 5);
        let big = BigInt::from(p) * BigInt::from(p) + BigInt::from(7);
        assert_eq!(bigint_mod(&big, p), 7);
    }
}
