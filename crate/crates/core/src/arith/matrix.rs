//! Dense matrices over a field, with Gaussian elimination, and a fraction-free
//! solver for matrices over Q(q̃).

use std::fmt;

use super::scalar::Scalar;
use super::zpoly::ZPoly;
use super::FieldElem;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Outcome of solving M·v = b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution<F> {
    Unique(Vec<F>),
    /// A particular solution plus a basis of the null space.
    Family { particular: Vec<F>, nullspace: Vec<Vec<F>> },
    None,
}

impl<F: FieldElem> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn map<G: FieldElem>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: FieldElem, E>(&self, f: impl Fn(&F) -> std::result::Result<G, E>) -> std::result::Result<Matrix<G>, E> {
        let mut data = Vec::with_capacity(self.data.len());
        for v in &self.data {
            data.push(f(v)?);
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|v| v.mul(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut r = Self::identity(self.rows);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Row echelon form by Gaussian elimination; returns pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return F::zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv();
            for i in (c + 1)..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let piv = aug.echelon();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::Domain("matrix is singular".into()));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Basis of {v : M v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let piv = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = m.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    pub fn solve(&self, b: &[F]) -> LinearSolution<F> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let piv = aug.echelon();
        if piv.last() == Some(&self.cols) {
            return LinearSolution::None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &pc) in piv.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        let ns = self.nullspace();
        if ns.is_empty() {
            LinearSolution::Unique(x)
        } else {
            LinearSolution::Family { particular: x, nullspace: ns }
        }
    }
}

/// Denominator-free integer-polynomial rows for a matrix over Q(q̃), each made primitive.
fn clear_rows(m: &Matrix<Scalar>, extra: Option<&[Scalar]>) -> Vec<Vec<ZPoly>> {
    (0..m.rows())
        .map(|i| {
            let mut row: Vec<Scalar> = m.row(i).to_vec();
            if let Some(b) = extra {
                row.push(b[i].clone());
            }
            let nz: Vec<&Scalar> = row.iter().filter(|v| !v.is_zero()).collect();
            if nz.is_empty() {
                return vec![ZPoly::zero(); row.len()];
            }
            let emin = nz.iter().map(|v| v.t_exponent()).min().unwrap();
            let mut l = ZPoly::one();
            for v in &nz {
                let d = v.den();
                if !d.is_one() {
                    let g = l.gcd(d);
                    l = l.mul(&d.div_exact(&g).unwrap());
                }
            }
            let cleared: Vec<ZPoly> = row
                .iter()
                .map(|v| {
                    if v.is_zero() {
                        return ZPoly::zero();
                    }
                    let f = l.div_exact(v.den()).unwrap();
                    v.num().mul(&f).shift_up((v.t_exponent() - emin) as usize)
                })
                .collect();
            let mut g = ZPoly::zero();
            for c in &cleared {
                if !c.is_zero() {
                    g = g.gcd(c);
                    if g.is_one() {
                        break;
                    }
                }
            }
            if g.is_one() || g.is_zero() {
                cleared
            } else {
                cleared.iter().map(|c| c.div_exact(&g).unwrap()).collect()
            }
        })
        .collect()
}

/// Fraction-free (Bareiss) row echelon form; returns pivot columns.
fn bareiss(rows: &mut [Vec<ZPoly>], ncols: usize) -> Vec<usize> {
    let mut prev = ZPoly::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let nrows = rows.len();
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pr = &head[r];
        for row in tail.iter_mut() {
            let a = row[c].clone();
            for j in (c + 1)..ncols {
                let v = pr[c].mul(&row[j]).sub(&a.mul(&pr[j]));
                row[j] = if prev.is_one() { v } else { v.div_exact(&prev).expect("Bareiss division is exact") };
            }
            row[c] = ZPoly::zero();
        }
        prev = head[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

/// Back substitution on a fraction-free echelon form, with chosen values for free columns.
fn back_substitute(rows: &[Vec<ZPoly>], pivots: &[usize], ncols: usize, rhs_col: Option<usize>, free_val: &dyn Fn(usize) -> Scalar) -> Vec<Scalar> {
    let mut x = vec![Scalar::zero(); ncols];
    for c in 0..ncols {
        if !pivots.contains(&c) {
            x[c] = free_val(c);
        }
    }
    for (r, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = match rhs_col {
            Some(k) => Scalar::from_zpoly(rows[r][k].clone()),
            None => Scalar::zero(),
        };
        for j in (pc + 1)..ncols {
            if !rows[r][j].is_zero() && !x[j].is_zero() {
                acc = &acc - &(&Scalar::from_zpoly(rows[r][j].clone()) * &x[j]);
            }
        }
        x[pc] = &acc / &Scalar::from_zpoly(rows[r][pc].clone());
    }
    x
}

impl Matrix<Scalar> {
    /// Null-space basis by fraction-free elimination over Z[q̃].
    pub fn nullspace_ff(&self) -> Vec<Vec<Scalar>> {
        let mut rows = clear_rows(self, None);
        let piv = bareiss(&mut rows, self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| back_substitute(&rows, &piv, self.cols, None, &|c| if c == f { Scalar::one() } else { Scalar::zero() }))
            .collect()
    }

    pub fn rank_ff(&self) -> usize {
        let mut rows = clear_rows(self, None);
        bareiss(&mut rows, self.cols).len()
    }

    /// Exact solve of M v = b by fraction-free elimination.
    pub fn linear_solve(&self, b: &[Scalar]) -> LinearSolution<Scalar> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let mut rows = clear_rows(self, Some(b));
        let piv = bareiss(&mut rows, self.cols + 1);
        if piv.last() == Some(&self.cols) {
            return LinearSolution::None;
        }
        let x = back_substitute(&rows, &piv, self.cols, Some(self.cols), &|_| Scalar::zero());
        let ns = self.nullspace_ff();
        if ns.is_empty() {
            LinearSolution::Unique(x)
        } else {
            LinearSolution::Family { particular: x, nullspace: ns }
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::t_pow(1)
    }

    #[test]
    fn identity_solve() {
        let m = Matrix::<Scalar>::identity(3);
        let b = vec![q(), Scalar::from_i64(2), q().inv()];
        assert_eq!(m.linear_solve(&b), LinearSolution::Unique(b.clone()));
    }

    #[test]
    fn triangular_solve() {
        let m = Matrix::from_rows(vec![vec![q(), Scalar::one()], vec![Scalar::zero(), q()]]);
        let b = vec![Scalar::one(), Scalar::zero()];
        assert_eq!(m.linear_solve(&b), LinearSolution::Unique(vec![q().inv(), Scalar::zero()]));
        assert_eq!(m.solve(&b), LinearSolution::Unique(vec![q().inv(), Scalar::zero()]));
    }

    #[test]
    fn rank_one_nullspace() {
        let a = q() + Scalar::one();
        let m = Matrix::from_rows(vec![vec![a.clone(), q()], vec![&a * &q(), q().pow(2)]]);
        let ns = m.nullspace_ff();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
        assert_eq!(m.linear_solve(&[Scalar::one(), Scalar::zero()]), LinearSolution::None);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_rows(vec![vec![q(), Scalar::one()], vec![Scalar::from_i64(2), q()]]);
        assert_eq!(m.det(), q().pow(2) - Scalar::from_i64(2));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
    }
}
