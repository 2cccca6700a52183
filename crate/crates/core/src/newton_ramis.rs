//! Newton–Ramis polygons in σ- and d-form, their slopes, and how the Fourier
//! transformations move them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::skew::{convert, Form, SkewOp};

pub type Point = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slope {
    Finite(BigRational),
    Infinite,
}

impl Slope {
    pub fn int(v: i64) -> Self {
        Slope::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Slope::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Slope::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

/// λ ↦ −λ/(1+λ), ∞ ↦ −1, and −1 ↦ ∞.
pub fn slope_fourier_image(l: &Slope) -> Slope {
    match l {
        Slope::Infinite => Slope::int(-1),
        Slope::Finite(v) => {
            let d = v + BigRational::one();
            if d.is_zero() {
                Slope::Infinite
            } else {
                Slope::Finite(-(v / d))
            }
        }
    }
}

/// Lower-part slopes (at 0) and upper-part slopes (at ∞), finite ones only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slopes {
    pub zero: Vec<BigRational>,
    pub infinity: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub form: Form,
    /// Generating points, shifted so that the minimal v is 0.
    pub points: Vec<Point>,
    /// Leftward closure (d-form polygons).
    pub closed_left: bool,
    lower: Vec<Point>,
    upper: Vec<Point>,
}

fn cross(o: Point, a: Point, b: Point) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Andrew's monotone chain: (lower left→right, upper right→left), collinear points dropped.
fn chains(mut pts: Vec<Point>) -> (Vec<Point>, Vec<Point>) {
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return (pts.clone(), pts);
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    (lower, upper)
}

fn slope_of(a: Point, b: Point) -> Slope {
    if a.0 == b.0 {
        Slope::Infinite
    } else {
        Slope::Finite(BigRational::new(BigInt::from(b.1 - a.1), BigInt::from(b.0 - a.0)))
    }
}

impl NewtonPolygon {
    pub fn from_points(form: Form, points: Vec<Point>, closed_left: bool) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("Newton polygon of the zero operator".into()));
        }
        let vmin = points.iter().map(|p| p.1).min().unwrap();
        let mut points: Vec<Point> = points.into_iter().map(|(u, v)| (u, v - vmin)).collect();
        points.sort();
        points.dedup();
        let (lower, upper) = if closed_left {
            let vmax = points.iter().map(|p| p.1).max().unwrap();
            let far = points.iter().map(|p| p.0).min().unwrap() - 1;
            let mut pts = points.clone();
            pts.push((far, 0));
            pts.push((far, vmax));
            chains(pts)
        } else {
            chains(points.clone())
        };
        Ok(NewtonPolygon { form, points, closed_left, lower, upper })
    }

    fn far(&self) -> Option<i64> {
        self.closed_left.then(|| self.points.iter().map(|p| p.0).min().unwrap() - 1)
    }

    fn real(&self, p: &Point) -> bool {
        Some(p.0) != self.far()
    }

    /// Hull vertices, counterclockwise from the lower left; for closed polygons the
    /// leftward rays are implicit and only finite vertices are listed.
    pub fn hull(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        let n = self.upper.len();
        for p in self.lower.iter().chain(self.upper.iter().skip(1).take(n.saturating_sub(2))) {
            if self.real(p) && !out.contains(p) {
                out.push(*p);
            }
        }
        out
    }

    fn chain_slopes(&self, chain: &[Point]) -> Vec<Slope> {
        chain
            .windows(2)
            .filter(|w| self.real(&w[0]) || self.real(&w[1]))
            .map(|w| slope_of(w[0], w[1]))
            .collect()
    }

    pub fn slopes(&self) -> Slopes {
        let fin = |v: Vec<Slope>| -> Vec<BigRational> {
            let set: BTreeSet<BigRational> = v
                .into_iter()
                .filter_map(|s| match s {
                    Slope::Finite(r) => Some(r),
                    Slope::Infinite => None,
                })
                .collect();
            set.into_iter().collect()
        };
        let up: Vec<Point> = self.upper.iter().rev().cloned().collect();
        Slopes { zero: fin(self.chain_slopes(&self.lower)), infinity: fin(self.chain_slopes(&up)) }
    }

    /// Every edge slope of the boundary, vertical edges as ∞.
    pub fn edge_slopes(&self) -> BTreeSet<Slope> {
        let up: Vec<Point> = self.upper.iter().rev().cloned().collect();
        self.chain_slopes(&self.lower).into_iter().chain(self.chain_slopes(&up)).collect()
    }

    /// Finite slopes of both parts together.
    pub fn finite_slopes(&self) -> BTreeSet<BigRational> {
        let s = self.slopes();
        s.zero.into_iter().chain(s.infinity).collect()
    }

    /// Image under (u, v) ↦ (u + v, −v).
    pub fn fourier_image(&self) -> NewtonPolygon {
        let pts = self.points.iter().map(|&(u, v)| (u + v, -v)).collect();
        NewtonPolygon::from_points(self.form, pts, self.closed_left).expect("nonempty")
    }

    /// Same region (hull vertices and closure), ignoring interior generating points.
    pub fn same_region(&self, o: &NewtonPolygon) -> bool {
        let mut a = self.hull();
        let mut b = o.hull();
        a.sort();
        b.sort();
        a == b && self.closed_left == o.closed_left
    }
}

/// Exponent range of each coefficient, after clearing denominators.
fn supports(l: &SkewOp) -> Vec<(usize, i64, i64)> {
    let c = l.clear_denominators();
    c.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i, a.ord_x(), a.deg_x()))
        .collect()
}

/// The polygon of L with respect to `form` (L is converted first if needed).
pub fn polygon(l: &SkewOp, form: Form) -> Result<NewtonPolygon> {
    if l.is_zero() {
        return Err(Error::Domain("Newton polygon of the zero operator".into()));
    }
    let l = convert(l, form);
    let mut pts = Vec::new();
    for (i, lo, hi) in supports(&l) {
        let shift = if form == Form::Dq { i as i64 } else { 0 };
        for v in lo..=hi {
            pts.push((i as i64, v - shift));
        }
    }
    NewtonPolygon::from_points(form, pts, form == Form::Dq)
}
