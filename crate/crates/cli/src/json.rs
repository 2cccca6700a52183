//! Exact JSON encodings: rationals as "num/den", field elements and operators as text.

use num_rational::BigRational;
use qdiff::arith::{Field, Poly, Scalar};
use qdiff::gevrey::GevreyOrders;
use qdiff::newton_ramis::{NewtonPolygon, Slope};
use qdiff::places::{PlaceSums, SizeReport};
use qdiff::skew::{Form, Series, SkewOp};
use serde_json::{json, Value};

pub const SCHEMA: &str = "qdiff-lab/1";

pub fn rat(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn rats(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn scalar(field: Field, s: &Scalar) -> Value {
    Value::String(s.display_in(if field.r() == 1 { "q" } else { "qt" }))
}

pub fn scalars(field: Field, v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| scalar(field, s)).collect())
}

pub fn poly(field: Field, p: &Poly<Scalar>) -> Value {
    scalars(field, p.coeffs())
}

pub fn op(l: &SkewOp) -> Value {
    Value::String(l.display())
}

pub fn form(f: Form) -> Value {
    json!(match f {
        Form::Sigma => "sigma",
        Form::Dq => "dq",
    })
}

pub fn slope(s: &Slope) -> Value {
    match s {
        Slope::Finite(r) => rat(r),
        Slope::Infinite => json!("inf"),
    }
}

pub fn slopes<'a>(v: impl IntoIterator<Item = &'a Slope>) -> Value {
    Value::Array(v.into_iter().map(slope).collect())
}

pub fn orders(o: &GevreyOrders) -> Value {
    json!({ "s1": rat(&o.s1), "s2": o.s2 })
}

pub fn polygon(p: &NewtonPolygon) -> Value {
    let s = p.slopes();
    let finite: Vec<BigRational> = p.finite_slopes().into_iter().collect();
    json!({
        "form": form(p.form),
        "closed_left": p.closed_left,
        "points": p.points,
        "hull": p.hull(),
        "slopes": rats(&finite),
        "slopes_at_zero": rats(&s.zero),
        "slopes_at_infinity": rats(&s.infinity),
        "edge_slopes": slopes(&p.edge_slopes()),
    })
}

pub fn sums(s: &PlaceSums) -> Value {
    json!({
        "cyclotomic": rat(&s.cyclotomic),
        "noncyclotomic": rat(&s.noncyclotomic),
        "infinite": rat(&s.infinite),
        "total": rat(&s.total()),
    })
}

pub fn size(r: &SizeReport) -> Value {
    Value::Array(
        r.rows
            .iter()
            .map(|row| {
                json!({
                    "n": row.n,
                    "cyclotomic": rat(&row.cyclotomic),
                    "noncyclotomic": rat(&row.noncyclotomic),
                    "infinite": rat(&row.infinite),
                    "total": rat(&row.total()),
                })
            })
            .collect(),
    )
}

/// `coeffs[i]` is the coefficient of the exponent `lo + i`; outside `lo..=hi` the
/// series is zero on the side away from its direction and unknown on the other.
pub fn series(field: Field, s: &Series) -> Value {
    json!({
        "direction": format!("{:?}", s.direction()).to_lowercase(),
        "lo": s.lo(),
        "hi": s.hi(),
        "coeffs": scalars(field, s.window()),
    })
}
