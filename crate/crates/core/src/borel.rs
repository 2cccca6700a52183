//! q-Borel transforms of series and the matching Fourier transformations of operators.

use crate::arith::{Field, RatFun};
use crate::error::{Error, Result};
use crate::skew::{apply, convert, Form, Series, SkewOp, SkewRing, Var};

/// Σ a_n x^n ↦ Σ [n]_q! a_n z^{−n−1}.
pub fn borel_plus(f: &Series, field: Field) -> Series {
    let c = f.prefix().iter().enumerate().map(|(n, a)| a * &field.fact(n as u64)).collect();
    Series::inverse(c)
}

/// Σ a_n x^n ↦ Σ q^{n(n−1)/2} a_n z^{−n−1}.
pub fn borel_sharp(f: &Series, field: Field) -> Series {
    let c = f.prefix().iter().enumerate().map(|(n, a)| a * &field.tri(n as u64)).collect();
    Series::inverse(c)
}

fn source_ring(l: &SkewOp, form: Form) -> Result<()> {
    let r = l.ring();
    if r.var != Var::X || r.twist != r.field.q() {
        return Err(Error::Domain("expected an operator in x with twist q".into()));
    }
    if form == Form::Sigma && l.form() != Form::Sigma {
        return Err(Error::FormMismatch("the sharp transform acts on σ-form operators".into()));
    }
    Ok(())
}

fn target_ring(l: &SkewOp, form: Form) -> Result<()> {
    let r = l.ring();
    if r.var != Var::Z || r.twist != r.field.p() || r.form != form {
        return Err(Error::Domain("expected an operator in z with twist p".into()));
    }
    Ok(())
}

/// d_q ↦ z, x ↦ −p d_p.
pub fn fourier_plus(l: &SkewOp) -> Result<SkewOp> {
    source_ring(l, Form::Dq)?;
    let l = convert(l, Form::Dq);
    let field = l.field();
    let t = SkewRing::p(Form::Dq, field);
    let var_img = SkewOp::new(t.clone(), vec![RatFun::zero(), RatFun::constant(-field.p())]);
    l.image(&var_img, &t.var_op())
}

/// σ_q ↦ pσ_p, x ↦ (1/(qz))σ_p.
pub fn fourier_sharp(l: &SkewOp) -> Result<SkewOp> {
    source_ring(l, Form::Sigma)?;
    let field = l.field();
    let t = SkewRing::p(Form::Sigma, field);
    let gen_img = SkewOp::new(t.clone(), vec![RatFun::zero(), RatFun::constant(field.p())]);
    let var_img = SkewOp::new(t, vec![RatFun::zero(), RatFun::x_pow(-1).scale(&field.p())]);
    l.image(&var_img, &gen_img)
}

/// z ↦ d_q, d_p ↦ −qx.
pub fn fourier_plus_inverse(m: &SkewOp) -> Result<SkewOp> {
    target_ring(m, Form::Dq)?;
    let field = m.field();
    let t = SkewRing::q(Form::Dq, field);
    let gen_img = t.var_op().left_scale(&RatFun::constant(-field.q()));
    m.image(&t.gen(), &gen_img)
}

/// Unique preimage of Σ a_i(1/z)σ_p^i when deg_{1/z} a_i ≤ i:
/// z^{−j}σ_p^i comes from q^{i−j(j−1)/2} x^j σ_q^{i−j}.
pub fn fourier_sharp_inverse(m: &SkewOp) -> Result<SkewOp> {
    target_ring(m, Form::Sigma)?;
    let field = m.field();
    let t = SkewRing::q(Form::Sigma, field);
    let mut coeffs = vec![RatFun::zero(); m.order() + 1];
    for (i, a) in m.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if !a.is_laurent() {
            return Err(Error::NotInCone(format!("coefficient of σ_p^{i} is not a polynomial in 1/z")));
        }
        for (k, c) in a.laurent_terms() {
            let j = -k;
            if j < 0 || j as usize > i {
                return Err(Error::NotInCone(format!(
                    "term z^{k}·σ_p^{i} needs 0 ≤ −{k} ≤ {i}; compose with a power of σ_p first"
                )));
            }
            let j = j as usize;
            let e = i as i64 - (j * j.saturating_sub(1) / 2) as i64;
            let term = RatFun::x_pow(j as i64).scale(&(&c * &field.q_pow(e)));
            coeffs[i - j] = &coeffs[i - j] + &term;
        }
    }
    Ok(SkewOp::new(t, coeffs))
}

/// S∘F_{q+}: d_q ↦ 1/x, x ↦ x²d_q.
pub fn s_fourier_plus(l: &SkewOp) -> Result<SkewOp> {
    source_ring(l, Form::Dq)?;
    let l = convert(l, Form::Dq);
    let t = l.ring().clone();
    let var_img = SkewOp::new(t.clone(), vec![RatFun::zero(), RatFun::x_pow(2)]);
    l.image(&var_img, &t.elem(RatFun::x_pow(-1)))
}

/// S∘F_{q#}: σ_q ↦ σ_q/q, x ↦ (x/q)σ_q.
pub fn s_fourier_sharp(l: &SkewOp) -> Result<SkewOp> {
    source_ring(l, Form::Sigma)?;
    let t = l.ring().clone();
    let p = l.field().p();
    let gen_img = SkewOp::new(t.clone(), vec![RatFun::zero(), RatFun::constant(p.clone())]);
    let var_img = SkewOp::new(t, vec![RatFun::zero(), RatFun::x_pow(1).scale(&p)]);
    l.image(&var_img, &gen_img)
}

/// d_p^ν∘F_{q+}(N) applied to F⁺, with ν the order of N; zero when N kills F.
pub fn plus_compatibility(n: &SkewOp, f: &Series) -> Result<Series> {
    let field = n.field();
    let img = fourier_plus(n)?;
    let nu = convert(n, Form::Dq).order() as u32;
    let dp = SkewRing::p(Form::Dq, field).gen().pow(nu);
    apply(&dp.mul(&img)?, &borel_plus(f, field))
}

/// F_{q#}(N) applied to F#.
pub fn sharp_compatibility(n: &SkewOp, f: &Series) -> Result<Series> {
    let field = n.field();
    apply(&fourier_sharp(n)?, &borel_sharp(f, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Scalar;
    use crate::newton_ramis::polygon;
    use crate::skew::parse_operator;

    fn f() -> Field {
        Field::rational()
    }

    fn op(s: &str, form: Form) -> SkewOp {
        parse_operator(s, &SkewRing::q(form, f())).unwrap()
    }

    fn zop(s: &str, form: Form) -> SkewOp {
        parse_operator(s, &SkewRing::p(form, f())).unwrap()
    }

    #[test]
    fn generator_images() {
        assert_eq!(fourier_plus(&op("dq - 1", Form::Dq)).unwrap(), zop("z - 1", Form::Dq));
        assert_eq!(fourier_plus(&op("x", Form::Dq)).unwrap(), zop("-p*dp", Form::Dq));
        assert_eq!(fourier_sharp(&op("sigma", Form::Sigma)).unwrap(), zop("p*sigmap", Form::Sigma));
        assert_eq!(fourier_plus_inverse(&zop("z - 1", Form::Dq)).unwrap(), op("dq - 1", Form::Dq));
    }

    #[test]
    fn eq_borel_path() {
        let e: Vec<Scalar> = (0..25u64).map(|n| f().fact(n).inv()).collect();
        let b = borel_plus(&Series::power(e.clone()), f());
        assert!(b.inverse_coeffs().iter().all(|c| c.is_one()));
        let r = plus_compatibility(&op("dq - 1", Form::Dq), &Series::power(e)).unwrap();
        assert!(r.is_zero());
        assert!(r.known() >= 20);
    }

    #[test]
    fn tchakaloff_sharp() {
        let t: Vec<Scalar> = (0..25u64).map(|n| f().tri(n).inv()).collect();
        let b = borel_sharp(&Series::power(t.clone()), f());
        assert!(b.inverse_coeffs().iter().all(|c| c.is_one()));
        let l = op("sigma^2 - (1+q^2*x)*sigma + q*x", Form::Sigma);
        assert!(sharp_compatibility(&l, &Series::power(t)).unwrap().is_zero());
        let img = fourier_sharp(&l).unwrap();
        assert_eq!(fourier_sharp_inverse(&img).unwrap(), l);
        let pl = polygon(&l, Form::Sigma).unwrap().fourier_image();
        assert!(pl.same_region(&polygon(&img, Form::Sigma).unwrap()));
    }

    #[test]
    fn cone_violation() {
        let m = zop("z^-3*sigmap^2 + 1", Form::Sigma);
        assert!(matches!(fourier_sharp_inverse(&m), Err(Error::NotInCone(_))));
        let m = zop("z*sigmap", Form::Sigma);
        assert!(matches!(fourier_sharp_inverse(&m), Err(Error::NotInCone(_))));
    }

    #[test]
    fn symmetric_forms() {
        let l = op("dq*x", Form::Dq);
        assert_eq!(s_fourier_plus(&l).unwrap(), op("x*dq", Form::Dq));
        assert_eq!(s_fourier_sharp(&op("sigma", Form::Sigma)).unwrap(), op("p*sigma", Form::Sigma));
    }
}
