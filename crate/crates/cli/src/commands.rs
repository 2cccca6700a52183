use std::fmt;
use std::fs;

use num_rational::BigRational;
use qdiff::approx::{
    build_g, determinant_check, eq_geometric_pair, geometric_pair, remainders, truncation_checks, ApproxContext,
};
use qdiff::arith::{Field, Matrix, RatFun, Scalar};
use qdiff::borel::{
    borel_plus, borel_sharp, fourier_plus, fourier_plus_inverse, fourier_sharp, fourier_sharp_inverse,
    plus_compatibility, sharp_compatibility,
};
use qdiff::catalog::{self, catalog_grid, check_entry, eq_product_identity_check, eq_zero_check, EntryName};
use qdiff::error::Error;
use qdiff::gevrey::{default_grid, detect_orders, detected};
use qdiff::newton_basis::{act, casoratian, local_solution_basis};
use qdiff::newton_ramis::polygon;
use qdiff::places::size_report;
use qdiff::skew::annihilator::verify;
use qdiff::skew::{annihilator_search, apply, convert, detect_form, parse_operator, parse_ratfun, Form, ListGen, Series, SkewOp, SkewRing};
use qdiff::systems::{companion, decay_check, galockin_partial, iterate, nilpotent_reduction, noncyclotomic_partial, QSystem};
use serde_json::{json, Value};

use crate::json::{self, SCHEMA};
use crate::{svg, Cli, Command, FormArg, Global, Kind, Pair, SystemArgs};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable input: exit code 2.
    Input(String),
    /// A mathematical precondition failed: exit code 3.
    Math(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) | CliError::Math(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            CliError::Input(e.to_string())
        } else {
            CliError::Math(e.to_string())
        }
    }
}

type Res<T> = Result<T, CliError>;

pub struct Output {
    pub report: Value,
    /// False when a requested verification failed (exit code 1).
    pub passed: bool,
}

struct Ctx<'a> {
    g: &'a Global,
    field: Field,
}

impl Ctx<'_> {
    fn trunc(&self, default: usize) -> usize {
        self.g.trunc.unwrap_or(default)
    }

    fn ring(&self, text: &str) -> SkewRing {
        let form = match self.g.form {
            Some(FormArg::Sigma) => Form::Sigma,
            Some(FormArg::Dq) => Form::Dq,
            None => detect_form(text),
        };
        SkewRing::q(form, self.field)
    }

    fn operator(&self, text: &str) -> Res<SkewOp> {
        Ok(parse_operator(text, &self.ring(text))?)
    }

    fn scalar(&self, text: &str) -> Res<Scalar> {
        let f = parse_ratfun(text, &SkewRing::q(Form::Sigma, self.field))?;
        f.constant_value().ok_or_else(|| CliError::Input(format!("'{text}' depends on x")))
    }

    /// The series given by --gen or --coeffs, with its field and a label.
    fn series(&self, len: usize) -> Res<(Vec<Scalar>, Field, String)> {
        match (&self.g.gen, &self.g.coeffs) {
            (Some(name), None) => {
                let e = catalog::entry(name)?;
                Ok((e.prefix(len), e.field, e.name.to_string()))
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                let mut out = Vec::new();
                for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                    out.push(self.scalar(line)?);
                }
                if out.len() < len && self.g.trunc.is_some() {
                    return Err(CliError::Input(format!("{} holds {} coefficients, {len} requested", path.display(), out.len())));
                }
                out.truncate(len);
                Ok((out, self.field, path.display().to_string()))
            }
            (Some(_), Some(_)) => Err(CliError::Input("give either --gen or --coeffs, not both".into())),
            (None, None) => Err(CliError::Input("this command needs a series: --gen NAME or --coeffs FILE".into())),
        }
    }

    fn system(&self, s: &SystemArgs) -> Res<(QSystem, String)> {
        match (&s.operator, &s.matrix) {
            (Some(text), None) => Ok((companion(&self.operator(text)?)?, format!("companion of {text}"))),
            (None, Some(text)) => {
                let ring = SkewRing::q(Form::Sigma, self.field);
                let rows = text
                    .split(';')
                    .map(|row| row.split(',').map(|e| parse_ratfun(e.trim(), &ring)).collect::<Result<Vec<RatFun>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Input("the matrix must be square".into()));
                }
                Ok((QSystem::new(self.field, Matrix::from_rows(rows))?, text.clone()))
            }
            _ => Err(CliError::Input("give an operator or --matrix".into())),
        }
    }

    fn write_svg(&self, body: String) -> Res<Value> {
        match &self.g.svg {
            Some(path) => {
                fs::write(path, body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                Ok(json!(path.display().to_string()))
            }
            None => Ok(Value::Null),
        }
    }
}

fn report(command: &str, inputs: Value, results: Value, notes: Value) -> Value {
    json!({ "schema": SCHEMA, "command": command, "inputs": inputs, "results": results, "notes": notes })
}

fn done(report: Value) -> Res<Output> {
    Ok(Output { report, passed: true })
}

pub fn run(cli: &Cli) -> Res<Output> {
    let field = Field::new(cli.global.field_root)?;
    let c = Ctx { g: &cli.global, field };
    match &cli.command {
        Command::Nrp { operator } => nrp(&c, operator),
        Command::Fourier { operator, kind, inverse } => fourier(&c, operator, *kind, *inverse),
        Command::Borel { kind, operator } => borel(&c, *kind, operator.as_deref()),
        Command::Size => size(&c),
        Command::Gevrey => gevrey(&c),
        Command::Nilpotent { system, m } => nilpotent(&c, system, m),
        Command::Galockin { system } => galockin(&c, system),
        Command::Annihilate { max_order, max_deg, guard } => annihilate(&c, *max_order, *max_deg, *guard),
        Command::LocalSolve { operator, xi } => local_solve(&c, operator, xi),
        Command::Casorati { operator, xi } => casorati(&c, operator, xi),
        Command::HermitePade { pair, n, tau, kbar } => hermite_pade(&c, *pair, *n, tau, *kbar),
        Command::Catalog { name } => catalog_cmd(&c, name.as_deref()),
        Command::Check { operator } => check(&c, operator),
    }
}

fn nrp(c: &Ctx, text: &str) -> Res<Output> {
    let l = c.operator(text)?;
    let mut polys = Vec::new();
    let mut out = serde_json::Map::new();
    for form in [Form::Sigma, Form::Dq] {
        let p = polygon(&convert(&l, form), form)?;
        out.insert(if form == Form::Sigma { "sigma" } else { "dq" }.into(), json::polygon(&p));
        polys.push((format!("{} polygon", if form == Form::Sigma { "sigma" } else { "dq" }), p));
    }
    let primary = polys.iter().find(|(_, p)| p.form == l.form()).map(|(_, p)| json::polygon(p)).unwrap();
    let svg = c.write_svg(svg::polygons(&polys))?;
    done(report(
        "nrp",
        json!({ "operator": json::op(&l), "form": json::form(l.form()) }),
        json!({ "polygon": primary, "both_forms": out }),
        json!({ "svg": svg }),
    ))
}

fn fourier(c: &Ctx, text: &str, kind: Kind, inverse: bool) -> Res<Output> {
    let (l, image) = if inverse {
        let form = match kind {
            Kind::Plus => Form::Dq,
            Kind::Sharp => Form::Sigma,
        };
        let l = parse_operator(text, &SkewRing::p(form, c.field))?;
        let img = match kind {
            Kind::Plus => fourier_plus_inverse(&l)?,
            Kind::Sharp => fourier_sharp_inverse(&l)?,
        };
        (l, img)
    } else {
        let l = c.operator(text)?;
        let img = match kind {
            Kind::Plus => fourier_plus(&convert(&l, Form::Dq))?,
            Kind::Sharp => fourier_sharp(&convert(&l, Form::Sigma))?,
        };
        (l, img)
    };
    let form = image.form();
    let before = polygon(&convert(&l, form), form)?;
    let after = polygon(&image, form)?;
    let (src, dst) = if inverse { (&after, &before) } else { (&before, &after) };
    let commutes = src.fourier_image().same_region(dst);
    // the commutation is stated for d_q-form input Σ a_i(x) x^i d_q^i
    let source = if inverse { &image } else { &l };
    let normalized = form == Form::Sigma
        || convert(source, Form::Dq).coeffs().iter().enumerate().all(|(i, b)| b.is_zero() || b.ord_x() >= i as i64);
    let svg = c.write_svg(svg::polygons(&[("input".into(), before.clone()), ("image".into(), after.clone())]))?;
    done(report(
        "fourier",
        json!({ "operator": json::op(&l), "kind": format!("{kind:?}").to_lowercase(), "inverse": inverse }),
        json!({
            "image": json::op(&image),
            "polygon_input": json::polygon(&before),
            "polygon_image": json::polygon(&after),
            "polygon_commutes": commutes,
            "input_normalized": normalized,
        }),
        json!({ "svg": svg }),
    ))
}

fn borel(c: &Ctx, kind: Kind, op: Option<&str>) -> Res<Output> {
    let len = c.trunc(20);
    let (y, field, label) = c.series(len)?;
    let s = Series::power(y);
    let b = match kind {
        Kind::Plus => borel_plus(&s, field),
        Kind::Sharp => borel_sharp(&s, field),
    };
    let mut results = json!({ "transform": json::series(field, &b) });
    let mut passed = true;
    if let Some(text) = op {
        let n = c.operator(text)?;
        let r = match kind {
            Kind::Plus => plus_compatibility(&n, &s)?,
            Kind::Sharp => sharp_compatibility(&n, &s)?,
        };
        let ok = r.is_zero() && r.known() > 0;
        passed = !c.g.verify || ok;
        results["compatibility"] = json!({ "operator": json::op(&n), "residual": json::series(field, &r), "annihilates": ok });
    }
    Ok(Output {
        report: report(
            "borel",
            json!({ "series": label, "kind": format!("{kind:?}").to_lowercase() }),
            results,
            json!({ "truncation": len, "index": "coeffs[i] is the coefficient of z^(lo+i)" }),
        ),
        passed,
    })
}

fn size(c: &Ctx) -> Res<Output> {
    let len = c.trunc(30);
    let (y, field, label) = c.series(len)?;
    let r = size_report(&y, field);
    let totals = r.totals();
    let increasing = totals.windows(2).all(|w| w[0] < w[1]);
    done(report(
        "size",
        json!({ "series": label }),
        json!({ "rows": json::size(&r), "totals_increasing": increasing }),
        json!({ "truncation": len, "units": "log(1/d), averaged over n" }),
    ))
}

fn gevrey(c: &Ctx) -> Res<Output> {
    let len = c.trunc(60);
    let (y, field, label) = c.series(len)?;
    let gen = ListGen(y);
    let verdicts = detect_orders(&gen, &default_grid(field), len, field);
    let found = detected(&verdicts);
    let rows: Vec<Value> = verdicts
        .iter()
        .map(|v| {
            json!({
                "orders": json::orders(&v.orders),
                "window": [v.window.0, v.window.1],
                "slope": json::rat(&v.slope),
                "bounded": v.bounded,
            })
        })
        .collect();
    done(report(
        "gevrey",
        json!({ "series": label }),
        json!({
            "detected": found.as_ref().map(json::orders),
            "predicted_dq_slopes": found.as_ref().map(|o| json::slopes(&o.predicted_slopes())),
            "verdicts": rows,
        }),
        json!({ "nbar": len, "threshold": json::rat(&qdiff::gevrey::verdict_threshold()) }),
    ))
}

fn nilpotent(c: &Ctx, s: &SystemArgs, ms: &[u64]) -> Res<Output> {
    let (sys, label) = c.system(s)?;
    let horizon = c.trunc(12);
    let table = iterate(&sys, horizon);
    let mut rows = Vec::new();
    let mut passed = true;
    for &m in ms {
        let rep = match nilpotent_reduction(&sys, m, 4) {
            Ok(r) => r,
            Err(e) => {
                rows.push(json!({ "m": m, "error": e.to_string() }));
                continue;
            }
        };
        let decay = match (rep.a_nilpotent, rep.nilpotence_order) {
            (true, Some(order)) => {
                let d = decay_check(&table, m, rep.kappa, order, horizon)?;
                passed &= !c.g.verify || d.holds;
                json!({
                    "limit_bound": json::rat(&d.bound),
                    "bounds": json::rats(&d.bounds),
                    "values": json::rats(&d.values),
                    "holds": d.holds,
                    "tail_below_limit": d.tail_below_limit,
                })
            }
            _ => Value::Null,
        };
        passed &= !c.g.verify || rep.flags_agree();
        rows.push(json!({
            "m": m,
            "kappa": rep.kappa,
            "a_nilpotent": rep.a_nilpotent,
            "nilpotence_order": rep.nilpotence_order,
            "g_nilpotent": rep.g_nilpotent,
            "norm_drop": rep.norm_drop,
            "flags_agree": rep.flags_agree(),
            "decay": decay,
        }));
    }
    Ok(Output {
        report: report("nilpotent", json!({ "system": label, "m": ms }), json!({ "places": rows }), json!({ "horizon": horizon })),
        passed,
    })
}

fn galockin(c: &Ctx, s: &SystemArgs) -> Res<Output> {
    let (sys, label) = c.system(s)?;
    let n = c.trunc(12);
    let table = iterate(&sys, n);
    done(report(
        "galockin",
        json!({ "system": label }),
        json!({
            "cyclotomic": json::rats(&galockin_partial(&table, n)),
            "noncyclotomic": json::rats(&noncyclotomic_partial(&table, n)),
        }),
        json!({ "horizon": n, "index": "entry k is the partial sum for n = k+1" }),
    ))
}

fn annihilate(c: &Ctx, max_order: usize, max_deg: usize, guard: usize) -> Res<Output> {
    let need = (max_order + 1) * (max_deg + 1) + guard;
    let len = c.trunc(need).max(need);
    let (y, field, label) = c.series(len)?;
    if y.len() < need {
        return Err(CliError::Input(format!("the search needs {need} coefficients, the series has {}", y.len())));
    }
    if field != Field::rational() {
        return Err(CliError::Math("annihilator search works over Q(q)".into()));
    }
    let gen = ListGen(y);
    let found = annihilator_search(&gen, field, max_order, max_deg, guard);
    let verified = found.as_ref().map(|a| verify(&a.op, &gen, len));
    done(report(
        "annihilate",
        json!({ "series": label, "max_order": max_order, "max_deg": max_deg, "guard": guard }),
        json!({
            "operator": found.as_ref().map(|a| json::op(&a.op)),
            "order": found.as_ref().map(|a| a.order),
            "degree": found.as_ref().map(|a| a.degree),
            "annihilates_prefix": verified,
        }),
        json!({ "prefix_length": len }),
    ))
}

fn local_solve(c: &Ctx, text: &str, xi: &str) -> Res<Output> {
    let l = convert(&c.operator(text)?, Form::Sigma);
    let x0 = c.scalar(xi)?;
    let len = c.trunc(12);
    let basis = local_solution_basis(&l, &x0, len)?;
    let mut passed = true;
    let mut sols = Vec::new();
    for s in &basis {
        let mut v = json!({ "newton_coeffs": json::scalars(c.field, &s.c) });
        if c.g.verify {
            let ok = act(&l, s)?.is_zero();
            passed &= ok;
            v["annihilated"] = json!(ok);
        }
        sols.push(v);
    }
    Ok(Output {
        report: report(
            "local-solve",
            json!({ "operator": json::op(&l), "xi": json::scalar(c.field, &x0) }),
            json!({ "solutions": sols }),
            json!({ "truncation": len, "basis": "T_n(x, xi) = (x - xi)(x - q xi)...(x - q^(n-1) xi)" }),
        ),
        passed,
    })
}

fn casorati(c: &Ctx, text: &str, xi: &str) -> Res<Output> {
    let l = convert(&c.operator(text)?, Form::Sigma);
    let x0 = c.scalar(xi)?;
    let len = c.trunc(12);
    let basis = local_solution_basis(&l, &x0, len)?;
    let cas = casoratian(&l, &basis)?;
    Ok(Output {
        report: report(
            "casorati",
            json!({ "operator": json::op(&l), "xi": json::scalar(c.field, &x0) }),
            json!({
                "determinant": json::scalars(c.field, &cas.det.c),
                "residual_zero": cas.holds(),
                "nonzero": !cas.det.is_zero(),
            }),
            json!({ "truncation": len }),
        ),
        passed: !c.g.verify || cas.holds(),
    })
}

fn hermite_pade(c: &Ctx, pair: Pair, n: usize, tau: &str, kbar: usize) -> Res<Output> {
    let tau: BigRational = tau.parse().map_err(|_| CliError::Input(format!("bad τ '{tau}'")))?;
    let field = Field::rational();
    let len = n + 16 + c.g.trunc.unwrap_or(0);
    let (sys, ys) = match pair {
        Pair::Geometric => geometric_pair(field, len),
        Pair::Eq => eq_geometric_pair(field, len),
    };
    let hp = build_g(&ys, n, &tau, field)?;
    let ctx = ApproxContext::new(sys, ys, n, tau.clone())?;
    let table = remainders(&ctx, &hp.g, kbar)?;
    let rows = truncation_checks(&ctx, &hp.g, &table)?;
    let det = determinant_check(&ctx, &table)?;
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "n": r.n, "within_budget": r.within_budget, "truncation_holds": r.truncation_holds, "order_holds": r.order_holds }))
        .collect();
    let bounds = table.paths_agree && table.degree_bounds_hold();
    done(report(
        "hermite-pade",
        json!({ "pair": format!("{pair:?}").to_lowercase(), "N": n, "tau": json::rat(&tau), "kbar": kbar }),
        json!({
            "g": json::poly(field, &hp.g),
            "band": [hp.band.0, hp.band.1],
            "height": json::sums(&hp.height),
            "t": ctx.t,
            "remainder_paths_agree": table.paths_agree,
            "degree_bounds_hold": bounds,
            "truncation": rows,
            "determinant_nonzero": det.nonzero,
            "determinant_ord": det.ord,
            "determinant_deg": det.deg,
            "minors_hold": det.minors_hold,
        }),
        json!({ "prefix_length": len }),
    ))
}

fn catalog_cmd(c: &Ctx, name: Option<&str>) -> Res<Output> {
    let Some(name) = name else {
        return done(report("catalog", json!({}), json!({ "entries": catalog::names() }), json!({})));
    };
    let e = catalog::entry(name)?;
    let len = c.trunc(8);
    let mut results = json!({
        "name": e.name.to_string(),
        "operator": json::op(&e.operator),
        "orders": e.orders.as_ref().map(json::orders),
        "dq_slopes": e.slopes.as_ref().map(json::slopes),
        "zeros": json::scalars(e.field, &e.zeros),
        "prefix": json::scalars(e.field, &e.prefix(len)),
    });
    let mut passed = true;
    if c.g.verify {
        let ch = check_entry(&e, &catalog_grid(), 60)?;
        passed = ch.passed();
        results["verify"] = json!({
            "annihilates_prefix": ch.annihilates,
            "search_recovers": ch.search_recovers,
            "found": ch.found.as_ref().map(json::op),
            "detected_orders": ch.detected.as_ref().map(json::orders),
            "orders_match": ch.orders_match,
            "polygon_slopes": ch.slopes_from_polygon.as_ref().map(json::slopes),
            "slopes_match": ch.slopes_match,
            "predictions_match": ch.predictions_match,
            "passed": ch.passed(),
        });
        if e.name == EntryName::Eq {
            let p = eq_product_identity_check(20)?;
            let z = eq_zero_check(30)?;
            passed &= p.holds() && z.holds();
            results["verify"]["product_identity"] = json!({ "closed_form": p.closed_form, "congruence": p.congruence });
            results["verify"]["zero"] = json!({ "increasing": z.increasing, "control_bounded": z.bounded });
        }
    }
    Ok(Output { report: report("catalog", json!({ "name": name }), results, json!({ "prefix_length": len })), passed })
}

fn check(c: &Ctx, text: &str) -> Res<Output> {
    let l = c.operator(text)?;
    let len = c.trunc(40);
    let (y, field, label) = c.series(len)?;
    let r = apply(&l, &Series::power(y))?;
    let ok = r.is_zero() && r.known() > 0;
    Ok(Output {
        report: report(
            "check",
            json!({ "operator": json::op(&l), "series": label }),
            json!({ "annihilates": ok, "known_residual_terms": r.known(), "residual": json::series(field, &r) }),
            json!({ "truncation": len }),
        ),
        passed: !c.g.verify || ok,
    })
}
