use serde_json::{json, Value};
use senlab_accept::run_suite;
use senlab_core::dpseries::{coaction, dp_mul, gsharp_transport, log_t, sen_theta, solve_theta, DPSeries, Transport, DEFAULT_TRUNC};
use senlab_core::field::{elem_arith, field_exp, field_log, FieldElement, LocalField};
use senlab_core::gamma::{self, build_level, g_minus_one, kernel_check, neumann_invert, rho_bound, CyclotomicLevel, NeumannMode};
use senlab_core::padic::{newton_polygon, padic_exp, padic_log, scalar_arith, ArithOp, PadicScalar, PolyJson};
use senlab_core::picard::{boundary, kernel_lattice, order_witness};
use senlab_core::senmod::SenModule;
use senlab_core::valuation::fmt_rat;
use senlab_core::{Error, Result};

use crate::cli::*;
use crate::input::{load, resolve_field, scalar, Ctx};

fn arith_op(op: Op) -> ArithOp {
    match op {
        Op::Add => ArithOp::Add,
        Op::Sub => ArithOp::Sub,
        Op::Mul => ArithOp::Mul,
        Op::Div => ArithOp::Div,
    }
}

fn scalar_json(x: &PadicScalar) -> Value {
    serde_json::to_value(x).expect("scalars serialize")
}

fn element(field: &LocalField, arg: &str, what: &str) -> Result<FieldElement> {
    field.element_from_json(&load(arg, what)?, what)
}

fn series(field: &LocalField, v: &Value, ctx: &Ctx) -> Result<DPSeries> {
    DPSeries::from_json(field, v, ctx.trunc)
}

/// Report envelope echoing the effective settings.
fn report(command: &str, prec: i64, trunc: Option<usize>, result: Value) -> Value {
    json!({"command": command, "prec": prec, "trunc": trunc, "result": result})
}

/// Runs the command; the flag is false when a report is produced but
/// signals failure (a failing acceptance criterion).
pub fn run(cli: &Cli) -> Result<(Value, bool)> {
    let ctx = Ctx::from_cli(cli)?;
    let out = match &cli.command {
        Command::Padic(c) => padic(c, &ctx)?,
        Command::Field(c) => field(c, &ctx)?,
        Command::Dps(c) => dps(c, &ctx)?,
        Command::Senmod(c) => senmod(c, &ctx)?,
        Command::Gamma(c) => gamma_cmd(c, &ctx)?,
        Command::Picard(c) => picard(c, &ctx)?,
        Command::Accept { suite } => return accept(suite, &ctx),
    };
    Ok((out, true))
}

fn padic(c: &PadicCmd, ctx: &Ctx) -> Result<Value> {
    Ok(match c {
        PadicCmd::Arith { op, x, y, p } => {
            let (xv, yv) = (load(x, "--x")?, load(y, "--y")?);
            let p = p.or_else(|| [&xv, &yv].iter().find_map(|v| scalar(None, v, "x", ctx).ok().map(|s| s.p())));
            let (a, b) = (scalar(p, &xv, "x", ctx)?, scalar(p, &yv, "y", ctx)?);
            let r = scalar_arith(&a, &b, arith_op(*op))?;
            report("padic arith", r.prec(), None, json!({"value": scalar_json(&r), "valuation": r.val().to_string()}))
        }
        PadicCmd::Exp { x, p } => {
            let r = padic_exp(&scalar(*p, &load(x, "--x")?, "x", ctx)?)?;
            report("padic exp", r.prec(), None, json!({"value": scalar_json(&r)}))
        }
        PadicCmd::Log { x, p } => {
            let r = padic_log(&scalar(*p, &load(x, "--x")?, "x", ctx)?)?;
            report("padic log", r.prec(), None, json!({"value": scalar_json(&r)}))
        }
        PadicCmd::Newton { poly } => {
            let wire: PolyJson = serde_json::from_value(load(poly, "--poly")?).map_err(|e| Error::Usage(format!("--poly: {e}")))?;
            let f = wire.into_poly()?;
            let prec = f.coeffs().iter().map(PadicScalar::prec).min().unwrap_or(0);
            report("padic newton", prec, None, newton_polygon(&f)?.to_json())
        }
    })
}

fn field(c: &FieldCmd, ctx: &Ctx) -> Result<Value> {
    Ok(match c {
        FieldCmd::Info { field } => {
            let k = resolve_field(field, &[], ctx)?;
            let info = json!({
                "field": k.to_json(),
                "degree": k.degree(),
                "f": k.f(),
                "e": k.e_ram(),
                "different": k.different().to_json(),
                "v_different": fmt_rat(&k.v_different()),
            });
            report("field info", k.prec(), None, info)
        }
        FieldCmd::Arith { field, op, x, y } => {
            let (xv, yv) = (load(x, "--x")?, load(y, "--y")?);
            let k = resolve_field(field, &[&xv, &yv], ctx)?;
            let r = elem_arith(&k.element_from_json(&xv, "x")?, &k.element_from_json(&yv, "y")?, arith_op(*op))?;
            report("field arith", k.prec(), None, json!({"value": r.to_json(), "valuation": r.valuation().to_string()}))
        }
        FieldCmd::Elem { field, elem } => {
            let ev = load(elem, "--elem")?;
            let k = resolve_field(field, &[&ev], ctx)?;
            let x = k.element_from_json(&ev, "elem")?;
            let residue = match x.residue() {
                Ok(r) => json!(r.coords),
                Err(e) => json!({"error": e.message()}),
            };
            let info = json!({
                "value": x.to_json(),
                "valuation": x.valuation().to_string(),
                "trace": scalar_json(&x.trace()),
                "integral": x.is_integral(),
                "residue": residue,
            });
            report("field elem", k.prec(), None, info)
        }
        FieldCmd::Log { field, elem } | FieldCmd::Exp { field, elem } => {
            let ev = load(elem, "--elem")?;
            let k = resolve_field(field, &[&ev], ctx)?;
            let x = k.element_from_json(&ev, "elem")?;
            let (name, r) = match c {
                FieldCmd::Log { .. } => ("field log", field_log(&x)?),
                _ => ("field exp", field_exp(&x)?),
            };
            report(name, k.prec(), None, json!({"value": r.to_json()}))
        }
    })
}

fn dps(c: &DpsCmd, ctx: &Ctx) -> Result<Value> {
    let (name, fa, inputs): (&str, &FieldArg, Vec<&String>) = match c {
        DpsCmd::Mul { field, f, g } => ("dps mul", field, vec![f, g]),
        DpsCmd::Theta { field, f } => ("dps theta", field, vec![f]),
        DpsCmd::SolveTheta { field, g } => ("dps solve-theta", field, vec![g]),
        DpsCmd::LogT { field, e } => ("dps log-t", field, e.iter().collect()),
        DpsCmd::Coaction { field, f, b } => ("dps coaction", field, vec![f, b]),
        DpsCmd::Transport { field, f, .. } => ("dps transport", field, vec![f]),
    };
    let values = inputs.iter().map(|a| load(a, name)).collect::<Result<Vec<_>>>()?;
    let k = resolve_field(fa, &values.iter().collect::<Vec<_>>(), ctx)?;
    let result = match c {
        DpsCmd::Mul { .. } => dp_mul(&series(&k, &values[0], ctx)?, &series(&k, &values[1], ctx)?)?,
        DpsCmd::Theta { .. } => sen_theta(&series(&k, &values[0], ctx)?),
        DpsCmd::SolveTheta { .. } => solve_theta(&series(&k, &values[0], ctx)?),
        DpsCmd::LogT { .. } => {
            let e = match values.first() {
                Some(v) => k.element_from_json(v, "e")?,
                None => k.different(),
            };
            log_t(&e, ctx.trunc.unwrap_or(DEFAULT_TRUNC))?
        }
        DpsCmd::Coaction { .. } => coaction(&series(&k, &values[0], ctx)?, &k.element_from_json(&values[1], "b")?)?,
        DpsCmd::Transport { direction, .. } => {
            let dir = match direction {
                Direction::ToGsharp => Transport::ToGsharp,
                Direction::FromGsharp => Transport::FromGsharp,
            };
            gsharp_transport(&series(&k, &values[0], ctx)?, dir)?
        }
    };
    Ok(report(name, k.prec(), Some(result.trunc()), result.to_json()))
}

fn module(m: &ModuleArg, ctx: &Ctx) -> Result<SenModule> {
    let v = load(&m.theta, "--theta")?;
    let k = resolve_field(&m.field, &[&v], ctx)?;
    SenModule::from_json(&k, &v)
}

fn senmod(c: &SenmodCmd, ctx: &Ctx) -> Result<Value> {
    let (name, m) = match c {
        SenmodCmd::NearlyHt { module: m } => ("senmod nearly-ht", m),
        SenmodCmd::Weights { module: m, .. } => ("senmod weights", m),
        SenmodCmd::Cohomology { module: m } => ("senmod cohomology", m),
        SenmodCmd::OperatorSeries { module: m, .. } => ("senmod operator-series", m),
        SenmodCmd::Descent { module: m, .. } => ("senmod descent", m),
    };
    let md = module(m, ctx)?;
    let k = md.field().clone();
    let matrix_json = |a: &senlab_core::linalg::Matrix<FieldElement>| {
        Value::Array(a.to_rows().iter().map(|r| Value::Array(r.iter().map(FieldElement::to_json).collect())).collect())
    };
    let result = match c {
        SenmodCmd::NearlyHt { .. } => md.nearly_ht_test()?.to_json(),
        SenmodCmd::Weights { min, max, .. } => {
            let range = match (min, max) {
                (Some(a), Some(b)) => Some((*a, *b)),
                (None, None) => None,
                _ => return Err(Error::Usage("give both --min and --max, or neither".into())),
            };
            let range = match range {
                Some(r) => r,
                None => md.default_weight_range()?,
            };
            let w = md.ht_weights(Some(range), ctx.exec)?;
            json!({
                "range": [range.0, range.1],
                "weights": w.iter().map(|(n, mult)| json!({"weight": n, "multiplicity": mult})).collect::<Vec<_>>(),
            })
        }
        SenmodCmd::Cohomology { .. } => md.cohomology()?.to_json(),
        SenmodCmd::OperatorSeries { b, .. } => json!({"matrix": matrix_json(&md.operator_series(&element(&k, b, "--b")?, ctx.exec)?)}),
        SenmodCmd::Descent { chi, .. } => {
            let chi = scalar(Some(k.p()), &load(chi, "--chi")?, "chi", ctx)?;
            json!({"matrix": matrix_json(&md.semilinear_descent_matrix(&chi, ctx.exec)?)})
        }
    };
    Ok(report(name, k.prec(), None, result))
}

fn level(l: &LevelArg, ctx: &Ctx) -> Result<CyclotomicLevel> {
    build_level(l.p, l.m, l.a, ctx.prec())
}

fn gamma_cmd(c: &GammaCmd, ctx: &Ctx) -> Result<Value> {
    Ok(match c {
        GammaCmd::Delta { level: l, nmin, nmax } => {
            let lv = level(l, ctx)?;
            let mut ranges = Vec::new();
            if *nmin < 0 {
                ranges.push((*nmin, (*nmax).min(-1)));
            }
            if *nmax > 0 {
                ranges.push(((*nmin).max(1), *nmax));
            }
            if ranges.is_empty() || nmin > nmax {
                return Err(Error::Usage(format!("range [{nmin}, {nmax}] has no nonzero n")));
            }
            let reports = ranges.into_iter().map(|r| rho_bound(&lv, r, ctx.exec)).collect::<Result<Vec<_>>>()?;
            let per_n: Vec<_> = reports.iter().flat_map(|r| r.per_n.clone()).collect();
            let delta = per_n.iter().map(|x| x.1).max().expect("nonempty range");
            let merged = gamma::RhoReport { per_n, delta };
            let mut out = merged.to_json();
            // per_n carries exponents; norms spells out |ρ_n| = p^k
            out["norms"] = merged.per_n.iter().map(|(n, r)| json!({"n": n, "norm": format!("{}^{}", l.p, fmt_rat(r))})).collect();
            out["level"] = json!({"p": l.p, "m": l.m, "a": l.a, "degree": lv.degree()});
            report("gamma delta", ctx.prec(), None, out)
        }
        GammaCmd::Invert { level: l, e, rhs, mode } => {
            let lv = level(l, ctx)?;
            let e = scalar(Some(l.p), &load(e, "--e")?, "e", ctx)?;
            let rv = load(rhs, "--rhs")?;
            let items = rv.as_array().ok_or_else(|| Error::Usage("--rhs: expected an array of field elements".into()))?;
            let n = ctx.trunc.unwrap_or(items.len());
            if n != items.len() {
                return Err(Error::Usage(format!("--rhs has {} coefficients but --trunc is {n}", items.len())));
            }
            let op = g_minus_one(&lv, &e, n, ctx.exec)?;
            let coeffs = items
                .iter()
                .enumerate()
                .map(|(i, v)| lv.field().element_from_json(v, &format!("rhs[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let flat = op.flatten(&coeffs)?;
            let mode = match mode {
                Mode::Contractive => NeumannMode::Contractive,
                Mode::Terminating => NeumannMode::Terminating,
            };
            let sol = neumann_invert(&op, &flat, mode, ctx.exec)?;
            report("gamma invert", ctx.prec(), Some(n), sol.to_json(&op))
        }
        GammaCmd::Kernel { level: l, e } => {
            let lv = level(l, ctx)?;
            let e = scalar(Some(l.p), &load(e, "--e")?, "e", ctx)?;
            let n = ctx.trunc.unwrap_or(8);
            let op = g_minus_one(&lv, &e, n, ctx.exec)?;
            let contraction = op.contraction_exponent(ctx.exec)?;
            let out = json!({
                "nullity": kernel_check(&op)?,
                "dim": op.dim(),
                "contraction_exponent": contraction.map(|c| fmt_rat(&c)),
            });
            report("gamma kernel", ctx.prec(), Some(n), out)
        }
    })
}

fn picard(c: &PicardCmd, ctx: &Ctx) -> Result<Value> {
    Ok(match c {
        PicardCmd::Boundary { field, elem } => {
            let ev = load(elem, "--elem")?;
            let k = resolve_field(field, &[&ev], ctx)?;
            let d = boundary(&k.element_from_json(&ev, "elem")?)?;
            report("picard boundary", k.prec(), None, d.to_json())
        }
        PicardCmd::Kernel { field, s } => {
            let k = resolve_field(field, &[], ctx)?;
            report("picard kernel", k.prec(), None, kernel_lattice(&k, *s)?.to_json())
        }
        PicardCmd::Witness { field, k: order } => {
            let k = resolve_field(field, &[], ctx)?;
            let (x, d) = order_witness(&k, *order)?;
            report("picard witness", k.prec(), None, json!({"element": x.to_json(), "boundary": d.to_json()}))
        }
    })
}

fn accept(suite: &str, ctx: &Ctx) -> Result<(Value, bool)> {
    let outcomes = run_suite(suite, ctx.exec).ok_or_else(|| Error::Usage(format!("unknown suite {suite:?}")))?;
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let ok = outcomes.iter().all(|o| o.passed());
    let first_failure = outcomes.iter().find(|o| !o.passed()).map(|o| {
        let c = o.failing().first().map(|c| format!("{}: {}", c.label, c.measured)).unwrap_or_else(|| "over time".into());
        format!("criterion {}: {c}", o.index)
    });
    let out = json!({
        "suite": suite,
        "passed": ok,
        "first_failure": first_failure,
        "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
    });
    Ok((report("accept", ctx.prec(), ctx.trunc, out), ok))
}
