use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use senlab_core::dpseries::{coaction, log_t, sen_theta, solve_theta, theta_matrix, DPSeries};
use senlab_core::field::{build_field, field_log, FieldElement, FieldMap, LocalField, LocalFieldSpec};
use senlab_core::gamma::{build_level, dense_solve, g_minus_one, kernel_check, neumann_invert, rho_bound, NeumannMode};
use senlab_core::linalg::{row_reduce, Matrix};
use senlab_core::padic::{padic_log, PadicScalar};
use senlab_core::picard::{boundary, in_picard_image, kernel_lattice, order_witness, functoriality_check, BoundaryValue};
use senlab_core::senmod::SenModule;
use senlab_core::valuation::fmt_rat;
use senlab_core::{Exec, Rat, Val};

use crate::oracle::*;
use crate::Recorder;

fn sqrt3(prec: i64) -> LocalField {
    build_field(LocalFieldSpec::from_ints(3, &[-1, 1], &[-3, 0, 1], prec)).expect("u^2 - 3 is Eisenstein at 3")
}

fn ge(v: &Val, bound: i64) -> bool {
    v.bound() >= Rat::from_integer(bound)
}

fn series_diff(a: &DPSeries, b: &DPSeries, upto: usize) -> Val {
    min_val(&(0..=upto).map(|n| a.coeff(n).sub(b.coeff(n))).collect::<Vec<_>>())
}

pub(crate) fn exactness(rec: &mut Recorder, _exec: Exec) {
    let prec = 40;
    let n = 24;
    let k = sqrt3(prec);
    let e = k.different();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: Option<Val> = None;
    let mut worst_matrix: Option<Val> = None;
    let big = theta_matrix(&e, n);
    for _ in 0..20 {
        let g = random_series(&e, n, &mut rng);
        let f = solve_theta(&g);
        let back = sen_theta(&f);
        let d = series_diff(&back, &g, n - 1);
        worst = Some(worst.map_or(d.clone(), |w| w.min(d)));
        // matrix path: rows 0..N-1 of Θ on the coefficient vector of f
        let image = big.mul_vec(f.coeffs());
        let dm = min_val(&(0..n).map(|i| image[i].sub(g.coeff(i))).collect::<Vec<_>>());
        worst_matrix = Some(worst_matrix.map_or(dm.clone(), |w| w.min(dm)));
    }
    let w = worst.expect("20 samples");
    rec.check("Θ(solve(g)) = g through degree 23", ge(&w, prec), format!("min diff valuation {w}"));
    let wm = worst_matrix.expect("20 samples");
    rec.check("Θ-matrix oracle agrees", ge(&wm, prec), format!("min diff valuation {wm}"));
    let tm = theta_matrix(&e, n);
    if let Some(ech) = rec.attempt("kernel", row_reduce(&tm, Some(Rat::from_integer(prec / 2)))) {
        let ker = ech.kernel_basis();
        let constants = ker.len() == 1 && ker[0].iter().skip(1).all(FieldElement::is_zero) && !ker[0][0].is_zero();
        rec.check("ker Θ = constants", constants, format!("kernel dimension {}", ker.len()));
    }
}

pub(crate) fn closed_form(rec: &mut Recorder, _exec: Exec) {
    let prec = 40;
    let n = 24;
    let k = sqrt3(prec);
    let e = k.different();
    let f = solve_theta(&DPSeries::one(&e, n));
    let mismatches: Vec<usize> = (1..=n).filter(|&i| !f.coeff(i).eq_to_prec(&log_coefficient(&e, i as u64))).collect();
    rec.check("c_n = (-e)^(n-1)(n-1)!, n = 1..24", mismatches.is_empty() && f.coeff(0).is_zero(), format!("{} mismatches", mismatches.len()));
    if let Some(l) = rec.attempt("log_t", log_t(&e, n)) {
        let d = series_diff(&f, &l, n);
        rec.check("equals (1/e) log(1 + e a)", ge(&d, prec), format!("min diff valuation {d}"));
    }
}

pub(crate) fn coaction_vs_operator(rec: &mut Recorder, exec: Exec) {
    let prec = 40;
    let n = 16;
    let k = sqrt3(prec);
    let e = k.different();
    let module = SenModule::new(theta_matrix(&e, n)).and_then(|m| m.with_parameter(e.clone()));
    let Some(module) = rec.attempt("regular module", module) else { return };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: Option<Val> = None;
    for _ in 0..10 {
        let f = random_series(&e, n, &mut rng);
        let b = random_admissible(&k, &mut rng);
        let Some(lhs) = rec.attempt("coaction", coaction(&f, &b)) else { return };
        let Some(s) = rec.attempt("operator series", module.operator_series(&b, exec)) else { return };
        let rhs = s.mul_vec(f.coeffs());
        let d = min_val(&lhs.coeffs().iter().zip(&rhs).map(|(x, y)| x.sub(y)).collect::<Vec<_>>());
        worst = Some(worst.map_or(d.clone(), |w| w.min(d)));
    }
    let w = worst.expect("10 samples");
    rec.check("coaction = (1+eb)^(Θ/e) f", ge(&w, prec - 4), format!("min diff valuation {w}, need >= {}", prec - 4));
}

pub(crate) fn group_law(rec: &mut Recorder, exec: Exec) {
    let prec = 40;
    let k = sqrt3(prec);
    let e = k.different();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: Option<Val> = None;
    for i in 0..10 {
        let d = 1 + i % 4;
        let m = random_nearly_ht(&k, d, &mut rng);
        let (b1, b2) = (random_admissible(&k, &mut rng), random_admissible(&k, &mut rng));
        let b12 = b1.add(&b2).add(&e.mul(&b1).mul(&b2));
        let run = |b: &FieldElement| m.operator_series(b, exec);
        let (Some(s1), Some(s2), Some(s12)) = (rec.attempt("S(b)", run(&b1)), rec.attempt("S(b')", run(&b2)), rec.attempt("S(b*b')", run(&b12))) else {
            return;
        };
        let v = s1.mul(&s2).sub(&s12).min_valuation();
        worst = Some(worst.map_or(v.clone(), |w| w.min(v)));
    }
    let w = worst.expect("10 samples");
    rec.check("S(b)S(b') = S(b+b'+ebb')", ge(&w, prec - 4), format!("min entry valuation {w}, need >= {}", prec - 4));

    let b = random_admissible(&k, &mut rng);
    let t = k.one().add(&e.mul(&b));
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [0i64, 1, 3] {
        match SenModule::bk(&k, n).operator_series(&b, exec) {
            Ok(s) => {
                let exact = s.get(0, 0).eq_to_prec(&t.pow(n as u64));
                ok &= exact;
                notes.push(format!("n={n}: {}", if exact { "exact" } else { "mismatch" }));
            }
            Err(err) => {
                ok = false;
                notes.push(format!("n={n}: {err}"));
            }
        }
    }
    match SenModule::bk(&k, -1).operator_series(&b, exec) {
        Ok(s) => {
            let v = s.get(0, 0).mul(&t).sub(&k.one()).valuation();
            ok &= ge(&v, prec - 4);
            notes.push(format!("n=-1: residual valuation {v}"));
        }
        Err(err) => {
            ok = false;
            notes.push(format!("n=-1: {err}"));
        }
    }
    rec.check("Breuil-Kisin S(b) = (1+eb)^n", ok, notes.join(", "));
}

pub(crate) fn classifier(rec: &mut Recorder, _exec: Exec) {
    let prec = 40;
    let k = sqrt3(prec);
    let e = k.different();
    let verdict = |m: SenModule| m.nearly_ht_test().map(|r| r.verdict);
    let diag = SenModule::new(Matrix::diagonal(&[0i64, 1, -3].iter().map(|&n| e.mul_int(&n.into())).collect::<Vec<_>>()));
    let ident = SenModule::new(Matrix::identity(2, &k.one()));
    let q3 = LocalField::qp(3, prec).expect("Q_3");
    let third = PadicScalar::from_rational(3, 1, 3, prec).map(|t| q3.from_scalar(&t));
    let negative = third.and_then(|t| SenModule::new(Matrix::scalar(2, &t)));
    let nilp = SenModule::new(Matrix::from_rows(vec![vec![k.zero(), k.from_int(-1)], vec![k.zero(), k.zero()]]).expect("2x2"));
    let cases = [("integer weights", diag, true), ("identity, ramified", ident, false), ("eigenvalue 1/3", negative, false), ("nilpotent", nilp, true)];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, m, expected) in cases {
        match m.and_then(verdict) {
            Ok(v) => {
                ok &= v == expected;
                notes.push(format!("{name}: {v}"));
            }
            Err(err) => {
                ok = false;
                notes.push(format!("{name}: {err}"));
            }
        }
    }
    rec.check("classifier examples", ok, notes.join(", "));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: Option<Val> = None;
    for i in 0..20 {
        let d = 1 + i % 4;
        let m = if i % 2 == 0 {
            random_nearly_ht(&k, d, &mut rng)
        } else {
            SenModule::new(random_int_matrix(&k, d, &mut rng)).expect("square")
        };
        let cq = senlab_core::linalg::Poly::new(senlab_core::linalg::char_poly(&m.fermat_operator()));
        // a monic degree-d polynomial is pinned down by d + 1 values
        for t in 0..=d as i64 {
            let v = cq.eval(&k.from_int(t)).sub(&resultant_char_q(&m, t)).valuation();
            worst = Some(worst.map_or(v.clone(), |w| w.min(v)));
        }
    }
    let w = worst.expect("20 samples");
    rec.check("resultant oracle = char(Q)", ge(&w, prec - 4), format!("min diff valuation {w}"));
}

pub(crate) fn cohomology(rec: &mut Recorder, _exec: Exec) {
    let prec = 40;
    let k = sqrt3(prec);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut equal = 0;
    let mut failures = Vec::new();
    for i in 0..50 {
        let d = 1 + i % 4;
        let theta = match i % 3 {
            0 => random_int_matrix(&k, d, &mut rng),
            1 => {
                let diag: Vec<i64> = (0..d).map(|_| rng.gen_range(-1..=1)).collect();
                conjugated_diagonal(&k, &diag, &mut rng)
            }
            _ => random_nearly_ht(&k, d, &mut rng).theta().clone(),
        };
        match SenModule::new(theta).and_then(|m| m.cohomology()) {
            Ok(c) if c.dims().0 == c.dims().1 => equal += 1,
            Ok(c) => failures.push(format!("#{i}: {:?}", c.dims())),
            Err(err) => failures.push(format!("#{i}: {err}")),
        }
    }
    rec.check("h0 = h1 on 50 modules", equal == 50, if failures.is_empty() { "50/50".into() } else { failures.join(", ") });
    let dims = |m: senlab_core::Result<SenModule>| m.and_then(|m| m.cohomology()).map(|c| c.dims());
    let zero = dims(SenModule::new(Matrix::zeros(3, 3, &k.zero())));
    rec.check("Θ = 0 gives (d, d)", zero == Ok((3, 3)), format!("{zero:?}"));
    let nilp = dims(SenModule::new(Matrix::from_rows(vec![vec![k.zero(), k.from_int(-1)], vec![k.zero(), k.zero()]]).expect("2x2")));
    rec.check("nilpotent gives (1, 1)", nilp == Ok((1, 1)), format!("{nilp:?}"));
    let inv = dims(SenModule::new(Matrix::from_rows(vec![vec![k.one(), k.from_int(7)], vec![k.zero(), k.from_int(2)]]).expect("2x2")));
    rec.check("invertible gives (0, 0)", inv == Ok((0, 0)), format!("{inv:?}"));
}

pub(crate) fn tate_bound(rec: &mut Recorder, exec: Exec) {
    let prec = 50;
    for a in [2i64, 4] {
        let mut maxima = Vec::new();
        let mut tables = Vec::new();
        for m in 1..=3 {
            let Some(level) = rec.attempt(&format!("level a={a} m={m}"), build_level(3, m, a, prec)) else { return };
            let neg = rho_bound(&level, (-10, -1), exec);
            let pos = rho_bound(&level, (1, 10), exec);
            let (Some(neg), Some(pos)) = (rec.attempt("rho_bound", neg), rec.attempt("rho_bound", pos)) else { return };
            let table: Vec<(i64, Rat)> = neg.per_n.into_iter().chain(pos.per_n).collect();
            maxima.push(table.iter().map(|x| x.1).max().expect("20 values"));
            tables.push(table);
        }
        let delta = *maxima.iter().max().expect("three levels");
        let bounded = tables.iter().flatten().all(|x| x.1 <= delta);
        rec.check(format!("a={a}: single δ bounds all exponents"), bounded, format!("δ = {}", fmt_rat(&delta)));
        let spread = *maxima.iter().max().expect("3") - *maxima.iter().min().expect("3");
        let same_tables = tables.windows(2).all(|w| w[0] == w[1]);
        rec.check(
            format!("a={a}: per-m maxima agree"),
            spread == Rat::from_integer(0),
            format!(
                "maxima m=1,2,3: {}; difference {}; per-n tables identical: {same_tables}",
                maxima.iter().map(fmt_rat).collect::<Vec<_>>().join(", "),
                fmt_rat(&spread)
            ),
        );
    }
}

pub(crate) fn neumann(rec: &mut Recorder, exec: Exec) {
    let prec = 50;
    let Some(level) = rec.attempt("level", build_level(3, 2, 10, prec)) else { return };
    let Some(op) = rec.attempt("g - 1", g_minus_one(&level, &PadicScalar::one(3, prec), 8, exec)) else { return };
    match op.contraction_exponent(exec) {
        Ok(Some(c)) => rec.check("contraction |ρM| < 1", c < Rat::from_integer(0), format!("|ρM| = 3^{}", fmt_rat(&c))),
        Ok(None) => rec.check("contraction |ρM| < 1", true, "ρM = 0"),
        Err(err) => rec.check("contraction |ρM| < 1", false, err.to_string()),
    }
    let nullity = kernel_check(&op);
    rec.check("kernel_check = 0", nullity == Ok(0), format!("{nullity:?}"));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: Option<Rat> = None;
    let mut note = String::new();
    for _ in 0..5 {
        let rhs: Vec<PadicScalar> = (0..op.dim()).map(|_| PadicScalar::from_int(3, rng.gen_range(-10_000..=10_000), prec)).collect();
        // the contractive mode refuses this instance; the nilpotent series still terminates
        let sol = neumann_invert(&op, &rhs, NeumannMode::Contractive, exec);
        if let Err(err) = &sol {
            note = format!("contractive mode: {}; ", err.kind());
        }
        let sol = sol.or_else(|_| neumann_invert(&op, &rhs, NeumannMode::Terminating, exec));
        let (Some(sol), Some(dense)) = (rec.attempt("neumann", sol), rec.attempt("dense solve", dense_solve(&op, &rhs))) else { return };
        let diff = scalar_min_val(&sol.solution.iter().zip(&dense).map(|(a, b)| a.sub_ref(b)).collect::<Vec<_>>());
        let size = scalar_min_val(&dense);
        // agreement in significant digits relative to the solution's size
        let rel = diff.bound() - size.bound();
        worst = Some(worst.map_or(rel, |w| w.min(rel)));
    }
    let w = worst.expect("5 samples");
    rec.check(
        "Neumann = dense solve to prec - 4",
        w >= Rat::from_integer(prec - 4),
        format!("{note}relative agreement {} digits, need >= {}", fmt_rat(&w), prec - 4),
    );
}

fn class(p: u64, num: i64, den_pow: u32) -> BoundaryValue {
    BoundaryValue::new(p, BigInt::from(num), den_pow, 0)
}

pub(crate) fn picard(rec: &mut Recorder, _exec: Exec) {
    let prec = 30;
    let p = 3u64;
    let qp = LocalField::qp(p, prec).expect("Q_p");
    let b1 = boundary(&qp.one());
    rec.check("∂(1) = 1/p", b1.as_ref().is_ok_and(|b| b.same_class(&class(p, 1, 1))), format!("{}", b1.as_ref().map(|b| b.to_string()).unwrap_or_else(|e| e.to_string())));
    let bp = in_picard_image(&qp.from_int(p as i64));
    rec.check("∂(p) = 0", bp == Ok(true), format!("{bp:?}"));
    match kernel_lattice(&qp, 0) {
        Ok(l) => {
            let basis_ok = l.kernel_basis.len() == 1 && l.kernel_basis[0].eq_to_prec(&qp.from_int(p as i64));
            rec.check("kernel_lattice(s=0) = pZ_p, order p", basis_ok && l.image_order_pow == 1, format!("basis {}, order p^{}", l.kernel_basis[0], l.image_order_pow));
        }
        Err(err) => rec.check("kernel_lattice(s=0)", false, err.to_string()),
    }
    let l = LocalField::cyclotomic(p, 1, prec).expect("Q_p(ζ_p)");
    let zeta = l.one().add(&l.uniformizer());
    let expected = class(p, companion_trace(&cyclotomic_poly(p)), 1);
    let bz = boundary(&zeta);
    rec.check(
        "∂(ζ_p) = (p-1)/p",
        bz.as_ref().is_ok_and(|b| b.same_class(&expected) && b.same_class(&class(p, p as i64 - 1, 1))),
        format!("{}", bz.as_ref().map(|b| b.to_string()).unwrap_or_else(|e| e.to_string())),
    );
    let Some(emb) = rec.attempt("embedding Q_p -> Q_p(ζ_p)", FieldMap::from_qp(&qp, &l)) else { return };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    for _ in 0..10 {
        let num = rng.gen_range(-500i64..=500);
        let den_pow = rng.gen_range(0u32..3);
        let Some(x) = rec.attempt("scalar", PadicScalar::from_rational(p, num, 3i64.pow(den_pow), prec)) else { return };
        let x = qp.from_scalar(&x);
        // trace transitivity: Tr_{L|Q_p}(x) = (p - 1) x
        let oracle = class(p, num * (p as i64 - 1), den_pow + 1);
        match functoriality_check(&emb, &x) {
            Ok(r) => ok &= r.holds && r.boundary_target.same_class(&oracle),
            Err(_) => ok = false,
        }
    }
    rec.check("∂_L(x) = [L:K] ∂_K(x), 10 random x", ok, "trace-transitivity oracle");
    let mut orders = Vec::new();
    for k in 1..=5u32 {
        let w = order_witness(&qp, k).and_then(|(_, a)| order_witness(&l, k).map(|(_, b)| (a, b)));
        orders.push(matches!(w, Ok((a, b)) if a.order_exponent() == k && b.order_exponent() == k));
    }
    rec.check("witness of order p^k, k <= 5", orders.iter().all(|&x| x), format!("{orders:?}"));
}

pub(crate) fn log_identity(rec: &mut Recorder, _exec: Exec) {
    let prec = 40;
    let n = 24;
    // the tail beyond the stored truncation contributes p^k-small terms
    let n_ext = n + prec as usize + 8;
    let q3 = LocalField::qp(3, prec).expect("Q_3");
    let e = q3.one();
    let Some(lt) = rec.attempt("log_t", log_t(&e, n_ext)) else { return };
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ok = true;
    let mut worst: Option<Val> = None;
    for _ in 0..5 {
        let b = random_admissible(&q3, &mut rng);
        let Some(shifted) = rec.attempt("coaction", coaction(&lt, &b)) else { return };
        let diff = shifted.sub(&lt).expect("same parameter").truncate(n);
        let bs = b.as_scalar().expect("Q_3 element");
        let Some(expected) = rec.attempt("padic_log", padic_log(&PadicScalar::one(3, prec).add_ref(&bs))) else { return };
        let mut target = vec![q3.zero(); n + 1];
        target[0] = q3.from_scalar(&expected);
        let d = min_val(&diff.coeffs().iter().zip(&target).map(|(x, y)| x.sub(y)).collect::<Vec<_>>());
        ok &= diff.coeffs().iter().zip(&target).all(|(x, y)| x.eq_to_prec(y));
        worst = Some(worst.map_or(d.clone(), |w| w.min(d)));
    }
    rec.check("coaction(log_t, b) - log_t = log(1+eb), e = 1", ok, format!("min diff valuation {}", worst.expect("5 samples")));

    // ramified parameter: the constant is (1/e) log(1 + e b)
    let k = sqrt3(prec);
    let e = k.different();
    let Some(lt) = rec.attempt("log_t", log_t(&e, n_ext)) else { return };
    let mut worst: Option<Val> = None;
    for _ in 0..5 {
        let b = random_admissible(&k, &mut rng);
        let Some(shifted) = rec.attempt("coaction", coaction(&lt, &b)) else { return };
        let diff = shifted.sub(&lt).expect("same parameter").truncate(n);
        let Some(c) = rec.attempt("field_log", field_log(&k.one().add(&e.mul(&b))).and_then(|l| l.checked_div(&e))) else { return };
        let mut target = vec![k.zero(); n + 1];
        target[0] = c;
        let d = min_val(&diff.coeffs().iter().zip(&target).map(|(x, y)| x.sub(y)).collect::<Vec<_>>());
        worst = Some(worst.map_or(d.clone(), |w| w.min(d)));
    }
    let w = worst.expect("5 samples");
    rec.check("ramified e: constant (1/e) log(1+eb)", ge(&w, prec - 4), format!("min diff valuation {w}"));
}

