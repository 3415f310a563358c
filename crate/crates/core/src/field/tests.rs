use super::*;
use crate::linalg::Matrix;
use crate::padic::ArithOp;
use proptest::prelude::*;

fn sqrt3(prec: i64) -> LocalField {
    build_field(LocalFieldSpec::from_ints(3, &[-1, 1], &[-3, 0, 1], prec)).unwrap()
}

fn s(p: u64, n: i64, prec: i64) -> PadicScalar {
    PadicScalar::from_int(p, n, prec)
}

// y^2 + 1 is irreducible mod 3; E = u^2 - 6u - 3 is Eisenstein
fn quartic(prec: i64) -> LocalField {
    build_field(LocalFieldSpec::from_ints(3, &[1, 0, 1], &[-3, -6, 1], prec)).unwrap()
}

// trace oracle: trace of the multiplication matrix
fn matrix_trace(x: &FieldElement) -> PadicScalar {
    x.mult_matrix().trace()
}

#[test]
fn trivial_extension() {
    let k = build_field(LocalFieldSpec::from_ints(5, &[-1, 1], &[-5, 1], 20)).unwrap();
    assert_eq!(k.degree(), 1);
    assert!(k.different().eq_to_prec(&k.one()));
    assert_eq!(k.uniformizer().valuation(), Val::exact_int(1));
}

#[test]
fn sqrt3_basics() {
    let k = sqrt3(20);
    assert_eq!((k.f(), k.e_ram(), k.degree()), (1, 2, 2));
    let pi = k.uniformizer();
    assert_eq!(pi.valuation(), Val::Exact(Rat::new(1, 2)));
    assert!(k.different().eq_to_prec(&pi.mul_int(&2.into())));
    assert_eq!(k.v_different(), Rat::new(1, 2));
    assert!(pi.mul(&pi).eq_to_prec(&k.from_int(3)));
    let one = k.one();
    let prod = one.add(&pi).mul(&one.sub(&pi));
    assert!(prod.eq_to_prec(&k.from_int(-2)));
    assert!(pi.add(&pi.neg()).is_zero());
    assert_eq!(k.from_int(3).valuation(), Val::exact_int(1));
    assert_eq!(pi.valuation_pi(), Val::exact_int(1));
}

#[test]
fn degree_bookkeeping() {
    let k = quartic(20);
    assert_eq!((k.f(), k.e_ram(), k.degree()), (2, 2, 4));
    let tr1 = k.one().trace();
    assert!(tr1.eq_to_prec(&s(3, 4, 20)));
}

#[test]
fn rejects_bad_presentations() {
    let reducible = build_field(LocalFieldSpec::from_ints(5, &[1, 0, 1], &[-5, 1], 20)).unwrap_err();
    assert_eq!(reducible.kind(), "domain");
    let not_eis = build_field(LocalFieldSpec::from_ints(3, &[-1, 1], &[-9, 0, 1], 20)).unwrap_err();
    assert_eq!(not_eis.kind(), "domain");
    let middle = build_field(LocalFieldSpec::from_ints(3, &[-1, 1], &[3, 1, 1], 20)).unwrap_err();
    assert_eq!(middle.kind(), "domain");
    let low = build_field(LocalFieldSpec::from_ints(3, &[-1, 1], &[-3, 0, 1], 1)).unwrap_err();
    assert_eq!(low.kind(), "precision");
}

#[test]
fn traces_match_matrix_oracle() {
    for k in [sqrt3(20), quartic(20), LocalField::cyclotomic(3, 2, 20).unwrap(), LocalField::cyclotomic(5, 1, 20).unwrap()] {
        for b in k.basis_elements() {
            assert!(b.trace().eq_to_prec(&matrix_trace(&b)), "{b}");
        }
        let tr1 = k.one().trace();
        assert!(tr1.eq_to_prec(&s(k.p(), k.degree() as i64, 20)));
    }
    assert!(sqrt3(20).uniformizer().trace().is_zero());
}

#[test]
fn cyclotomic_trace_of_pi() {
    for p in [3u64, 5, 7] {
        let k = LocalField::cyclotomic(p, 1, 20).unwrap();
        assert_eq!(k.degree() as u64, p - 1);
        let t = k.uniformizer().trace();
        assert!(t.eq_to_prec(&s(p, -(p as i64), 20)), "p={p}: {t}");
        let zeta = k.one().add(&k.uniformizer());
        assert!(zeta.trace().eq_to_prec(&s(p, -1, 20)));
    }
}

#[test]
fn residues() {
    let k = quartic(10);
    assert!(k.uniformizer().residue().unwrap().is_zero());
    let x = k.one().add(&k.uniformizer().mul(&k.unramified_generator()));
    assert_eq!(x.residue().unwrap().coords, vec![1, 0]);
    assert_eq!(k.unramified_generator().residue().unwrap().coords, vec![0, 1]);
    let bad = k.one().checked_div(&k.uniformizer()).unwrap();
    assert_eq!(bad.residue().unwrap_err().kind(), "domain");
}

#[test]
fn division_round_trip() {
    let k = quartic(30);
    let x = k.one().add(&k.unramified_generator()).add(&k.uniformizer().mul_int(&5.into()));
    let y = k.uniformizer().mul(&k.unramified_generator()).add(&k.from_int(3));
    let q = elem_arith(&x, &y, ArithOp::Div).unwrap();
    assert!(q.mul(&y).sub(&x).valuation().bound() >= Rat::from_integer(25));
    assert_eq!(elem_arith(&x, &k.zero(), ArithOp::Div).unwrap_err().kind(), "precision");
}

#[test]
fn different_two_ways() {
    for k in [sqrt3(20), quartic(20), LocalField::cyclotomic(3, 2, 20).unwrap()] {
        let pi = k.uniformizer();
        // Horner evaluation of E'(u) at π with coefficients in U
        let spec = k.spec();
        let e = k.e_ram();
        let u_elem = |row: &Vec<PadicScalar>| {
            let mut rows = vec![vec![PadicScalar::zero(k.p(), k.prec()); e]; k.f()];
            for (j, c) in row.iter().enumerate() {
                rows[j][0] = c.clone();
            }
            k.element(rows).unwrap()
        };
        let mut acc = k.zero();
        for i in (1..=e).rev() {
            acc = acc.mul(&pi).add(&u_elem(&spec.eisenstein_poly[i]).mul_int(&(i as i64).into()));
        }
        assert!(acc.eq_to_prec(&k.different()));
        assert!(k.v_different() >= Rat::new(e as i64 - 1, e as i64));
    }
    assert_eq!(LocalField::cyclotomic(3, 1, 20).unwrap().v_different(), Rat::new(1, 2));
    // wild: v = m - 1/(p-1) exceeds (e-1)/e
    assert_eq!(LocalField::cyclotomic(3, 2, 20).unwrap().v_different(), Rat::new(3, 2));
}

#[test]
fn conjugation_and_cyclotomic_automorphisms() {
    let k = sqrt3(20);
    let y = k.unramified_generator();
    let pi = k.uniformizer();
    let x = k.from_int(7).add(&pi.mul_int(&4.into()));
    let conj = apply_substitution(&x, &y, &pi.neg()).unwrap();
    assert!(conj.eq_to_prec(&k.from_int(7).sub(&pi.mul_int(&4.into()))));
    assert!(conj.trace().eq_to_prec(&x.trace()));
    assert!(apply_substitution(&x, &y, &pi).unwrap().eq_to_prec(&x));
    let bad = apply_substitution(&x, &y, &pi.mul_int(&2.into())).unwrap_err();
    assert_eq!(bad.kind(), "domain");

    let p = 5u64;
    let c = LocalField::cyclotomic(p, 1, 20).unwrap();
    let z = c.one().add(&c.uniformizer());
    let x = c.from_int(3).add(&z.pow(2)).sub(&z.pow(3).mul_int(&7.into()));
    for a in 2..p {
        let image = z.pow(a).sub(&c.one());
        let sx = apply_substitution(&x, &c.unramified_generator(), &image).unwrap();
        assert!(sx.trace().eq_to_prec(&x.trace()));
    }
}

#[test]
fn embedding_scales_trace() {
    let qp = LocalField::qp(3, 20).unwrap();
    let l = quartic(20);
    let emb = FieldMap::from_qp(&qp, &l).unwrap();
    assert_eq!(emb.relative_degree(), 4);
    let x = qp.from_int(11);
    let lx = emb.apply(&x).unwrap();
    assert!(lx.trace().eq_to_prec(&x.trace().mul_int(&4.into())));
    let m: Matrix<PadicScalar> = emb.matrix().unwrap();
    assert_eq!((m.rows(), m.cols()), (4, 1));
}

#[test]
fn log_in_ramified_field() {
    let k = sqrt3(30);
    let b = k.uniformizer().mul_int(&3.into());
    let t = k.one().add(&k.different().mul(&b));
    let l = field_log(&t).unwrap();
    let back = field_exp(&l).unwrap();
    assert!(back.sub(&t).valuation().bound() >= Rat::from_integer(25));
    assert_eq!(field_log(&k.uniformizer()).unwrap_err().kind(), "domain");
}

#[test]
fn json_round_trip() {
    let k = quartic(12);
    let back = LocalField::from_json(&k.to_json(), None, 50).unwrap();
    assert!(back == k);
    let x = k.unramified_generator().add(&k.uniformizer().mul_int(&5.into()));
    let y = back.element_from_json(&x.to_json(), "x").unwrap();
    assert!(y == x);
    let short = serde_json::json!({"p": 3, "unramified_poly": [-1, 1], "eisenstein_poly": [[-3], [0], [1]]});
    let k2 = LocalField::from_json(&short, None, 40).unwrap();
    assert_eq!((k2.e_ram(), k2.prec()), (2, 40));
    let bad = k2.element_from_json(&serde_json::json!({"coeffs": [[1]]}), "x").unwrap_err();
    assert!(bad.message().contains("coeffs[0]"), "{}", bad.message());
}

fn small_elem(k: &LocalField, cs: &[i64]) -> FieldElement {
    k.from_coords(cs.iter().map(|&c| s(k.p(), c, k.prec())).collect()).unwrap()
}

proptest! {
    #[test]
    fn valuation_is_multiplicative(a in prop::collection::vec(-40i64..40, 4), b in prop::collection::vec(-40i64..40, 4)) {
        let k = quartic(30);
        let (x, y) = (small_elem(&k, &a), small_elem(&k, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (vx, vy) = (x.valuation().exact().unwrap(), y.valuation().exact().unwrap());
        prop_assert_eq!(x.mul(&y).valuation(), Val::Exact(vx + vy));
        let vs = x.add(&y).valuation();
        prop_assert!(vs.bound() >= vx.min(vy));
        if vx != vy {
            prop_assert_eq!(vs, Val::Exact(vx.min(vy)));
        }
        prop_assert!(x.mul(&y).trace().eq_to_prec(&matrix_trace(&x.mul(&y))));
    }
}
