use super::*;
use crate::field::{build_field, LocalFieldSpec};
use crate::linalg::determinant;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sqrt3(prec: i64) -> LocalField {
    build_field(LocalFieldSpec::from_ints(3, &[-1, 1], &[-3, 0, 1], prec)).unwrap()
}

fn int_matrix(k: &LocalField, rows: &[&[i64]]) -> Matrix<FieldElement> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| k.from_int(x)).collect()).collect()).unwrap()
}

fn diag_e(k: &LocalField, weights: &[i64]) -> SenModule {
    let e = k.different();
    SenModule::new(Matrix::diagonal(&weights.iter().map(|&n| e.mul_int(&n.into())).collect::<Vec<_>>())).unwrap()
}

fn nilpotent(k: &LocalField) -> SenModule {
    SenModule::new(int_matrix(k, &[&[0, -1], &[0, 0]])).unwrap()
}

#[test]
fn char_poly_examples() {
    let k = sqrt3(30);
    let cp = SenModule::new(int_matrix(&k, &[&[0, 0], &[0, 0]])).unwrap().char_poly();
    assert!(cp.coeffs()[0].is_zero() && cp.coeffs()[1].is_zero());
    let cp = nilpotent(&k).char_poly();
    assert!(cp.coeffs()[0].is_zero() && cp.coeffs()[1].is_zero());
    let e = k.different();
    let cp = diag_e(&k, &[1, 2]).char_poly();
    // (T - e)(T - 2e) = T^2 - 3e T + 2e^2
    assert!(cp.coeffs()[1].eq_to_prec(&e.mul_int(&(-3).into())));
    assert!(cp.coeffs()[0].eq_to_prec(&e.mul(&e).mul_int(&2.into())));
}

#[test]
fn classifier_examples() {
    let k = sqrt3(30);
    assert!(diag_e(&k, &[0, 1, -3]).nearly_ht_test().unwrap().verdict);
    let id = SenModule::new(Matrix::identity(2, &k.one())).unwrap();
    let r = id.nearly_ht_test().unwrap();
    assert!(!r.verdict);
    assert_eq!(r.offending_slopes, vec![Rat::from_integer(0); 2]);
    assert!(nilpotent(&k).nearly_ht_test().unwrap().verdict);

    let q3 = LocalField::qp(3, 30).unwrap();
    let third = q3.from_scalar(&PadicScalar::from_rational(3, 1, 3, 30).unwrap());
    let m = SenModule::new(Matrix::scalar(2, &third)).unwrap();
    let r = m.nearly_ht_test().unwrap();
    assert!(!r.verdict);
    assert!(r.offending_slopes.iter().all(|s| *s == Rat::from_integer(-3)));
}

#[test]
fn weights() {
    let k = sqrt3(30);
    let w = diag_e(&k, &[2, 2, 5]).ht_weights(Some((0, 6)), Exec::default()).unwrap();
    assert_eq!(w, vec![(2, 2), (5, 1)]);
    let w = nilpotent(&k).ht_weights(Some((-1, 1)), Exec::Sequential).unwrap();
    assert_eq!(w, vec![(0, 2)]);
    let half = k.different().checked_div(&k.from_int(2)).unwrap();
    let m = SenModule::new(Matrix::scalar(2, &half)).unwrap();
    assert!(m.nearly_ht_test().unwrap().verdict);
    assert!(m.ht_weights(Some((0, 3)), Exec::default()).unwrap().is_empty());
    let w = diag_e(&k, &[2, 2, 5]).ht_weights(None, Exec::default()).unwrap();
    assert_eq!(w, vec![(2, 2), (5, 1)]);
    assert_eq!(diag_e(&k, &[1]).ht_weights(Some((3, 1)), Exec::default()).unwrap_err().kind(), "usage");
}

#[test]
fn cohomology_examples() {
    let k = sqrt3(30);
    let zero = SenModule::new(int_matrix(&k, &[&[0, 0], &[0, 0]])).unwrap();
    assert_eq!(zero.cohomology().unwrap().dims(), (2, 2));
    let c = nilpotent(&k).cohomology().unwrap();
    assert_eq!(c.dims(), (1, 1));
    assert!(c.h0[0][0].eq_to_prec(&k.one()) && c.h0[0][1].is_zero());
    let q5 = LocalField::qp(5, 30).unwrap();
    let inv = SenModule::new(int_matrix(&q5, &[&[1, 7], &[0, 1]])).unwrap();
    assert_eq!(inv.cohomology().unwrap().dims(), (0, 0));
}

#[test]
fn twists() {
    let k = sqrt3(30);
    let e = k.different();
    let t = SenModule::bk(&k, 3);
    assert!(t.theta().get(0, 0).eq_to_prec(&e.mul_int(&3.into())));
    let sum = SenModule::bk(&k, 2).tensor(&SenModule::bk(&k, -5)).unwrap();
    assert!(sum.theta().get(0, 0).eq_to_prec(SenModule::bk(&k, -3).theta().get(0, 0)));
    assert!(SenModule::bk(&k, 4).dual().theta().get(0, 0).eq_to_prec(SenModule::bk(&k, -4).theta().get(0, 0)));
    assert!(SenModule::bk(&k, 0).bk_twist(6).theta().get(0, 0).eq_to_prec(t.bk_twist(3).theta().get(0, 0)));
}

#[test]
fn operator_series_examples() {
    let k = sqrt3(30);
    let e = k.different();
    let m = diag_e(&k, &[0, 2, -1]);
    let s0 = m.operator_series(&k.zero(), Exec::default()).unwrap();
    assert!(s0.sub(&Matrix::identity(3, &k.one())).is_zero());
    let b = k.uniformizer().mul_int(&3.into()).add(&k.from_int(3));
    let s = m.operator_series(&b, Exec::default()).unwrap();
    let t = k.one().add(&e.mul(&b));
    assert!(s.get(0, 0).eq_to_prec(&k.one()));
    assert!(s.get(1, 1).eq_to_prec(&t.mul(&t)));
    assert!(s.get(2, 2).mul(&t).sub(&k.one()).valuation().bound() >= Rat::from_integer(25));
    let id = SenModule::new(Matrix::identity(2, &k.one())).unwrap();
    assert_eq!(id.operator_series(&b, Exec::default()).unwrap_err().kind(), "domain");
}

#[test]
fn descent_matrix() {
    let q = LocalField::qp(3, 30).unwrap();
    let m = SenModule::bk(&q, 4);
    let chi = PadicScalar::from_int(3, 10, 30);
    let d = m.semilinear_descent_matrix(&chi, Exec::default()).unwrap();
    assert!(d.get(0, 0).eq_to_prec(&q.from_int(10_000)));
    let one = m.semilinear_descent_matrix(&PadicScalar::one(3, 30), Exec::default()).unwrap();
    assert!(one.get(0, 0).eq_to_prec(&q.one()));
    let bad = m.semilinear_descent_matrix(&PadicScalar::from_int(3, 2, 30), Exec::default()).unwrap_err();
    assert_eq!(bad.kind(), "domain");
    assert!(bad.message().contains("alpha"));
    let mm = SenModule::new(int_matrix(&q, &[&[1, 3], &[0, -2]])).unwrap();
    let (c1, c2) = (PadicScalar::from_int(3, 4, 30), PadicScalar::from_int(3, 28, 30));
    let lhs = mm.semilinear_descent_matrix(&c1, Exec::default()).unwrap().mul(&mm.semilinear_descent_matrix(&c2, Exec::default()).unwrap());
    let rhs = mm.semilinear_descent_matrix(&c1.mul_ref(&c2), Exec::default()).unwrap();
    assert!(lhs.sub(&rhs).min_valuation().bound() >= Rat::from_integer(26));
}

#[test]
fn fermat_identity_mod_maximal_ideal() {
    for k in [sqrt3(20), LocalField::qp(5, 20).unwrap(), LocalField::cyclotomic(3, 1, 20).unwrap()] {
        let p = k.p() as usize;
        let e = k.different();
        let mut lhs = Poly::new(vec![k.zero(); p + 1]);
        let mut c = lhs.coeffs().to_vec();
        c[p] = k.one();
        c[1] = e.pow(p as u64 - 1).neg();
        lhs = Poly::new(c);
        let mut rhs = Poly::new(vec![k.one()]);
        for i in 0..p {
            rhs = rhs.mul(&Poly::new(vec![e.mul_int(&(-(i as i64)).into()), k.one()]));
        }
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert!(a.sub(b).valuation().bound() > Rat::from_integer(0));
        }
    }
}

// Res_S(χ_Θ(S), t - S^p + e^(p-1) S) evaluated at t through a Sylvester determinant
fn resultant_char_q(m: &SenModule, t: i64) -> FieldElement {
    let k = m.field();
    let p = k.p() as usize;
    let a = m.char_poly().into_coeffs();
    let d = a.len() - 1;
    let mut b = vec![k.zero(); p + 1];
    b[0] = k.from_int(t);
    b[1] = m.e().pow(p as u64 - 1);
    b[p] = k.from_int(-1);
    let n = d + p;
    let syl = Matrix::from_fn(n, n, |r, c| {
        if r < p {
            // row r: coefficients of S^r·A, descending
            let deg = c as isize - r as isize;
            if deg >= 0 && (deg as usize) <= d { a[d - deg as usize].clone() } else { k.zero() }
        } else {
            let r = r - p;
            let deg = c as isize - r as isize;
            if deg >= 0 && (deg as usize) <= p { b[p - deg as usize].clone() } else { k.zero() }
        }
    });
    determinant(&syl).unwrap()
}

fn random_nearly_ht(k: &LocalField, d: usize, rng: &mut ChaCha8Rng) -> SenModule {
    let e = k.different();
    let pi = k.uniformizer();
    let theta = Matrix::from_fn(d, d, |r, c| {
        let pert = pi.mul_int(&rng.gen_range(-5i64..=5).into()).mul_int(&3.into());
        if r == c {
            e.mul_int(&rng.gen_range(-3i64..=3).into()).add(&pert)
        } else if r < c {
            k.from_int(rng.gen_range(-4..=4)).add(&pert)
        } else {
            pert
        }
    });
    SenModule::new(theta).unwrap()
}

#[test]
fn resultant_oracle_agrees() {
    let k = sqrt3(40);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 1..=3 {
        let m = random_nearly_ht(&k, d, &mut rng);
        let cq = Poly::new(char_poly(&m.fermat_operator()));
        for t in 0..=d as i64 {
            let direct = cq.eval(&k.from_int(t));
            let res = resultant_char_q(&m, t);
            assert!(direct.sub(&res).valuation().bound() >= Rat::from_integer(20), "d={d} t={t}");
        }
    }
}

#[test]
fn json_round_trip() {
    let k = sqrt3(20);
    let m = nilpotent(&k);
    let back = SenModule::from_json(&k, &m.to_json()).unwrap();
    assert!(back.theta().sub(m.theta()).is_zero());
    let err = SenModule::from_json(&k, &json!({"theta": [[1, 2], [3]]})).unwrap_err();
    assert_eq!(err.kind(), "usage");
    assert!(err.message().contains("theta[1]"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn classifier_invariances(seed in any::<u64>(), twist in -4i64..4) {
        let k = sqrt3(40);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(1..=3);
        let m = random_nearly_ht(&k, d, &mut rng);
        let verdict = m.nearly_ht_test().unwrap().verdict;
        prop_assert!(verdict);
        prop_assert_eq!(m.bk_twist(twist).nearly_ht_test().unwrap().verdict, verdict);
        let p_mat = Matrix::from_fn(d, d, |r, c| if r == c { k.one() } else if r < c { k.from_int(rng.gen_range(-3..=3)) } else { k.zero() });
        let conj = p_mat.mul(m.theta()).mul(&crate::linalg::inverse(&p_mat).unwrap());
        prop_assert!(SenModule::new(conj).unwrap().nearly_ht_test().unwrap().verdict);
        let (h0, h1) = m.cohomology().unwrap().dims();
        prop_assert_eq!(h0, h1);
    }

    #[test]
    fn group_law(seed in any::<u64>()) {
        let k = sqrt3(40);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(1..=3);
        let m = random_nearly_ht(&k, d, &mut rng);
        let e = k.different();
        let rb = |rng: &mut ChaCha8Rng| k.from_int(3 * rng.gen_range(-20..=20)).add(&k.uniformizer().mul_int(&(3 * rng.gen_range(-20i64..=20)).into()));
        let (b1, b2) = (rb(&mut rng), rb(&mut rng));
        let s1 = m.operator_series(&b1, Exec::default()).unwrap();
        let s2 = m.operator_series(&b2, Exec::default()).unwrap();
        let s12 = m.operator_series(&b1.add(&b2).add(&e.mul(&b1).mul(&b2)), Exec::default()).unwrap();
        prop_assert!(s1.mul(&s2).sub(&s12).min_valuation().bound() >= Rat::from_integer(36));
    }
}
