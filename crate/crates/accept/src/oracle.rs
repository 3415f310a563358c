//! Independent recomputations used as ground truth by the criteria.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use senlab_core::dpseries::DPSeries;
use senlab_core::field::{FieldElement, LocalField};
use senlab_core::linalg::{determinant, Matrix};
use senlab_core::padic::PadicScalar;
use senlab_core::senmod::SenModule;
use senlab_core::{Rat, Val};

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `(-e)^(n-1) (n-1)!`, the divided-power coefficients of `(1/e) log(1 + e a)`.
pub fn log_coefficient(e: &FieldElement, n: u64) -> FieldElement {
    let mut c = e.field().one();
    for _ in 1..n {
        c = c.mul(&e.neg());
    }
    c.mul_int(&factorial(n - 1))
}

/// `Res_S(char Θ (S), t - S^p + e^(p-1) S)` as a Sylvester determinant; equals
/// `char(Θ^p - e^(p-1) Θ)(t)` because the characteristic polynomial is monic.
pub fn resultant_char_q(m: &SenModule, t: i64) -> FieldElement {
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
        let (coeffs, deg_max, shift) = if r < p { (&a, d, r) } else { (&b, p, r - p) };
        let deg = c as isize - shift as isize;
        if deg >= 0 && (deg as usize) <= deg_max {
            coeffs[deg_max - deg as usize].clone()
        } else {
            k.zero()
        }
    });
    determinant(&syl).expect("square Sylvester matrix")
}

/// Trace of the companion matrix of a monic integer polynomial (ascending coefficients).
pub fn companion_trace(monic: &[i64]) -> i64 {
    let d = monic.len() - 1;
    // companion matrix: ones on the subdiagonal, last column -c_0..-c_{d-1}
    (0..d).map(|i| if i == d - 1 { -monic[d - 1] } else { 0 }).sum()
}

/// `Φ_p` in ascending coefficients.
pub fn cyclotomic_poly(p: u64) -> Vec<i64> {
    vec![1; p as usize]
}

pub fn random_integral(k: &LocalField, rng: &mut ChaCha8Rng, bound: i64) -> FieldElement {
    let coords: Vec<PadicScalar> = (0..k.degree()).map(|_| PadicScalar::from_int(k.p(), rng.gen_range(-bound..=bound), k.prec())).collect();
    k.from_coords(coords).expect("coordinates have field degree")
}

/// A random element of valuation at least 1.
pub fn random_admissible(k: &LocalField, rng: &mut ChaCha8Rng) -> FieldElement {
    let p = k.from_int(k.p() as i64);
    loop {
        let b = random_integral(k, rng, 30).mul(&p);
        if !b.is_zero() {
            return b;
        }
    }
}

pub fn random_series(e: &FieldElement, trunc: usize, rng: &mut ChaCha8Rng) -> DPSeries {
    let k = e.field();
    DPSeries::new(e.clone(), (0..=trunc).map(|_| random_integral(k, rng, 50)).collect()).expect("integral coefficients")
}

/// Integer Hodge-Tate weights on the diagonal with `3π`-small perturbations:
/// `Θ ≡ e·diag(n_i) + nilpotent` modulo a deep ideal, hence nearly Hodge-Tate.
pub fn random_nearly_ht(k: &LocalField, d: usize, rng: &mut ChaCha8Rng) -> SenModule {
    let e = k.different();
    let small = k.uniformizer().mul_int(&BigInt::from(k.p()));
    let theta = Matrix::from_fn(d, d, |r, c| {
        let pert = small.mul_int(&BigInt::from(rng.gen_range(-5i64..=5)));
        if r == c {
            e.mul_int(&BigInt::from(rng.gen_range(-3i64..=3))).add(&pert)
        } else if r < c {
            k.from_int(rng.gen_range(-4..=4)).add(&pert)
        } else {
            pert
        }
    });
    SenModule::new(theta).expect("square matrix over one field")
}

pub fn random_int_matrix(k: &LocalField, d: usize, rng: &mut ChaCha8Rng) -> Matrix<FieldElement> {
    Matrix::from_fn(d, d, |_, _| random_integral(k, rng, 9))
}

/// `P D P^{-1}` with `P` unipotent upper triangular, so the rank of `D` is exact.
pub fn conjugated_diagonal(k: &LocalField, diag: &[i64], rng: &mut ChaCha8Rng) -> Matrix<FieldElement> {
    let d = diag.len();
    let p = Matrix::from_fn(d, d, |r, c| if r == c { k.one() } else if r < c { k.from_int(rng.gen_range(-3..=3)) } else { k.zero() });
    let dm = Matrix::diagonal(&diag.iter().map(|&x| k.from_int(x)).collect::<Vec<_>>());
    let pinv = senlab_core::linalg::inverse(&p).expect("unipotent");
    p.mul(&dm).mul(&pinv)
}

pub fn min_val<'a, I: IntoIterator<Item = &'a FieldElement>>(xs: I) -> Val {
    xs.into_iter().map(FieldElement::valuation).reduce(Val::min).unwrap_or(Val::AtLeast(Rat::from_integer(i64::MAX / 4)))
}

pub fn scalar_min_val<'a, I: IntoIterator<Item = &'a PadicScalar>>(xs: I) -> Val {
    xs.into_iter().map(PadicScalar::val).reduce(Val::min).unwrap_or(Val::AtLeast(Rat::from_integer(i64::MAX / 4)))
}
