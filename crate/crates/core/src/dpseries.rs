//! Truncated divided-power series `Σ_{n<=N} c_n aⁿ/n!` over a local field,
//! with the Sen derivation `Θ = (1 + e a) d/da`.
//!
//! A truncation is treated as the polynomial it denotes: operations that
//! need the unknown coefficient `c_{N+1}` drop their top degree instead.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{convergence, domain, usage, Result};
use crate::field::{FieldElement, LocalField};
use crate::linalg::Matrix;
use crate::padic::binomial;
use crate::valuation::{fmt_rat, Rat};

/// Default truncation order.
pub const DEFAULT_TRUNC: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct DPSeries {
    e: FieldElement,
    coeffs: Vec<FieldElement>,
}

/// Coordinate changes between `G_π` and `G_a^♯`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transport {
    /// `a ↦ log(1 + e a)/e`.
    ToGsharp,
    /// `a ↦ (exp(e a) - 1)/e`.
    FromGsharp,
}

fn check_parameter(e: &FieldElement) -> Result<()> {
    if e.is_zero() {
        return Err(domain!("the parameter e must be nonzero"));
    }
    if !e.is_integral() {
        return Err(domain!("the parameter e must be integral, got valuation {}", e.valuation()));
    }
    Ok(())
}

impl DPSeries {
    pub fn new(e: FieldElement, coeffs: Vec<FieldElement>) -> Result<Self> {
        check_parameter(&e)?;
        if coeffs.is_empty() {
            return Err(usage!("a divided-power series needs at least the constant coefficient"));
        }
        if coeffs.iter().any(|c| c.field() != e.field()) {
            return Err(usage!("coefficients and e belong to different fields"));
        }
        Ok(DPSeries { e, coeffs })
    }

    pub fn zero(e: &FieldElement, trunc: usize) -> Self {
        DPSeries { e: e.clone(), coeffs: vec![e.field().zero(); trunc + 1] }
    }

    pub fn constant(e: &FieldElement, c: &FieldElement, trunc: usize) -> Self {
        let mut s = Self::zero(e, trunc);
        s.coeffs[0] = c.clone();
        s
    }

    pub fn one(e: &FieldElement, trunc: usize) -> Self {
        Self::constant(e, &e.field().one(), trunc)
    }

    /// The coordinate `a`.
    pub fn variable(e: &FieldElement, trunc: usize) -> Self {
        let mut s = Self::zero(e, trunc);
        if trunc >= 1 {
            s.coeffs[1] = e.field().one();
        }
        s
    }

    /// `t = 1 + e a`, the eigenvector `Θ t = e t`.
    pub fn t(e: &FieldElement, trunc: usize) -> Self {
        let mut s = Self::one(e, trunc);
        if trunc >= 1 {
            s.coeffs[1] = e.clone();
        }
        s
    }

    pub fn e(&self) -> &FieldElement {
        &self.e
    }

    pub fn field(&self) -> &LocalField {
        self.e.field()
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &FieldElement {
        &self.coeffs[n]
    }

    /// Advisory: every coefficient lies in `O_K`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_integral)
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        DPSeries { e: self.e.clone(), coeffs: self.coeffs[..=trunc.min(self.trunc())].to_vec() }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() || !self.e.eq_to_prec(&other.e) {
            return Err(usage!("series use different fields or different parameters e"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.trunc().min(other.trunc());
        Ok(DPSeries { e: self.e.clone(), coeffs: (0..=n).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.trunc().min(other.trunc());
        Ok(DPSeries { e: self.e.clone(), coeffs: (0..=n).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect() })
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        DPSeries { e: self.e.clone(), coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    /// Coefficientwise agreement to precision on the common truncation.
    pub fn eq_to_prec(&self, other: &Self) -> bool {
        let n = self.trunc().min(other.trunc());
        (0..=n).all(|i| self.coeffs[i].eq_to_prec(&other.coeffs[i]))
    }

    /// Smallest valuation lower bound of `self - other` over the common truncation.
    pub fn distance_valuation(&self, other: &Self) -> Rat {
        let n = self.trunc().min(other.trunc());
        (0..=n).map(|i| self.coeffs[i].sub(&other.coeffs[i]).valuation().bound()).min().expect("trunc >= 0")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e": self.e.to_json(),
            "trunc": self.trunc(),
            "coeffs": self.coeffs.iter().map(FieldElement::to_json).collect::<Vec<_>>(),
            "integral": self.is_integral(),
        })
    }

    /// Reads `{"e"?, "trunc"?, "coeffs": [...]}`. Missing `e` defaults to the
    /// field's `E'(π)`; a `trunc` larger than the data pads with zeros.
    pub fn from_json(field: &LocalField, v: &Value, trunc_override: Option<usize>) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| usage!("series: expected an object"))?;
        for k in map.keys() {
            if !["e", "trunc", "coeffs", "integral"].contains(&k.as_str()) {
                return Err(usage!("series: unknown key {k:?}"));
            }
        }
        let e = match map.get("e") {
            Some(ev) => field.element_from_json(ev, "series.e")?,
            None => field.different(),
        };
        let raw = map.get("coeffs").and_then(Value::as_array).ok_or_else(|| usage!("series.coeffs: expected an array"))?;
        let mut coeffs = raw
            .iter()
            .enumerate()
            .map(|(n, c)| field.element_from_json(c, &format!("series.coeffs[{n}]")))
            .collect::<Result<Vec<_>>>()?;
        let file_trunc = match map.get("trunc") {
            None => None,
            Some(t) => Some(t.as_u64().ok_or_else(|| usage!("series.trunc: expected a nonnegative integer"))? as usize),
        };
        let trunc = trunc_override.or(file_trunc).unwrap_or(coeffs.len().saturating_sub(1));
        coeffs.resize(trunc + 1, field.zero());
        DPSeries::new(e, coeffs)
    }
}

/// Product in the divided-power basis: `(f g)_n = Σ C(n, i) f_i g_{n-i}`.
pub fn dp_mul(f: &DPSeries, g: &DPSeries) -> Result<DPSeries> {
    f.compatible(g)?;
    let n = f.trunc().min(g.trunc());
    let coeffs = (0..=n)
        .map(|k| {
            (0..=k).fold(f.field().zero(), |acc, i| {
                acc.add(&f.coeffs[i].mul(&g.coeffs[k - i]).mul_int(&binomial(k as u64, i as u64)))
            })
        })
        .collect();
    Ok(DPSeries { e: f.e.clone(), coeffs })
}

/// `Θ f` with coefficients `c_{n+1} + e n c_n`; the result has truncation `N - 1`.
pub fn sen_theta(f: &DPSeries) -> DPSeries {
    let n = f.trunc();
    if n == 0 {
        return f.clone();
    }
    let coeffs = (0..n)
        .map(|k| f.coeffs[k + 1].add(&f.e.mul(&f.coeffs[k]).mul_int(&BigInt::from(k))))
        .collect();
    DPSeries { e: f.e.clone(), coeffs }
}

/// The solution of `Θ f = g` with `f(0) = 0`: `c_{n+1} = b_n - e n c_n`.
/// Agrees with `g` under [`sen_theta`] through degree `N - 1`.
pub fn solve_theta(g: &DPSeries) -> DPSeries {
    let n = g.trunc();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(g.field().zero());
    for k in 0..n {
        let next = g.coeffs[k].sub(&g.e.mul(&coeffs[k]).mul_int(&BigInt::from(k)));
        coeffs.push(next);
    }
    DPSeries { e: g.e.clone(), coeffs }
}

/// `(1/e) log(1 + e a)` in divided powers: `c_n = (-e)^(n-1) (n-1)!`.
pub fn log_t(e: &FieldElement, trunc: usize) -> Result<DPSeries> {
    check_parameter(e)?;
    let field = e.field();
    let mut coeffs = vec![field.zero()];
    let mut c = field.one();
    for n in 1..=trunc {
        coeffs.push(c.clone());
        c = c.mul(&e.neg()).mul_int(&BigInt::from(n));
    }
    Ok(DPSeries { e: e.clone(), coeffs })
}

/// Substitution `a ↦ a (1 + e b) + b`, the coaction of the group law
/// `a + b + e a b`: `c'_m = Σ_k c_{m+k} (1 + e b)^m b^k/k!`.
///
/// When `v(b) <= 0` the last `max(5, p)` terms of the constant coefficient
/// must fall below the working precision, otherwise the tail is not shrinking.
pub fn coaction(f: &DPSeries, b: &FieldElement) -> Result<DPSeries> {
    if b.field() != f.field() {
        return Err(usage!("coaction scalar lies in a different field"));
    }
    let n = f.trunc();
    let field = f.field();
    let mut weights = Vec::with_capacity(n + 1);
    let mut w = field.one();
    for k in 0..=n {
        if k > 0 {
            w = w.mul(b).div_int(&BigInt::from(k))?;
        }
        weights.push(w.clone());
    }
    if b.valuation().bound() <= Rat::from_integer(0) {
        let window = 5.max(field.p() as usize).min(n + 1);
        let target = Rat::from_integer(field.prec());
        for k in n + 1 - window..=n {
            let v = f.coeffs[k].mul(&weights[k]).valuation();
            if v.is_exact() && v.bound() < target {
                return Err(convergence!(
                    "coaction with v(b) = {} does not converge at truncation {n}: term {k} has valuation {v}, target {}",
                    b.valuation(),
                    fmt_rat(&target)
                ));
            }
        }
    }
    let scale = field.one().add(&f.e.mul(b));
    let mut scale_pow = field.one();
    let mut coeffs = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let s = (0..=n - m).fold(field.zero(), |acc, k| acc.add(&f.coeffs[m + k].mul(&weights[k])));
        coeffs.push(s.mul(&scale_pow));
        scale_pow = scale_pow.mul(&scale);
    }
    Ok(DPSeries { e: f.e.clone(), coeffs })
}

/// Partial Bell table `B[n][m]` for inner coefficients `phi[1..]` (divided-power basis).
fn bell_table(phi: &[FieldElement], n: usize, field: &LocalField) -> Vec<Vec<FieldElement>> {
    let mut b = vec![vec![field.zero(); n + 1]; n + 1];
    b[0][0] = field.one();
    for k in 1..=n {
        for m in 1..=k {
            let mut acc = field.zero();
            for j in 1..=k - m + 1 {
                let t = phi[j].mul(&b[k - j][m - 1]).mul_int(&binomial(k as u64 - 1, j as u64 - 1));
                acc = acc.add(&t);
            }
            b[k][m] = acc;
        }
    }
    b
}

/// Composes `f` with the coordinate change in `direction`.
pub fn gsharp_transport(f: &DPSeries, direction: Transport) -> Result<DPSeries> {
    let n = f.trunc();
    let field = f.field();
    let e = &f.e;
    let mut phi = vec![field.zero()];
    let mut c = field.one();
    for k in 1..=n {
        phi.push(c.clone());
        c = match direction {
            Transport::ToGsharp => c.mul(&e.neg()).mul_int(&BigInt::from(k)),
            Transport::FromGsharp => c.mul(e),
        };
    }
    if !phi.iter().all(FieldElement::is_integral) {
        return Err(convergence!("coordinate change has non-integral coefficients for this e"));
    }
    let bell = bell_table(&phi, n, field);
    let coeffs = (0..=n)
        .map(|k| (0..=k).fold(field.zero(), |acc, m| acc.add(&f.coeffs[m].mul(&bell[k][m]))))
        .collect();
    Ok(DPSeries { e: e.clone(), coeffs })
}

/// Matrix of `Θ` on polynomials of degree `<= N` in the basis `aⁿ/n!`:
/// `Θ(aⁿ/n!) = a^(n-1)/(n-1)! + e n aⁿ/n!`.
pub fn theta_matrix(e: &FieldElement, trunc: usize) -> Matrix<FieldElement> {
    let field = e.field();
    Matrix::from_fn(trunc + 1, trunc + 1, |r, c| {
        if r + 1 == c {
            field.one()
        } else if r == c {
            e.mul_int(&BigInt::from(c))
        } else {
            field.zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_field, LocalFieldSpec};
    use crate::padic::PadicScalar;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sqrt3(prec: i64) -> LocalField {
        build_field(LocalFieldSpec::from_ints(3, &[-1, 1], &[-3, 0, 1], prec)).unwrap()
    }

    fn random_elem(k: &LocalField, rng: &mut ChaCha8Rng, bound: i64) -> FieldElement {
        let coords = (0..k.degree()).map(|_| PadicScalar::from_int(k.p(), rng.gen_range(-bound..=bound), k.prec())).collect();
        k.from_coords(coords).unwrap()
    }

    fn random_series(e: &FieldElement, n: usize, rng: &mut ChaCha8Rng) -> DPSeries {
        let k = e.field();
        DPSeries::new(e.clone(), (0..=n).map(|_| random_elem(k, rng, 50)).collect()).unwrap()
    }

    #[test]
    fn products() {
        let k = sqrt3(30);
        let e = k.different();
        let a = DPSeries::variable(&e, 6);
        let a2 = dp_mul(&a, &a).unwrap();
        assert!(a2.coeff(2).eq_to_prec(&k.from_int(2)));
        assert!(a2.coeff(1).is_zero());
        let f = random_series(&e, 6, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(dp_mul(&f, &DPSeries::one(&e, 6)).unwrap().eq_to_prec(&f));
        let t = DPSeries::t(&e, 6);
        let t2 = dp_mul(&t, &t).unwrap();
        assert!(t2.coeff(0).eq_to_prec(&k.one()));
        assert!(t2.coeff(1).eq_to_prec(&e.mul_int(&2.into())));
        assert!(t2.coeff(2).eq_to_prec(&e.mul(&e).mul_int(&2.into())));
        assert!(t2.coeff(3).is_zero());
    }

    #[test]
    fn theta_examples() {
        let k = sqrt3(30);
        let e = k.different();
        assert!(sen_theta(&DPSeries::one(&e, 8)).coeffs().iter().all(FieldElement::is_zero));
        let ta = sen_theta(&DPSeries::variable(&e, 8));
        assert!(ta.eq_to_prec(&DPSeries::t(&e, 7)));
        let t = DPSeries::t(&e, 8);
        assert!(sen_theta(&t).eq_to_prec(&t.scale(&e)));
        assert_eq!(sen_theta(&t).trunc(), 7);
    }

    #[test]
    fn solve_examples() {
        let k = sqrt3(30);
        let e = k.different();
        assert!(solve_theta(&DPSeries::zero(&e, 8)).coeffs().iter().all(FieldElement::is_zero));
        let sol = solve_theta(&DPSeries::one(&e, 12));
        // oracle: (-e)^(n-1) (n-1)! computed directly
        for n in 1..=12u64 {
            let expected = e.neg().pow(n - 1).mul_int(&crate::padic::factorial(n - 1));
            assert!(sol.coeff(n as usize).eq_to_prec(&expected), "n={n}");
        }
        assert!(sol.eq_to_prec(&log_t(&e, 12).unwrap()));
        let a = solve_theta(&DPSeries::t(&e, 10));
        assert!(a.eq_to_prec(&DPSeries::variable(&e, 10)));
    }

    #[test]
    fn log_t_leading_terms() {
        let k = sqrt3(30);
        let e = k.different();
        let l = log_t(&e, 10).unwrap();
        assert!(l.coeff(1).eq_to_prec(&k.one()));
        assert!(l.coeff(2).eq_to_prec(&e.neg()));
        assert!(sen_theta(&l).eq_to_prec(&DPSeries::one(&e, 9)));
    }

    #[test]
    fn coaction_examples() {
        let k = sqrt3(30);
        let e = k.different();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_series(&e, 10, &mut rng);
        assert!(coaction(&f, &k.zero()).unwrap().eq_to_prec(&f));
        let b = random_elem(&k, &mut rng, 20).mul_int(&3.into());
        let t = DPSeries::t(&e, 10);
        let expected = t.scale(&k.one().add(&e.mul(&b)));
        assert!(coaction(&t, &b).unwrap().eq_to_prec(&expected));
    }

    #[test]
    fn coaction_log_shift() {
        let k = sqrt3(40);
        let e = k.different();
        let b = k.uniformizer().mul_int(&3.into()).add(&k.from_int(9));
        // the tail beyond degree 16 is carried until it drops below precision
        let l = log_t(&e, 16).unwrap();
        let long = log_t(&e, 80).unwrap();
        let shifted = coaction(&long, &b).unwrap().truncate(16).sub(&l).unwrap();
        let c = crate::field::field_log(&k.one().add(&e.mul(&b))).unwrap().checked_div(&e).unwrap();
        assert!(shifted.coeff(0).sub(&c).valuation().bound() >= Rat::from_integer(30));
        for n in 1..=16 {
            assert!(shifted.coeff(n).valuation().bound() >= Rat::from_integer(30));
        }
    }

    #[test]
    fn coaction_rejects_divergent_tail() {
        let k = LocalField::qp(5, 20).unwrap();
        let e = k.one();
        let f = DPSeries::new(e.clone(), (0..=12).map(|_| k.one()).collect()).unwrap();
        let b = k.from_scalar(&PadicScalar::from_rational(5, 1, 5, 20).unwrap());
        assert_eq!(coaction(&f, &b).unwrap_err().kind(), "convergence");
    }

    #[test]
    fn transport_examples() {
        let k = sqrt3(30);
        let e = k.different();
        let a = DPSeries::variable(&e, 10);
        let to = gsharp_transport(&a, Transport::ToGsharp).unwrap();
        assert!(to.eq_to_prec(&log_t(&e, 10).unwrap()));
        let from = gsharp_transport(&a, Transport::FromGsharp).unwrap();
        for n in 1..=10u64 {
            assert!(from.coeff(n as usize).eq_to_prec(&e.pow(n - 1)));
        }
        let f = random_series(&e, 10, &mut ChaCha8Rng::seed_from_u64(3));
        let round = gsharp_transport(&gsharp_transport(&f, Transport::ToGsharp).unwrap(), Transport::FromGsharp).unwrap();
        assert!(round.eq_to_prec(&f));
    }

    #[test]
    fn theta_matrix_matches_sen_theta_below_top() {
        let k = sqrt3(30);
        let e = k.different();
        let f = random_series(&e, 8, &mut ChaCha8Rng::seed_from_u64(4));
        let v = theta_matrix(&e, 8).mul_vec(f.coeffs());
        let th = sen_theta(&f);
        for n in 0..8 {
            assert!(v[n].eq_to_prec(th.coeff(n)));
        }
    }

    #[test]
    fn json_round_trip() {
        let k = sqrt3(20);
        let f = random_series(&k.different(), 5, &mut ChaCha8Rng::seed_from_u64(5));
        let back = DPSeries::from_json(&k, &f.to_json(), None).unwrap();
        assert!(back == f);
        let one = DPSeries::from_json(&k, &json!({"coeffs": [1], "trunc": 4}), None).unwrap();
        assert_eq!(one.trunc(), 4);
        assert!(one.e().eq_to_prec(&k.different()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn exactness_and_leibniz(seed in any::<u64>()) {
            let k = sqrt3(30);
            let e = k.different();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_series(&e, 10, &mut rng);
            let sol = solve_theta(&g);
            prop_assert!(sol.is_integral());
            prop_assert!(sen_theta(&sol).eq_to_prec(&g.truncate(9)));
            let f = random_series(&e, 10, &mut rng);
            let lhs = sen_theta(&dp_mul(&f, &g).unwrap());
            let rhs = dp_mul(&sen_theta(&f), &g).unwrap().add(&dp_mul(&f, &sen_theta(&g)).unwrap()).unwrap();
            prop_assert!(lhs.eq_to_prec(&rhs));
        }

        #[test]
        fn coaction_is_an_action(seed in any::<u64>()) {
            let k = sqrt3(30);
            let e = k.different();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_series(&e, 8, &mut rng);
            // products stay exact when deg f + deg g <= N
            let low = |s: DPSeries| DPSeries::new(s.e().clone(), (0..=8).map(|n| if n <= 4 { s.coeff(n).clone() } else { k.zero() }).collect()).unwrap();
            let g = low(random_series(&e, 8, &mut rng));
            let f_low = low(f.clone());
            let b1 = random_elem(&k, &mut rng, 30).mul_int(&3.into());
            let b2 = random_elem(&k, &mut rng, 30).mul_int(&3.into());
            let composed = b1.add(&b2).add(&e.mul(&b1).mul(&b2));
            let lhs = coaction(&coaction(&f, &b1).unwrap(), &b2).unwrap();
            let rhs = coaction(&f, &composed).unwrap();
            prop_assert!(lhs.distance_valuation(&rhs) >= Rat::from_integer(20));
            let prod = coaction(&dp_mul(&f_low, &g).unwrap(), &b1).unwrap();
            let split = dp_mul(&coaction(&f_low, &b1).unwrap(), &coaction(&g, &b1).unwrap()).unwrap();
            prop_assert!(prod.distance_valuation(&split) >= Rat::from_integer(20));
        }
    }
}
