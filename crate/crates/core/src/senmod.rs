//! Sen modules `(M, Θ)`: a finite-dimensional `K`-space with an endomorphism,
//! where `Θ` plays the role of `Θ_π` (the classical Sen operator is `Θ/e`).
//!
//! Sign convention: `Θ` acts on divided-power series as `(1 + e a) d/da`.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{domain, usage, Result};
use crate::exec::Exec;
use crate::field::{FieldElement, LocalField};
use crate::linalg::{char_poly, row_reduce, Matrix, Poly};
use crate::padic::{NewtonPolygon, PadicScalar};
use crate::series::{ConvergenceMonitor, Step};
use crate::valuation::{fmt_rat, Rat, Val};

#[derive(Clone, Debug)]
pub struct SenModule {
    e: FieldElement,
    theta: Matrix<FieldElement>,
}

/// Outcome of the nearly Hodge-Tate test on `Q = Θ^p - e^(p-1) Θ`.
#[derive(Clone, Debug)]
pub struct ClassifierReport {
    pub verdict: bool,
    /// Characteristic polynomial of `Q`, ascending and monic.
    pub char_poly: Vec<FieldElement>,
    pub polygon: NewtonPolygon,
    /// Root valuations `<= 0` (eigenvalues of `Q` that are not topologically nilpotent).
    pub offending_slopes: Vec<Rat>,
}

impl ClassifierReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "char_poly": self.char_poly.iter().map(FieldElement::to_json).collect::<Vec<_>>(),
            "polygon": self.polygon.to_json(),
            "slopes": self.polygon.slope_multiset().iter().map(fmt_rat).collect::<Vec<_>>(),
            "offending_slopes": self.offending_slopes.iter().map(fmt_rat).collect::<Vec<_>>(),
        })
    }
}

/// `H^0 = ker Θ` and `H^1 = coker Θ`.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub h0: Vec<Vec<FieldElement>>,
    /// Standard basis vectors whose classes span `coker Θ`.
    pub h1: Vec<Vec<FieldElement>>,
}

impl Cohomology {
    pub fn dims(&self) -> (usize, usize) {
        (self.h0.len(), self.h1.len())
    }

    pub fn to_json(&self) -> Value {
        let enc = |vs: &Vec<Vec<FieldElement>>| {
            vs.iter().map(|v| v.iter().map(FieldElement::to_json).collect::<Vec<_>>()).collect::<Vec<_>>()
        };
        json!({"h0": enc(&self.h0), "h1": enc(&self.h1), "dims": [self.h0.len(), self.h1.len()]})
    }
}

/// Default rank-certification floor: half the working precision.
fn rank_floor(field: &LocalField) -> Rat {
    Rat::new(field.prec(), 2)
}

impl SenModule {
    /// Module with the field's own parameter `e = E'(π)`.
    pub fn new(theta: Matrix<FieldElement>) -> Result<Self> {
        if !theta.is_square() || theta.rows() == 0 {
            return Err(usage!("theta must be a nonempty square matrix, got {}x{}", theta.rows(), theta.cols()));
        }
        let field = theta.get(0, 0).field().clone();
        if theta.entries().iter().any(|x| x.field() != &field) {
            return Err(usage!("theta mixes elements of different fields"));
        }
        Ok(SenModule { e: field.different(), theta })
    }

    /// Replaces the parameter `e` by another nonzero integral element.
    pub fn with_parameter(mut self, e: FieldElement) -> Result<Self> {
        if e.field() != self.field() || e.is_zero() || !e.is_integral() {
            return Err(usage!("parameter e must be a nonzero integral element of the module's field"));
        }
        self.e = e;
        Ok(self)
    }

    /// The rank-one Breuil-Kisin twist `{n}` with `Θ = e n`.
    pub fn bk(field: &LocalField, n: i64) -> Self {
        let e = field.different();
        SenModule { theta: Matrix::scalar(1, &e.mul_int(&BigInt::from(n))), e }
    }

    pub fn field(&self) -> &LocalField {
        self.e.field()
    }

    pub fn e(&self) -> &FieldElement {
        &self.e
    }

    pub fn dim(&self) -> usize {
        self.theta.rows()
    }

    pub fn theta(&self) -> &Matrix<FieldElement> {
        &self.theta
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() || !self.e.eq_to_prec(&other.e) {
            return Err(usage!("modules live over different fields or parameters"));
        }
        Ok(())
    }

    /// Monic characteristic polynomial of `Θ` (division-free).
    pub fn char_poly(&self) -> Poly<FieldElement> {
        Poly::new(char_poly(&self.theta))
    }

    /// `Q = Θ^p - e^(p-1) Θ`.
    pub fn fermat_operator(&self) -> Matrix<FieldElement> {
        let p = self.field().p();
        let ep = self.e.pow(p - 1);
        self.theta.pow(p as u32).sub(&self.theta.scale(&ep))
    }

    /// Nearly Hodge-Tate iff every non-leading coefficient of `char(Q)` has
    /// positive valuation, i.e. every root of `char(Q)` lies in the maximal ideal.
    pub fn nearly_ht_test(&self) -> Result<ClassifierReport> {
        let cq = char_poly(&self.fermat_operator());
        let vals: Vec<Val> = cq.iter().map(FieldElement::valuation).collect();
        let polygon = NewtonPolygon::from_valuations(&vals)?;
        let zero = Rat::from_integer(0);
        let d = self.dim();
        let verdict = if vals[..d].iter().all(|v| v.bound() > zero) {
            true
        } else if vals[..d].iter().any(|v| v.is_exact() && v.bound() <= zero) {
            false
        } else {
            return Err(crate::error::precision!(
                "nearly Hodge-Tate verdict undecided: a coefficient of char(Q) is zero only to valuation <= 0; raise the working precision"
            ));
        };
        let offending_slopes = polygon.slope_multiset().into_iter().filter(|s| *s <= zero).collect();
        Ok(ClassifierReport { verdict, char_poly: cq, polygon, offending_slopes })
    }

    fn require_nearly_ht(&self) -> Result<()> {
        if !self.nearly_ht_test()?.verdict {
            return Err(domain!(
                "module is not nearly Hodge-Tate: Θ^p - e^(p-1)Θ is not topologically nilpotent"
            ));
        }
        Ok(())
    }

    /// Search window `[-B, B]` for integer weights, `B = d p^(k+1)` with `k`
    /// the largest finite root valuation of `char(Θ/e)` rounded up.
    pub fn default_weight_range(&self) -> Result<(i64, i64)> {
        let scaled = self.theta.map(|x| x.checked_div(&self.e).expect("e is nonzero"));
        let cp = char_poly(&scaled);
        let vals: Vec<Val> = cp.iter().map(FieldElement::valuation).collect();
        let polygon = NewtonPolygon::from_valuations(&vals)?;
        let top = polygon.slope_multiset().into_iter().filter(|s| *s >= Rat::from_integer(0)).max();
        let k = top.map_or(0, |s| s.ceil().to_integer()).clamp(0, 6) as u32;
        let b = (self.dim() as i64) * (self.field().p() as i64).pow(k + 1);
        Ok((-b, b))
    }

    /// Generalized multiplicity `d - rank((Θ - e n)^d)` of each integer weight
    /// `n` in the range, listing only those with positive multiplicity.
    pub fn ht_weights(&self, range: Option<(i64, i64)>, exec: Exec) -> Result<Vec<(i64, usize)>> {
        self.require_nearly_ht()?;
        let (lo, hi) = match range {
            Some(r) => r,
            None => self.default_weight_range()?,
        };
        if lo > hi {
            return Err(usage!("empty weight range [{lo}, {hi}]"));
        }
        let d = self.dim();
        let floor = rank_floor(self.field());
        let ns: Vec<i64> = (lo..=hi).collect();
        let mults = exec.map(&ns, |&n| -> Result<usize> {
            let shifted = self.theta.sub(&Matrix::scalar(d, &self.e.mul_int(&BigInt::from(n))));
            let ech = row_reduce(&shifted.pow(d as u32), Some(floor))?;
            Ok(d - ech.rank())
        });
        let mut out = Vec::new();
        for (n, m) in ns.into_iter().zip(mults) {
            let m = m?;
            if m > 0 {
                out.push((n, m));
            }
        }
        Ok(out)
    }

    /// Kernel and cokernel of `Θ` by valuation-pivoted elimination.
    pub fn cohomology(&self) -> Result<Cohomology> {
        let ech = row_reduce(&self.theta, Some(rank_floor(self.field())))?;
        let d = self.dim();
        let field = self.field();
        let h0 = ech.kernel_basis();
        let pivot_rows = ech.pivot_rows();
        let h1 = (0..d)
            .filter(|r| !pivot_rows.contains(r))
            .map(|r| (0..d).map(|i| if i == r { field.one() } else { field.zero() }).collect())
            .collect();
        Ok(Cohomology { h0, h1 })
    }

    /// `Θ_1 ⊗ 1 + 1 ⊗ Θ_2`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let i1 = Matrix::identity(self.dim(), self.theta.get(0, 0));
        let i2 = Matrix::identity(other.dim(), other.theta.get(0, 0));
        Ok(SenModule { e: self.e.clone(), theta: self.theta.kron(&i2).add(&i1.kron(&other.theta)) })
    }

    /// `-Θ^T`.
    pub fn dual(&self) -> Self {
        SenModule { e: self.e.clone(), theta: self.theta.transpose().neg() }
    }

    /// `Θ + e n`.
    pub fn bk_twist(&self, n: i64) -> Self {
        let shift = Matrix::scalar(self.dim(), &self.e.mul_int(&BigInt::from(n)));
        SenModule { e: self.e.clone(), theta: self.theta.add(&shift) }
    }

    /// `(1 + e b)^(Θ/e) = Σ bⁿ/n! Π_{i<n} (Θ - e i)`, summed under the
    /// convergence monitor to the working precision.
    pub fn operator_series(&self, b: &FieldElement, exec: Exec) -> Result<Matrix<FieldElement>> {
        if b.field() != self.field() {
            return Err(usage!("b lies in a different field"));
        }
        self.require_nearly_ht()?;
        Ok(operator_series_unchecked(&self.theta, &self.e, b, exec)?)
    }

    /// Action of `σ` with `χ(σ) = chi` on the `K`-basis of `M`: the operator
    /// series at `b = (chi - 1)/e`.
    pub fn semilinear_descent_matrix(&self, chi: &PadicScalar, exec: Exec) -> Result<Matrix<FieldElement>> {
        let p = self.field().p();
        if chi.p() != p {
            return Err(usage!("chi is {}-adic, field is {p}-adic", chi.p()));
        }
        if chi.val().bound() != Rat::from_integer(0) || !chi.val().is_exact() {
            return Err(domain!("chi = {chi} is not a unit of Z_{p}"));
        }
        let alpha = crate::padic::alpha(p);
        let z = chi.sub_ref(&PadicScalar::one(p, chi.prec()));
        if !z.is_zero() && Rat::from_integer(z.val_bound()) <= alpha {
            return Err(domain!(
                "v(chi - 1) = {} must exceed the convergence radius alpha = {}",
                z.val(),
                fmt_rat(&alpha)
            ));
        }
        let field = self.field();
        let b = field.from_scalar(&z).checked_div(&self.e)?;
        self.operator_series(&b, exec)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim(),
            "e": self.e.to_json(),
            "theta": self.theta.to_rows().iter().map(|r| r.iter().map(FieldElement::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Reads `{"dim"?, "e"?, "theta": [[element, ...], ...]}`.
    pub fn from_json(field: &LocalField, v: &Value) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| usage!("module: expected an object"))?;
        for k in map.keys() {
            if !["dim", "e", "theta", "field"].contains(&k.as_str()) {
                return Err(usage!("module: unknown key {k:?}"));
            }
        }
        let rows = map.get("theta").and_then(Value::as_array).ok_or_else(|| usage!("module.theta: expected an array of rows"))?;
        let d = rows.len();
        if let Some(dim) = map.get("dim") {
            if dim.as_u64() != Some(d as u64) {
                return Err(usage!("module.dim = {dim} disagrees with {d} rows of theta"));
            }
        }
        let mut parsed = Vec::with_capacity(d);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| usage!("module.theta[{r}]: expected an array"))?;
            if row.len() != d {
                return Err(usage!("module.theta[{r}]: expected {d} entries (square matrix), got {}", row.len()));
            }
            parsed.push(
                row.iter()
                    .enumerate()
                    .map(|(c, x)| field.element_from_json(x, &format!("module.theta[{r}][{c}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        if d == 0 {
            return Err(usage!("module.theta: empty matrix"));
        }
        let m = SenModule::new(Matrix::from_rows(parsed)?)?;
        match map.get("e") {
            Some(ev) => m.with_parameter(field.element_from_json(ev, "module.e")?),
            None => Ok(m),
        }
    }
}

/// The operator series for any square `theta`, without the nearly Hodge-Tate
/// precondition (the caller vouches for convergence, e.g. nilpotent `Θ`).
pub fn operator_series_unchecked(
    theta: &Matrix<FieldElement>,
    e: &FieldElement,
    b: &FieldElement,
    exec: Exec,
) -> Result<Matrix<FieldElement>> {
    let field = e.field();
    let d = theta.rows();
    let p = field.p();
    let target = Rat::from_integer(field.prec());
    let zero = Rat::from_integer(0);
    // v(bⁿ/n!) >= n (v(b) - 1/(p-1)); Π(Θ - e i) is integral when Θ is
    let slope = b.valuation().bound() - Rat::new(1, p as i64 - 1);
    let integral_theta = theta.min_valuation().bound() >= zero;
    let mut monitor = ConvergenceMonitor::new(p, target, "operator series");
    let mut sum = Matrix::identity(d, &field.one());
    let mut prod = Matrix::identity(d, &field.one());
    let mut weight = field.one();
    monitor.observe(Val::exact_int(0))?;
    for n in 1u64.. {
        let shift = Matrix::scalar(d, &e.mul_int(&BigInt::from(n - 1)));
        prod = prod.mul_with(&theta.sub(&shift), exec);
        weight = weight.mul(b).div_int(&BigInt::from(n))?;
        let term = prod.scale(&weight);
        let floor = (integral_theta && slope > zero).then(|| slope * Rat::from_integer(n as i64 + 1));
        let step = monitor.observe_with_tail(term.min_valuation(), floor)?;
        sum = sum.add(&term);
        if step == Step::Done {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests;
