use std::fmt;

use num_bigint::BigInt;

use super::{FieldData, LocalField};
use crate::error::{domain, precision, usage, Result};
use crate::linalg::{solve, Matrix, Scalar};
use crate::padic::{exp_series, log1p_series, ArithOp, PadicScalar};
use crate::valuation::{fmt_rat, Rat, Val};

/// An element of a [`LocalField`], stored in internal order `i*f + j` for
/// the basis element `y^j u^i`.
#[derive(Clone)]
pub struct FieldElement {
    field: LocalField,
    coeffs: Vec<PadicScalar>,
}

/// Image of an integral element in `O_K/π = F_p[y]/(ḡ)`, coordinates in `1, y, ..., y^(f-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    pub p: u64,
    pub coords: Vec<u64>,
}

impl ResidueClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Product in `U = Q_p[y]/(g)`.
pub(super) fn u_mul(d: &FieldData, a: &[PadicScalar], b: &[PadicScalar]) -> Vec<PadicScalar> {
    let f = d.f;
    if f == 1 {
        return vec![a[0].mul_ref(&b[0])];
    }
    let mut prod: Vec<Option<PadicScalar>> = vec![None; 2 * f - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = x.mul_ref(y);
            prod[i + j] = Some(match prod[i + j].take() {
                None => t,
                Some(acc) => acc.add_ref(&t),
            });
        }
    }
    let mut prod: Vec<PadicScalar> = prod.into_iter().map(|c| c.expect("filled")).collect();
    for top in (f..2 * f - 1).rev() {
        let c = prod[top].clone();
        for j in 0..f {
            let t = c.mul_ref(&d.g_neg[j]);
            prod[top - f + j] = prod[top - f + j].add_ref(&t);
        }
    }
    prod.truncate(f);
    prod
}

fn u_add(a: &[PadicScalar], b: &[PadicScalar]) -> Vec<PadicScalar> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

impl FieldElement {
    pub(crate) fn from_internal(field: LocalField, coeffs: Vec<PadicScalar>) -> Self {
        debug_assert_eq!(coeffs.len(), field.degree());
        FieldElement { field, coeffs }
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    /// Coordinates in internal order `i*f + j`.
    pub fn coords(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    /// Coordinate of `y^j u^i`.
    pub fn coeff(&self, j: usize, i: usize) -> &PadicScalar {
        &self.coeffs[i * self.field.f() + j]
    }

    /// Row-major coordinates `[j][i]`.
    pub fn rows(&self) -> Vec<Vec<PadicScalar>> {
        (0..self.field.f()).map(|j| (0..self.field.e_ram()).map(|i| self.coeff(j, i).clone()).collect()).collect()
    }

    fn u_row(&self, i: usize) -> &[PadicScalar] {
        let f = self.field.f();
        &self.coeffs[i * f..(i + 1) * f]
    }

    fn check_same(&self, other: &Self) {
        assert!(self.field == other.field, "mixing elements of different fields");
    }

    fn map(&self, g: impl Fn(&PadicScalar) -> PadicScalar) -> Self {
        FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(g).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        FieldElement { field: self.field.clone(), coeffs: u_add(&self.coeffs, &other.coeffs) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x.sub_ref(y)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(PadicScalar::neg_ref)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let d = &*self.field.0;
        let (f, e) = (d.f, d.e_ram);
        if f * e == 1 {
            return FieldElement { field: self.field.clone(), coeffs: vec![self.coeffs[0].mul_ref(&other.coeffs[0])] };
        }
        let mut prod: Vec<Option<Vec<PadicScalar>>> = vec![None; 2 * e - 1];
        for i in 0..e {
            let a = self.u_row(i);
            for k in 0..e {
                let t = u_mul(d, a, other.u_row(k));
                prod[i + k] = Some(match prod[i + k].take() {
                    None => t,
                    Some(acc) => u_add(&acc, &t),
                });
            }
        }
        let mut prod: Vec<Vec<PadicScalar>> = prod.into_iter().map(|c| c.expect("filled")).collect();
        for top in (e..2 * e - 1).rev() {
            let c = prod[top].clone();
            for i in 0..e {
                let t = u_mul(d, &c, &d.e_neg[i]);
                prod[top - e + i] = u_add(&prod[top - e + i], &t);
            }
        }
        prod.truncate(e);
        FieldElement { field: self.field.clone(), coeffs: prod.concat() }
    }

    pub fn mul_scalar(&self, c: &PadicScalar) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        self.map(|x| x.mul_int(k))
    }

    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        Ok(FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x.div_int(k)).collect::<Result<_>>()? })
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut result = self.field.one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            self.pow(n.unsigned_abs()).inv()
        }
    }

    /// Matrix of `z ↦ self·z` on the `Q_p`-basis (column `l` holds `self·b_l`).
    pub fn mult_matrix(&self) -> Matrix<PadicScalar> {
        let n = self.field.degree();
        let cols: Vec<FieldElement> = self.field.basis_elements().iter().map(|b| self.mul(b)).collect();
        Matrix::from_fn(n, n, |r, c| cols[c].coeffs[r].clone())
    }

    pub fn inv(&self) -> Result<Self> {
        self.field.one().checked_div(self)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(usage!("dividing elements of different fields"));
        }
        if other.is_zero() {
            return Err(precision!("division by a field element that is zero to precision {}", fmt_rat(&other.abs_prec())));
        }
        if self.field.is_qp() {
            let q = self.coeffs[0].checked_div(&other.coeffs[0])?;
            return Ok(FieldElement { field: self.field.clone(), coeffs: vec![q] });
        }
        let n = self.field.degree();
        let rhs = Matrix::from_fn(n, 1, |r, _| self.coeffs[r].clone());
        let sol = solve(&other.mult_matrix(), &rhs)?;
        Ok(FieldElement { field: self.field.clone(), coeffs: sol.column(0) })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PadicScalar::is_zero)
    }

    pub fn eq_to_prec(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// `v(x)` normalized by `v(p) = 1`.
    pub fn valuation(&self) -> Val {
        let e = self.field.e_ram() as i64;
        (0..self.field.e_ram())
            .map(|i| {
                let row = self.u_row(i).iter().map(PadicScalar::val).reduce(Val::min).expect("f >= 1");
                row.shift(Rat::new(i as i64, e))
            })
            .reduce(Val::min)
            .expect("e_ram >= 1")
    }

    /// Valuation normalized by `v(π) = 1` (integer-valued on exact values).
    pub fn valuation_pi(&self) -> Val {
        let e = Rat::from_integer(self.field.e_ram() as i64);
        match self.valuation() {
            Val::Exact(v) => Val::Exact(v * e),
            Val::AtLeast(b) => Val::AtLeast(b * e),
        }
    }

    /// The valuation level below which all digits are known.
    pub fn abs_prec(&self) -> Rat {
        let (f, e) = (self.field.f(), self.field.e_ram() as i64);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Rat::from_integer(c.prec()) + Rat::new((k / f) as i64, e))
            .min()
            .expect("degree >= 1")
    }

    /// Lowers every coordinate to absolute precision at most `prec`.
    pub fn with_prec(&self, prec: i64) -> Self {
        self.map(|c| c.with_prec(prec))
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().bound() >= Rat::from_integer(0)
    }

    /// `Tr_{K|Q_p}(x)`.
    pub fn trace(&self) -> PadicScalar {
        let p = self.field.p();
        self.coeffs
            .iter()
            .zip(self.field.traces())
            .fold(PadicScalar::zero(p, i64::MAX / 4), |acc, (c, t)| acc.add_ref(&c.mul_ref(t)))
    }

    /// Reduction into `F_p[y]/(ḡ)`.
    pub fn residue(&self) -> Result<ResidueClass> {
        match self.valuation() {
            Val::Exact(v) if v < Rat::from_integer(0) => {
                return Err(domain!("residue of an element of negative valuation {}", fmt_rat(&v)))
            }
            Val::AtLeast(b) if b < Rat::from_integer(0) => {
                return Err(precision!("cannot certify integrality: element is zero only to precision {}", fmt_rat(&b)))
            }
            _ => {}
        }
        let coords = self
            .u_row(0)
            .iter()
            .map(|c| c.residue().ok_or_else(|| precision!("coordinate {c} has no residue at its precision")))
            .collect::<Result<_>>()?;
        Ok(ResidueClass { p: self.field.p(), coords })
    }

    /// The element as a `Q_p` scalar when it lies in `Q_p` (all other coordinates zero).
    pub fn as_scalar(&self) -> Option<PadicScalar> {
        self.coeffs[1..].iter().all(PadicScalar::is_zero).then(|| self.coeffs[0].clone())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field.f();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let (i, j) = (k / f, k % f);
                let mut s = format!("({c})");
                if j > 0 {
                    s.push_str(&format!("*y^{j}"));
                }
                if i > 0 {
                    s.push_str(&format!("*u^{i}"));
                }
                s
            })
            .collect();
        if terms.is_empty() {
            write!(out, "0 (v >= {})", fmt_rat(&self.abs_prec()))
        } else {
            write!(out, "{}", terms.join(" + "))
        }
    }
}

/// Checked arithmetic between two elements of the same field.
pub fn elem_arith(x: &FieldElement, y: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    if x.field != y.field {
        return Err(usage!("elements belong to different fields"));
    }
    Ok(match op {
        ArithOp::Add => x.add(y),
        ArithOp::Sub => x.sub(y),
        ArithOp::Mul => x.mul(y),
        ArithOp::Div => x.checked_div(y)?,
    })
}

/// `log(x)` for `v(x - 1) > 0`.
pub fn field_log(x: &FieldElement) -> Result<FieldElement> {
    let z = x.sub(&x.field.one());
    if z.is_zero() {
        return Ok(z);
    }
    match z.valuation() {
        Val::Exact(v) if v > Rat::from_integer(0) => log1p_series(&z, x.field.p(), z.abs_prec()),
        v => Err(domain!("log(x) needs v(x - 1) > 0, got v(x - 1) = {v}")),
    }
}

/// `exp(x)` for `v(x) > 1/(p-1)`.
pub fn field_exp(x: &FieldElement) -> Result<FieldElement> {
    let p = x.field.p();
    if x.is_zero() {
        return Ok(x.field.one());
    }
    match x.valuation() {
        Val::Exact(v) if v > Rat::new(1, p as i64 - 1) => exp_series(x, p, x.abs_prec()),
        v => Err(domain!(
            "exp(x) diverges: need v(x) > 1/(p-1) = {} (convergence radius alpha), got {v}",
            fmt_rat(&Rat::new(1, p as i64 - 1))
        )),
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field.from_int(n)
    }
    fn add(&self, other: &Self) -> Self {
        FieldElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        FieldElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        FieldElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        FieldElement::neg(self)
    }
    fn div(&self, other: &Self) -> Result<Self> {
        self.checked_div(other)
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        FieldElement::mul_int(self, k)
    }
    fn div_int(&self, k: &BigInt) -> Result<Self> {
        FieldElement::div_int(self, k)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn val(&self) -> Val {
        self.valuation()
    }
}
