//! Finite extensions `K = U[u]/(E)` of `Q_p`, where `U = Q_p[y]/(g)` is
//! unramified and `E` is Eisenstein over `O_U`.
//!
//! Elements are coefficient arrays in the `Q_p`-basis `y^j u^i`
//! (`0 <= j < f`, `0 <= i < e_ram`). Because `{y^j}` reduces to a basis of the
//! residue field and `u` is a uniformizer, valuations have the closed form
//! `v(x) = min_i (v_U(row_i) + i/e_ram)`.

mod element;
mod ffield;
mod json;
mod map;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{domain, precision, usage, Result};
use crate::padic::{binomial, is_prime, PadicScalar};
use crate::valuation::{Rat, Val};

pub use element::{elem_arith, field_exp, field_log, FieldElement, ResidueClass};
pub use json::{parse_scalar, FieldSpecJson};
pub use map::{apply_substitution, FieldMap};

/// User-facing presentation of a local field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFieldSpec {
    pub p: u64,
    /// Monic lift `g` of an irreducible polynomial over `F_p`, ascending.
    pub unramified_poly: Vec<PadicScalar>,
    /// `E(u)` ascending in `u`; each coefficient is an element of `U` given
    /// by its `f` coordinates in `1, y, ..., y^(f-1)`.
    pub eisenstein_poly: Vec<Vec<PadicScalar>>,
    pub prec: i64,
}

impl LocalFieldSpec {
    /// `Q_p` itself, presented as `g = y - 1`, `E = u - p`.
    pub fn qp(p: u64, prec: i64) -> Self {
        let s = |n: i64| PadicScalar::from_int(p, n, prec);
        LocalFieldSpec {
            p,
            unramified_poly: vec![s(-1), s(1)],
            eisenstein_poly: vec![vec![s(-(p as i64))], vec![s(1)]],
            prec,
        }
    }

    /// `Q_p(ζ_{p^m})` with `E(u) = Φ_{p^m}(1 + u)`, so that `π = ζ - 1`.
    pub fn cyclotomic(p: u64, m: u32, prec: i64) -> Self {
        assert!(m >= 1, "cyclotomic level starts at 1");
        let q = p.pow(m - 1);
        let deg = ((p - 1) * q) as usize;
        let coeffs: Vec<Vec<PadicScalar>> = (0..=deg)
            .map(|i| {
                let c: BigInt = (0..p).map(|k| binomial(k * q, i as u64)).sum();
                vec![PadicScalar::from_int(p, c, prec)]
            })
            .collect();
        LocalFieldSpec {
            p,
            unramified_poly: vec![PadicScalar::from_int(p, -1, prec), PadicScalar::from_int(p, 1, prec)],
            eisenstein_poly: coeffs,
            prec,
        }
    }

    /// Unramified `g` with the Eisenstein polynomial `u^e + Σ c_i u^i` whose
    /// coefficients are integers (lying in `Q_p ⊂ U`).
    pub fn from_ints(p: u64, g: &[i64], eisenstein: &[i64], prec: i64) -> Self {
        let f = g.len() - 1;
        let s = |n: i64| PadicScalar::from_int(p, n, prec);
        let lift = |c: i64| {
            let mut v = vec![s(0); f];
            v[0] = s(c);
            v
        };
        LocalFieldSpec {
            p,
            unramified_poly: g.iter().map(|&c| s(c)).collect(),
            eisenstein_poly: eisenstein.iter().map(|&c| lift(c)).collect(),
            prec,
        }
    }
}

/// Shared, immutable handle to a validated local field.
#[derive(Clone)]
pub struct LocalField(Arc<FieldData>);

struct FieldData {
    spec: LocalFieldSpec,
    f: usize,
    e_ram: usize,
    /// `y^f = Σ g_neg[j] y^j`.
    g_neg: Vec<PadicScalar>,
    /// `u^e = Σ e_neg[i] u^i` with `e_neg[i] ∈ U`.
    e_neg: Vec<Vec<PadicScalar>>,
    /// `Tr_{K|Q_p}` of each basis element, internal index `i*f + j`.
    traces: Vec<PadicScalar>,
    different: Vec<PadicScalar>,
    v_different: Rat,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalField(p={}, f={}, e={}, prec={})", self.p(), self.f(), self.e_ram(), self.prec())
    }
}

impl PartialEq for LocalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

fn integral_residue(c: &PadicScalar, what: &str) -> Result<u64> {
    match c.val() {
        Val::Exact(v) if v < Rat::from_integer(0) => Err(domain!("{what} is not integral (valuation {v})")),
        Val::AtLeast(b) if b < Rat::from_integer(1) => {
            Err(precision!("{what} is zero only to precision {b}; its residue is undetermined"))
        }
        _ => c.residue().ok_or_else(|| precision!("{what} has no residue at precision {}", c.prec())),
    }
}

fn u_valuation(row: &[PadicScalar]) -> Val {
    row.iter().map(PadicScalar::val).reduce(Val::min).expect("nonempty U-element")
}

/// Validates a presentation and derives `f`, `e_ram`, traces and the different.
pub fn build_field(spec: LocalFieldSpec) -> Result<LocalField> {
    let p = spec.p;
    if !is_prime(p) {
        return Err(usage!("p = {p} is not prime"));
    }
    if spec.prec < 1 {
        return Err(usage!("working precision must be positive, got {}", spec.prec));
    }
    let prec = spec.prec;
    let cap = |c: &PadicScalar| -> Result<PadicScalar> {
        if c.p() != p {
            return Err(usage!("coefficient {c} is {}-adic inside a {p}-adic field", c.p()));
        }
        Ok(c.with_prec(prec))
    };

    let g: Vec<PadicScalar> = spec.unramified_poly.iter().map(cap).collect::<Result<_>>()?;
    if g.len() < 2 {
        return Err(usage!("unramified polynomial must have degree at least 1"));
    }
    let f = g.len() - 1;
    if !g[f].sub_ref(&PadicScalar::one(p, prec)).is_zero() {
        return Err(domain!("unramified polynomial is not monic"));
    }
    let residues: Vec<u64> =
        g.iter().enumerate().map(|(j, c)| integral_residue(c, &format!("coefficient y^{j} of g"))).collect::<Result<_>>()?;
    if !ffield::is_irreducible(&residues, p) {
        return Err(domain!("reduction of the unramified polynomial is reducible over F_{p}"));
    }

    let mut big_e: Vec<Vec<PadicScalar>> = Vec::with_capacity(spec.eisenstein_poly.len());
    for (i, row) in spec.eisenstein_poly.iter().enumerate() {
        if row.len() != f {
            return Err(usage!("coefficient u^{i} of E has {} coordinates, expected f = {f}", row.len()));
        }
        big_e.push(row.iter().map(cap).collect::<Result<_>>()?);
    }
    if big_e.len() < 2 {
        return Err(usage!("Eisenstein polynomial must have degree at least 1"));
    }
    let e_ram = big_e.len() - 1;
    let lead = &big_e[e_ram];
    if !lead[0].sub_ref(&PadicScalar::one(p, prec)).is_zero() || lead[1..].iter().any(|c| !c.is_zero()) {
        return Err(domain!("Eisenstein polynomial is not monic"));
    }
    let one = Rat::from_integer(1);
    for (i, row) in big_e.iter().enumerate().take(e_ram) {
        let v = u_valuation(row);
        if i == 0 {
            match v {
                Val::Exact(x) if x == one => {}
                Val::Exact(x) => return Err(domain!("E is not Eisenstein: constant coefficient has valuation {x}, need 1")),
                Val::AtLeast(b) if b > one => {
                    return Err(domain!("E is not Eisenstein: constant coefficient has valuation >= {b}, need 1"))
                }
                Val::AtLeast(b) => {
                    return Err(precision!("cannot certify v(E(0)) = 1: constant coefficient is zero to precision {b}"))
                }
            }
        } else {
            match v {
                Val::Exact(x) if x < one => {
                    return Err(domain!("E is not Eisenstein: coefficient of u^{i} has valuation {x} < 1"))
                }
                Val::AtLeast(b) if b < one => {
                    return Err(precision!("cannot certify v >= 1 for coefficient of u^{i} (known only to precision {b})"))
                }
                _ => {}
            }
        }
    }

    let g_neg: Vec<PadicScalar> = g[..f].iter().map(PadicScalar::neg_ref).collect();
    let e_neg: Vec<Vec<PadicScalar>> = big_e[..e_ram].iter().map(|row| row.iter().map(PadicScalar::neg_ref).collect()).collect();

    let mut data = FieldData {
        spec: LocalFieldSpec { p, unramified_poly: g.clone(), eisenstein_poly: big_e.clone(), prec },
        f,
        e_ram,
        g_neg,
        e_neg,
        traces: Vec::new(),
        different: Vec::new(),
        v_different: Rat::from_integer(0),
    };
    data.traces = basis_traces(&data, &g, &big_e);
    // E'(π) = Σ_{i>=1} i E_i π^(i-1) is already reduced
    let mut diff = vec![PadicScalar::zero(p, prec); f * e_ram];
    for i in 1..=e_ram {
        for j in 0..f {
            diff[(i - 1) * f + j] = big_e[i][j].mul_int(&BigInt::from(i));
        }
    }
    data.different = diff;
    let field = LocalField(Arc::new(data));
    let v_diff = match field.different().valuation() {
        Val::Exact(v) => v,
        Val::AtLeast(b) => return Err(precision!("the different E'(π) is zero to precision {b}")),
    };
    let mut data = Arc::try_unwrap(field.0).ok().expect("sole owner");
    data.v_different = v_diff;
    Ok(LocalField(Arc::new(data)))
}

/// Power sums of the roots via Newton's identities over any commutative ring,
/// given the coefficients `a_1..a_n` of `X^n + a_1 X^(n-1) + ... + a_n`.
fn power_sums<T: Clone>(
    a: &[T],
    count: usize,
    n_int: impl Fn(i64) -> T,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
    neg: impl Fn(&T) -> T,
) -> Vec<T> {
    let mut s = vec![n_int(a.len() as i64)];
    for k in 1..count {
        let mut acc = mul(&n_int(k as i64), &a[k - 1]);
        for i in 1..k {
            acc = add(&acc, &mul(&a[i - 1], &s[k - i]));
        }
        s.push(neg(&acc));
    }
    s
}

fn basis_traces(d: &FieldData, g: &[PadicScalar], big_e: &[Vec<PadicScalar>]) -> Vec<PadicScalar> {
    let (p, prec, f, e) = (d.spec.p, d.spec.prec, d.f, d.e_ram);
    let g_desc: Vec<PadicScalar> = (1..=f).map(|i| g[f - i].clone()).collect();
    let s = power_sums(
        &g_desc,
        f,
        |n| PadicScalar::from_int(p, n, prec),
        PadicScalar::add_ref,
        PadicScalar::mul_ref,
        PadicScalar::neg_ref,
    );
    let tr_u = |w: &[PadicScalar]| w.iter().zip(&s).fold(PadicScalar::zero(p, prec), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)));
    let u_int = |n: i64| {
        let mut v = vec![PadicScalar::zero(p, prec); f];
        v[0] = PadicScalar::from_int(p, n, prec);
        v
    };
    let e_desc: Vec<Vec<PadicScalar>> = (1..=e).map(|i| big_e[e - i].clone()).collect();
    let big_p = power_sums(
        &e_desc,
        e,
        u_int,
        |a, b| a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect(),
        |a, b| element::u_mul(d, a, b),
        |a| a.iter().map(PadicScalar::neg_ref).collect(),
    );
    let mut out = Vec::with_capacity(f * e);
    for pi in &big_p {
        for j in 0..f {
            let mut yj = vec![PadicScalar::zero(p, prec); f];
            yj[j] = PadicScalar::one(p, prec);
            out.push(tr_u(&element::u_mul(d, &yj, pi)));
        }
    }
    out
}

impl LocalField {
    /// `Q_p` as a (trivial) local field.
    pub fn qp(p: u64, prec: i64) -> Result<Self> {
        build_field(LocalFieldSpec::qp(p, prec))
    }

    pub fn cyclotomic(p: u64, m: u32, prec: i64) -> Result<Self> {
        build_field(LocalFieldSpec::cyclotomic(p, m, prec))
    }

    pub fn spec(&self) -> &LocalFieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u64 {
        self.0.spec.p
    }

    pub fn prec(&self) -> i64 {
        self.0.spec.prec
    }

    /// Residue degree.
    pub fn f(&self) -> usize {
        self.0.f
    }

    /// Ramification index.
    pub fn e_ram(&self) -> usize {
        self.0.e_ram
    }

    /// `[K : Q_p] = f * e_ram`.
    pub fn degree(&self) -> usize {
        self.0.f * self.0.e_ram
    }

    pub fn is_qp(&self) -> bool {
        self.degree() == 1
    }

    /// Rebuilds the same presentation at another working precision.
    pub fn with_prec(&self, prec: i64) -> Result<Self> {
        let mut spec = self.0.spec.clone();
        spec.prec = prec;
        build_field(spec)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_internal(self.clone(), vec![PadicScalar::zero(self.p(), self.prec()); self.degree()])
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_scalar(&PadicScalar::from_int(self.p(), n, self.prec()))
    }

    /// Image of a `Q_p` scalar.
    pub fn from_scalar(&self, c: &PadicScalar) -> FieldElement {
        assert_eq!(c.p(), self.p(), "scalar prime differs from field prime");
        let mut coeffs = vec![PadicScalar::zero(self.p(), self.prec()); self.degree()];
        coeffs[0] = c.clone();
        FieldElement::from_internal(self.clone(), coeffs)
    }

    /// Basis element `y^j u^i`.
    pub fn basis(&self, j: usize, i: usize) -> FieldElement {
        assert!(j < self.f() && i < self.e_ram(), "basis index out of range");
        let mut coeffs = vec![PadicScalar::zero(self.p(), self.prec()); self.degree()];
        coeffs[i * self.f() + j] = PadicScalar::one(self.p(), self.prec());
        FieldElement::from_internal(self.clone(), coeffs)
    }

    /// Basis elements in internal order `i*f + j`.
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        (0..self.e_ram()).flat_map(|i| (0..self.f()).map(move |j| (j, i))).map(|(j, i)| self.basis(j, i)).collect()
    }

    /// The uniformizer `π`, the class of `u`.
    pub fn uniformizer(&self) -> FieldElement {
        if self.e_ram() == 1 {
            // u = -E_0 when E is linear
            let coeffs = self.0.e_neg[0].clone();
            FieldElement::from_internal(self.clone(), coeffs)
        } else {
            self.basis(0, 1)
        }
    }

    /// The generator `y` of the unramified part.
    pub fn unramified_generator(&self) -> FieldElement {
        if self.f() == 1 {
            self.from_scalar(&self.0.g_neg[0])
        } else {
            self.basis(1, 0)
        }
    }

    /// `e = E'(π)`, a generator of the different.
    pub fn different(&self) -> FieldElement {
        FieldElement::from_internal(self.clone(), self.0.different.clone())
    }

    /// `v(E'(π))`, in `[(e_ram - 1)/e_ram, ∞)` with equality iff tamely ramified.
    pub fn v_different(&self) -> Rat {
        self.0.v_different
    }

    /// Element from row-major coordinates `rows[j][i]` of `y^j u^i`.
    pub fn element(&self, rows: Vec<Vec<PadicScalar>>) -> Result<FieldElement> {
        if rows.len() != self.f() {
            return Err(usage!("coeffs: expected {} rows (one per power of y), got {}", self.f(), rows.len()));
        }
        let mut coeffs = vec![PadicScalar::zero(self.p(), self.prec()); self.degree()];
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != self.e_ram() {
                return Err(usage!("coeffs[{j}]: expected {} entries (one per power of u), got {}", self.e_ram(), row.len()));
            }
            for (i, c) in row.into_iter().enumerate() {
                if c.p() != self.p() {
                    return Err(usage!("coeffs[{j}][{i}] is {}-adic, field is {}-adic", c.p(), self.p()));
                }
                coeffs[i * self.f() + j] = c;
            }
        }
        Ok(FieldElement::from_internal(self.clone(), coeffs))
    }

    /// Element from internal-order coordinates (index `i*f + j`).
    pub fn from_coords(&self, coeffs: Vec<PadicScalar>) -> Result<FieldElement> {
        if coeffs.len() != self.degree() {
            return Err(usage!("expected {} coordinates, got {}", self.degree(), coeffs.len()));
        }
        Ok(FieldElement::from_internal(self.clone(), coeffs))
    }

    pub(crate) fn traces(&self) -> &[PadicScalar] {
        &self.0.traces
    }
}

#[cfg(test)]
mod tests;
