//! The boundary map `x ↦ (1/p) Tr_{K|Q_p}(x)` into `Q_p/Z_p` and its kernel.
//!
//! Values in `Q_p/Z_p` are exact: `num / p^den_pow` with `0 <= num < p^den_pow`
//! and `p ∤ num` unless the class is zero.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{precision, usage, Result};
use crate::field::{FieldElement, FieldMap, LocalField};
use crate::padic::PadicScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryValue {
    p: u64,
    num: BigInt,
    den_pow: u32,
    /// Absolute precision of the trace the class was read from.
    source_prec: i64,
}

fn p_power(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

impl BoundaryValue {
    /// Reduces `num / p^den_pow` into canonical form.
    pub fn new(p: u64, num: BigInt, den_pow: u32, source_prec: i64) -> Self {
        let (mut num, mut den_pow) = (num.mod_floor(&p_power(p, den_pow)), den_pow);
        let pb = BigInt::from(p);
        while den_pow > 0 && (num.is_zero() || (&num % &pb).is_zero()) {
            num /= &pb;
            den_pow -= 1;
        }
        if den_pow == 0 {
            num = BigInt::zero();
        }
        BoundaryValue { p, num, den_pow, source_prec }
    }

    /// The class of `t/p` for a trace value `t`; needs `t` known modulo `p`.
    pub fn from_trace(t: &PadicScalar) -> Result<Self> {
        if t.prec() < 1 {
            return Err(precision!(
                "trace is only known modulo p^{}, which cannot decide its class in Q_p/Z_p after dividing by p; raise the working precision",
                t.prec()
            ));
        }
        let r = t.to_rational();
        let (n, d) = (r.numer().clone(), r.denom().clone());
        // d is a power of p
        let mut k = 1u32;
        let mut dd = d;
        let pb = BigInt::from(t.p());
        while dd > BigInt::one() {
            dd /= &pb;
            k += 1;
        }
        Ok(BoundaryValue::new(t.p(), n, k, t.prec()))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den_pow(&self) -> u32 {
        self.den_pow
    }

    pub fn source_prec(&self) -> i64 {
        self.source_prec
    }

    /// Equality in `Q_p/Z_p`, ignoring the recorded precision.
    pub fn same_class(&self, other: &Self) -> bool {
        self.p == other.p && self.num == other.num && self.den_pow == other.den_pow
    }

    pub fn is_zero(&self) -> bool {
        self.den_pow == 0
    }

    /// The order `p^k` of the class, as `k`.
    pub fn order_exponent(&self) -> u32 {
        self.den_pow
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixing primes in Q_p/Z_p");
        let k = self.den_pow.max(other.den_pow);
        let num = &self.num * p_power(self.p, k - self.den_pow) + &other.num * p_power(self.p, k - other.den_pow);
        BoundaryValue::new(self.p, num, k, self.source_prec.min(other.source_prec))
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        BoundaryValue::new(self.p, &self.num * c, self.den_pow, self.source_prec)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": self.num.to_string(),
            "den_pow": self.den_pow,
            "p": self.p,
            "is_zero": self.is_zero(),
            "source_prec": self.source_prec,
        })
    }
}

impl fmt::Display for BoundaryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}^{}", self.num, self.p, self.den_pow)
        }
    }
}

pub fn boundary(x: &FieldElement) -> Result<BoundaryValue> {
    BoundaryValue::from_trace(&x.trace())
}

/// Membership in the kernel of the boundary map, i.e. `Tr(x) ∈ p Z_p`.
pub fn in_picard_image(x: &FieldElement) -> Result<bool> {
    Ok(boundary(x)?.is_zero())
}

/// `Λ ∩ ker ∂` for `Λ = π^{-s} O_K`.
#[derive(Clone, Debug)]
pub struct KernelLattice {
    /// `Z_p`-basis of `Λ` used for the reduction: `π^{-s} y^j u^i`.
    pub lattice_basis: Vec<FieldElement>,
    /// `Z_p`-basis of `Λ ∩ ker ∂`.
    pub kernel_basis: Vec<FieldElement>,
    /// Position of the Smith pivot in `lattice_basis`.
    pub pivot: usize,
    /// `∂(Λ)` is cyclic of order `p^image_order_pow`, which is also `[Λ : Λ ∩ ker ∂]`.
    pub image_order_pow: u32,
}

impl KernelLattice {
    pub fn to_json(&self) -> Value {
        json!({
            "kernel_basis": self.kernel_basis.iter().map(FieldElement::to_json).collect::<Vec<_>>(),
            "pivot": self.pivot,
            "image_order_pow": self.image_order_pow,
            "index_pow": self.image_order_pow,
        })
    }
}

/// Smith reduction of the trace vector of a `Z_p`-basis of `π^{-s} O_K`.
pub fn kernel_lattice(field: &LocalField, s: i64) -> Result<KernelLattice> {
    if s < 0 {
        return Err(usage!("lattice exponent s must be >= 0, got {s}"));
    }
    let scale = field.uniformizer().powi(-s)?;
    let lattice_basis: Vec<FieldElement> = field.basis_elements().iter().map(|b| b.mul(&scale)).collect();
    let traces: Vec<PadicScalar> = lattice_basis.iter().map(FieldElement::trace).collect();
    let mut pivot: Option<(usize, i64)> = None;
    for (i, t) in traces.iter().enumerate() {
        if let Some(v) = t.valuation() {
            if pivot.is_none_or(|(_, b)| v < b) {
                pivot = Some((i, v));
            }
        }
    }
    let (k, vmin) = pivot.ok_or_else(|| precision!("every trace on the lattice is zero to precision; raise the working precision"))?;
    // an undecided trace below the pivot would change the reduction
    if let Some(t) = traces.iter().find(|t| t.is_zero() && t.prec() < vmin) {
        return Err(precision!("a lattice trace is only known to valuation >= {} below the pivot valuation {vmin}", t.prec()));
    }
    let p = field.p();
    let prec = field.prec();
    let mut kernel_basis = Vec::with_capacity(lattice_basis.len());
    for (j, b) in lattice_basis.iter().enumerate() {
        if j == k {
            let shift = (1 - vmin).max(0);
            kernel_basis.push(b.mul_scalar(&PadicScalar::from_int(p, BigInt::from(p).pow(shift as u32), prec)));
        } else {
            let c = traces[j].checked_div(&traces[k])?;
            kernel_basis.push(b.sub(&lattice_basis[k].mul_scalar(&c)));
        }
    }
    Ok(KernelLattice { lattice_basis, kernel_basis, pivot: k, image_order_pow: (1 - vmin).max(0) as u32 })
}

/// An element whose boundary has exact order `p^k`, built from a basis element
/// of minimal trace valuation.
pub fn order_witness(field: &LocalField, k: u32) -> Result<(FieldElement, BoundaryValue)> {
    let basis = field.basis_elements();
    let (b, v) = basis
        .iter()
        .filter_map(|b| b.trace().valuation().map(|v| (b, v)))
        .min_by_key(|&(_, v)| v)
        .ok_or_else(|| precision!("no basis element has a certified trace"))?;
    let shift = 1 - k as i64 - v;
    let c = PadicScalar::from_parts(field.p(), Some(shift), BigInt::one(), field.prec() + shift.max(0))?;
    let x = b.mul_scalar(&c);
    let d = boundary(&x)?;
    debug_assert_eq!(d.order_exponent(), k);
    Ok((x, d))
}

#[derive(Clone, Debug)]
pub struct FunctorialityReport {
    pub degree: usize,
    pub boundary_source: BoundaryValue,
    pub boundary_target: BoundaryValue,
    pub holds: bool,
}

impl FunctorialityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "boundary_source": self.boundary_source.to_json(),
            "boundary_target": self.boundary_target.to_json(),
            "holds": self.holds,
        })
    }
}

/// Checks `∂_L(x) = [L:K] ∂_K(x)` along an embedding `K → L`.
pub fn functoriality_check(embedding: &FieldMap, x: &FieldElement) -> Result<FunctorialityReport> {
    if x.field() != embedding.source() {
        return Err(usage!("element does not lie in the source of the embedding"));
    }
    let degree = embedding.relative_degree();
    let bk = boundary(x)?;
    let bl = boundary(&embedding.apply(x)?)?;
    let scaled = bk.mul_int(&BigInt::from(degree));
    let holds = bl.same_class(&scaled);
    Ok(FunctorialityReport { degree, boundary_source: bk, boundary_target: bl, holds })
}

#[cfg(test)]
mod tests;
