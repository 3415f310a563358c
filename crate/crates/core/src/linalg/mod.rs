//! Dense linear algebra over p-adic scalars and local-field elements.
//!
//! Pivots are always chosen by minimal valuation; an entry counts as zero only
//! when it is zero to its stored precision.

mod charpoly;
mod elim;
mod matrix;
mod poly;

use std::fmt::Debug;

use num_bigint::BigInt;

use crate::error::Result;
use crate::padic::PadicScalar;
use crate::valuation::Val;

pub use charpoly::char_poly;
pub use elim::{determinant, inverse, row_reduce, solve, Echelon};
pub use matrix::Matrix;
pub use poly::Poly;

/// The ring operations the generic algorithms need.
///
/// Constructors ending in `_like` inherit the prime, field and working
/// precision of `self`.
pub trait Scalar: Clone + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, other: &Self) -> Result<Self>;
    fn mul_int(&self, k: &BigInt) -> Self;
    fn div_int(&self, k: &BigInt) -> Result<Self>;
    fn is_zero(&self) -> bool;
    fn val(&self) -> Val;
}

impl Scalar for PadicScalar {
    fn zero_like(&self) -> Self {
        PadicScalar::zero(self.p(), self.prec().max(self.relative_precision()))
    }
    fn one_like(&self) -> Self {
        PadicScalar::one(self.p(), self.prec().max(self.relative_precision()))
    }
    fn int_like(&self, n: i64) -> Self {
        PadicScalar::from_int(self.p(), n, self.prec().max(self.relative_precision()))
    }
    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn div(&self, other: &Self) -> Result<Self> {
        self.checked_div(other)
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        PadicScalar::mul_int(self, k)
    }
    fn div_int(&self, k: &BigInt) -> Result<Self> {
        PadicScalar::div_int(self, k)
    }
    fn is_zero(&self) -> bool {
        PadicScalar::is_zero(self)
    }
    fn val(&self) -> Val {
        PadicScalar::val(self)
    }
}
