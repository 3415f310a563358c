use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{precision, usage, Result};
use crate::valuation::{Rat, Val};

/// Default number of p-adic digits carried by freshly constructed values.
pub const DEFAULT_PRECISION: i64 = 50;

/// An element of `Q_p` known modulo `p^prec`.
///
/// Nonzero values are stored as `p^val * unit` with `unit` reduced into
/// `[0, p^(prec - val))` and coprime to `p`. A value that is indistinguishable
/// from zero at its precision is a separate state: its valuation is only
/// known to be `>= prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: u64,
    prec: i64,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Nonzero { val: i64, unit: BigInt },
}

pub(crate) fn p_pow(p: u64, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    BigInt::from(p).pow(k as u32)
}

/// `v_p(n)` and the `p`-free cofactor of a nonzero integer.
pub(crate) fn split_p(p: u64, n: &BigInt) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PadicScalar {
    /// Builds the class of `raw * p^shift` modulo `p^prec`.
    fn normalize(p: u64, prec: i64, raw: BigInt, shift: i64) -> Self {
        if raw.is_zero() {
            return Self::zero(p, prec);
        }
        let (v, cof) = split_p(p, &raw);
        let val = shift + v;
        if val >= prec {
            return Self::zero(p, prec);
        }
        let modulus = p_pow(p, prec - val);
        let unit = cof.mod_floor(&modulus);
        PadicScalar { p, prec, repr: Repr::Nonzero { val, unit } }
    }

    pub fn zero(p: u64, prec: i64) -> Self {
        PadicScalar { p, prec, repr: Repr::Zero }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_int(p, 1, prec)
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>, prec: i64) -> Self {
        Self::normalize(p, prec, n.into(), 0)
    }

    /// The class of `num / den` to absolute precision `prec`.
    pub fn from_rational(p: u64, num: impl Into<BigInt>, den: impl Into<BigInt>, prec: i64) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(usage!("rational with zero denominator"));
        }
        if num.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let (vn, un) = split_p(p, &num);
        let (vd, ud) = split_p(p, &den);
        let val = vn - vd;
        if val >= prec {
            return Ok(Self::zero(p, prec));
        }
        let modulus = p_pow(p, prec - val);
        let inv = ud
            .mod_floor(&modulus)
            .modinv(&modulus)
            .expect("p-free denominator is invertible");
        Ok(PadicScalar { p, prec, repr: Repr::Nonzero { val, unit: (un * inv).mod_floor(&modulus) } })
    }

    /// Reassembles a value from its serialized parts, validating the invariants.
    pub fn from_parts(p: u64, val: Option<i64>, unit: BigInt, prec: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(usage!("{p} is not prime"));
        }
        match val {
            None => Ok(Self::zero(p, prec)),
            Some(v) => {
                if v >= prec {
                    return Err(usage!("valuation {v} must be below precision {prec}"));
                }
                if unit.is_zero() || (&unit % BigInt::from(p)).is_zero() {
                    return Err(usage!("unit part {unit} is not a {p}-adic unit"));
                }
                Ok(Self::normalize(p, prec, unit, v))
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is known modulo `p^prec`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// Exact valuation, `None` when zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Nonzero { val, .. } => Some(*val),
        }
    }

    /// Exact valuation, or the precision as a lower bound for zero.
    pub fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn val(&self) -> Val {
        match self.valuation() {
            Some(v) => Val::exact_int(v),
            None => Val::AtLeast(Rat::from_integer(self.prec)),
        }
    }

    /// Unit digits (`0` for zero-to-precision).
    pub fn unit(&self) -> BigInt {
        match &self.repr {
            Repr::Zero => BigInt::zero(),
            Repr::Nonzero { unit, .. } => unit.clone(),
        }
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val_bound()
    }

    /// Drops precision down to `prec` (no-op when already coarser).
    pub fn with_prec(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        match &self.repr {
            Repr::Zero => Self::zero(self.p, prec),
            Repr::Nonzero { val, unit } => Self::normalize(self.p, prec, unit.clone(), *val),
        }
    }

    /// Representative as an exact rational `unit * p^val`.
    pub fn to_rational(&self) -> BigRational {
        match &self.repr {
            Repr::Zero => BigRational::zero(),
            Repr::Nonzero { val, unit } => {
                if *val >= 0 {
                    BigRational::from_integer(unit * p_pow(self.p, *val))
                } else {
                    BigRational::new(unit.clone(), p_pow(self.p, -*val))
                }
            }
        }
    }

    /// Integer representative in `(-p^prec/2, p^prec/2]`; only for integral values.
    pub fn to_symmetric_int(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Zero => Some(BigInt::zero()),
            Repr::Nonzero { val, unit } => {
                if *val < 0 || self.prec < 0 {
                    return None;
                }
                let modulus = p_pow(self.p, self.prec);
                let mut r = (unit * p_pow(self.p, *val)).mod_floor(&modulus);
                if &r * 2 > modulus {
                    r -= &modulus;
                }
                Some(r)
            }
        }
    }

    /// `(numerator, shift)` with the value equal to `numerator * p^shift`.
    fn raw(&self) -> Option<(BigInt, i64)> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Nonzero { val, unit } => Some((unit.clone(), *val)),
        }
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing {}-adic and {}-adic values", self.p, other.p);
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.same_prime(other);
        let prec = min(self.prec, other.prec);
        match (self.raw(), other.raw()) {
            (None, None) => Self::zero(self.p, prec),
            (Some((u, v)), None) | (None, Some((u, v))) => Self::normalize(self.p, prec, u, v),
            (Some((u1, v1)), Some((u2, v2))) => {
                let m = min(v1, v2);
                if m >= prec {
                    return Self::zero(self.p, prec);
                }
                let raw = u1 * p_pow(self.p, v1 - m) + u2 * p_pow(self.p, v2 - m);
                Self::normalize(self.p, prec, raw, m)
            }
        }
    }

    pub fn neg_ref(&self) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Nonzero { val, unit } => Self::normalize(self.p, self.prec, -unit, *val),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.same_prime(other);
        let prec = min(self.prec + other.val_bound(), other.prec + self.val_bound());
        match (&self.repr, &other.repr) {
            (Repr::Nonzero { val: v1, unit: u1 }, Repr::Nonzero { val: v2, unit: u2 }) => {
                Self::normalize(self.p, prec, u1 * u2, v1 + v2)
            }
            _ => Self::zero(self.p, prec),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(usage!("mixing {}-adic and {}-adic values", self.p, other.p));
        }
        let (v2, u2) = match &other.repr {
            Repr::Zero => {
                return Err(precision!(
                    "division by a value that is zero to precision {} (raise the working precision)",
                    other.prec
                ))
            }
            Repr::Nonzero { val, unit } => (*val, unit),
        };
        match &self.repr {
            Repr::Zero => Ok(Self::zero(self.p, self.prec - v2)),
            Repr::Nonzero { val: v1, unit: u1 } => {
                let rel = min(self.prec - v1, other.prec - v2);
                let val = v1 - v2;
                let modulus = p_pow(self.p, rel);
                let inv = u2.mod_floor(&modulus).modinv(&modulus).expect("unit is invertible");
                Ok(Self::normalize(self.p, val + rel, u1 * inv, val))
            }
        }
    }

    /// Multiplication by an exact integer: precision shifts by `v_p(k)`.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.p, i64::MAX / 4);
        }
        let (vk, _) = split_p(self.p, k);
        match &self.repr {
            Repr::Zero => Self::zero(self.p, self.prec + vk),
            Repr::Nonzero { val, unit } => Self::normalize(self.p, self.prec + vk, unit * k, *val),
        }
    }

    /// Division by an exact nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(usage!("division by the integer 0"));
        }
        let (vk, ck) = split_p(self.p, k);
        match &self.repr {
            Repr::Zero => Ok(Self::zero(self.p, self.prec - vk)),
            Repr::Nonzero { val, unit } => {
                let prec = self.prec - vk;
                let rel = prec - (val - vk);
                let modulus = p_pow(self.p, rel);
                let inv = ck.mod_floor(&modulus).modinv(&modulus).expect("p-free integer is invertible");
                Ok(Self::normalize(self.p, prec, unit * inv, val - vk))
            }
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        if n == 0 {
            return Self::one(self.p, self.prec);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul_ref(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result.expect("n > 0")
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Self::one(self.p, self.prec).checked_div(&self.pow(n.unsigned_abs()))
        }
    }

    /// Whether `self - other` is zero to the available precision.
    pub fn eq_to_prec(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    /// Reduction modulo `p` of an integral value.
    pub fn residue(&self) -> Option<u64> {
        if self.prec < 1 {
            return None;
        }
        match &self.repr {
            Repr::Zero => Some(0),
            Repr::Nonzero { val, unit } => {
                if *val < 0 {
                    None
                } else if *val > 0 {
                    Some(0)
                } else {
                    (unit % BigInt::from(self.p)).to_u64()
                }
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        self.val_bound() >= 0
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "O({}^{})", self.p, self.prec),
            Repr::Nonzero { val, unit } => {
                if *val == 0 {
                    write!(f, "{} + O({}^{})", unit, self.p, self.prec)
                } else {
                    write!(f, "{}^{}*{} + O({}^{})", self.p, val, unit, self.p, self.prec)
                }
            }
        }
    }
}

impl Add for &PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: &PadicScalar) -> PadicScalar {
        self.add_ref(rhs)
    }
}

impl Sub for &PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: &PadicScalar) -> PadicScalar {
        self.sub_ref(rhs)
    }
}

impl Mul for &PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &PadicScalar) -> PadicScalar {
        self.mul_ref(rhs)
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_ref()
    }
}

/// Binary operations selectable at run time, as exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic: rejects mixed primes instead of panicking.
pub fn scalar_arith(x: &PadicScalar, y: &PadicScalar, op: ArithOp) -> Result<PadicScalar> {
    if x.p != y.p {
        return Err(usage!("mixing {}-adic and {}-adic values", x.p, y.p));
    }
    Ok(match op {
        ArithOp::Add => x.add_ref(y),
        ArithOp::Sub => x.sub_ref(y),
        ArithOp::Mul => x.mul_ref(y),
        ArithOp::Div => return x.checked_div(y),
    })
}

pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
