use num_bigint::BigInt;

use super::PadicScalar;
use crate::error::{domain, Result};
use crate::linalg::Scalar;
use crate::series::{ConvergenceMonitor, Step};
use crate::valuation::{Rat, Val};

/// The constant `α` governing convergence of the exponential:
/// `1/(p-1)` for odd `p` and `1/2` for `p = 2`.
pub fn alpha(p: u64) -> Rat {
    if p == 2 {
        Rat::new(1, 2)
    } else {
        Rat::new(1, p as i64 - 1)
    }
}

/// `Σ xⁿ/n!` for any scalar type, summed under the convergence monitor.
pub(crate) fn exp_series<T: Scalar>(x: &T, p: u64, target: Rat) -> Result<T> {
    // v(xⁿ/n!) >= n (v(x) - 1/(p-1)) since v(n!) <= (n-1)/(p-1)
    let slope = x.val().bound() - Rat::new(1, p as i64 - 1);
    let mut monitor = ConvergenceMonitor::new(p, target, "exponential series");
    let mut sum = x.one_like();
    let mut term = x.one_like();
    monitor.observe(term.val())?;
    for n in 1u64.. {
        term = term.mul(x).div_int(&BigInt::from(n))?;
        let floor = (slope > Rat::from_integer(0)).then(|| slope * Rat::from_integer(n as i64 + 1));
        let step = monitor.observe_with_tail(term.val(), floor)?;
        sum = sum.add(&term);
        if step == Step::Done {
            break;
        }
    }
    Ok(sum)
}

/// `log(1 + z) = Σ (-1)^(n-1) zⁿ/n`.
pub(crate) fn log1p_series<T: Scalar>(z: &T, p: u64, target: Rat) -> Result<T> {
    let vz = z.val().bound();
    let mut monitor = ConvergenceMonitor::new(p, target, "logarithm series");
    let mut power = z.clone();
    let mut sum = z.clone();
    monitor.observe(z.val())?;
    for n in 2u64.. {
        power = power.mul(z);
        let mut term = power.div_int(&BigInt::from(n))?;
        if n % 2 == 0 {
            term = term.neg();
        }
        let step = monitor.observe_with_tail(term.val(), Some(log_tail_floor(vz, p, n + 1)))?;
        sum = sum.add(&term);
        if step == Step::Done {
            break;
        }
    }
    Ok(sum)
}

// min over k >= n of k v - v_p(k), using v_p(k) <= log_p(k)
fn log_tail_floor(v: Rat, p: u64, n: u64) -> Rat {
    if v <= Rat::from_integer(0) {
        return Rat::from_integer(i64::MIN / 4);
    }
    let mut best: Option<Rat> = None;
    let mut pk = 1u64;
    let mut k = 0i64;
    // the bound k v - j is smallest at k = max(n, p^j) for each j
    while k < 64 {
        let start = n.max(pk);
        let cand = v * Rat::from_integer(start as i64) - Rat::from_integer(k);
        best = Some(best.map_or(cand, |b: Rat| b.min(cand)));
        match pk.checked_mul(p) {
            Some(next) if next < (1u64 << 40) => pk = next,
            _ => break,
        }
        k += 1;
    }
    best.expect("at least one candidate")
}

/// p-adic exponential of `x` with `v(x) > 1/(p-1)`.
pub fn padic_exp(x: &PadicScalar) -> Result<PadicScalar> {
    let p = x.p();
    if x.is_zero() {
        return Ok(PadicScalar::one(p, x.prec()));
    }
    let v = x.valuation().expect("nonzero");
    // integer valuations: v > 1/(p-1) means v >= 1 for odd p and v >= 2 for p = 2
    if Rat::from_integer(v) <= Rat::new(1, p as i64 - 1) {
        return Err(domain!(
            "exp({x}) diverges: need v(x) > 1/(p-1) (v(x) >= {} for p = {p}); convergence radius alpha = {}",
            if p == 2 { 2 } else { 1 },
            crate::valuation::fmt_rat(&alpha(p))
        ));
    }
    exp_series(x, p, Rat::from_integer(x.prec()))
}

/// p-adic logarithm of `x` with `v(x - 1) >= 1`.
pub fn padic_log(x: &PadicScalar) -> Result<PadicScalar> {
    let p = x.p();
    let z = x.sub_ref(&PadicScalar::one(p, x.prec()));
    if z.is_zero() {
        return Ok(z);
    }
    match z.val() {
        Val::Exact(v) if v >= Rat::from_integer(1) => log1p_series(&z, p, Rat::from_integer(z.prec())),
        v => Err(domain!("log({x}) needs v(x - 1) >= 1, got v(x - 1) = {v}")),
    }
}
