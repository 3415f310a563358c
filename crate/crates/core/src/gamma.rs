//! Finite-level model of the twisted cyclotomic action.
//!
//! At level `m` the field is `K_m = Q_p(ζ_{p^m})`, the generator `σ_a`
//! sends `ζ ↦ ζ^a` and has cyclotomic character `χ = a`. On
//! `D_N = ⊕_{n=1}^{N} K_m aⁿ/n!` the element acts by `a ↦ χ a + y` with
//! `y = (χ - 1)/e`, which makes `g - 1` block upper triangular:
//! block `(m, m+k)` is `χ^m (y^k/k!) σ_a`, minus the identity when `k = 0`.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{convergence, domain, precision, usage, Result};
use crate::exec::Exec;
use crate::field::{FieldElement, FieldMap, LocalField};
use crate::linalg::{inverse, row_reduce, solve, Matrix};
use crate::padic::{factorial, PadicScalar};
use crate::series::{ConvergenceMonitor, Step};
use crate::valuation::{fmt_rat, Rat, Val};

#[derive(Clone, Debug)]
pub struct CyclotomicLevel {
    p: u64,
    m: u32,
    a: i64,
    chi: PadicScalar,
    field: LocalField,
    sigma: Matrix<PadicScalar>,
}

/// `-min entry valuation`: `|A| = p^exponent` in the sup norm, `None` for
/// a matrix that is zero to precision.
pub fn norm_exponent(a: &Matrix<PadicScalar>) -> Option<Rat> {
    match a.min_valuation() {
        Val::Exact(v) => Some(-v),
        Val::AtLeast(_) => None,
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Validates `σ_a` on `Q_p(ζ_{p^m})` and records its matrix.
///
/// Generators with `a^(p-1) = 1` (that is `a = ±1`) have trivial image in
/// `1 + p Z_p` and are rejected.
pub fn build_level(p: u64, m: u32, a: i64, prec: i64) -> Result<CyclotomicLevel> {
    if m == 0 {
        return Err(usage!("cyclotomic level m must be at least 1"));
    }
    if gcd(a, p as i64) != 1 {
        return Err(domain!("generator a = {a} is not prime to p = {p}"));
    }
    if a == 1 || a == -1 {
        return Err(domain!("generator a = {a} has trivial image in 1 + pZ_p (χ^(p-1) = 1)"));
    }
    let field = LocalField::cyclotomic(p, m, prec)?;
    let modulus = (p as i64).pow(m);
    let exponent = a.rem_euclid(modulus) as u64;
    let z = field.one().add(&field.uniformizer());
    let image = z.pow(exponent).sub(&field.one());
    let map = FieldMap::new(&field, field.unramified_generator(), image)
        .map_err(|e| domain!("automorphism certificate failed for a = {a}: {}", e.message()))?;
    let sigma = map.matrix()?;
    Ok(CyclotomicLevel { p, m, a, chi: PadicScalar::from_int(p, a, prec), field, sigma })
}

impl CyclotomicLevel {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn chi(&self) -> &PadicScalar {
        &self.chi
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// Matrix of `σ_a` on the `Q_p`-basis of `K_m`.
    pub fn sigma(&self) -> &Matrix<PadicScalar> {
        &self.sigma
    }

    fn prec(&self) -> i64 {
        self.field.prec()
    }

    /// `χ^n σ_a - 1` on `K_m`.
    pub fn diagonal_operator(&self, n: i64) -> Result<Matrix<PadicScalar>> {
        let c = self.chi.powi(n)?;
        let one = PadicScalar::one(self.p, self.prec());
        Ok(self.sigma.scale(&c).sub(&Matrix::identity(self.degree(), &one)))
    }

    /// Inverse of `χ^n σ_a - 1` (Tate's `ρ_n`).
    pub fn rho(&self, n: i64) -> Result<Matrix<PadicScalar>> {
        inverse(&self.diagonal_operator(n)?).map_err(|_| {
            precision!("χ^{n} σ_a - 1 is singular to working precision at level m = {} (raise the precision)", self.m)
        })
    }
}

/// Per-`n` sup-norm exponents of `ρ_n` and their maximum `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoReport {
    pub per_n: Vec<(i64, Rat)>,
    pub delta: Rat,
}

impl RhoReport {
    pub fn to_json(&self) -> Value {
        json!({
            "delta": fmt_rat(&self.delta),
            "per_n": self.per_n.iter().map(|(n, r)| json!({"n": n, "norm_exponent": fmt_rat(r)})).collect::<Vec<_>>(),
        })
    }
}

pub fn rho_bound(level: &CyclotomicLevel, n_range: (i64, i64), exec: Exec) -> Result<RhoReport> {
    let (lo, hi) = n_range;
    if lo > hi {
        return Err(usage!("empty range [{lo}, {hi}]"));
    }
    if lo <= 0 && 0 <= hi {
        return Err(usage!("n = 0 is excluded: χ^0 σ_a - 1 kills the invariants"));
    }
    let ns: Vec<i64> = (lo..=hi).collect();
    let exps = exec.map(&ns, |&n| -> Result<Rat> {
        let r = level.rho(n)?;
        norm_exponent(&r).ok_or_else(|| precision!("ρ_{n} is zero to precision"))
    });
    let per_n = ns.into_iter().zip(exps).map(|(n, r)| r.map(|x| (n, x))).collect::<Result<Vec<_>>>()?;
    let delta = per_n.iter().map(|&(_, r)| r).max().expect("nonempty range");
    Ok(RhoReport { per_n, delta })
}

/// The matrix of `g - 1` on `D_N`.
#[derive(Clone, Debug)]
pub struct TwistedOperator {
    level: CyclotomicLevel,
    e: PadicScalar,
    trunc: usize,
    y: PadicScalar,
    matrix: Matrix<PadicScalar>,
}

/// How [`neumann_invert`] treats the contraction hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeumannMode {
    /// Require `|ρM| < 1` and sum to the working precision.
    Contractive,
    /// Skip the norm check: `ρM` is strictly block upper triangular, so the
    /// series terminates after `N` terms regardless of its norm.
    Terminating,
}

/// Builds `g - 1` for the parameter `e ∈ Z_p \ {0}` and truncation `N`.
pub fn g_minus_one(level: &CyclotomicLevel, e: &PadicScalar, trunc: usize, exec: Exec) -> Result<TwistedOperator> {
    if trunc == 0 {
        return Err(usage!("truncation N must be at least 1"));
    }
    if e.is_zero() || e.val_bound() < 0 {
        return Err(domain!("e must be a nonzero element of Z_p, got {e}"));
    }
    let p = level.p;
    let prec = level.prec();
    let y = level.chi.sub_ref(&PadicScalar::one(p, prec)).checked_div(e)?;
    if !y.is_zero() && y.val_bound() < 1 {
        return Err(domain!(
            "y = (χ - 1)/e has valuation {} but the twisted action needs v(y) >= 1 (enlarge m or move χ closer to 1)",
            y.val()
        ));
    }
    let d = level.degree();
    let n = trunc;
    // coefficient χ^m y^k/k! of block (m, m+k), blocks indexed from 1
    let blocks: Vec<Vec<Option<Matrix<PadicScalar>>>> = exec.map_range(1..n + 1, |row| {
        let chi_m = level.chi.pow(row as u64);
        (1..=n)
            .map(|col| {
                if col < row {
                    return None;
                }
                let k = col - row;
                let c = chi_m.mul_ref(&y.pow(k as u64)).div_int(&factorial(k as u64)).expect("k! is nonzero");
                let mut b = level.sigma.scale(&c);
                if k == 0 {
                    b = b.sub(&Matrix::identity(d, &PadicScalar::one(p, prec)));
                }
                Some(b)
            })
            .collect()
    });
    let zero = PadicScalar::zero(p, prec);
    let mut matrix = Matrix::zeros(n * d, n * d, &zero);
    for (r, row) in blocks.iter().enumerate() {
        for (c, b) in row.iter().enumerate() {
            if let Some(b) = b {
                matrix.set_block(r * d, c * d, b);
            }
        }
    }
    Ok(TwistedOperator { level: level.clone(), e: e.clone(), trunc, y, matrix })
}

impl TwistedOperator {
    pub fn level(&self) -> &CyclotomicLevel {
        &self.level
    }

    pub fn e(&self) -> &PadicScalar {
        &self.e
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn y(&self) -> &PadicScalar {
        &self.y
    }

    pub fn matrix(&self) -> &Matrix<PadicScalar> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Block `(row, col)`, indices starting at 1.
    pub fn block(&self, row: usize, col: usize) -> Matrix<PadicScalar> {
        let d = self.level.degree();
        self.matrix.block((row - 1) * d, (col - 1) * d, d, d)
    }

    /// The strict upper part `M`.
    pub fn strict_upper(&self) -> Matrix<PadicScalar> {
        let d = self.level.degree();
        let zero = PadicScalar::zero(self.level.p, self.level.prec());
        Matrix::from_fn(self.dim(), self.dim(), |r, c| if c / d > r / d { self.matrix.get(r, c).clone() } else { zero.clone() })
    }

    /// Block diagonal `ρ = diag(ρ_1, ..., ρ_N)`.
    pub fn rho(&self, exec: Exec) -> Result<Matrix<PadicScalar>> {
        let d = self.level.degree();
        let inverses = exec.map_range(1..self.trunc + 1, |n| self.level.rho(n as i64));
        let zero = PadicScalar::zero(self.level.p, self.level.prec());
        let mut out = Matrix::zeros(self.dim(), self.dim(), &zero);
        for (i, inv) in inverses.into_iter().enumerate() {
            out.set_block(i * d, i * d, &inv?);
        }
        Ok(out)
    }

    /// Norm exponent of `ρM`; the Neumann series contracts iff it is negative.
    pub fn contraction_exponent(&self, exec: Exec) -> Result<Option<Rat>> {
        Ok(norm_exponent(&self.rho(exec)?.mul_with(&self.strict_upper(), exec)))
    }

    /// Flattens `N` coefficients in `K_m` (of `a^1/1!, ..., a^N/N!`) into `Q_p` coordinates.
    pub fn flatten(&self, coeffs: &[FieldElement]) -> Result<Vec<PadicScalar>> {
        if coeffs.len() != self.trunc {
            return Err(usage!("expected {} coefficients, got {}", self.trunc, coeffs.len()));
        }
        if coeffs.iter().any(|c| c.field() != &self.level.field) {
            return Err(usage!("coefficients must lie in the cyclotomic field of the level"));
        }
        Ok(coeffs.iter().flat_map(|c| c.coords().to_vec()).collect())
    }

    pub fn unflatten(&self, v: &[PadicScalar]) -> Vec<FieldElement> {
        let d = self.level.degree();
        v.chunks(d).map(|c| self.level.field.from_coords(c.to_vec()).expect("chunk has field degree")).collect()
    }

    pub fn apply(&self, x: &[PadicScalar]) -> Vec<PadicScalar> {
        self.matrix.mul_vec(x)
    }
}

/// Result of a Neumann solve.
#[derive(Clone, Debug)]
pub struct NeumannSolution {
    pub solution: Vec<PadicScalar>,
    /// Valuation lower bound of `(g - 1) x - rhs`.
    pub residual_valuation: Val,
    pub terms: usize,
    pub contraction_exponent: Option<Rat>,
}

impl NeumannSolution {
    pub fn to_json(&self, op: &TwistedOperator) -> Value {
        json!({
            "solution": op.unflatten(&self.solution).iter().map(FieldElement::to_json).collect::<Vec<_>>(),
            "residual_valuation": self.residual_valuation.to_string(),
            "terms": self.terms,
            "contraction_exponent": self.contraction_exponent.map(|r| fmt_rat(&r)),
        })
    }
}

/// `x = Σ_k (-ρM)^k ρ rhs`.
pub fn neumann_invert(op: &TwistedOperator, rhs: &[PadicScalar], mode: NeumannMode, exec: Exec) -> Result<NeumannSolution> {
    if rhs.len() != op.dim() {
        return Err(usage!("right-hand side has {} coordinates, operator has dimension {}", rhs.len(), op.dim()));
    }
    let rho = op.rho(exec)?;
    let rho_m = rho.mul_with(&op.strict_upper(), exec);
    let contraction = norm_exponent(&rho_m);
    if mode == NeumannMode::Contractive {
        if let Some(c) = contraction {
            if c >= Rat::from_integer(0) {
                return Err(convergence!(
                    "|ρM| = p^{} is not < 1, so Σ(-ρM)^k is not certified to converge; ρM is nilpotent on the truncated space and terminating mode sums it exactly",
                    fmt_rat(&c)
                ));
            }
        }
    }
    let neg = rho_m.neg();
    let p = op.level.p;
    let target = Rat::from_integer(op.level.prec());
    let mut monitor = ConvergenceMonitor::new(p, target, "Neumann series").with_cap(10 * op.trunc.max(op.level.prec() as usize) + 16);
    let mut term = rho.mul_vec(rhs);
    let mut sum = term.clone();
    let mut terms = 1;
    let vec_val = |v: &[PadicScalar]| v.iter().map(PadicScalar::val).reduce(Val::min).unwrap_or(Val::at_least_int(i64::MAX / 4));
    if monitor.observe(vec_val(&term))? != Step::Done {
        loop {
            term = neg.mul_vec(&term);
            terms += 1;
            let v = vec_val(&term);
            // strictly block upper triangular: the N-th power vanishes
            let exhausted = terms > op.trunc;
            let step = monitor.observe(v)?;
            sum = sum.iter().zip(&term).map(|(a, b)| a.add_ref(b)).collect();
            if step == Step::Done || exhausted {
                break;
            }
        }
    }
    let residual: Vec<PadicScalar> = op.apply(&sum).iter().zip(rhs).map(|(a, b)| a.sub_ref(b)).collect();
    Ok(NeumannSolution { solution: sum, residual_valuation: vec_val(&residual), terms, contraction_exponent: contraction })
}

/// Reference solution by dense elimination.
pub fn dense_solve(op: &TwistedOperator, rhs: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
    let b = Matrix::from_fn(rhs.len(), 1, |r, _| rhs[r].clone());
    Ok(solve(op.matrix(), &b)?.column(0))
}

/// `dim ker(g - 1)` on `D_N`, certified down to half the working precision.
pub fn kernel_check(op: &TwistedOperator) -> Result<usize> {
    let floor = Rat::new(op.level.prec(), 2);
    let ech = row_reduce(op.matrix(), Some(floor))?;
    Ok(op.dim() - ech.rank())
}

/// Coefficients `n = 1..N` of `(1/e) log(1 + e a)` in `K_m`, i.e. `(-e)^(n-1) (n-1)!`.
pub fn log_t_vector(op: &TwistedOperator) -> Vec<PadicScalar> {
    let field = &op.level.field;
    let mut coeffs = Vec::with_capacity(op.trunc);
    let mut c = PadicScalar::one(op.level.p, op.level.prec());
    for n in 1..=op.trunc {
        coeffs.push(field.from_scalar(&c));
        c = c.mul_ref(&op.e.neg_ref()).mul_int(&BigInt::from(n));
    }
    op.flatten(&coeffs).expect("coefficients live in the level field")
}
