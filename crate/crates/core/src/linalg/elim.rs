use super::{Matrix, Scalar};
use crate::error::{precision, usage, Result};
use crate::valuation::{fmt_rat, Rat, Val};

/// Outcome of Gauss-Jordan elimination with full valuation pivoting.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    /// Reduced matrix: each pivot row is scaled to 1 at its pivot column and
    /// every other row vanishes there.
    pub reduced: Matrix<T>,
    /// `(row, column)` of each pivot in elimination order.
    pub pivots: Vec<(usize, usize)>,
    /// Smallest lower bound among the entries left undecided (all zero to precision).
    pub residual_bound: Option<Rat>,
}

impl<T: Scalar> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_rows(&self) -> Vec<usize> {
        self.pivots.iter().map(|&(r, _)| r).collect()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.iter().map(|&(_, c)| c).collect()
    }

    /// Basis of the right kernel, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let m = &self.reduced;
        let proto = m.get(0, 0);
        let pivot_cols = self.pivot_cols();
        (0..m.cols())
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![proto.zero_like(); m.cols()];
                v[free] = proto.one_like();
                for &(r, c) in &self.pivots {
                    v[c] = m.get(r, free).neg();
                }
                v
            })
            .collect()
    }
}

/// Full-pivot Gauss-Jordan elimination.
///
/// The pivot at each step is an entry of minimal exact valuation. Elimination
/// stops when every remaining entry is zero to precision; if the weakest such
/// entry is only known to be `>= b` with `b < zero_floor`, the rank is
/// ambiguous and a precision error is returned.
pub fn row_reduce<T: Scalar>(a: &Matrix<T>, zero_floor: Option<Rat>) -> Result<Echelon<T>> {
    let (n, m) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut used_r = vec![false; n];
    let mut used_c = vec![false; m];
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, usize, Rat)> = None;
        for i in (0..n).filter(|&i| !used_r[i]) {
            for j in (0..m).filter(|&j| !used_c[j]) {
                if let Val::Exact(v) = w.get(i, j).val() {
                    if best.as_ref().is_none_or(|b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        used_r[pr] = true;
        used_c[pc] = true;
        let piv = w.get(pr, pc).clone();
        for j in 0..m {
            let scaled = if j == pc { piv.one_like() } else { w.get(pr, j).div(&piv)? };
            w.set(pr, j, scaled);
        }
        for i in (0..n).filter(|&i| i != pr) {
            let factor = w.get(i, pc).clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..m {
                let v = if j == pc { factor.zero_like() } else { w.get(i, j).sub(&factor.mul(w.get(pr, j))) };
                w.set(i, j, v);
            }
        }
        pivots.push((pr, pc));
    }
    let mut residual_bound: Option<Rat> = None;
    for i in (0..n).filter(|&i| !used_r[i]) {
        for j in (0..m).filter(|&j| !used_c[j]) {
            let b = w.get(i, j).val().bound();
            residual_bound = Some(residual_bound.map_or(b, |r| r.min(b)));
        }
    }
    if let (Some(floor), Some(b)) = (zero_floor, residual_bound) {
        if b < floor {
            return Err(precision!(
                "rank not certifiable: an undecided entry is only known to have valuation >= {} (need >= {}); raise the working precision",
                fmt_rat(&b),
                fmt_rat(&floor)
            ));
        }
    }
    Ok(Echelon { reduced: w, pivots, residual_bound })
}

/// Solves `A X = B` for square invertible `A` by column-wise valuation pivoting.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(usage!("solve needs a square system with matching right-hand side"));
    }
    let n = a.rows();
    let k = b.cols();
    let mut w = Matrix::from_fn(n, n + k, |i, j| if j < n { a.get(i, j).clone() } else { b.get(i, j - n).clone() });
    for c in 0..n {
        let mut best: Option<(usize, Rat)> = None;
        for r in c..n {
            if let Val::Exact(v) = w.get(r, c).val() {
                if best.as_ref().is_none_or(|bst| v < bst.1) {
                    best = Some((r, v));
                }
            }
        }
        let Some((pr, _)) = best else {
            return Err(precision!("matrix is singular to working precision (column {c} has no certified pivot)"));
        };
        if pr != c {
            for j in 0..n + k {
                let t = w.get(pr, j).clone();
                w.set(pr, j, w.get(c, j).clone());
                w.set(c, j, t);
            }
        }
        let piv = w.get(c, c).clone();
        for j in c..n + k {
            let v = if j == c { piv.one_like() } else { w.get(c, j).div(&piv)? };
            w.set(c, j, v);
        }
        for r in (0..n).filter(|&r| r != c) {
            let factor = w.get(r, c).clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..n + k {
                let v = if j == c { factor.zero_like() } else { w.get(r, j).sub(&factor.mul(w.get(c, j))) };
                w.set(r, j, v);
            }
        }
    }
    Ok(w.block(0, n, n, k))
}

pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    solve(a, &Matrix::identity(a.rows(), a.get(0, 0)))
}

/// Determinant by valuation-pivoted elimination (independent of the
/// division-free characteristic polynomial).
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if !a.is_square() {
        return Err(usage!("determinant of a non-square matrix"));
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut det = a.get(0, 0).one_like();
    for c in 0..n {
        let mut best: Option<(usize, Rat)> = None;
        for r in c..n {
            if let Val::Exact(v) = w.get(r, c).val() {
                if best.as_ref().is_none_or(|bst| v < bst.1) {
                    best = Some((r, v));
                }
            }
        }
        let Some((pr, _)) = best else {
            // remaining column is zero to precision
            let mut z = w.get(c, c).clone();
            for r in c + 1..n {
                z = z.add(w.get(r, c));
            }
            return Ok(det.mul(&z));
        };
        if pr != c {
            for j in 0..n {
                let t = w.get(pr, j).clone();
                w.set(pr, j, w.get(c, j).clone());
                w.set(c, j, t);
            }
            det = det.neg();
        }
        let piv = w.get(c, c).clone();
        det = det.mul(&piv);
        for r in c + 1..n {
            let factor = w.get(r, c).div(&piv)?;
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let v = w.get(r, j).sub(&factor.mul(w.get(c, j)));
                w.set(r, j, v);
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicScalar;

    fn m(p: u64, rows: &[&[i64]]) -> Matrix<PadicScalar> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| PadicScalar::from_int(p, x, 30)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(3, &[&[1, 2, 3], &[2, 4, 6], &[0, 3, 9]]);
        let e = row_reduce(&a, None).unwrap();
        assert_eq!(e.rank(), 2);
        let k = e.kernel_basis();
        assert_eq!(k.len(), 1);
        let img = a.mul_vec(&k[0]);
        assert!(img.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(5, &[&[5, 1], &[2, 3]]);
        let inv = inverse(&a).unwrap();
        let id = a.mul(&inv);
        assert!(id.sub(&Matrix::identity(2, a.get(0, 0))).is_zero());
        let d = determinant(&a).unwrap();
        assert!(d.eq_to_prec(&PadicScalar::from_int(5, 13, 30)));
    }

    #[test]
    fn singular_solve_is_precision_error() {
        let a = m(3, &[&[1, 2], &[2, 4]]);
        assert_eq!(inverse(&a).unwrap_err().kind(), "precision");
    }

    #[test]
    fn ambiguous_rank_is_reported() {
        let a = Matrix::from_rows(vec![vec![PadicScalar::zero(3, 2)]]).unwrap();
        assert_eq!(row_reduce(&a, Some(Rat::from_integer(10))).unwrap_err().kind(), "precision");
        assert_eq!(row_reduce(&a, None).unwrap().rank(), 0);
    }
}
