use num_bigint::BigInt;

use super::Scalar;

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing coefficients are never trimmed: a coefficient that is zero to
/// precision may still be nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &T {
        self.coeffs.last().expect("nonempty")
    }

    /// Leading coefficient equals 1 to its precision.
    pub fn is_monic(&self) -> bool {
        let lead = self.leading();
        lead.sub(&lead.one_like()).is_zero()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Poly::new(vec![self.coeffs[0].zero_like()]);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(&BigInt::from(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let out = (0..n)
            .map(|k| {
                let lo = k.saturating_sub(other.coeffs.len() - 1);
                let hi = k.min(self.coeffs.len() - 1);
                let mut acc = self.coeffs[lo].mul(&other.coeffs[k - lo]);
                for i in lo + 1..=hi {
                    acc = acc.add(&self.coeffs[i].mul(&other.coeffs[k - i]));
                }
                acc
            })
            .collect();
        Poly::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&Poly::new(other.coeffs.iter().map(Scalar::neg).collect()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| c.mul(a)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicScalar;

    fn p(xs: &[i64]) -> Poly<PadicScalar> {
        Poly::new(xs.iter().map(|&x| PadicScalar::from_int(5, x, 20)).collect())
    }

    #[test]
    fn eval_mul_derivative() {
        let f = p(&[-1, 0, 1]);
        let g = p(&[1, 1]);
        let fg = f.mul(&g);
        assert_eq!(fg.degree(), 3);
        let x = PadicScalar::from_int(5, 3, 20);
        assert!(fg.eval(&x).eq_to_prec(&(&f.eval(&x) * &g.eval(&x))));
        let d = f.derivative();
        assert!(d.coeffs()[1].eq_to_prec(&PadicScalar::from_int(5, 2, 20)));
        assert!(f.is_monic());
    }
}
