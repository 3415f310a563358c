use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::newton::NewtonPolygon;
use super::PadicScalar;
use crate::error::{usage, Result};
use crate::linalg::Poly;
use crate::valuation::Val;

/// Polynomial over `Q_p` with ascending coefficients.
pub type PadicPoly = Poly<PadicScalar>;

/// Newton polygon of a monic polynomial over `Q_p`.
///
/// Fails with a precision error when a hull-relevant coefficient is zero to
/// precision.
pub fn newton_polygon(f: &PadicPoly) -> Result<NewtonPolygon> {
    if !f.is_monic() {
        return Err(usage!("Newton polygon requested for a non-monic polynomial"));
    }
    let vals: Vec<Val> = f.coeffs().iter().map(PadicScalar::val).collect();
    NewtonPolygon::from_valuations(&vals)?.certified()
}

/// Builds a polynomial from small integer coefficients (ascending).
pub fn int_poly(p: u64, coeffs: &[i64], prec: i64) -> PadicPoly {
    Poly::new(coeffs.iter().map(|&c| PadicScalar::from_int(p, BigInt::from(c), prec)).collect())
}

/// Wire form of a polynomial: `{"coeffs": [scalar, ...]}` in ascending degree.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub coeffs: Vec<PadicScalar>,
}

impl PolyJson {
    pub fn into_poly(self) -> Result<PadicPoly> {
        if self.coeffs.is_empty() {
            return Err(usage!("polynomial has no coefficients"));
        }
        let p = self.coeffs[0].p();
        if self.coeffs.iter().any(|c| c.p() != p) {
            return Err(usage!("polynomial mixes primes"));
        }
        Ok(Poly::new(self.coeffs))
    }
}
