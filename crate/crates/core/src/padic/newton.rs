use serde_json::{json, Value};

use crate::error::{precision, usage, Result};
use crate::valuation::{fmt_rat, Rat, Val};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub index: usize,
    pub valuation: Rat,
    /// False when the coefficient is zero to precision and `valuation` is only its lower bound.
    pub exact: bool,
}

/// One edge of the polygon, reported as the valuation of the roots it accounts for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slope {
    /// Root valuation, i.e. the negated geometric slope of the edge.
    pub value: Rat,
    pub multiplicity: usize,
    /// False when an endpoint is a lower bound; `value` is then a lower bound too.
    pub exact: bool,
}

/// Lower convex hull of the points `(i, v(c_i))` of a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<Vertex>,
    pub slopes: Vec<Slope>,
}

impl NewtonPolygon {
    /// Builds the hull from coefficient valuations in ascending degree.
    ///
    /// Coefficients that are zero to precision enter with their lower bound.
    /// The leading coefficient must have exact valuation 0.
    pub fn from_valuations(vals: &[Val]) -> Result<Self> {
        let d = vals.len().checked_sub(1).ok_or_else(|| usage!("empty polynomial"))?;
        if vals[d] != Val::exact_int(0) {
            return Err(usage!("leading coefficient must be a unit (got valuation {})", vals[d]));
        }
        let mut hull: Vec<Vertex> = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            let pt = Vertex { index: i, valuation: v.bound(), exact: v.is_exact() };
            while hull.len() >= 2 {
                let a = &hull[hull.len() - 2];
                let b = &hull[hull.len() - 1];
                // drop b unless it lies strictly below the segment a -> pt
                let cross = Rat::from_integer((b.index - a.index) as i64) * (pt.valuation - a.valuation)
                    - (b.valuation - a.valuation) * Rat::from_integer((pt.index - a.index) as i64);
                if cross <= Rat::from_integer(0) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let slopes = hull
            .windows(2)
            .map(|w| {
                let len = w[1].index - w[0].index;
                Slope {
                    value: (w[0].valuation - w[1].valuation) / Rat::from_integer(len as i64),
                    multiplicity: len,
                    exact: w[0].exact && w[1].exact,
                }
            })
            .collect();
        Ok(NewtonPolygon { vertices: hull, slopes })
    }

    /// Errors unless every vertex comes from a coefficient of known valuation.
    pub fn certified(self) -> Result<Self> {
        if let Some(v) = self.vertices.iter().find(|v| !v.exact) {
            return Err(precision!(
                "coefficient of degree {} is zero to precision (valuation >= {}) and lies on the hull; raise the working precision",
                v.index,
                fmt_rat(&v.valuation)
            ));
        }
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.slopes.iter().map(|s| s.multiplicity).sum()
    }

    /// Slope multiset with multiplicities expanded, ascending.
    pub fn slope_multiset(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self
            .slopes
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.value, s.multiplicity))
            .collect();
        out.sort();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| json!({
                "index": v.index,
                "valuation": fmt_rat(&v.valuation),
                "exact": v.exact,
            })).collect::<Vec<_>>(),
            "slopes": self.slopes.iter().map(|s| json!({
                "slope": fmt_rat(&s.value),
                "multiplicity": s.multiplicity,
                "exact": s.exact,
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{int_poly, newton_polygon, PadicScalar};
    use crate::linalg::Poly;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn eisenstein_single_slope() {
        let np = newton_polygon(&int_poly(3, &[-3, 0, 1], 20)).unwrap();
        assert_eq!(np.slope_multiset(), vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn split_roots() {
        let p = 5;
        let np = newton_polygon(&int_poly(p, &[p as i64, -(1 + p as i64), 1], 20)).unwrap();
        assert_eq!(np.slope_multiset(), vec![r(0, 1), r(1, 1)]);
    }

    #[test]
    fn three_point_hull() {
        // T^3 + pT + p^3: oracle hull over (0,3), (1,1), (3,0)
        let np = newton_polygon(&int_poly(3, &[27, 3, 0, 1], 20)).unwrap();
        let vs: Vec<(usize, Rat)> = np.vertices.iter().map(|v| (v.index, v.valuation)).collect();
        assert_eq!(vs, vec![(0, r(3, 1)), (1, r(1, 1)), (3, r(0, 1))]);
        assert_eq!(np.slope_multiset(), vec![r(1, 2), r(1, 2), r(2, 1)]);
        assert_eq!(np.degree(), 3);
    }

    #[test]
    fn zero_on_hull_is_precision_error() {
        let f = Poly::new(vec![PadicScalar::zero(3, 10), PadicScalar::one(3, 10), PadicScalar::one(3, 10)]);
        assert_eq!(newton_polygon(&f).unwrap_err().kind(), "precision");
        // below the hull it is harmless: T^2 + (O(3^10)) T + 3
        let g = Poly::new(vec![PadicScalar::from_int(3, 3, 10), PadicScalar::zero(3, 10), PadicScalar::one(3, 10)]);
        assert_eq!(newton_polygon(&g).unwrap().slope_multiset(), vec![r(1, 2), r(1, 2)]);
    }
}
