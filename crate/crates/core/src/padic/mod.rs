//! Arithmetic in `Q_p` at finite absolute precision.

mod expl;
mod json;
mod newton;
mod poly;
mod scalar;

pub use expl::{alpha, padic_exp, padic_log};
pub(crate) use expl::{exp_series, log1p_series};
pub use newton::{NewtonPolygon, Slope, Vertex};
pub use poly::{int_poly, newton_polygon, PadicPoly, PolyJson};
pub use scalar::{is_prime, scalar_arith, ArithOp, PadicScalar, DEFAULT_PRECISION};
pub(crate) use scalar::{binomial, factorial};
