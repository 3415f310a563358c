use super::{FieldElement, LocalField};
use crate::error::{domain, precision, usage, Result};
use crate::linalg::Matrix;
use crate::padic::PadicScalar;
use crate::valuation::{Rat, Val};

/// A `Q_p`-algebra map `K -> L` given by the images of `y` and `u`.
///
/// Construction certifies `g(η) = 0` and `E^η(υ) = 0` in `L` to precision,
/// where `E^η` applies `y ↦ η` to the coefficients of `E`.
#[derive(Clone, Debug)]
pub struct FieldMap {
    source: LocalField,
    target: LocalField,
    y_image: FieldElement,
    u_image: FieldElement,
}

fn check_integral(x: &FieldElement, what: &str) -> Result<()> {
    match x.valuation() {
        Val::Exact(v) if v < Rat::from_integer(0) => Err(domain!("{what} image is not integral (valuation {v})")),
        Val::AtLeast(b) if b < Rat::from_integer(0) => Err(precision!("{what} image is too imprecise to certify integrality")),
        _ => Ok(()),
    }
}

// Σ_j row[j] η^j in the target
fn eval_u_coeff(row: &[PadicScalar], eta_pows: &[FieldElement], target: &LocalField) -> FieldElement {
    row.iter().zip(eta_pows).fold(target.zero(), |acc, (c, e)| acc.add(&e.mul_scalar(c)))
}

impl FieldMap {
    pub fn new(source: &LocalField, y_image: FieldElement, u_image: FieldElement) -> Result<Self> {
        let target = y_image.field().clone();
        if u_image.field() != &target {
            return Err(usage!("images of y and u lie in different fields"));
        }
        if target.p() != source.p() {
            return Err(usage!("map between fields over different primes"));
        }
        check_integral(&y_image, "y")?;
        check_integral(&u_image, "u")?;
        let eta_pows = powers(&y_image, source.f());
        let g_res = source
            .spec()
            .unramified_poly
            .iter()
            .zip(powers(&y_image, source.f() + 1))
            .fold(target.zero(), |acc, (c, e)| acc.add(&e.mul_scalar(c)));
        if !g_res.is_zero() {
            return Err(domain!(
                "image of y does not satisfy the unramified relation: residual has valuation {}",
                g_res.valuation()
            ));
        }
        let ups = powers(&u_image, source.e_ram() + 1);
        let e_res = source
            .spec()
            .eisenstein_poly
            .iter()
            .zip(&ups)
            .fold(target.zero(), |acc, (row, up)| acc.add(&eval_u_coeff(row, &eta_pows, &target).mul(up)));
        if !e_res.is_zero() {
            return Err(domain!(
                "image of u does not satisfy the Eisenstein relation: residual has valuation {}",
                e_res.valuation()
            ));
        }
        Ok(FieldMap { source: source.clone(), target, y_image, u_image })
    }

    pub fn identity(field: &LocalField) -> Self {
        FieldMap {
            source: field.clone(),
            target: field.clone(),
            y_image: field.unramified_generator(),
            u_image: field.uniformizer(),
        }
    }

    /// The structure embedding `Q_p -> L`.
    pub fn from_qp(qp: &LocalField, target: &LocalField) -> Result<Self> {
        if !qp.is_qp() {
            return Err(usage!("source of the structure map must be Q_p"));
        }
        let y = target.from_scalar(&qp.unramified_generator().coords()[0]);
        let u = target.from_scalar(&qp.uniformizer().coords()[0]);
        FieldMap::new(qp, y, u)
    }

    pub fn source(&self) -> &LocalField {
        &self.source
    }

    pub fn target(&self) -> &LocalField {
        &self.target
    }

    /// `[L : K]`.
    pub fn relative_degree(&self) -> usize {
        self.target.degree() / self.source.degree()
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() != &self.source {
            return Err(usage!("element does not belong to the source field of the map"));
        }
        let eta_pows = powers(&self.y_image, self.source.f());
        let mut acc = self.target.zero();
        // Horner in u over the rows x_i(η)
        for i in (0..self.source.e_ram()).rev() {
            let row: Vec<PadicScalar> = (0..self.source.f()).map(|j| x.coeff(j, i).clone()).collect();
            acc = acc.mul(&self.u_image).add(&eval_u_coeff(&row, &eta_pows, &self.target));
        }
        Ok(acc)
    }

    /// The `Q_p`-linear matrix of the map (column `k` = image of basis element `k`).
    pub fn matrix(&self) -> Result<Matrix<PadicScalar>> {
        let images: Vec<FieldElement> =
            self.source.basis_elements().iter().map(|b| self.apply(b)).collect::<Result<_>>()?;
        Ok(Matrix::from_fn(self.target.degree(), self.source.degree(), |r, c| images[c].coords()[r].clone()))
    }
}

fn powers(x: &FieldElement, count: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(count);
    let mut cur = x.field().one();
    for _ in 0..count {
        out.push(cur.clone());
        cur = cur.mul(x);
    }
    out
}

/// Applies the endomorphism of `K` determined by `y ↦ y_image`, `u ↦ u_image`.
pub fn apply_substitution(x: &FieldElement, y_image: &FieldElement, u_image: &FieldElement) -> Result<FieldElement> {
    if y_image.field() != x.field() || u_image.field() != x.field() {
        return Err(usage!("substitution images must lie in the element's field"));
    }
    FieldMap::new(x.field(), y_image.clone(), u_image.clone())?.apply(x)
}
