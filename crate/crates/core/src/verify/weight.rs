use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{MomentFunctional, Rational};
use crate::linalg::Matrix;
use crate::matpoly::{MatPoly, VecPoly};
use crate::model::{build_z, Params};

/// The weight `(1-u)^alpha u^beta Z(u)` on (0, 1). The scalar factor is never
/// expanded; integrals go through the exact moment functional instead, so
/// every value is reported in units of `B(beta+1, alpha+1)`.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    params: Params,
    z: MatPoly,
    moments: MomentFunctional,
}

impl WeightSpec {
    pub fn new(params: &Params) -> Self {
        let moments = MomentFunctional::new(params.alpha().clone(), params.beta().clone())
            .expect("admissible params give finite moments");
        Self {
            z: build_z(params),
            params: params.clone(),
            moments,
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn z(&self) -> &MatPoly {
        &self.z
    }

    pub fn moments(&self) -> &MomentFunctional {
        &self.moments
    }

    fn integrate(&self, integrand: &MatPoly) -> Matrix {
        if let Some(d) = integrand.degree() {
            self.moments.prefill(d);
        }
        integrand.map_entries(|c| self.moments.integrate(c))
    }

    /// `(P, Q) = int P W Q^T`.
    pub fn inner_product(&self, p: &MatPoly, q: &MatPoly) -> Result<Matrix> {
        let dim = self.params.dim();
        if p.cols() != dim || q.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "inner product needs {dim} columns, got {} and {}",
                p.cols(),
                q.cols()
            )));
        }
        let integrand = p.try_mul(&self.z)?.try_mul(&q.transpose())?;
        Ok(self.integrate(&integrand))
    }

    /// `<P, Q> = (P^T, Q^T)^T = int Q^T W P`.
    pub fn bracket(&self, p: &MatPoly, q: &MatPoly) -> Result<Matrix> {
        Ok(self.inner_product(&p.transpose(), &q.transpose())?.transpose())
    }

    /// Scalar product `int f^T W g` of two vector polynomials.
    pub fn vec_inner(&self, f: &VecPoly, g: &VecPoly) -> Result<Rational> {
        let m = self.inner_product(&f.as_matpoly().transpose(), &g.as_matpoly().transpose())?;
        Ok(m[(0, 0)].clone())
    }

    /// Positive definiteness of `Z(u0)` by leading principal minors.
    pub fn z_positive_at(&self, u0: &Rational) -> bool {
        self.z
            .evaluate(u0)
            .leading_minors()
            .iter()
            .all(|m| *m > Rational::zero())
    }
}

/// Free-function form of [`WeightSpec::inner_product`].
pub fn inner_product(p: &MatPoly, q: &MatPoly, ws: &WeightSpec) -> Result<Matrix> {
    ws.inner_product(p, q)
}
