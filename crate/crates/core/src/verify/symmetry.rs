//! Symmetry of a second-order operator with respect to the weight.
//!
//! Writing `W = rho Z` with `rho = (1-u)^alpha u^beta`, we have
//! `rho'/rho = g/h` where `g = beta(1-u) - alpha u` and `h = u(1-u)`.
//! Dividing the three symmetry equations by `rho` and clearing the
//! denominators `1`, `h` and `h^2` respectively leaves polynomial identities:
//!
//! ```text
//! R1 = A2^T Z - Z A2
//! R2 = h (A1^T Z + Z A1 - 2 (Z A2)') - 2 g Z A2
//! R3 = h^2 (A0^T Z - Z A0 + (Z A1)' - (Z A2)'') + h g Z A1
//!      - 2 h g (Z A2)' - (g' h - g h' + g^2) Z A2
//! ```

use num_traits::Zero;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::linalg::Matrix;
use crate::matpoly::{scalar, MatPoly};
use crate::verify::WeightSpec;

/// The three cleared residuals of the symmetry equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryResiduals {
    pub second_order: MatPoly,
    pub first_order: MatPoly,
    pub zeroth_order: MatPoly,
}

impl SymmetryResiduals {
    pub fn all_zero(&self) -> bool {
        self.second_order.is_zero() && self.first_order.is_zero() && self.zeroth_order.is_zero()
    }

    pub fn as_array(&self) -> [&MatPoly; 3] {
        [&self.second_order, &self.first_order, &self.zeroth_order]
    }
}

fn sub_scalar(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn mul_scalar(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn check_symmetry_reduced(ws: &WeightSpec, op: &DiffOp) -> Result<SymmetryResiduals> {
    if op.order() != 2 {
        return Err(Error::NotSecondOrder(op.order()));
    }
    let p = ws.params();
    let z = ws.z();
    let (a0, a1, a2) = (op.coeff(0), op.coeff(1), op.coeff(2));

    let h = vec![int(0), int(1), int(-1)];
    let g = vec![p.beta().clone(), -(p.alpha() + p.beta())];
    let dg = vec![-(p.alpha() + p.beta())];
    let dh = vec![int(1), int(-2)];
    let h2 = mul_scalar(&h, &h);
    let hg = mul_scalar(&h, &g);
    // g'h - g h' + g^2
    let rho2 = {
        let t = sub_scalar(&mul_scalar(&dg, &h), &mul_scalar(&g, &dh));
        let g2 = mul_scalar(&g, &g);
        (0..t.len().max(g2.len()))
            .map(|i| t.get(i).cloned().unwrap_or_default() + g2.get(i).cloned().unwrap_or_default())
            .collect::<Vec<_>>()
    };

    let za2 = z * &a2;
    let za1 = z * &a1;
    let za2_d = za2.derivative();

    let second_order = &(&a2.transpose() * z) - &za2;

    let first_order = &(&(&(&a1.transpose() * z) + &za1) - &za2_d.scale(&int(2))).mul_scalar_poly(&h)
        - &za2.mul_scalar_poly(&g).scale(&int(2));

    let inner = &(&(&(&a0.transpose() * z) - &(z * &a0)) + &za1.derivative()) - &za2_d.derivative();
    let zeroth_order = &(&(&inner.mul_scalar_poly(&h2) + &za1.mul_scalar_poly(&hg))
        - &za2_d.mul_scalar_poly(&hg).scale(&int(2)))
        - &za2.mul_scalar_poly(&rho2);

    Ok(SymmetryResiduals {
        second_order,
        first_order,
        zeroth_order,
    })
}

/// Outcome of the vanishing-order test for one entry of `Z A2` or `Z A1 - A1^T Z`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BoundaryEntry {
    pub quantity: &'static str,
    pub row: usize,
    pub col: usize,
    /// Orders of vanishing at 0 and 1; `None` when the entry is identically zero.
    pub order_at_zero: Option<usize>,
    pub order_at_one: Option<usize>,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub entries: Vec<BoundaryEntry>,
}

impl BoundaryReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundaryEntry> {
        self.entries.iter().filter(|e| !e.passes)
    }
}

/// Checks that `rho Z A2` and `rho (Z A1 - A1^T Z)` vanish at both endpoints by
/// counting orders: `u^(beta + ord0)` and `(1-u)^(alpha + ord1)` must tend to zero.
pub fn check_boundary(ws: &WeightSpec, op: &DiffOp) -> Result<BoundaryReport> {
    if op.order() != 2 {
        return Err(Error::NotSecondOrder(op.order()));
    }
    let p = ws.params();
    let z = ws.z();
    let a1 = op.coeff(1);
    let quantities = [
        ("WA2", z * &op.coeff(2)),
        ("WA1-A1tW", &(z * &a1) - &(&a1.transpose() * z)),
    ];
    let mut entries = Vec::new();
    for (name, q) in &quantities {
        for i in 0..q.rows() {
            for j in 0..q.cols() {
                let e = q.entry(i, j);
                let o0 = scalar::order_at_zero(&e);
                let o1 = scalar::order_at_one(&e);
                let ok0 = o0.is_none_or(|o| p.beta() + Rational::from_integer(o.into()) > Rational::zero());
                let ok1 = o1.is_none_or(|o| p.alpha() + Rational::from_integer(o.into()) > Rational::zero());
                entries.push(BoundaryEntry {
                    quantity: name,
                    row: i,
                    col: j,
                    order_at_zero: o0,
                    order_at_one: o1,
                    passes: ok0 && ok1,
                });
            }
        }
    }
    Ok(BoundaryReport { entries })
}

/// `<op P, Q> = <P, op Q>` for all `P = u^a E_rs`, `Q = u^b E_tv` with `a, b <= n`.
pub fn check_bilinear_symmetry(ws: &WeightSpec, op: &DiffOp, n: usize) -> Result<bool> {
    let dim = ws.params().dim();
    let mut basis = Vec::new();
    for a in 0..=n {
        for r in 0..dim {
            for s in 0..dim {
                let mut e = Matrix::zeros(dim, dim);
                e[(r, s)] = Rational::from_integer(1.into());
                basis.push(MatPoly::monomial(e, a));
            }
        }
    }
    let images = basis.iter().map(|b| op.apply(b)).collect::<Result<Vec<_>>>()?;
    for (p, op_p) in basis.iter().zip(&images) {
        for (q, op_q) in basis.iter().zip(&images) {
            if ws.bracket(op_p, q)? != ws.bracket(p, op_q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use crate::model::{build_d, build_e, Params};

    fn grid() -> Vec<Params> {
        vec![
            Params::new(int(0), int(1), int(1), 1).unwrap(),
            Params::new(frac(1, 2), frac(3, 2), int(1), 2).unwrap(),
            Params::new(int(1), int(1), frac(1, 2), 2).unwrap(),
            Params::new(int(0), int(1), frac(3, 2), 2).unwrap(),
            Params::new(frac(-1, 2), frac(-1, 3), frac(1, 3), 3).unwrap(),
        ]
    }

    #[test]
    fn d_and_e_are_symmetric() {
        for p in grid() {
            let ws = WeightSpec::new(&p);
            for op in [build_d(&p), build_e(&p)] {
                assert!(check_symmetry_reduced(&ws, &op).unwrap().all_zero(), "{p}");
                assert!(check_boundary(&ws, &op).unwrap().passed(), "{p}");
            }
        }
    }

    #[test]
    fn perturbed_zeroth_order_breaks_third_equation() {
        let p = Params::new(int(0), int(1), int(1), 1).unwrap();
        let ws = WeightSpec::new(&p);
        let d = build_d(&p);
        let mut e01 = Matrix::zeros(2, 2);
        e01[(0, 1)] = int(1);
        // V -> V + E01 means A0 -> A0 - E01
        let broken = d.with_coeff(0, &d.coeff(0) - &MatPoly::constant(e01)).unwrap();
        let res = check_symmetry_reduced(&ws, &broken).unwrap();
        assert!(res.second_order.is_zero());
        assert!(res.first_order.is_zero());
        assert!(!res.zeroth_order.is_zero());
    }

    #[test]
    fn nonsymmetric_first_order_fails_boundary_when_beta_negative() {
        let p = Params::new(int(0), frac(-1, 2), frac(1, 4), 1).unwrap();
        let ws = WeightSpec::new(&p);
        let d = build_d(&p);
        let mut bump = Matrix::zeros(2, 2);
        bump[(0, 1)] = int(1);
        let broken = d.with_coeff(1, &d.coeff(1) + &MatPoly::constant(bump)).unwrap();
        let report = check_boundary(&ws, &broken).unwrap();
        assert!(!report.passed());
        assert!(report.failures().any(|e| e.order_at_zero == Some(0)));
    }

    #[test]
    fn only_second_order_operators() {
        let p = Params::new(int(0), int(1), int(1), 1).unwrap();
        let ws = WeightSpec::new(&p);
        let d1 = DiffOp::derivative(2);
        assert_eq!(check_symmetry_reduced(&ws, &d1), Err(Error::NotSecondOrder(1)));
        assert!(check_boundary(&ws, &d1).is_err());
    }

    #[test]
    fn bilinear_symmetry() {
        let p = Params::new(int(0), int(1), int(1), 1).unwrap();
        let ws = WeightSpec::new(&p);
        assert!(check_bilinear_symmetry(&ws, &build_d(&p), 4).unwrap());
        assert!(check_bilinear_symmetry(&ws, &build_e(&p), 4).unwrap());
        assert!(!check_bilinear_symmetry(&ws, &DiffOp::derivative(2), 2).unwrap());
    }
}
