//! Linear differential operators with matrix polynomial coefficients.
//!
//! An operator `sum_j A_j(u) d^j/du^j` acts on matrix (or vector) valued
//! polynomials from the left: `F -> sum_j A_j F^(j)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{binom, Rational};
use crate::linalg::Matrix;
use crate::matpoly::{MatPoly, VecPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    dim: usize,
    /// `coeffs[j]` multiplies the j-th derivative.
    coeffs: Vec<MatPoly>,
}

impl DiffOp {
    /// Coefficients indexed by derivative order. Vanishing top coefficients
    /// are dropped, so the zero operator has order 0.
    pub fn new(coeffs: Vec<MatPoly>) -> Result<Self> {
        let dim = coeffs
            .first()
            .map(MatPoly::rows)
            .ok_or_else(|| Error::DimensionMismatch("operator needs at least one coefficient".into()))?;
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch(format!(
                "operator coefficient is {}x{}, expected {dim}x{dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        let mut op = Self { dim, coeffs };
        op.trim();
        Ok(op)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(MatPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: vec![MatPoly::zero(dim, dim)],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::multiplication(MatPoly::identity(dim))
    }

    /// Plain `d/du`.
    pub fn derivative(dim: usize) -> Self {
        Self {
            dim,
            coeffs: vec![MatPoly::zero(dim, dim), MatPoly::identity(dim)],
        }
    }

    /// Order-zero operator `F -> A F`.
    pub fn multiplication(a: MatPoly) -> Self {
        Self::new(vec![a]).expect("square multiplier")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `d^j/du^j`; zero beyond the order.
    pub fn coeff(&self, j: usize) -> MatPoly {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| MatPoly::zero(self.dim, self.dim))
    }

    pub fn coeffs(&self) -> &[MatPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MatPoly::is_zero)
    }

    /// Membership in the algebra of operators with `deg A_j <= j`.
    pub fn in_class_d(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(j, a)| a.degree().is_none_or(|d| d <= j))
    }

    pub fn apply(&self, f: &MatPoly) -> Result<MatPoly> {
        if f.rows() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator of size {} applied to {}x{} polynomial",
                self.dim,
                f.rows(),
                f.cols()
            )));
        }
        let mut acc = MatPoly::zero(f.rows(), f.cols());
        let mut fj = f.clone();
        for a in &self.coeffs {
            if fj.is_zero() {
                break;
            }
            if !a.is_zero() {
                acc = &acc + &(a * &fj);
            }
            fj = fj.derivative();
        }
        Ok(acc)
    }

    pub fn apply_vec(&self, f: &VecPoly) -> Result<VecPoly> {
        Ok(VecPoly::from_matpoly(self.apply(f.as_matpoly())?))
    }

    /// The operator `self o other`, expanded with the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "compose operators of size {} and {}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = vec![MatPoly::zero(n, n); self.order() + other.order() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let mut bm = b.clone();
                for m in 0..=i {
                    if bm.is_zero() {
                        break;
                    }
                    let term = (a * &bm).scale(&binom(i, m));
                    let slot = i + j - m;
                    out[slot] = &out[slot] + &term;
                    bm = bm.derivative();
                }
            }
        }
        DiffOp::new(out)
    }

    pub fn try_add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.zip(other, |a, b| a.try_add(b))
    }

    pub fn try_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.zip(other, |a, b| a.try_sub(b))
    }

    fn zip(&self, other: &DiffOp, f: impl Fn(&MatPoly, &MatPoly) -> Result<MatPoly>) -> Result<DiffOp> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "operators of size {} and {}",
                self.dim, other.dim
            )));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        DiffOp::new(
            (0..n)
                .map(|j| f(&self.coeff(j), &other.coeff(j)))
                .collect::<Result<_>>()?,
        )
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero(self.dim);
        }
        DiffOp {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// `[self, other] = self o other - other o self`.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.try_sub(&other.compose(self)?)
    }

    /// Replaces coefficient `j`, extending the operator when needed.
    pub fn with_coeff(&self, j: usize, a: MatPoly) -> Result<DiffOp> {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() <= j {
            coeffs.resize(j + 1, MatPoly::zero(self.dim, self.dim));
        }
        coeffs[j] = a;
        DiffOp::new(coeffs)
    }

    /// `u^i` coefficient of `A_i`, the quantity read off by the monic eigenvalue formula.
    pub fn diagonal_coeff(&self, i: usize) -> Matrix {
        self.coeff(i).coeff(i)
    }
}
