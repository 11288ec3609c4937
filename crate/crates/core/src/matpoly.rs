//! Polynomials in one variable `u` with rational matrix coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::exact::{from_usize, Rational};
use crate::linalg::Matrix;

/// `sum_i coeffs[i] u^i`. Trailing zero coefficients are always trimmed, so
/// the zero polynomial has no coefficients and no degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatPoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix>,
}

impl MatPoly {
    /// Panics if some coefficient does not have shape `rows x cols`.
    pub fn new(rows: usize, cols: usize, coeffs: Vec<Matrix>) -> Self {
        assert!(
            coeffs.iter().all(|c| c.shape() == (rows, cols)),
            "coefficient shape mismatch"
        );
        let mut p = Self { rows, cols, coeffs };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<Matrix>) -> Self {
        let (r, c) = coeffs.first().map_or((0, 0), Matrix::shape);
        Self::new(r, c, coeffs)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(m: Matrix) -> Self {
        Self::from_coeffs(vec![m])
    }

    pub fn identity(dim: usize) -> Self {
        Self::constant(Matrix::identity(dim))
    }

    /// `m u^power`.
    pub fn monomial(m: Matrix, power: usize) -> Self {
        let (r, c) = m.shape();
        let mut coeffs = vec![Matrix::zeros(r, c); power];
        coeffs.push(m);
        Self::new(r, c, coeffs)
    }

    /// `p(u) I` for a scalar polynomial with ascending coefficients.
    pub fn scalar_poly(dim: usize, coeffs: &[Rational]) -> Self {
        Self::new(
            dim,
            dim,
            coeffs.iter().map(|c| Matrix::scalar(dim, c.clone())).collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Matrix::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// Coefficient of `u^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Matrix {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    pub fn leading(&self) -> Option<&Matrix> {
        self.coeffs.last()
    }

    /// Scalar polynomial sitting at entry `(i, j)`, ascending and trimmed.
    pub fn entry(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.coeffs.iter().map(|c| c[(i, j)].clone()).collect();
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "add")?;
        Ok(self.combine(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other, "sub")?;
        Ok(self.combine(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix polynomial product {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.rows, other.cols));
        }
        let mut coeffs = vec![Matrix::zeros(self.rows, other.cols); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(Self::new(self.rows, other.cols, coeffs))
    }

    fn check_same(&self, other: &Self, op: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "matrix polynomial {op} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(self.rows, self.cols, coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.rows, self.cols, self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.cols,
            self.rows,
            self.coeffs.iter().map(Matrix::transpose).collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, m)| m.scale(&from_usize(i)))
            .collect();
        Self::new(self.rows, self.cols, coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Horner evaluation at a rational point.
    pub fn evaluate(&self, u0: &Rational) -> Matrix {
        self.coeffs
            .iter()
            .rev()
            .fold(Matrix::zeros(self.rows, self.cols), |acc, c| &acc.scale(u0) + c)
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_const_right(&self, m: &Matrix) -> Self {
        Self::new(self.rows, m.cols(), self.coeffs.iter().map(|c| c * m).collect())
    }

    /// Left multiplication by a constant matrix.
    pub fn mul_const_left(&self, m: &Matrix) -> Self {
        Self::new(m.rows(), self.cols, self.coeffs.iter().map(|c| m * c).collect())
    }

    /// Multiplication by a scalar polynomial (ascending coefficients).
    pub fn mul_scalar_poly(&self, p: &[Rational]) -> Self {
        if self.is_zero() || p.iter().all(Zero::is_zero) {
            return Self::zero(self.rows, self.cols);
        }
        let mut coeffs = vec![Matrix::zeros(self.rows, self.cols); self.coeffs.len() + p.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, c) in p.iter().enumerate() {
                if !c.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &a.scale(c);
                }
            }
        }
        Self::new(self.rows, self.cols, coeffs)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Applies `f` to every scalar entry polynomial, producing a constant matrix.
    pub fn map_entries(&self, mut f: impl FnMut(&[Rational]) -> Rational) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| f(&self.entry(i, j)))
    }
}

impl Add for &MatPoly {
    type Output = MatPoly;
    fn add(self, rhs: &MatPoly) -> MatPoly {
        self.try_add(rhs).expect("matrix polynomial add")
    }
}

impl Sub for &MatPoly {
    type Output = MatPoly;
    fn sub(self, rhs: &MatPoly) -> MatPoly {
        self.try_sub(rhs).expect("matrix polynomial sub")
    }
}

impl Mul for &MatPoly {
    type Output = MatPoly;
    fn mul(self, rhs: &MatPoly) -> MatPoly {
        self.try_mul(rhs).expect("matrix polynomial mul")
    }
}

impl Neg for &MatPoly {
    type Output = MatPoly;
    fn neg(self) -> MatPoly {
        self.scale(&-Rational::one())
    }
}

impl Serialize for MatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<Vec<String>> = self
            .coeffs
            .iter()
            .map(|m| m.entries().iter().map(ToString::to_string).collect())
            .collect();
        let mut st = s.serialize_struct("MatPoly", 2)?;
        st.serialize_field("dim", &self.rows)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Column-vector valued polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VecPoly(MatPoly);

impl VecPoly {
    /// From ascending vector coefficients, all of length `dim`.
    pub fn from_coeffs(dim: usize, coeffs: &[Vec<Rational>]) -> Self {
        Self(MatPoly::new(
            dim,
            1,
            coeffs.iter().map(|v| Matrix::column_vector(v)).collect(),
        ))
    }

    pub fn zero(dim: usize) -> Self {
        Self(MatPoly::zero(dim, 1))
    }

    pub fn constant(v: &[Rational]) -> Self {
        Self::from_coeffs(v.len(), &[v.to_vec()])
    }

    /// Panics unless `p` has a single column.
    pub fn from_matpoly(p: MatPoly) -> Self {
        assert_eq!(p.cols(), 1, "vector polynomial must have one column");
        Self(p)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn coeff(&self, i: usize) -> Vec<Rational> {
        self.0.coeff(i).column(0)
    }

    pub fn leading(&self) -> Option<Vec<Rational>> {
        self.0.leading().map(|m| m.column(0))
    }

    pub fn as_matpoly(&self) -> &MatPoly {
        &self.0
    }

    pub fn into_matpoly(self) -> MatPoly {
        self.0
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self(self.0.scale(c))
    }

    pub fn evaluate(&self, u0: &Rational) -> Vec<Rational> {
        self.0.evaluate(u0).column(0)
    }
}

impl Add for &VecPoly {
    type Output = VecPoly;
    fn add(self, rhs: &VecPoly) -> VecPoly {
        VecPoly(&self.0 + &rhs.0)
    }
}

impl Sub for &VecPoly {
    type Output = VecPoly;
    fn sub(self, rhs: &VecPoly) -> VecPoly {
        VecPoly(&self.0 - &rhs.0)
    }
}

impl Serialize for VecPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<Vec<String>> = self
            .0
            .coeffs()
            .iter()
            .map(|m| m.entries().iter().map(ToString::to_string).collect())
            .collect();
        let mut st = s.serialize_struct("VecPoly", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Scalar polynomial helpers on ascending coefficient slices.
pub mod scalar {
    use super::*;

    /// Order of vanishing at `u = 0`; `None` for the zero polynomial.
    pub fn order_at_zero(p: &[Rational]) -> Option<usize> {
        p.iter().position(|c| !c.is_zero())
    }

    /// Order of vanishing at `u = 1`; `None` for the zero polynomial.
    pub fn order_at_one(p: &[Rational]) -> Option<usize> {
        let mut q: Vec<Rational> = p.to_vec();
        while q.last().is_some_and(Zero::is_zero) {
            q.pop();
        }
        if q.is_empty() {
            return None;
        }
        let mut order = 0;
        loop {
            let value: Rational = q.iter().sum();
            if !value.is_zero() {
                return Some(order);
            }
            // synthetic division by (u - 1)
            let n = q.len();
            let mut quotient = vec![Rational::zero(); n - 1];
            let mut carry = Rational::zero();
            for i in (1..n).rev() {
                carry += &q[i];
                quotient[i - 1] = carry.clone();
            }
            q = quotient;
            order += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};
    use proptest::prelude::*;

    fn u_times_identity(n: usize) -> MatPoly {
        MatPoly::monomial(Matrix::identity(n), 1)
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let c = MatPoly::constant(Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(4)]]));
        assert!(c.derivative().is_zero());
        assert_eq!(c.derivative().degree(), None);
    }

    #[test]
    fn u_squared() {
        let u = u_times_identity(2);
        let sq = &u * &u;
        assert_eq!(sq, MatPoly::monomial(Matrix::identity(2), 2));
        assert_eq!(sq.degree(), Some(2));
    }

    #[test]
    fn trims_and_evaluates() {
        let p = MatPoly::new(
            1,
            1,
            vec![
                Matrix::scalar(1, int(1)),
                Matrix::scalar(1, int(-2)),
                Matrix::scalar(1, int(0)),
            ],
        );
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.evaluate(&frac(1, 2))[(0, 0)], int(0));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn dimension_mismatch_reported() {
        let a = MatPoly::identity(2);
        let b = MatPoly::identity(3);
        assert!(matches!(a.try_add(&b), Err(Error::DimensionMismatch(_))));
        assert!(matches!(a.try_mul(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn vanishing_orders() {
        // u^2 (1-u)^3 = u^2 - 3u^3 + 3u^4 - u^5
        let p = vec![int(0), int(0), int(1), int(-3), int(3), int(-1)];
        assert_eq!(scalar::order_at_zero(&p), Some(2));
        assert_eq!(scalar::order_at_one(&p), Some(3));
        assert_eq!(scalar::order_at_one(&[int(2)]), Some(0));
        assert_eq!(scalar::order_at_one(&[]), None);
    }

    #[test]
    fn serializes_powers_ascending() {
        let p = MatPoly::new(2, 2, vec![Matrix::identity(2), Matrix::scalar(2, frac(-1, 2))]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"dim":2,"coeffs":[["1","0","0","1"],["-1/2","0","0","-1/2"]]}"#
        );
        let v = VecPoly::from_coeffs(2, &[vec![int(1), int(0)], vec![frac(1, 3), int(2)]]);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"dim":2,"coeffs":[["1","0"],["1/3","2"]]}"#
        );
    }

    fn small_matpoly(dim: usize, max_deg: usize) -> impl Strategy<Value = MatPoly> {
        prop::collection::vec(prop::collection::vec((-4i64..5, 1i64..3), dim * dim), 1..=max_deg + 1).prop_map(
            move |cs| {
                MatPoly::new(
                    dim,
                    dim,
                    cs.into_iter()
                        .map(|v| Matrix::from_fn(dim, dim, |i, j| frac(v[i * dim + j].0, v[i * dim + j].1)))
                        .collect(),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn transpose_of_product(a in small_matpoly(2, 3), b in small_matpoly(2, 3)) {
            prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
        }

        #[test]
        fn product_rule(a in small_matpoly(2, 3), b in small_matpoly(2, 3)) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn evaluation_is_multiplicative(a in small_matpoly(2, 3), b in small_matpoly(2, 3), n in -5i64..6) {
            let x = frac(n, 3);
            prop_assert_eq!((&a * &b).evaluate(&x), &a.evaluate(&x) * &b.evaluate(&x));
        }
    }
}
