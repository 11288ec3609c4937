//! Polynomial solutions of the matrix hypergeometric equation
//! `u(1-u)F'' + (C - uU)F' - (V + lambda)F = 0`.
//!
//! A solution analytic at zero is `F(u) = sum_i u^i/i! B_i F(0)` with
//! `B_0 = I` and `B_{i+1} = (C+i)^{-1} (i(U+i-1) + V + lambda) B_i`. It is a
//! polynomial of degree at most `n` exactly when `M_n B_n F(0) = 0`, where
//! `M_n = n(U+n-1) + V + lambda`. This module finds those solutions, detects
//! eigenvalue collisions `lambda_j(w) = lambda_j'(w')`, and assembles the
//! orthogonal sequence `P_w` whose rows are eigenfunctions of `D`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{as_usize, binom, factorial, from_usize, int, poch, rational_sqrt, Rational};
use crate::linalg::Matrix;
use crate::matpoly::{MatPoly, VecPoly};
use crate::model::{build_c, build_u, build_v, lambda_eig, mu_eig, Params};
use crate::verify::WeightSpec;

/// The coefficients `B_0, ..., B_m` of the hypergeometric series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketSeq {
    pub lambda: Rational,
    pub coeffs: Vec<Matrix>,
}

/// `n(U+n-1) + V + lambda`.
pub fn m_matrix_at(p: &Params, n: usize, lambda: &Rational) -> Matrix {
    let nn = from_usize(n);
    let u = build_u(p);
    &u.shift(&(&nn - Rational::one())).scale(&nn) + &build_v(p).shift(lambda)
}

pub fn bracket(p: &Params, lambda: &Rational, m: usize) -> Result<BracketSeq> {
    let c = build_c(p);
    let dim = p.dim();
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(Matrix::identity(dim));
    for i in 0..m {
        let rhs = &m_matrix_at(p, i, lambda) * &coeffs[i];
        let next = c
            .shift(&from_usize(i))
            .solve(&rhs)
            .map_err(|_| Error::Singular(format!("C + {i} is singular")))?;
        coeffs.push(next);
    }
    Ok(BracketSeq {
        lambda: lambda.clone(),
        coeffs,
    })
}

/// `M_w` at `lambda = lambda_j(w)`: upper bidiagonal with diagonal
/// `(i-j)(alpha+beta-k+1+i+j+w)` and superdiagonal `-(ell-i)(beta-k+1+i)`.
pub fn m_matrix(p: &Params, w: usize, j: usize) -> Result<Matrix> {
    lambda_eig(p, w, j)?;
    let n = p.dim();
    let base = p.alpha() + p.beta() - p.k() + Rational::one();
    Ok(Matrix::from_fn(n, n, |i, c| {
        if i == c {
            (int(i as i64) - int(j as i64)) * (&base + from_usize(i + j + w))
        } else if c == i + 1 {
            -(from_usize(p.ell() - i) * (p.beta() - p.k() + Rational::one() + from_usize(i)))
        } else {
            Rational::zero()
        }
    }))
}

/// Normalized generator of `ker M_w` at `lambda_j(w)`: entry `j` is one,
/// entries above `j` vanish.
pub fn kernel_vector(p: &Params, w: usize, j: usize) -> Result<Vec<Rational>> {
    lambda_eig(p, w, j)?;
    let ell = p.ell();
    let shift = p.beta() - p.k() + Rational::one();
    let ab = p.alpha() + p.beta() - p.k() + Rational::one();
    Ok((0..=ell)
        .map(|i| {
            if i > j {
                Rational::zero()
            } else {
                let sign = if (i + j).is_multiple_of(2) { int(1) } else { int(-1) };
                sign * binom(ell - i, ell - j) * poch(&(&shift + from_usize(i)), j - i)
                    / poch(&(&ab + from_usize(j + i + w)), j - i)
            }
        })
        .collect())
}

/// The leading coefficient `P_w` is expected to have: unit lower triangular
/// with entry `(r, s)` built from the kernel vector of row `r`.
pub fn leading_coefficient_formula(p: &Params, w: usize) -> Matrix {
    let rows = (0..p.dim())
        .map(|j| kernel_vector(p, w, j).expect("j in range"))
        .collect();
    Matrix::from_rows(rows)
}

/// All `(w, j)` sharing one eigenvalue, sorted by increasing `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionClass {
    pub lambda: Rational,
    pub members: Vec<(usize, usize)>,
}

impl CollisionClass {
    pub fn is_collision(&self) -> bool {
        self.members.len() > 1
    }

    /// Consecutive members have strictly increasing `w` and `j` dropping by at least two.
    pub fn satisfies_gap_property(&self) -> bool {
        self.members
            .windows(2)
            .all(|pair| pair[1].0 > pair[0].0 && pair[0].1 > pair[1].1 + 1)
    }
}

/// Solves `lambda_j'(w') = lambda` for every `j'` and keeps the non-negative
/// integer roots `w' <= w_bound`.
pub fn find_collisions(p: &Params, lambda: &Rational, w_bound: usize) -> CollisionClass {
    let ab = p.alpha() + p.beta();
    let mut members = Vec::new();
    for j in 0..=p.ell() {
        let jr = from_usize(j);
        // w^2 + b w + c = 0
        let b = &ab + from_usize(p.ell() + j + 1);
        let c = &jr * (&ab - p.k() + Rational::one() + &jr) + lambda;
        let disc = &b * &b - int(4) * &c;
        let Some(s) = rational_sqrt(&disc) else {
            continue;
        };
        // b > 0, so the other root is negative
        let root = (s - &b) / int(2);
        if let Some(w) = as_usize(&root) {
            if w <= w_bound {
                members.push((w, j));
            }
        }
    }
    members.sort();
    CollisionClass {
        lambda: lambda.clone(),
        members,
    }
}

/// Classes with at least two members among all `(w, j)` with `w <= max_w`,
/// ordered by their first member.
pub fn collision_classes(p: &Params, max_w: usize) -> Vec<CollisionClass> {
    let mut groups: BTreeMap<Rational, Vec<(usize, usize)>> = BTreeMap::new();
    for w in 0..=max_w {
        for j in 0..=p.ell() {
            groups
                .entry(lambda_eig(p, w, j).expect("j in range"))
                .or_default()
                .push((w, j));
        }
    }
    let mut classes: Vec<CollisionClass> = groups
        .into_iter()
        .filter(|(_, m)| m.len() > 1)
        .map(|(lambda, mut members)| {
            members.sort();
            CollisionClass { lambda, members }
        })
        .collect();
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    classes
}

/// Basis of initial values `F(0)` whose series is a polynomial of degree `<= n`.
pub fn poly_solution_space(p: &Params, lambda: &Rational, n: usize) -> Result<Vec<Vec<Rational>>> {
    let seq = bracket(p, lambda, n)?;
    let m = &m_matrix_at(p, n, lambda) * &seq.coeffs[n];
    Ok(m.nullspace())
}

/// The truncated series `sum_{i<=n} u^i/i! B_i f0`.
pub fn series_polynomial(seq: &BracketSeq, f0: &[Rational], n: usize) -> VecPoly {
    let dim = f0.len();
    let coeffs: Vec<Vec<Rational>> = seq.coeffs[..=n]
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let fi = factorial(i);
            b.mul_vec(f0).into_iter().map(|x| x / &fi).collect()
        })
        .collect();
    VecPoly::from_coeffs(dim, &coeffs)
}

/// The orthogonal sequence `P_0, ..., P_max_w`, stored column by column.
///
/// Column `(w, j)` is the eigenfunction of `D` for `lambda_j(w)`, normalized
/// so that its leading coefficient is [`kernel_vector`]. When the eigenvalue
/// is shared with columns of lower degree, the column is taken orthogonal to
/// them inside the solution space.
#[derive(Clone, Debug)]
pub struct PolyFamily {
    weight: WeightSpec,
    columns: Vec<Vec<VecPoly>>,
}

impl PolyFamily {
    pub fn new(p: &Params) -> Self {
        Self {
            weight: WeightSpec::new(p),
            columns: Vec::new(),
        }
    }

    pub fn build(p: &Params, max_w: usize) -> Result<Self> {
        let mut fam = Self::new(p);
        fam.extend_to(max_w)?;
        Ok(fam)
    }

    pub fn params(&self) -> &Params {
        self.weight.params()
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    /// Highest degree built so far, `None` when empty.
    pub fn max_w(&self) -> Option<usize> {
        self.columns.len().checked_sub(1)
    }

    /// Builds degrees in increasing order. Columns of one degree never share
    /// an eigenvalue, so they are built in parallel.
    pub fn extend_to(&mut self, max_w: usize) -> Result<()> {
        let ell = self.params().ell();
        while self.columns.len() <= max_w {
            let w = self.columns.len();
            self.weight.moments().prefill(2 * (w + ell) + 2);
            let level = (0..=ell)
                .into_par_iter()
                .map(|j| self.construct_column(w, j))
                .collect::<Result<Vec<_>>>()?;
            self.columns.push(level);
        }
        Ok(())
    }

    /// Panics if `(w, j)` has not been built.
    pub fn column(&self, w: usize, j: usize) -> &VecPoly {
        &self.columns[w][j]
    }

    /// `P_w^*`, whose columns are the `P_w^j`.
    pub fn adjoint(&self, w: usize) -> MatPoly {
        let dim = self.params().dim();
        let coeffs = (0..=w)
            .map(|i| {
                let cols: Vec<Vec<Rational>> = self.columns[w].iter().map(|c| c.coeff(i)).collect();
                Matrix::from_fn(dim, dim, |r, c| cols[c][r].clone())
            })
            .collect();
        MatPoly::new(dim, dim, coeffs)
    }

    /// `P_w`, whose rows are the `P_w^j`.
    pub fn matrix(&self, w: usize) -> MatPoly {
        self.adjoint(w).transpose()
    }

    fn construct_column(&self, w: usize, j: usize) -> Result<VecPoly> {
        let p = self.params();
        let lambda = lambda_eig(p, w, j)?;
        let class = find_collisions(p, &lambda, w);
        if !class.members.contains(&(w, j)) {
            return Err(Error::Construction(format!(
                "collision solver missed ({w}, {j}) at lambda = {lambda}"
            )));
        }
        let earlier: Vec<&VecPoly> = class
            .members
            .iter()
            .filter(|&&(w2, _)| w2 < w)
            .map(|&(w2, j2)| &self.columns[w2][j2])
            .collect();
        let target = kernel_vector(p, w, j)?;
        let seq = bracket(p, &lambda, w)?;

        if earlier.is_empty() {
            let rhs: Vec<Rational> = target.iter().map(|x| x * factorial(w)).collect();
            let f0 = seq.coeffs[w]
                .solve_vec(&rhs)
                .map_err(|_| Error::Construction(format!("B_{w} singular for collision-free ({w}, {j})")))?;
            let col = series_polynomial(&seq, &f0, w);
            if col.leading().as_deref() != Some(&target[..]) {
                return Err(Error::Construction(format!(
                    "leading coefficient of ({w}, {j}) differs from the kernel vector"
                )));
            }
            return Ok(col);
        }

        let basis = poly_solution_space(p, &lambda, w)?;
        if basis.len() != earlier.len() + 1 {
            return Err(Error::Construction(format!(
                "solution space at lambda = {lambda}, degree {w} has dimension {}, expected {}",
                basis.len(),
                earlier.len() + 1
            )));
        }
        let norms = earlier
            .iter()
            .map(|q| self.weight.vec_inner(q, q))
            .collect::<Result<Vec<_>>>()?;
        let mut complement = Vec::with_capacity(basis.len());
        for f0 in &basis {
            let mut g = series_polynomial(&seq, f0, w);
            for (q, nq) in earlier.iter().zip(&norms) {
                let coef = self.weight.vec_inner(&g, q)? / nq;
                if !coef.is_zero() {
                    g = &g - &q.scale(&coef);
                }
            }
            complement.push(g);
        }
        let pivot = complement
            .iter()
            .find(|g| g.degree() == Some(w) && !g.coeff(w)[j].is_zero())
            .ok_or_else(|| {
                Error::Construction(format!(
                    "no degree-{w} element orthogonal to lower class members at ({w}, {j})"
                ))
            })?;
        let col = pivot.scale(&(Rational::one() / &pivot.coeff(w)[j]));
        for g in &complement {
            let lead = if g.degree() == Some(w) {
                g.coeff(w)[j].clone()
            } else {
                Rational::zero()
            };
            if !(g - &col.scale(&lead)).is_zero() {
                return Err(Error::Construction(format!(
                    "orthogonal complement at ({w}, {j}) is not one-dimensional"
                )));
            }
        }
        if col.leading().as_deref() != Some(&target[..]) {
            return Err(Error::Construction(format!(
                "leading coefficient of ({w}, {j}) is not proportional to the kernel vector"
            )));
        }
        Ok(col)
    }
}

/// One built column together with its eigenvalues, for serialization.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ColumnRecord {
    pub w: usize,
    pub j: usize,
    pub lambda: String,
    pub mu: String,
    pub coeffs: Vec<Vec<String>>,
}

impl PolyFamily {
    /// All built columns ordered by `(w, j)`.
    pub fn records(&self) -> Vec<ColumnRecord> {
        let p = self.params();
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(w, level)| {
                level.iter().enumerate().map(move |(j, col)| ColumnRecord {
                    w,
                    j,
                    lambda: lambda_eig(p, w, j).expect("j in range").to_string(),
                    mu: mu_eig(p, w, j).expect("j in range").to_string(),
                    coeffs: (0..=w)
                        .map(|i| col.coeff(i).iter().map(ToString::to_string).collect())
                        .collect(),
                })
            })
            .collect()
    }
}

/// Column `P_w^j`, building every lower degree it depends on.
pub fn build_column(p: &Params, w: usize, j: usize) -> Result<VecPoly> {
    lambda_eig(p, w, j)?;
    Ok(PolyFamily::build(p, w)?.column(w, j).clone())
}

/// `P_w`, rows `P_w^0, ..., P_w^ell`.
pub fn build_p(p: &Params, w: usize) -> Result<MatPoly> {
    Ok(PolyFamily::build(p, w)?.matrix(w))
}
