use num_traits::{One, Zero};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{from_usize, int, Rational};
use crate::hyper::PolyFamily;
use crate::linalg::Matrix;
use crate::matpoly::MatPoly;
use crate::model::{build_d, build_e, build_v, gamma_n, lambda_eig, lambda_w, mu_eig, OpTag, Params};

/// `op P_w^* = P_w^* Lambda_w(op)` for `op` in {D, E}.
pub fn check_eigen(family: &PolyFamily, w: usize, tag: OpTag) -> Result<bool> {
    let p = family.params();
    let op = match tag {
        OpTag::D => build_d(p),
        OpTag::E => build_e(p),
    };
    let adj = family.adjoint(w);
    Ok(op.apply(&adj)? == adj.mul_const_right(&lambda_w(p, w, tag)))
}

/// `D E - E D` as an operator.
pub fn commutator_de(p: &Params) -> Result<DiffOp> {
    build_d(p).commutator(&build_e(p))
}

pub fn check_commute(p: &Params) -> Result<bool> {
    Ok(commutator_de(p)?.is_zero())
}

/// `E` with its zeroth-order scale `alpha + 2 ell + 3k` bumped by one.
pub fn perturbed_e(p: &Params) -> Result<DiffOp> {
    let a0 = MatPoly::constant(build_v(p).scale(&-(p.e_shift() + Rational::one())));
    build_e(p).with_coeff(0, a0)
}

/// `Gamma_n(E) = (alpha+2ell+3k+3n) Gamma_n(D) + 3n(ell+k+n)(n+alpha+beta+ell+1) I`.
pub fn check_gamma_relation(p: &Params, n: usize) -> Result<bool> {
    let gd = gamma_n(&build_d(p), n)?;
    let ge = gamma_n(&build_e(p), n)?;
    Ok(ge == eigen_relation_rhs(p, n, &gd))
}

/// `Lambda_w(E) = (alpha+2ell+3k+3w) Lambda_w(D) + 3w(ell+k+w)(w+alpha+beta+ell+1) I`.
pub fn check_lambda_relation(p: &Params, w: usize) -> bool {
    lambda_w(p, w, OpTag::E) == eigen_relation_rhs(p, w, &lambda_w(p, w, OpTag::D))
}

fn eigen_relation_rhs(p: &Params, n: usize, d_side: &Matrix) -> Matrix {
    let nn = from_usize(n);
    let ell = from_usize(p.ell());
    let scale = p.e_shift() + int(3) * &nn;
    let shift = int(3) * &nn * (&ell + p.k() + &nn) * (&nn + p.alpha() + p.beta() + &ell + int(1));
    d_side.scale(&scale).shift(&shift)
}

/// The linear factor `p_j(x, y) = y - (alpha-ell+3j) x + 3j(ell-j+k)(j+alpha+beta-k+1)`.
pub fn ideal_factor(p: &Params, j: usize, x: &Rational, y: &Rational) -> Rational {
    let jr = from_usize(j);
    let ell = from_usize(p.ell());
    y - (p.alpha() - &ell + int(3) * &jr) * x
        + int(3) * &jr * (&ell - &jr + p.k()) * (&jr + p.alpha() + p.beta() - p.k() + int(1))
}

/// `Q(x, y) = prod_j p_j(x, y)`.
pub fn ideal_polynomial(p: &Params, x: &Rational, y: &Rational) -> Rational {
    (0..=p.ell()).map(|j| ideal_factor(p, j, x, y)).product()
}

/// Result of the affine-curve check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealReport {
    /// `p_j(lambda_j(w), mu_j(w)) = 0` for every `w <= w_max`, `j <= ell`.
    pub vanishes: bool,
    /// Pairs `(w, j, i)` with `i != j` where `p_i` also vanishes at the point of `(w, j)`.
    /// Informational only: the lines may meet for special parameters.
    pub coincidences: Vec<(usize, usize, usize)>,
}

pub fn check_ideal(p: &Params, w_max: usize) -> IdealReport {
    let mut vanishes = true;
    let mut coincidences = Vec::new();
    for w in 0..=w_max {
        for j in 0..=p.ell() {
            let x = lambda_eig(p, w, j).expect("j in range");
            let y = mu_eig(p, w, j).expect("j in range");
            if !ideal_factor(p, j, &x, &y).is_zero() || !ideal_polynomial(p, &x, &y).is_zero() {
                vanishes = false;
            }
            for i in (0..=p.ell()).filter(|&i| i != j) {
                if ideal_factor(p, i, &x, &y).is_zero() {
                    coincidences.push((w, j, i));
                }
            }
        }
    }
    IdealReport { vanishes, coincidences }
}

/// Writes `h = sum_j P_j^* A_j` by peeling leading coefficients from the top
/// degree down. Returns `A_0, ..., A_n` with `n = deg h`.
pub fn decompose_in_basis(h: &MatPoly, family: &PolyFamily) -> Result<Vec<Matrix>> {
    let dim = family.params().dim();
    if h.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!(
            "decomposition needs a {dim}x{dim} polynomial"
        )));
    }
    let Some(n) = h.degree() else {
        return Ok(vec![Matrix::zeros(dim, dim)]);
    };
    if family.max_w().is_none_or(|m| m < n) {
        return Err(Error::Construction(format!(
            "family built only up to degree {:?}, need {n}",
            family.max_w()
        )));
    }
    let mut rest = h.clone();
    let mut out = vec![Matrix::zeros(dim, dim); n + 1];
    for j in (0..=n).rev() {
        let adj = family.adjoint(j);
        let lead = adj.leading().expect("nonzero column").clone();
        let a = lead.solve(&rest.coeff(j))?;
        rest = &rest - &adj.mul_const_right(&a);
        out[j] = a;
    }
    if !rest.is_zero() {
        return Err(Error::Construction("nonzero residual after peeling".into()));
    }
    Ok(out)
}

/// `sum_j P_j^* A_j`.
pub fn recompose(coeffs: &[Matrix], family: &PolyFamily) -> MatPoly {
    let dim = family.params().dim();
    coeffs.iter().enumerate().fold(MatPoly::zero(dim, dim), |acc, (j, a)| {
        &acc + &family.adjoint(j).mul_const_right(a)
    })
}

/// The eigenvalue matrix of an operator in the algebra of `W` at degree `w`,
/// read off from the decomposition of `op P_w^*`. `None` when the image has
/// components outside the `w`-th block.
pub fn eigenvalue_block(op: &DiffOp, family: &PolyFamily, w: usize) -> Result<Option<Matrix>> {
    let image = op.apply(&family.adjoint(w))?;
    if image.is_zero() {
        return Ok(Some(Matrix::zeros(family.params().dim(), family.params().dim())));
    }
    let blocks = decompose_in_basis(&image, family)?;
    if blocks.len() != w + 1 || blocks[..w].iter().any(|b| !b.is_zero()) {
        return Ok(None);
    }
    Ok(blocks.last().cloned())
}

/// Gram block `(P_w, P_w')`, in units of `B(beta+1, alpha+1)`.
pub fn gram_block(family: &PolyFamily, w: usize, w2: usize) -> Result<Matrix> {
    family.weight().inner_product(&family.matrix(w), &family.matrix(w2))
}
