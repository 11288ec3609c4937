//! The weight `W(u) = (1-u)^alpha u^beta Z(u)`, the operators `D` and `E`,
//! and their eigenvalue data.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{binom, falling, from_usize, gen_binom, int, Rational};
use crate::linalg::Matrix;
use crate::matpoly::MatPoly;

/// Admissible parameters: `alpha > -1`, `beta > -1`, `0 < k < beta + 1`, `ell >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    alpha: Rational,
    beta: Rational,
    k: Rational,
    ell: usize,
}

impl Params {
    pub fn new(alpha: Rational, beta: Rational, k: Rational, ell: usize) -> Result<Self> {
        let minus_one = -Rational::one();
        if alpha <= minus_one {
            return Err(Error::InvalidParams(format!("alpha > -1 violated (alpha = {alpha})")));
        }
        if beta <= minus_one {
            return Err(Error::InvalidParams(format!("beta > -1 violated (beta = {beta})")));
        }
        if k <= Rational::zero() {
            return Err(Error::InvalidParams(format!("k > 0 violated (k = {k})")));
        }
        if k >= &beta + Rational::one() {
            return Err(Error::InvalidParams(format!(
                "k < beta + 1 violated (k = {k}, beta + 1 = {})",
                &beta + Rational::one()
            )));
        }
        if ell < 1 {
            return Err(Error::InvalidParams("ell >= 1 violated (ell = 0)".into()));
        }
        Ok(Self { alpha, beta, k, ell })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Matrix size `ell + 1`.
    pub fn dim(&self) -> usize {
        self.ell + 1
    }

    /// `alpha + 2 ell + 3k`, the scale of the zeroth-order term of `E`.
    pub fn e_shift(&self) -> Rational {
        &self.alpha + from_usize(2 * self.ell) + int(3) * &self.k
    }

    fn check_j(&self, j: usize) -> Result<()> {
        if j > self.ell {
            return Err(Error::IndexOutOfRange { j, ell: self.ell });
        }
        Ok(())
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} k={} ell={}",
            self.alpha, self.beta, self.k, self.ell
        )
    }
}

impl Serialize for Params {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ParamsRepr {
            alpha: self.alpha.to_string(),
            beta: self.beta.to_string(),
            k: self.k.to_string(),
            ell: self.ell,
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct ParamsRepr {
    alpha: String,
    beta: String,
    k: String,
    ell: usize,
}

/// Which of the two commuting operators an eigenvalue refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpTag {
    D,
    E,
}

fn r(n: usize) -> Rational {
    from_usize(n)
}

/// `C = sum (beta+1+2i) E_ii + sum i E_{i,i-1}`.
pub fn build_c(p: &Params) -> Matrix {
    let n = p.dim();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            p.beta() + Rational::one() + r(2 * i)
        } else if j + 1 == i {
            r(i)
        } else {
            Rational::zero()
        }
    })
}

/// `U = diag(alpha+beta+ell+i+2)`.
pub fn build_u(p: &Params) -> Matrix {
    let entries: Vec<Rational> = (0..p.dim())
        .map(|i| p.alpha() + p.beta() + r(p.ell() + i + 2))
        .collect();
    Matrix::diagonal(&entries)
}

/// `V`, upper bidiagonal: diagonal `i(alpha+beta+i-k+1)`, superdiagonal `-(ell-i)(i+beta-k+1)`.
pub fn build_v(p: &Params) -> Matrix {
    let n = p.dim();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            r(i) * (p.alpha() + p.beta() + r(i) - p.k() + Rational::one())
        } else if j == i + 1 {
            -(r(p.ell() - i) * (r(i) + p.beta() - p.k() + Rational::one()))
        } else {
            Rational::zero()
        }
    })
}

/// `Z(u)`, the polynomial part of the weight.
pub fn build_z(p: &Params) -> MatPoly {
    let n = p.dim();
    let ell = p.ell();
    let mut coeffs = vec![Matrix::zeros(n, n); 2 * ell + 1];
    for rr in 0..=ell {
        let scalar = gen_binom(&(r(ell) + p.k() - Rational::one() - r(rr)), ell - rr)
            * gen_binom(&(p.beta() - p.k() + r(rr)), rr);
        if scalar.is_zero() {
            continue;
        }
        // (1-u)^(ell-r) = sum_t C(ell-r, t) (-1)^t u^t
        let m = ell - rr;
        for i in 0..=rr {
            for j in 0..=rr {
                let base = binom(rr, i) * binom(rr, j) * &scalar;
                for t in 0..=m {
                    let sign = if t % 2 == 0 { int(1) } else { int(-1) };
                    coeffs[i + j + t][(i, j)] += &base * binom(m, t) * sign;
                }
            }
        }
    }
    MatPoly::new(n, n, coeffs)
}

/// `D = u(1-u) d^2 + (C - uU) d - V`.
pub fn build_d(p: &Params) -> DiffOp {
    let n = p.dim();
    let a2 = MatPoly::scalar_poly(n, &[int(0), int(1), int(-1)]);
    let a1 = MatPoly::new(n, n, vec![build_c(p), -&build_u(p)]);
    let a0 = MatPoly::constant(-&build_v(p));
    DiffOp::new(vec![a0, a1, a2]).expect("square coefficients")
}

/// `Q0 = sum 3i E_{i,i-1}`.
pub fn build_q0(p: &Params) -> Matrix {
    let n = p.dim();
    Matrix::from_fn(n, n, |i, j| if j + 1 == i { r(3 * i) } else { Rational::zero() })
}

/// `Q1 = diag(alpha - ell + 3i)`.
pub fn build_q1(p: &Params) -> Matrix {
    let entries: Vec<Rational> = (0..p.dim()).map(|i| p.alpha() - r(p.ell()) + r(3 * i)).collect();
    Matrix::diagonal(&entries)
}

pub fn build_p0(p: &Params) -> Matrix {
    let n = p.dim();
    let ell = r(p.ell());
    Matrix::from_fn(n, n, |i, j| {
        let ii = r(i);
        if i == j {
            (p.alpha() + int(2) * &ell) * (p.beta() + Rational::one() + int(2) * &ii)
                - int(3) * p.k() * (&ell - &ii)
                - int(3) * &ii * (p.beta() - p.k() + &ii)
        } else if j + 1 == i {
            -(&ii * (int(3) * &ii + int(3) * p.beta() - int(3) * p.k() + int(3) + &ell + int(2) * p.alpha()))
        } else {
            Rational::zero()
        }
    })
}

pub fn build_p1(p: &Params) -> Matrix {
    let n = p.dim();
    let ell = r(p.ell());
    Matrix::from_fn(n, n, |i, j| {
        let ii = r(i);
        if i == j {
            -((p.alpha() - &ell + int(3) * &ii) * (p.alpha() + p.beta() + &ell + &ii + int(2)))
        } else if j == i + 1 {
            int(3) * (p.beta() - p.k() + Rational::one() + &ii) * (&ell - &ii)
        } else {
            Rational::zero()
        }
    })
}

/// `E = (1-u)(Q0 + uQ1) d^2 + (P0 + uP1) d - (alpha+2ell+3k) V`.
pub fn build_e(p: &Params) -> DiffOp {
    let n = p.dim();
    let q = MatPoly::new(n, n, vec![build_q0(p), build_q1(p)]);
    let a2 = q.mul_scalar_poly(&[int(1), int(-1)]);
    let a1 = MatPoly::new(n, n, vec![build_p0(p), build_p1(p)]);
    let a0 = MatPoly::constant(build_v(p).scale(&-p.e_shift()));
    DiffOp::new(vec![a0, a1, a2]).expect("square coefficients")
}

pub fn build_op(p: &Params, tag: OpTag) -> DiffOp {
    match tag {
        OpTag::D => build_d(p),
        OpTag::E => build_e(p),
    }
}

/// `lambda_j(w) = -w(w+alpha+beta+ell+j+1) - j(alpha+beta-k+1+j)`.
pub fn lambda_eig(p: &Params, w: usize, j: usize) -> Result<Rational> {
    p.check_j(j)?;
    let (w, jr) = (r(w), r(j));
    let ab = p.alpha() + p.beta();
    Ok(-(&w * (&w + &ab + r(p.ell()) + &jr + Rational::one())) - &jr * (&ab - p.k() + Rational::one() + &jr))
}

/// `mu_j(w) = -w(w+alpha+beta+ell+j+1)(alpha-ell+3j) - j(j+alpha+beta-k+1)(alpha+2ell+3k)`.
pub fn mu_eig(p: &Params, w: usize, j: usize) -> Result<Rational> {
    p.check_j(j)?;
    let (w, jr) = (r(w), r(j));
    let ab = p.alpha() + p.beta();
    Ok(
        -(&w * (&w + &ab + r(p.ell()) + &jr + Rational::one()) * (p.alpha() - r(p.ell()) + int(3) * &jr))
            - &jr * (&jr + &ab - p.k() + Rational::one()) * p.e_shift(),
    )
}

pub fn eig(p: &Params, w: usize, j: usize, tag: OpTag) -> Result<Rational> {
    match tag {
        OpTag::D => lambda_eig(p, w, j),
        OpTag::E => mu_eig(p, w, j),
    }
}

/// Diagonal eigenvalue matrix `Lambda_w` of `D` or `E`.
pub fn lambda_w(p: &Params, w: usize, tag: OpTag) -> Matrix {
    let entries: Vec<Rational> = (0..p.dim()).map(|j| eig(p, w, j, tag).expect("j in range")).collect();
    Matrix::diagonal(&entries)
}

/// `Gamma_n = sum_i [n]_i (u^i coefficient of A_i)`, the eigenvalue of an
/// operator in class D on the monic orthogonal polynomial of degree `n`.
pub fn gamma_n(op: &DiffOp, n: usize) -> Result<Matrix> {
    if !op.in_class_d() {
        return Err(Error::NotInClassD);
    }
    let dim = op.dim();
    Ok((0..=op.order()).fold(Matrix::zeros(dim, dim), |acc, i| {
        &acc + &op.diagonal_coeff(i).scale(&falling(n, i))
    }))
}

/// One row of the eigenvalue table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPair {
    pub w: usize,
    pub j: usize,
    pub lambda: Rational,
    pub mu: Rational,
}

impl Serialize for EigenPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EigenPair", 4)?;
        st.serialize_field("w", &self.w)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        st.serialize_field("mu", &self.mu.to_string())?;
        st.end()
    }
}

/// All `(w, j)` eigenvalue pairs with `w <= max_w`, ordered by `(w, j)`.
pub fn eigen_table(p: &Params, max_w: usize) -> Vec<EigenPair> {
    (0..=max_w)
        .flat_map(|w| (0..=p.ell()).map(move |j| (w, j)))
        .map(|(w, j)| EigenPair {
            w,
            j,
            lambda: lambda_eig(p, w, j).expect("j in range"),
            mu: mu_eig(p, w, j).expect("j in range"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    fn base() -> Params {
        Params::new(int(0), int(1), int(1), 1).unwrap()
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(Params::new(int(-1), int(1), int(1), 1).is_err());
        assert!(Params::new(int(0), frac(-3, 2), frac(1, 4), 1).is_err());
        assert!(Params::new(int(0), int(1), int(0), 1).is_err());
        let err = Params::new(int(0), int(1), int(5), 1).unwrap_err();
        assert!(err.to_string().contains("k < beta + 1"));
        assert!(Params::new(int(0), int(1), int(2), 1).is_err());
        assert!(Params::new(int(0), int(1), int(1), 0).is_err());
    }

    #[test]
    fn c_u_v_small_case() {
        let p = base();
        assert_eq!(build_c(&p), m(&[&[2, 0], &[1, 4]]));
        assert_eq!(build_u(&p), m(&[&[4, 0], &[0, 5]]));
        assert_eq!(-&build_v(&p), m(&[&[0, 1], &[0, -2]]));
    }

    #[test]
    fn v_kills_first_basis_vector() {
        for p in [base(), Params::new(frac(1, 2), frac(3, 2), int(1), 3).unwrap()] {
            let v = build_v(&p);
            assert!(v.column(0).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn z_small_case_matches_expansion() {
        let k = frac(1, 2);
        let beta = int(1);
        let p = Params::new(int(0), beta.clone(), k.clone(), 1).unwrap();
        let z = build_z(&p);
        let c = &beta - &k + int(1);
        assert_eq!(z.entry(0, 0), vec![&k + &c, -k.clone()]);
        assert_eq!(z.entry(0, 1), vec![int(0), c.clone()]);
        assert_eq!(z.entry(1, 0), vec![int(0), c.clone()]);
        assert_eq!(z.entry(1, 1), vec![int(0), int(0), c.clone()]);
        // det Z = k (beta-k+1) u^2 (1-u)
        for u0 in [frac(1, 4), frac(1, 2), frac(3, 4)] {
            let expected = &k * &c * &u0 * &u0 * (int(1) - &u0);
            assert_eq!(z.evaluate(&u0).determinant(), expected);
        }
    }

    #[test]
    fn z_at_zero_is_concentrated() {
        let p = Params::new(frac(1, 2), frac(3, 2), int(1), 2).unwrap();
        let z0 = build_z(&p).evaluate(&int(0));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(z0[(i, j)].is_zero(), (i, j) != (0, 0));
            }
        }
    }

    #[test]
    fn d_coefficients() {
        let p = base();
        let d = build_d(&p);
        assert!(d.coeff(2).evaluate(&int(0)).is_zero());
        assert!(d.coeff(2).evaluate(&int(1)).is_zero());
        assert_eq!(d.coeff(1).evaluate(&int(0)), build_c(&p));
        assert_eq!(d.coeff(0).coeff(0), m(&[&[0, 1], &[0, -2]]));
        assert!(d.in_class_d());
    }

    #[test]
    fn e_coefficients() {
        let p = base();
        assert_eq!(build_q0(&p), m(&[&[0, 0], &[3, 0]]));
        let p2 = Params::new(int(1), int(1), frac(1, 2), 2).unwrap();
        assert_eq!(build_q1(&p2), Matrix::diagonal(&[int(-1), int(2), int(5)]));
        for q in [p, p2] {
            let e = build_e(&q);
            assert!(e.in_class_d());
            assert_eq!(e.coeff(0), build_d(&q).coeff(0).scale(&q.e_shift()));
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let p = base();
        assert_eq!(lambda_eig(&p, 0, 0).unwrap(), int(0));
        assert_eq!(mu_eig(&p, 0, 0).unwrap(), int(0));
        assert_eq!(lambda_eig(&p, 1, 0).unwrap(), int(-4));
        assert_eq!(lambda_w(&p, 1, OpTag::D), Matrix::diagonal(&[int(-4), int(-7)]));
        assert_eq!(lambda_eig(&p, 0, 1).unwrap(), int(-2));
        assert!(matches!(lambda_eig(&p, 0, 2), Err(Error::IndexOutOfRange { .. })));

        let c = Params::new(int(0), int(1), frac(3, 2), 2).unwrap();
        assert_eq!(lambda_eig(&c, 0, 2).unwrap(), int(-5));
        assert_eq!(lambda_eig(&c, 1, 0).unwrap(), int(-5));
    }

    #[test]
    fn gamma_matches_read_off_formulas() {
        let p = Params::new(frac(1, 2), frac(3, 2), int(1), 2).unwrap();
        let u = build_u(&p);
        let v = build_v(&p);
        for n in 0..6usize {
            let nn = r(n);
            let gd = &u.shift(&(&nn - int(1))).scale(&-nn.clone()) - &v;
            assert_eq!(gamma_n(&build_d(&p), n).unwrap(), gd);
            let ge =
                &(&build_q1(&p).scale(&-(&nn * (&nn - int(1)))) + &build_p1(&p).scale(&nn)) - &v.scale(&p.e_shift());
            assert_eq!(gamma_n(&build_e(&p), n).unwrap(), ge);
        }
        assert_eq!(gamma_n(&build_d(&p), 0).unwrap(), -&v);
        let outside = DiffOp::multiplication(MatPoly::monomial(Matrix::identity(3), 1));
        assert_eq!(gamma_n(&outside, 1), Err(Error::NotInClassD));
    }

    #[test]
    fn eigenvalues_distinct_within_degree() {
        let p = Params::new(int(0), int(1), frac(3, 2), 2).unwrap();
        for w in 0..10 {
            let mut vals: Vec<Rational> = (0..=2).map(|j| lambda_eig(&p, w, j).unwrap()).collect();
            vals.sort();
            vals.dedup();
            assert_eq!(vals.len(), 3);
        }
    }
}
