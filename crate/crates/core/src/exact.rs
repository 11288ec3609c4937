//! Exact scalars and combinatorial primitives.
//!
//! All arithmetic in this crate happens over [`Rational`], an arbitrary
//! precision fraction kept in lowest terms with a positive denominator.
//! Rationals print as `p/q`, or `p` when the denominator is one.

use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_usize(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, `p/q` or `-p/q`. Decimal notation is rejected.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let fail = |reason: &str| Error::ParseRational {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(fail("empty string"));
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(fail("decimal notation is not accepted, use p/q"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| fail("numerator is not an integer"))?;
    if den.starts_with(['+', '-']) {
        return Err(fail("sign belongs on the numerator"));
    }
    let den = BigInt::from_str(den).map_err(|_| fail("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(fail("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Rising factorial `z (z+1) ... (z+r-1)`; equal to one when `r == 0`.
pub fn poch(z: &Rational, r: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = z.clone();
    for _ in 0..r {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

/// Falling factorial `[n]_i = n (n-1) ... (n-i+1)`, with `[n]_0 = 1`.
pub fn falling(n: usize, i: usize) -> Rational {
    if i > n {
        return Rational::zero();
    }
    (0..i).fold(Rational::one(), |acc, t| acc * from_usize(n - t))
}

pub fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, t| acc * from_usize(t))
}

/// Binomial coefficient with a rational upper argument: `(z-r+1)_r / r!`.
pub fn gen_binom(z: &Rational, r: usize) -> Rational {
    let base = z - from_usize(r) + Rational::one();
    poch(&base, r) / factorial(r)
}

/// Ordinary binomial coefficient of non-negative integers; zero when `k > n`.
pub fn binom(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    gen_binom(&from_usize(n), k)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// `Some(n)` when `q` is a non-negative integer that fits in `usize`.
pub fn as_usize(q: &Rational) -> Option<usize> {
    if !q.is_integer() || q.is_negative() {
        return None;
    }
    usize::try_from(q.to_integer()).ok()
}

/// Moments of the scalar weight `(1-u)^alpha u^beta` on (0, 1), measured in
/// units of the zeroth moment `B(beta+1, alpha+1)`.
///
/// Ratios are memoized; the cache sits behind a mutex so a single instance
/// can be shared by parallel workers.
#[derive(Debug)]
pub struct MomentFunctional {
    alpha: Rational,
    beta: Rational,
    cache: Mutex<Vec<Rational>>,
}

impl Clone for MomentFunctional {
    fn clone(&self) -> Self {
        let cache = self.cache.lock().expect("moment cache poisoned").clone();
        Self {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            cache: Mutex::new(cache),
        }
    }
}

impl MomentFunctional {
    /// Requires `alpha > -1` and `beta > -1` so that every moment is finite.
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        if alpha <= -Rational::one() || beta <= -Rational::one() {
            return Err(Error::InvalidParams(
                "moment functional needs alpha > -1 and beta > -1".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            cache: Mutex::new(vec![Rational::one()]),
        })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// `(beta+1)_m / (alpha+beta+2)_m`, i.e. `B(beta+1+m, alpha+1) / B(beta+1, alpha+1)`.
    pub fn ratio(&self, m: usize) -> Rational {
        let mut cache = self.cache.lock().expect("moment cache poisoned");
        while cache.len() <= m {
            let t = from_usize(cache.len() - 1);
            let next =
                cache.last().unwrap() * (&self.beta + Rational::one() + &t) / (&self.alpha + &self.beta + int(2) + &t);
            cache.push(next);
        }
        cache[m].clone()
    }

    /// Fills the cache up to degree `m` so later reads never extend it.
    pub fn prefill(&self, m: usize) {
        let _ = self.ratio(m);
    }

    /// Applies the functional to a scalar polynomial given by ascending coefficients.
    pub fn integrate(&self, coeffs: &[Rational]) -> Rational {
        if coeffs.is_empty() {
            return Rational::zero();
        }
        self.prefill(coeffs.len() - 1);
        let cache = self.cache.lock().expect("moment cache poisoned");
        coeffs
            .iter()
            .zip(cache.iter())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| c * m)
            .sum()
    }
}
