//! Exact construction and verification of a family of matrix-valued orthogonal
//! polynomials on (0, 1) together with the two second-order differential
//! operators that have them as common eigenfunctions.
//!
//! Every computation is over the rationals. Integrals against the scalar part
//! `(1-u)^alpha u^beta` of the weight are expressed through the ratio of
//! consecutive moments, so all results are exact multiples of the Beta
//! function `B(beta+1, alpha+1)`.

pub mod diffop;
pub mod error;
pub mod exact;
pub mod hyper;
pub mod linalg;
pub mod matpoly;
pub mod model;
pub mod verify;

pub use diffop::DiffOp;
pub use error::{Error, Result};
pub use exact::{parse_rational, Rational};
pub use hyper::PolyFamily;
pub use linalg::Matrix;
pub use matpoly::{MatPoly, VecPoly};
pub use model::{OpTag, Params};
pub use verify::{run_suite, Report, WeightSpec};
