//! Scalars (exact rationals and complex doubles) and the small dense
//! linear-algebra kernel shared by every other module.

mod elim;
mod field;
mod matrix;
mod svd;

pub use elim::{inverse, nullspace, nullspace_scaled, rank, rref, rref_scaled, solve, SpanBasis};
pub use field::{
    binom, fmt_f64, fmt_rational, int, parse_rational, rat, rat_to_f64, Field, Rational, Scalar,
    C64,
};
pub use matrix::{dot, to_complex_vec, vec_add, vec_inf_norm, vec_scale, vec_sub, Mat, NormKind};
pub use svd::singular_values;

use crate::error::{Error, Result};

/// Default relative tolerance for complex-domain rank and equality decisions.
pub const TOL: f64 = 1e-9;

/// Domain-tagged matrix for callers that only learn the domain at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Rational(Mat<Rational>),
    Complex(Mat<C64>),
}

impl Matrix {
    pub fn to_complex(&self) -> Mat<C64> {
        match self {
            Matrix::Rational(m) => m.to_complex(),
            Matrix::Complex(m) => m.clone(),
        }
    }

    pub fn induced_norm(&self, kind: NormKind) -> Result<f64> {
        match self {
            Matrix::Rational(m) => m.induced_norm(kind),
            Matrix::Complex(m) => m.induced_norm(kind),
        }
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        match self {
            Matrix::Rational(m) => crate::spectral::spectral_radius(m),
            Matrix::Complex(m) => crate::spectral::spectral_radius(m),
        }
    }

    /// Kernel basis; `tol = 0` is only meaningful in the rational domain.
    pub fn nullspace(&self, tol: f64) -> Result<Vec<Vec<Scalar>>> {
        match self {
            Matrix::Rational(m) => Ok(nullspace(m, tol)
                .into_iter()
                .map(|v| v.into_iter().map(Scalar::Rational).collect())
                .collect()),
            Matrix::Complex(m) => {
                if tol <= 0.0 {
                    return Err(Error::OutOfRange("complex nullspace needs tol > 0".into()));
                }
                Ok(nullspace(m, tol)
                    .into_iter()
                    .map(|v| v.into_iter().map(Scalar::Complex).collect())
                    .collect())
            }
        }
    }

    pub fn lie_bracket(&self, o: &Matrix) -> Result<Matrix> {
        match (self, o) {
            (Matrix::Rational(a), Matrix::Rational(b)) => Ok(Matrix::Rational(a.lie_bracket(b)?)),
            (Matrix::Complex(a), Matrix::Complex(b)) => Ok(Matrix::Complex(a.lie_bracket(b)?)),
            _ => Err(Error::Shape("lie bracket across domains".into())),
        }
    }
}
