//! Stratified nilpotent Lie algebras, Carnot dilations, graded homomorphisms
//! and the group law in exponential coordinates.

mod algebra;
mod bch;
mod homomorphism;
pub mod library;

pub use algebra::{AlgebraError, BracketEntry, BracketJson, FromJsonError, GradedLieAlgebra, GroupJson, Violation};
pub use bch::{bch_multiply, bch_terms, inverse, Scalar};
pub use homomorphism::{
    validate_homomorphism, BracketViolation, GradedHomomorphism, GradingBlockViolation, HomomorphismError,
};

use crate::exactla::{Matrix, Rational};

/// Points of the group in exponential coordinates of the first kind.
pub type GroupPoint<S> = Vec<S>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dilation factor must be nonzero")]
pub struct ZeroDilation;

/// `δ_t`: multiplies layer `j` by `t^j`.
pub fn dilation(alg: &GradedLieAlgebra, t: &Rational) -> Result<Matrix, ZeroDilation> {
    if t.is_zero() {
        return Err(ZeroDilation);
    }
    let diag: Vec<Rational> = alg.weights().iter().map(|&w| t.pow(w as i32)).collect();
    Ok(Matrix::diagonal(&diag))
}

/// Dilation acting on a point with any scalar type.
pub fn dilate<S: Scalar>(alg: &GradedLieAlgebra, t: &S, x: &[S]) -> Vec<S> {
    x.iter()
        .zip(alg.weights())
        .map(|(xi, &w)| {
            let mut f = xi.clone();
            for _ in 0..w {
                f = f.mul(t);
            }
            f
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    #[test]
    fn dilation_examples() {
        let h = heisenberg();
        let d = dilation(&h, &Rational::from_int(2)).unwrap();
        assert_eq!(d, Matrix::diagonal(&crate::exactla::ivec(&[2, 2, 4])));
        let e = engel();
        assert_eq!(dilation(&e, &Rational::one()).unwrap(), Matrix::identity(4));
        assert_eq!(
            dilation(&e, &Rational::from_int(3)).unwrap(),
            Matrix::diagonal(&crate::exactla::ivec(&[3, 3, 9, 27]))
        );
        assert_eq!(dilation(&h, &Rational::zero()), Err(ZeroDilation));
        let d2 = dilation(&e, &Rational::from_int(2)).unwrap();
        assert!(validate_homomorphism(&e, &e, &d2).is_ok());
    }

    #[test]
    fn dilations_compose() {
        let f = free_two_step(3);
        let s = Rational::new(2, 3);
        let t = Rational::from_int(-5);
        let ds = dilation(&f, &s).unwrap();
        let dt = dilation(&f, &t).unwrap();
        assert_eq!(ds.mul(&dt), dilation(&f, &(&s * &t)).unwrap());
    }
}
