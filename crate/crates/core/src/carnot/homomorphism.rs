use super::algebra::GradedLieAlgebra;
use crate::exactla::{unit_vector, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct GradedHomomorphism {
    source: GradedLieAlgebra,
    target: GradedLieAlgebra,
    matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomomorphismError {
    #[error("matrix is {found:?}, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    /// Grading and bracket failures, reported independently (1-based indices).
    #[error("not a graded homomorphism: {} grading-block entries, {} bracket pairs", grading.len(), brackets.len())]
    Invalid { grading: Vec<GradingBlockViolation>, brackets: Vec<BracketViolation> },
}

/// Nonzero entry mapping `X_col` outside its layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingBlockViolation {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketViolation {
    pub i: usize,
    pub j: usize,
}

pub fn validate_homomorphism(
    src: &GradedLieAlgebra,
    tgt: &GradedLieAlgebra,
    matrix: &Matrix,
) -> Result<GradedHomomorphism, HomomorphismError> {
    let (n, m) = (src.dim(), tgt.dim());
    if (matrix.rows(), matrix.cols()) != (m, n) {
        return Err(HomomorphismError::Shape { expected: (m, n), found: (matrix.rows(), matrix.cols()) });
    }
    let mut grading = Vec::new();
    for r in 0..m {
        for c in 0..n {
            if !matrix[(r, c)].is_zero() && tgt.weight(r) != src.weight(c) {
                grading.push(GradingBlockViolation { row: r + 1, col: c + 1 });
            }
        }
    }
    let mut brackets = Vec::new();
    let cols: Vec<_> = (0..n).map(|i| matrix.column(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = matrix.mul_vec(&src.bracket(&unit_vector(n, i), &unit_vector(n, j)));
            let rhs = tgt.bracket(&cols[i], &cols[j]);
            if lhs != rhs {
                brackets.push(BracketViolation { i: i + 1, j: j + 1 });
            }
        }
    }
    if grading.is_empty() && brackets.is_empty() {
        Ok(GradedHomomorphism { source: src.clone(), target: tgt.clone(), matrix: matrix.clone() })
    } else {
        Err(HomomorphismError::Invalid { grading, brackets })
    }
}

impl GradedHomomorphism {
    pub fn identity(alg: &GradedLieAlgebra) -> Self {
        GradedHomomorphism { source: alg.clone(), target: alg.clone(), matrix: Matrix::identity(alg.dim()) }
    }

    pub fn source(&self) -> &GradedLieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedLieAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GradedHomomorphism) -> Result<GradedHomomorphism, HomomorphismError> {
        validate_homomorphism(&self.source, &other.target, &other.matrix.mul(&self.matrix))
    }
}

#[cfg(test)]
mod tests {
    use super::super::library::*;
    use super::*;
    use crate::exactla::Rational;

    fn heis_map(a: i64, b: i64, c: i64, d: i64, e: i64) -> Matrix {
        Matrix::from_i64(&[&[a, b, 0], &[c, d, 0], &[0, 0, e]])
    }

    #[test]
    fn heisenberg_examples() {
        let h = heisenberg();
        assert!(validate_homomorphism(&h, &h, &Matrix::identity(3)).is_ok());
        for (a, b, c, d) in [(1, 2, 3, 4), (2, 0, 0, 5), (0, 1, -1, 0), (1, 1, 1, 1)] {
            for e in -12..=12 {
                let ok = validate_homomorphism(&h, &h, &heis_map(a, b, c, d, e)).is_ok();
                assert_eq!(ok, e == a * d - b * c);
            }
        }
        let swap = validate_homomorphism(&h, &h, &heis_map(0, 1, 1, 0, 1)).unwrap_err();
        assert_eq!(
            swap,
            HomomorphismError::Invalid { grading: vec![], brackets: vec![BracketViolation { i: 1, j: 2 }] }
        );
        assert!(validate_homomorphism(&h, &h, &heis_map(0, 1, 1, 0, -1)).is_ok());
    }

    #[test]
    fn grading_block_reported_separately() {
        let h = heisenberg();
        let m = Matrix::from_i64(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
        let err = validate_homomorphism(&h, &h, &m).unwrap_err();
        let HomomorphismError::Invalid { grading, .. } = err else { panic!() };
        assert_eq!(grading, vec![GradingBlockViolation { row: 1, col: 3 }]);
    }

    #[test]
    fn composition_closure() {
        let e = engel();
        // [X1,X2]=X3, [X1,X3]=X4: X1 ↦ aX1, X2 ↦ bX2 + cX1 is compatible
        let f = |a: i64, b: i64, c: i64| {
            let m = Matrix::from_i64(&[&[a, c, 0, 0], &[0, b, 0, 0], &[0, 0, a * b, 0], &[0, 0, 0, a * a * b]]);
            validate_homomorphism(&e, &e, &m).unwrap()
        };
        let g = f(2, 3, 0).then(&f(-1, 5, 0)).unwrap();
        assert_eq!(g.matrix()[(3, 3)], Rational::from_int(60));
        let h = heisenberg();
        let p = validate_homomorphism(&h, &h, &heis_map(1, 2, 3, 4, -2)).unwrap();
        let q = validate_homomorphism(&h, &h, &heis_map(0, 1, -1, 3, 1)).unwrap();
        assert!(p.then(&q).is_ok() && q.then(&p).is_ok());
    }
}
