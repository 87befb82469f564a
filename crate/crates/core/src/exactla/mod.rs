//! Exact linear algebra over the rationals: matrices, canonical subspaces,
//! quotients and annihilators.

pub mod matrix;
pub mod rational;
pub mod subspace;

pub use matrix::{dot, is_zero_vec, unit_vector, Matrix, RowReducer, Vector};
pub use rational::Rational;
pub use subspace::{QuotientSpace, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("denominator vector {vector:?} is not contained in the numerator")]
    NotContained { vector: Vector },
}

/// `(ker m, im m)`.
pub fn kernel_image(m: &Matrix) -> (Subspace, Subspace) {
    let (r, pivots) = m.rref();
    let ker = Subspace::span(m.cols(), &matrix::kernel_from_rref(&r, &pivots, m.cols()));
    let im = Subspace::span(m.rows(), &(0..m.cols()).map(|j| m.column(j)).collect::<Vec<_>>());
    (ker, im)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeOps {
    pub intersection: Subspace,
    pub sum: Subspace,
    pub preimage: Subspace,
}

pub fn lattice_ops(a: &Subspace, b: &Subspace, m: &Matrix) -> Result<LatticeOps, ExactError> {
    Ok(LatticeOps { intersection: a.intersection(b)?, sum: a.sum(b)?, preimage: b.preimage(m)? })
}

pub fn quotient(numerator: &Subspace, denominator: &Subspace) -> Result<QuotientSpace, ExactError> {
    QuotientSpace::new(numerator.clone(), denominator.clone())
}

pub fn annihilator(s: &Subspace) -> Subspace {
    s.annihilator()
}

/// Parses a whole row of integers into a rational vector.
pub fn ivec(v: &[i64]) -> Vector {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_image_examples() {
        let (k, i) = kernel_image(&Matrix::identity(2));
        assert_eq!((k, i), (Subspace::zero(2), Subspace::full(2)));

        let (k, i) = kernel_image(&Matrix::zeros(1, 2));
        assert_eq!(k, Subspace::full(2));
        assert_eq!(i, Subspace::zero(1));

        let (k, i) = kernel_image(&Matrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(k, Subspace::span(2, &[ivec(&[2, -1])]));
        assert_eq!(i, Subspace::span(2, &[ivec(&[1, 2])]));
        assert_eq!((k.dim(), i.dim()), (1, 1));
    }

    #[test]
    fn lattice_examples() {
        let full = Subspace::full(2);
        let ops = lattice_ops(&full, &full, &Matrix::identity(2)).unwrap();
        assert_eq!(ops.intersection, full);
        assert_eq!(ops.sum, full);

        let e1 = Subspace::coordinate(2, [0]);
        let e2 = Subspace::coordinate(2, [1]);
        let ops = lattice_ops(&e1, &e2, &Matrix::identity(2)).unwrap();
        assert_eq!(ops.intersection, Subspace::zero(2));
        assert_eq!(ops.sum, full);

        let m = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert_eq!(e1.preimage(&m).unwrap(), full);

        assert!(matches!(e1.sum(&Subspace::zero(3)), Err(ExactError::DimensionMismatch { expected: 2, found: 3 })));
    }

    #[test]
    fn quotient_examples() {
        let a = Subspace::span(2, &[ivec(&[1, 1])]);
        assert_eq!(quotient(&a, &a).unwrap().dim(), 0);

        let q = quotient(&Subspace::full(2), &Subspace::coordinate(2, [0])).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.project(&ivec(&[0, 1])), ivec(&[1]));
        assert_eq!(q.project(&ivec(&[5, 0])), ivec(&[0]));

        let num = Subspace::span(2, &[ivec(&[1, 0]), ivec(&[1, 1])]);
        let den = Subspace::span(2, &[ivec(&[1, 1])]);
        let q = quotient(&num, &den).unwrap();
        assert_eq!(q.dim(), 1);
        let p2 = q.project(&ivec(&[0, 1]));
        let p1 = q.project(&ivec(&[1, 0]));
        assert_eq!(p2, vec![-&p1[0]]);
        assert!(!p1[0].is_zero());

        match quotient(&Subspace::coordinate(2, [0]), &Subspace::coordinate(2, [1])) {
            Err(ExactError::NotContained { vector }) => assert_eq!(vector, ivec(&[0, 1])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(annihilator(&Subspace::full(3)), Subspace::zero(3));
        assert_eq!(annihilator(&Subspace::zero(3)), Subspace::full(3));
        let s = Subspace::span(2, &[ivec(&[1, 1])]);
        assert_eq!(annihilator(&s), Subspace::span(2, &[ivec(&[1, -1])]));
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..=10, 1usize..=10).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-5i64..=5, r * c)
                .prop_map(move |xs| Matrix::from_rows(c, xs.chunks(c).map(ivec).collect()))
        })
    }

    fn subspace_in(n: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), 0..=n)
            .prop_map(move |vs| Subspace::span(n, &vs.iter().map(|v| ivec(v)).collect::<Vec<_>>()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_nullity(m in small_matrix()) {
            let (k, i) = kernel_image(&m);
            prop_assert_eq!(k.dim() + i.dim(), m.cols());
            for v in k.basis() {
                prop_assert!(is_zero_vec(&m.mul_vec(v)));
            }
            let (r, _) = m.rref();
            prop_assert_eq!(r.rref().0, r);
        }

        #[test]
        fn lattice_dimension_formula((a, b) in (1usize..=6).prop_flat_map(|n| (subspace_in(n), subspace_in(n)))) {
            let i = a.intersection(&b).unwrap();
            let s = a.sum(&b).unwrap();
            prop_assert_eq!(i.dim() + s.dim(), a.dim() + b.dim());
            prop_assert!(a.contains_subspace(&i) && b.contains_subspace(&i));
            prop_assert_eq!(a.annihilator().annihilator(), a.clone());
            prop_assert_eq!(a.dim() + a.annihilator().dim(), a.ambient_dim());
            if a.contains_subspace(&b) {
                prop_assert!(b.annihilator().contains_subspace(&a.annihilator()));
            }
            prop_assert!(i.annihilator().contains_subspace(&s.annihilator()));
        }

        #[test]
        fn quotient_projection_contract((a, b) in (1usize..=6).prop_flat_map(|n| (subspace_in(n), subspace_in(n)))) {
            let num = a.sum(&b).unwrap();
            let q = quotient(&num, &a).unwrap();
            prop_assert_eq!(q.dim(), num.dim() - a.dim());
            for (i, r) in q.representatives().iter().enumerate() {
                prop_assert_eq!(q.project(r), unit_vector(q.dim(), i));
                prop_assert!(num.contains(r));
            }
            for d in a.basis() {
                prop_assert!(is_zero_vec(&q.project(d)));
            }
            // additivity over the flag 0 ⊆ a ⊆ a+b
            let lower = quotient(&a, &Subspace::zero(a.ambient_dim())).unwrap();
            let total = quotient(&num, &Subspace::zero(a.ambient_dim())).unwrap();
            prop_assert_eq!(lower.dim() + q.dim(), total.dim());
        }

        #[test]
        fn preimage_is_exact(m in small_matrix(), seed in 0u64..1000) {
            let k = (seed as usize) % (m.rows() + 1);
            let b = Subspace::coordinate(m.rows(), 0..k);
            let pre = b.preimage(&m).unwrap();
            for v in pre.basis() {
                prop_assert!(b.contains(&m.mul_vec(v)));
            }
            let img = Subspace::full(m.cols()).image(&m).unwrap();
            let hit = img.intersection(&b).unwrap();
            let (ker, _) = kernel_image(&m);
            prop_assert_eq!(pre.dim(), hit.dim() + ker.dim());
        }
    }
}
