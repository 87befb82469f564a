use super::matrix::{is_zero_vec, Matrix, Vector};
use super::rational::Rational;
use super::ExactError;

/// A subspace of `Q^n`, stored as a reduced row-echelon basis so that equal
/// subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| super::matrix::unit_vector(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors (dependent or zero vectors allowed).
    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        let rows: Vec<Vector> = vectors.iter().filter(|v| !is_zero_vec(v)).cloned().collect();
        for v in &rows {
            assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
        }
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        let mut m = Matrix::from_rows(ambient, rows);
        let pivots = m.rref_in_place();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace { ambient, basis, pivots }
    }

    /// Span of a subset of the standard basis.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Subspace { ambient, basis: idx.iter().map(|&i| super::matrix::unit_vector(ambient, i)).collect(), pivots: idx }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating the pivot columns of this basis.
    pub fn reduce(&self, v: &[Rational]) -> Vector {
        let mut out = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (x, y) in out.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// First basis vector of `other` not contained in `self`.
    pub fn first_outside<'a>(&self, other: &'a Subspace) -> Option<&'a Vector> {
        other.basis.iter().find(|v| !self.contains(v))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), ExactError> {
        if self.ambient != other.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check_ambient(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Ok(Subspace::span(self.ambient, &all))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        // v = a x with b-annihilator(v) = 0
        let ann = other.annihilator();
        let restricted: Vec<Vector> =
            ann.basis.iter().map(|phi| self.basis.iter().map(|a| super::matrix::dot(phi, a)).collect()).collect();
        let m = Matrix::from_rows(self.dim(), restricted);
        let ker = m.kernel_basis();
        let vecs: Vec<Vector> = ker.iter().map(|c| self.combine(c)).collect();
        Ok(Subspace::span(self.ambient, &vecs))
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combine(&self, coeffs: &[Rational]) -> Vector {
        assert_eq!(coeffs.len(), self.dim());
        let mut out = vec![Rational::zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        out
    }

    /// Functionals (as row vectors in the dual basis) vanishing on the subspace.
    pub fn annihilator(&self) -> Subspace {
        let n = self.ambient;
        if self.is_zero() {
            return Subspace::full(n);
        }
        let m = Matrix::from_rows(n, self.basis.clone());
        let ker = super::matrix::kernel_from_rref(&m, &self.pivots, n);
        Subspace::span(n, &ker)
    }

    /// Image under `m` (columns act on this ambient space).
    pub fn image(&self, m: &Matrix) -> Result<Subspace, ExactError> {
        if m.cols() != self.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: m.cols() });
        }
        let vecs: Vec<Vector> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Ok(Subspace::span(m.rows(), &vecs))
    }

    /// `m^{-1}(self)`, a subspace of the source of `m`.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace, ExactError> {
        if m.rows() != self.ambient {
            return Err(ExactError::DimensionMismatch { expected: self.ambient, found: m.rows() });
        }
        if self.is_full() {
            return Ok(Subspace::full(m.cols()));
        }
        let ann = self.annihilator();
        let a = Matrix::from_rows(self.ambient, ann.basis.clone());
        let k = a.mul(m).kernel_basis();
        Ok(Subspace::span(m.cols(), &k))
    }
}

/// `numerator / denominator` with explicit representatives and a projection
/// defined on the whole ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    numerator: Subspace,
    denominator: Subspace,
    representatives: Vec<Vector>,
    project: Matrix,
}

impl QuotientSpace {
    pub fn new(numerator: Subspace, denominator: Subspace) -> Result<Self, ExactError> {
        numerator.check_ambient(&denominator)?;
        if let Some(v) = numerator.first_outside(&denominator) {
            return Err(ExactError::NotContained { vector: v.clone() });
        }
        let n = numerator.ambient;
        let reduced: Vec<Vector> = numerator.basis.iter().map(|v| denominator.reduce(v)).collect();
        let reps = Subspace::span(n, &reduced);
        // project(v)_j = v[rp_j] - sum_i den_i[rp_j] v[dp_i]
        let mut project = Matrix::zeros(reps.dim(), n);
        for (j, &rp) in reps.pivots.iter().enumerate() {
            project[(j, rp)] = Rational::one();
            for (d, &dp) in denominator.basis.iter().zip(&denominator.pivots) {
                if !d[rp].is_zero() {
                    let v = &project[(j, dp)] - &d[rp];
                    project[(j, dp)] = v;
                }
            }
        }
        Ok(QuotientSpace { representatives: reps.basis, numerator, denominator, project })
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.numerator.ambient
    }

    pub fn numerator(&self) -> &Subspace {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subspace {
        &self.denominator
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.representatives
    }

    pub fn projection(&self) -> &Matrix {
        &self.project
    }

    pub fn project(&self, v: &[Rational]) -> Vector {
        self.project.mul_vec(v)
    }

    pub fn lift(&self, coords: &[Rational]) -> Vector {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![Rational::zero(); self.ambient_dim()];
        for (c, r) in coords.iter().zip(&self.representatives) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        out
    }
}
