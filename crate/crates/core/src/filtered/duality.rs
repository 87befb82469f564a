use super::{FilteredComplex, Orientation};
use crate::exactla::{annihilator, Matrix};

/// A chain complex together with its algebraic dual cochain complex. The
/// pairing in each degree is the evaluation of dual basis vectors.
#[derive(Debug, Clone)]
pub struct DualityData {
    pub chain: FilteredComplex,
    pub cochain: FilteredComplex,
}

impl DualityData {
    /// Matrix of the evaluation pairing `C^j × C_j → Q` in the dual bases.
    pub fn pairing(&self, j: i32) -> Matrix {
        Matrix::identity(self.chain.dim(j))
    }
}

/// Dual of a chain complex: `d^j = (∂_{j+1})^T` and `F^p C^j = (F_{p−1} C_j)^⊥`.
pub fn dualize(chain: &FilteredComplex) -> DualityData {
    assert_eq!(chain.orientation(), Orientation::Chain, "dualize expects a chain complex");
    DualityData { chain: chain.clone(), cochain: chain.dual() }
}

impl FilteredComplex {
    /// Algebraic dual in the dual basis, with the annihilator filtration.
    ///
    /// Chain to cochain uses `F^p = (F_{p−1})^⊥`; cochain to chain uses
    /// `F_p = (F^{p+1})^⊥`. Basis weights carry over unchanged.
    pub fn dual(&self) -> FilteredComplex {
        let diffs: Vec<Matrix> = self.raw_differentials().iter().map(Matrix::transpose).collect();
        let (orientation, p_lo, p_hi, shift) = match self.orientation() {
            Orientation::Chain => (Orientation::Cochain, self.p_min(), self.p_max() + 1, -1),
            Orientation::Cochain => (Orientation::Chain, self.p_min() - 1, self.p_max(), 1),
        };
        let levels = self
            .degrees()
            .map(|k| (p_lo..=p_hi).map(|p| annihilator(&self.filtration(k, p + shift))).collect())
            .collect();
        let labels = self.degrees().map(|k| self.labels(k).to_vec()).collect();
        let mut out = match self.weights() {
            Some(w) => FilteredComplex::weighted(orientation, self.k_min(), self.dims().to_vec(), diffs, w.to_vec()),
            None => FilteredComplex::new(orientation, self.k_min(), self.dims().to_vec(), diffs, p_lo, levels),
        }
        .expect("dual of a valid filtered complex is valid")
        .with_labels(labels);
        let name = if self.name().is_empty() { "complex".to_string() } else { self.name().to_string() };
        out = out.with_name(format!("dual({name})")).with_dual_of(Some(name));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{ivec, Subspace};

    fn sample_chain() -> FilteredComplex {
        // ∂_1: C_1 (dim 2) → C_0 (dim 2)
        let d = Matrix::from_i64(&[&[1, 2], &[0, 0]]);
        let levels = vec![
            vec![Subspace::zero(2), Subspace::span(2, &[ivec(&[1, 0])]), Subspace::full(2)],
            vec![Subspace::span(2, &[ivec(&[2, -1])]), Subspace::span(2, &[ivec(&[2, -1])]), Subspace::full(2)],
        ];
        FilteredComplex::new(Orientation::Chain, 0, vec![2, 2], vec![d], 0, levels).unwrap()
    }

    #[test]
    fn dual_dimension_formula() {
        let ch = sample_chain();
        let dd = dualize(&ch);
        assert!(dd.cochain.validate().is_ok());
        for j in ch.degrees() {
            for p in ch.p_min() - 2..=ch.p_max() + 2 {
                assert_eq!(dd.cochain.filtration(j, p).dim(), ch.dim(j) - ch.filtration(j, p - 1).dim());
            }
        }
        assert_eq!(dd.cochain.dual_of(), Some("complex"));
    }

    #[test]
    fn double_dual_is_identity() {
        let ch = sample_chain();
        assert!(ch.dual().dual().same_structure(&ch));
        let co = ch.dual();
        assert!(co.dual().dual().same_structure(&co));
    }

    #[test]
    fn zero_complex() {
        let z = FilteredComplex::weighted(
            Orientation::Chain,
            0,
            vec![0, 0],
            vec![Matrix::zeros(0, 0)],
            vec![vec![], vec![]],
        )
        .unwrap();
        let d = dualize(&z).cochain;
        assert_eq!(d.dims(), &[0, 0]);
    }

    #[test]
    fn inclusions_reverse() {
        let ch = sample_chain();
        let co = ch.dual();
        for j in ch.degrees() {
            for p in ch.p_min()..ch.p_max() {
                assert!(ch.filtration(j, p + 1).contains_subspace(&ch.filtration(j, p)));
                assert!(co.filtration(j, p).contains_subspace(&co.filtration(j, p + 1)));
            }
        }
    }
}
