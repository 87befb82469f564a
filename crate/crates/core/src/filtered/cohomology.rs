use std::collections::BTreeMap;

use serde::Serialize;

use super::{FilteredComplex, Orientation};
use crate::exactla::kernel_image;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyDegree {
    pub degree: i32,
    pub dim: usize,
    /// `dim gr^p H^k` (cochain) or `dim gr_p H_k` (chain), nonzero entries only
    pub graded: BTreeMap<i32, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub orientation: Orientation,
    pub degrees: Vec<CohomologyDegree>,
}

impl Cohomology {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim).collect()
    }

    pub fn graded_dim(&self, k: i32, p: i32) -> usize {
        self.degrees.iter().find(|d| d.degree == k).and_then(|d| d.graded.get(&p).copied()).unwrap_or(0)
    }
}

/// (Co)homology with the induced filtration `F^pH = image of H(F^pC) → H(C)`.
pub fn total_cohomology(fc: &FilteredComplex) -> Cohomology {
    if fc.orientation() == Orientation::Chain {
        let neg = total_cohomology(&fc.negated());
        let mut degrees: Vec<CohomologyDegree> = neg
            .degrees
            .into_iter()
            .map(|d| CohomologyDegree {
                degree: -d.degree,
                dim: d.dim,
                graded: d.graded.into_iter().map(|(p, n)| (-p, n)).collect(),
            })
            .collect();
        degrees.reverse();
        return Cohomology { orientation: Orientation::Chain, degrees };
    }
    let mut degrees = Vec::new();
    for k in fc.degrees() {
        let (z, _) = kernel_image(&fc.differential(k));
        let (_, b) = kernel_image(&fc.differential(k - 1));
        let filtered = |p: i32| {
            let zp = z.intersection(&fc.filtration(k, p)).expect("same ambient");
            zp.sum(&b).expect("same ambient").dim() - b.dim()
        };
        let mut graded = BTreeMap::new();
        for p in fc.p_min()..=fc.p_max() {
            let g = filtered(p) - filtered(p + 1);
            if g > 0 {
                graded.insert(p, g);
            }
        }
        degrees.push(CohomologyDegree { degree: k, dim: z.dim() - b.dim(), graded });
    }
    Cohomology { orientation: Orientation::Cochain, degrees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Matrix;

    #[test]
    fn euler_characteristic_and_grading() {
        let d0 = Matrix::from_i64(&[&[1, 0], &[0, 0], &[0, 0]]);
        let d1 = Matrix::from_i64(&[&[0, 0, 1]]);
        let fc = FilteredComplex::weighted(
            Orientation::Cochain,
            0,
            vec![2, 3, 1],
            vec![d0, d1],
            vec![vec![0, 1], vec![0, 1, 2], vec![2]],
        )
        .unwrap();
        let h = total_cohomology(&fc);
        assert_eq!(h.betti(), vec![1, 1, 0]);
        let chi: i64 =
            h.betti().iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        assert_eq!(chi, 2 - 3 + 1);
        assert_eq!(h.graded_dim(0, 1), 1);
        assert_eq!(h.graded_dim(1, 1), 1);
        for d in &h.degrees {
            assert_eq!(d.graded.values().sum::<usize>(), d.dim);
        }
        let hc = total_cohomology(&fc.dual());
        assert_eq!(hc.betti(), vec![1, 1, 0]);
    }
}
