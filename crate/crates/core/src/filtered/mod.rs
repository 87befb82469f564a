//! Finite-dimensional filtered cochain and chain complexes, their duals and
//! total (co)homology.

mod cohomology;
mod duality;
mod json;

pub use cohomology::{total_cohomology, Cohomology, CohomologyDegree};
pub use duality::{dualize, DualityData};
pub use json::{ComplexJson, DegreeJson, DifferentialJson, FiltrationJson, JsonError, LevelJson};

use serde::Serialize;

use crate::exactla::{Matrix, Subspace, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Cochain,
    Chain,
}

impl Orientation {
    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Cochain => Orientation::Chain,
            Orientation::Chain => Orientation::Cochain,
        }
    }
}

/// A failed complex invariant with the degree, filtration index and offending vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilteredViolation {
    D2Violation { degree: i32 },
    NestingViolation { degree: i32, p: i32, vector: Vector },
    SubcomplexViolation { degree: i32, p: i32, vector: Vector },
}

impl std::fmt::Display for FilteredViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FilteredViolation::D2Violation { degree } => write!(f, "D2Violation at degree {degree}"),
            FilteredViolation::NestingViolation { degree, p, .. } => {
                write!(f, "NestingViolation at degree {degree}, p = {p}")
            }
            FilteredViolation::SubcomplexViolation { degree, p, .. } => {
                write!(f, "SubcomplexViolation at degree {degree}, p = {p}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FilteredError {
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error("invalid filtered complex: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<FilteredViolation>),
}

/// Filtered complex over the rationals.
///
/// Degrees run over `k_min..=k_max`. For a cochain complex `differential(k)`
/// is `d: C^k → C^{k+1}` and the filtration is descending, full below
/// `p_min` and zero above `p_max`. For a chain complex `differential(k)` is
/// `∂: C_k → C_{k−1}` and the filtration is ascending, zero below `p_min`
/// and full above `p_max`. Stored levels are trimmed to the shortest range
/// obeying these conventions.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    orientation: Orientation,
    k_min: i32,
    dims: Vec<usize>,
    /// `diffs[i]` joins degrees `k_min + i` and `k_min + i + 1`
    diffs: Vec<Matrix>,
    p_min: i32,
    /// `levels[i][p − p_min]`
    levels: Vec<Vec<Subspace>>,
    weights: Option<Vec<Vec<i32>>>,
    labels: Vec<Vec<String>>,
    name: String,
    dual_of: Option<String>,
}

impl FilteredComplex {
    /// `levels[i][j]` is the filtration piece of degree `k_min + i` at `p_min + j`.
    pub fn new(
        orientation: Orientation,
        k_min: i32,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        p_min: i32,
        levels: Vec<Vec<Subspace>>,
    ) -> Result<Self, FilteredError> {
        let fc = FilteredComplex::assemble(orientation, k_min, dims, diffs, p_min, levels, None)?;
        fc.validate()?;
        Ok(fc)
    }

    /// Coordinate filtration from basis weights: for a cochain complex
    /// `F^p = span{e : w(e) ≥ p}`, for a chain complex `F_p = span{e : w(e) ≤ p}`.
    pub fn weighted(
        orientation: Orientation,
        k_min: i32,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        weights: Vec<Vec<i32>>,
    ) -> Result<Self, FilteredError> {
        if weights.len() != dims.len() || weights.iter().zip(&dims).any(|(w, &d)| w.len() != d) {
            return Err(FilteredError::Malformed("weights do not match dimensions".into()));
        }
        let all: Vec<i32> = weights.iter().flatten().copied().collect();
        let lo = all.iter().copied().min().unwrap_or(0);
        let hi = all.iter().copied().max().unwrap_or(0);
        let levels = weights
            .iter()
            .zip(&dims)
            .map(|(w, &d)| {
                (lo..=hi)
                    .map(|p| {
                        let idx = (0..d).filter(|&e| match orientation {
                            Orientation::Cochain => w[e] >= p,
                            Orientation::Chain => w[e] <= p,
                        });
                        Subspace::coordinate(d, idx)
                    })
                    .collect()
            })
            .collect();
        let fc = FilteredComplex::assemble(orientation, k_min, dims, diffs, lo, levels, Some(weights))?;
        fc.validate()?;
        Ok(fc)
    }

    fn assemble(
        orientation: Orientation,
        k_min: i32,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        p_min: i32,
        levels: Vec<Vec<Subspace>>,
        weights: Option<Vec<Vec<i32>>>,
    ) -> Result<Self, FilteredError> {
        if dims.is_empty() {
            return Err(FilteredError::Malformed("no degrees".into()));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(FilteredError::Malformed(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (i, m) in diffs.iter().enumerate() {
            let expected = match orientation {
                Orientation::Cochain => (dims[i + 1], dims[i]),
                Orientation::Chain => (dims[i], dims[i + 1]),
            };
            if m.shape() != expected {
                return Err(FilteredError::Malformed(format!(
                    "differential between degrees {} and {} has shape {:?}, expected {:?}",
                    k_min + i as i32,
                    k_min + i as i32 + 1,
                    m.shape(),
                    expected
                )));
            }
        }
        if levels.len() != dims.len() {
            return Err(FilteredError::Malformed("filtration must list every degree".into()));
        }
        let nlev = levels[0].len();
        if nlev == 0 {
            return Err(FilteredError::Malformed("empty filtration".into()));
        }
        for (i, lv) in levels.iter().enumerate() {
            if lv.len() != nlev || lv.iter().any(|s| s.ambient_dim() != dims[i]) {
                return Err(FilteredError::Malformed(format!(
                    "filtration of degree {} has inconsistent shape",
                    k_min + i as i32
                )));
            }
        }
        let labels = dims.iter().map(|&d| (0..d).map(|e| format!("e{}", e + 1)).collect()).collect();
        let mut fc = FilteredComplex {
            orientation,
            k_min,
            dims,
            diffs,
            p_min,
            levels,
            weights,
            labels,
            name: String::new(),
            dual_of: None,
        };
        fc.normalize();
        Ok(fc)
    }

    fn level_all(&self, j: usize, pred: impl Fn(&Subspace) -> bool) -> bool {
        self.levels.iter().all(|lv| pred(&lv[j]))
    }

    fn normalize(&mut self) {
        let full: Vec<Subspace> = self.dims.iter().map(|&d| Subspace::full(d)).collect();
        match self.orientation {
            Orientation::Cochain => {
                if !self.level_all(0, Subspace::is_full) {
                    for (lv, f) in self.levels.iter_mut().zip(&full) {
                        lv.insert(0, f.clone());
                    }
                    self.p_min -= 1;
                }
                while self.levels[0].len() > 1 && self.level_all(1, Subspace::is_full) {
                    self.levels.iter_mut().for_each(|lv| {
                        lv.remove(0);
                    });
                    self.p_min += 1;
                }
                while self.levels[0].len() > 1 && self.level_all(self.levels[0].len() - 1, Subspace::is_zero) {
                    self.levels.iter_mut().for_each(|lv| {
                        lv.pop();
                    });
                }
            }
            Orientation::Chain => {
                let last = self.levels[0].len() - 1;
                if !self.level_all(last, Subspace::is_full) {
                    for (lv, f) in self.levels.iter_mut().zip(&full) {
                        lv.push(f.clone());
                    }
                }
                while self.levels[0].len() > 1 && self.level_all(self.levels[0].len() - 2, Subspace::is_full) {
                    self.levels.iter_mut().for_each(|lv| {
                        lv.pop();
                    });
                }
                while self.levels[0].len() > 1 && self.level_all(0, Subspace::is_zero) {
                    self.levels.iter_mut().for_each(|lv| {
                        lv.remove(0);
                    });
                    self.p_min += 1;
                }
            }
        }
    }

    /// Checks `d² = 0`, nesting and the subcomplex property.
    pub fn validate(&self) -> Result<(), FilteredError> {
        let mut out = Vec::new();
        for i in 0..self.diffs.len().saturating_sub(1) {
            let prod = match self.orientation {
                Orientation::Cochain => self.diffs[i + 1].mul(&self.diffs[i]),
                Orientation::Chain => self.diffs[i].mul(&self.diffs[i + 1]),
            };
            if !prod.is_zero() {
                let degree = match self.orientation {
                    Orientation::Cochain => self.k_min + i as i32,
                    Orientation::Chain => self.k_min + i as i32 + 2,
                };
                out.push(FilteredViolation::D2Violation { degree });
            }
        }
        for k in self.degrees() {
            for p in self.p_min..self.p_max() {
                let (small, big, pp) = match self.orientation {
                    Orientation::Cochain => (self.filtration(k, p + 1), self.filtration(k, p), p),
                    Orientation::Chain => (self.filtration(k, p), self.filtration(k, p + 1), p + 1),
                };
                if let Some(v) = big.first_outside(&small) {
                    out.push(FilteredViolation::NestingViolation { degree: k, p: pp, vector: v.clone() });
                }
            }
        }
        for k in self.degrees() {
            let tk = self.target_degree(k);
            if self.dim(tk) == 0 || self.dim(k) == 0 {
                continue;
            }
            let d = self.differential(k);
            for p in self.p_min..=self.p_max() {
                let src = self.filtration(k, p);
                let dst = self.filtration(tk, p);
                if let Some(v) = src.basis().iter().find(|v| !dst.contains(&d.mul_vec(v))) {
                    out.push(FilteredViolation::SubcomplexViolation { degree: k, p, vector: v.clone() });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(FilteredError::Invalid(out))
        }
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        assert!(labels.len() == self.dims.len() && labels.iter().zip(&self.dims).all(|(l, &d)| l.len() == d));
        self.labels = labels;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn with_dual_of(mut self, of: Option<String>) -> Self {
        self.dual_of = of;
        self
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dual_of(&self) -> Option<&str> {
        self.dual_of.as_deref()
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.k_min..=self.k_max()
    }

    pub fn p_min(&self) -> i32 {
        self.p_min
    }

    pub fn p_max(&self) -> i32 {
        self.p_min + self.levels[0].len() as i32 - 1
    }

    fn idx(&self, k: i32) -> Option<usize> {
        if self.degrees().contains(&k) {
            Some((k - self.k_min) as usize)
        } else {
            None
        }
    }

    /// Dimension in degree `k`, zero outside the range.
    pub fn dim(&self, k: i32) -> usize {
        self.idx(k).map_or(0, |i| self.dims[i])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Degree the differential out of `k` lands in.
    pub fn target_degree(&self, k: i32) -> i32 {
        match self.orientation {
            Orientation::Cochain => k + 1,
            Orientation::Chain => k - 1,
        }
    }

    /// The differential leaving degree `k`; a zero matrix at the boundary.
    pub fn differential(&self, k: i32) -> Matrix {
        let t = self.target_degree(k);
        let (lo, i) = match self.orientation {
            Orientation::Cochain => (k, self.idx(k).zip(self.idx(t))),
            Orientation::Chain => (t, self.idx(k).zip(self.idx(t))),
        };
        match i {
            Some(_) => self.diffs[(lo - self.k_min) as usize].clone(),
            None => Matrix::zeros(self.dim(t), self.dim(k)),
        }
    }

    pub(crate) fn raw_differentials(&self) -> &[Matrix] {
        &self.diffs
    }

    /// Filtration piece in degree `k` at index `p`, with the boundary conventions.
    pub fn filtration(&self, k: i32, p: i32) -> Subspace {
        let d = self.dim(k);
        let Some(i) = self.idx(k) else { return Subspace::zero(0) };
        let lo = self.p_min;
        let hi = self.p_max();
        match self.orientation {
            Orientation::Cochain if p < lo => Subspace::full(d),
            Orientation::Cochain if p > hi => Subspace::zero(d),
            Orientation::Chain if p < lo => Subspace::zero(d),
            Orientation::Chain if p > hi => Subspace::full(d),
            _ => self.levels[i][(p - lo) as usize].clone(),
        }
    }

    /// Per-basis weights when the filtration is a coordinate filtration.
    pub fn weights(&self) -> Option<&[Vec<i32>]> {
        self.weights.as_deref()
    }

    pub fn labels(&self, k: i32) -> &[String] {
        self.idx(k).map_or(&[], |i| &self.labels[i])
    }

    /// The same data read with the opposite orientation: degrees and
    /// filtration indices negated, so `C^K = C_{−K}` and `F^P = F_{−P}`.
    pub fn negated(&self) -> FilteredComplex {
        let mut dims = self.dims.clone();
        dims.reverse();
        let mut diffs = self.diffs.clone();
        diffs.reverse();
        let mut levels: Vec<Vec<Subspace>> = self
            .levels
            .iter()
            .map(|lv| {
                let mut l = lv.clone();
                l.reverse();
                l
            })
            .collect();
        levels.reverse();
        let weights = self.weights.as_ref().map(|ws| {
            let mut w: Vec<Vec<i32>> = ws.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
            w.reverse();
            w
        });
        let mut labels = self.labels.clone();
        labels.reverse();
        FilteredComplex {
            orientation: self.orientation.flip(),
            k_min: -self.k_max(),
            dims,
            diffs,
            p_min: -self.p_max(),
            levels,
            weights,
            labels,
            name: self.name.clone(),
            dual_of: self.dual_of.clone(),
        }
    }

    /// Equality of the underlying filtered complexes, ignoring names and labels.
    pub fn same_structure(&self, other: &FilteredComplex) -> bool {
        self.orientation == other.orientation
            && self.k_min == other.k_min
            && self.dims == other.dims
            && self.diffs == other.diffs
            && self.p_min == other.p_min
            && self.levels == other.levels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ivec;

    fn two_term(d: Matrix, levels: Vec<Vec<Subspace>>) -> Result<FilteredComplex, FilteredError> {
        FilteredComplex::new(Orientation::Cochain, 0, vec![2, 2], vec![d], 0, levels)
    }

    #[test]
    fn subcomplex_violation_is_reported() {
        // d e1 = e2 but F^1 = span(e1) in degree 0 and zero in degree 1
        let d = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let levels =
            vec![vec![Subspace::full(2), Subspace::coordinate(2, [0])], vec![Subspace::full(2), Subspace::zero(2)]];
        let err = two_term(d, levels).unwrap_err();
        let FilteredError::Invalid(v) = err else { panic!() };
        assert_eq!(v, vec![FilteredViolation::SubcomplexViolation { degree: 0, p: 1, vector: ivec(&[1, 0]) }]);
    }

    #[test]
    fn nesting_and_d2_violations() {
        let levels = vec![
            vec![Subspace::coordinate(2, [0]), Subspace::coordinate(2, [1])],
            vec![Subspace::full(2), Subspace::full(2)],
        ];
        let err = two_term(Matrix::zeros(2, 2), levels).unwrap_err();
        let FilteredError::Invalid(v) = err else { panic!() };
        assert!(v.iter().any(|x| matches!(x, FilteredViolation::NestingViolation { degree: 0, .. })));
        let d = Matrix::from_i64(&[&[1]]);
        let err = FilteredComplex::weighted(
            Orientation::Cochain,
            0,
            vec![1, 1, 1],
            vec![d.clone(), d],
            vec![vec![0], vec![0], vec![0]],
        )
        .unwrap_err();
        assert_eq!(err, FilteredError::Invalid(vec![FilteredViolation::D2Violation { degree: 0 }]));
    }

    #[test]
    fn zero_differential_any_nested_filtration() {
        let levels = vec![
            vec![Subspace::full(2), Subspace::span(2, &[ivec(&[1, 1])]), Subspace::zero(2)],
            vec![Subspace::full(2), Subspace::full(2), Subspace::coordinate(2, [1])],
        ];
        let fc = two_term(Matrix::zeros(2, 2), levels).unwrap();
        assert_eq!((fc.p_min(), fc.p_max()), (0, 2));
        assert!(fc.filtration(0, -3).is_full());
        assert!(fc.filtration(1, 3).is_zero());
    }

    #[test]
    fn normalization_trims_and_pads() {
        let fc = FilteredComplex::weighted(Orientation::Cochain, 0, vec![2], vec![], vec![vec![3, 5]]).unwrap();
        assert_eq!((fc.p_min(), fc.p_max()), (3, 5));
        let levels = vec![vec![Subspace::coordinate(2, [0])]];
        let fc = FilteredComplex::new(Orientation::Cochain, 0, vec![2], vec![], 4, levels).unwrap();
        assert_eq!((fc.p_min(), fc.p_max()), (3, 4));
        let ch = FilteredComplex::weighted(Orientation::Chain, 0, vec![2], vec![], vec![vec![1, 2]]).unwrap();
        assert_eq!((ch.p_min(), ch.p_max()), (1, 2));
        assert!(ch.filtration(0, 0).is_zero() && ch.filtration(0, 7).is_full());
    }

    #[test]
    fn negation_is_an_involution() {
        let d = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let fc = FilteredComplex::weighted(Orientation::Cochain, 2, vec![2, 2], vec![d], vec![vec![0, 1], vec![0, 2]])
            .unwrap();
        let neg = fc.negated();
        assert_eq!(neg.orientation(), Orientation::Chain);
        assert_eq!(neg.degrees(), -3..=-2);
        assert_eq!(neg.filtration(-2, -1), fc.filtration(2, 1));
        assert!(neg.validate().is_ok());
        assert!(neg.negated().same_structure(&fc));
    }
}
