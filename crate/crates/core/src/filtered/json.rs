use serde::{Deserialize, Serialize};

use super::{FilteredComplex, FilteredError, Orientation};
use crate::exactla::{Matrix, Rational, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub name: String,
    pub orientation: Orientation,
    pub degrees: Vec<DegreeJson>,
    pub differentials: Vec<DifferentialJson>,
    pub filtration: FiltrationJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_of: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeJson {
    pub degree: i32,
    pub dim: usize,
    pub labels: Vec<String>,
}

/// Sparse matrix of the differential leaving `from`, as `(row, col, value)` triplets (0-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialJson {
    pub from: i32,
    pub to: i32,
    pub entries: Vec<(usize, usize, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FiltrationJson {
    /// Per-degree basis weight thresholds.
    Weights { weights: Vec<Vec<i32>> },
    /// Explicit nested subspaces for `p = p_min..=p_max`.
    Subspaces { p_min: i32, levels: Vec<LevelJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelJson {
    pub degree: i32,
    pub p: i32,
    pub basis: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("malformed complex JSON: {0}")]
    Parse(String),
    #[error(transparent)]
    Complex(#[from] FilteredError),
}

impl FilteredComplex {
    pub fn to_json(&self) -> ComplexJson {
        let degrees = self
            .degrees()
            .map(|k| DegreeJson { degree: k, dim: self.dim(k), labels: self.labels(k).to_vec() })
            .collect();
        let differentials = self
            .degrees()
            .filter(|&k| self.degrees().contains(&self.target_degree(k)))
            .map(|k| {
                let m = self.differential(k);
                let mut entries = Vec::new();
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        if !m[(r, c)].is_zero() {
                            entries.push((r, c, m[(r, c)].clone()));
                        }
                    }
                }
                DifferentialJson { from: k, to: self.target_degree(k), entries }
            })
            .collect();
        let filtration = match self.weights() {
            Some(w) => FiltrationJson::Weights { weights: w.to_vec() },
            None => FiltrationJson::Subspaces {
                p_min: self.p_min(),
                levels: self
                    .degrees()
                    .flat_map(|k| {
                        (self.p_min()..=self.p_max()).map(move |p| LevelJson {
                            degree: k,
                            p,
                            basis: self.filtration(k, p).basis().to_vec(),
                        })
                    })
                    .collect(),
            },
        };
        ComplexJson {
            name: self.name().to_string(),
            orientation: self.orientation(),
            degrees,
            differentials,
            filtration,
            dual_of: self.dual_of().map(str::to_string),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<FilteredComplex, JsonError> {
        let bad = |s: String| JsonError::Parse(s);
        if j.degrees.is_empty() {
            return Err(bad("no degrees".into()));
        }
        let k_min = j.degrees[0].degree;
        for (i, d) in j.degrees.iter().enumerate() {
            if d.degree != k_min + i as i32 {
                return Err(bad("degrees must be consecutive and increasing".into()));
            }
            if d.labels.len() != d.dim {
                return Err(bad(format!("degree {} has {} labels for dimension {}", d.degree, d.labels.len(), d.dim)));
            }
        }
        let dims: Vec<usize> = j.degrees.iter().map(|d| d.dim).collect();
        let dim = |k: i32| dims.get((k - k_min) as usize).copied();
        let step = match j.orientation {
            Orientation::Cochain => 1,
            Orientation::Chain => -1,
        };
        let mut diffs = Vec::new();
        for i in 0..dims.len().saturating_sub(1) {
            let (from, to) = match j.orientation {
                Orientation::Cochain => (k_min + i as i32, k_min + i as i32 + 1),
                Orientation::Chain => (k_min + i as i32 + 1, k_min + i as i32),
            };
            let (rows, cols) = (dim(to).unwrap(), dim(from).unwrap());
            let mut m = Matrix::zeros(rows, cols);
            for dj in j.differentials.iter().filter(|d| d.from == from) {
                if dj.to != from + step {
                    return Err(bad(format!("differential from {from} must land in {}", from + step)));
                }
                for (r, c, v) in &dj.entries {
                    if *r >= rows || *c >= cols {
                        return Err(bad(format!("entry ({r}, {c}) outside {rows}x{cols}")));
                    }
                    m[(*r, *c)] = v.clone();
                }
            }
            diffs.push(m);
        }
        for dj in &j.differentials {
            if dim(dj.from).is_none() || dim(dj.to).is_none() {
                return Err(bad(format!("differential {} -> {} outside degree range", dj.from, dj.to)));
            }
        }
        let fc = match &j.filtration {
            FiltrationJson::Weights { weights } => {
                FilteredComplex::weighted(j.orientation, k_min, dims.clone(), diffs, weights.clone())?
            }
            FiltrationJson::Subspaces { p_min, levels } => {
                let n_p = levels.iter().map(|l| l.p - p_min + 1).max().unwrap_or(1).max(1) as usize;
                let mut lv: Vec<Vec<Option<Subspace>>> = vec![vec![None; n_p]; dims.len()];
                for l in levels {
                    let (Some(d), true) = (dim(l.degree), l.p >= *p_min) else {
                        return Err(bad(format!("level (degree {}, p {}) out of range", l.degree, l.p)));
                    };
                    if l.basis.iter().any(|v| v.len() != d) {
                        return Err(bad(format!("level (degree {}, p {}) has wrong vector length", l.degree, l.p)));
                    }
                    lv[(l.degree - k_min) as usize][(l.p - p_min) as usize] = Some(Subspace::span(d, &l.basis));
                }
                let levels = lv
                    .into_iter()
                    .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad("every (degree, p) level must be listed".into()))?;
                FilteredComplex::new(j.orientation, k_min, dims.clone(), diffs, *p_min, levels)?
            }
        };
        let labels = j.degrees.iter().map(|d| d.labels.clone()).collect();
        Ok(fc.with_labels(labels).with_name(j.name.clone()).with_dual_of(j.dual_of.clone()))
    }

    pub fn from_json_str(s: &str) -> Result<FilteredComplex, JsonError> {
        let j: ComplexJson = serde_json::from_str(s).map_err(|e| JsonError::Parse(e.to_string()))?;
        FilteredComplex::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_both_filtration_kinds() {
        let d = Matrix::from_i64(&[&[1, 0], &[0, 0], &[2, 0]]);
        let fc =
            FilteredComplex::weighted(Orientation::Cochain, 0, vec![2, 3], vec![d], vec![vec![0, 1], vec![0, 1, 0]])
                .unwrap()
                .with_name("t");
        for c in [fc.clone(), fc.dual(), fc.dual().negated()] {
            let s = serde_json::to_string(&c.to_json()).unwrap();
            let back = FilteredComplex::from_json_str(&s).unwrap();
            assert!(back.same_structure(&c));
            assert_eq!(back.dual_of(), c.dual_of());
        }
    }

    #[test]
    fn rejects_unknown_fields() {
        let s = r#"{"name":"x","orientation":"cochain","degrees":[{"degree":0,"dim":0,"labels":[]}],"differentials":[],"filtration":{"kind":"weights","weights":[[]]},"bogus":1}"#;
        assert!(matches!(FilteredComplex::from_json_str(s), Err(JsonError::Parse(_))));
    }
}
