use std::collections::HashMap;

use super::{ce_differential, wedge_pairing, ExteriorElement, MultiIndex};
use crate::carnot::GradedLieAlgebra;
use crate::exactla::{Matrix, Rational, Vector};
use crate::filtered::{FilteredComplex, Orientation};
use crate::poly::Monomial;

/// A filtered complex of forms with the dictionary from basis positions back
/// to `(θ_J, monomial)` pairs.
#[derive(Debug, Clone)]
pub struct FilteredComplexBuild {
    pub complex: FilteredComplex,
    /// `dictionary[k − k_min][e]`
    pub dictionary: Vec<Vec<(MultiIndex, Monomial)>>,
    nvars: usize,
    index: Vec<HashMap<(MultiIndex, Monomial), usize>>,
}

impl FilteredComplexBuild {
    fn new(complex: FilteredComplex, dictionary: Vec<Vec<(MultiIndex, Monomial)>>, nvars: usize) -> Self {
        let index =
            dictionary.iter().map(|d| d.iter().cloned().enumerate().map(|(i, key)| (key, i)).collect()).collect();
        FilteredComplexBuild { complex, dictionary, nvars, index }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Exterior degree of the forms sitting in complex degree `k`.
    pub fn form_degree(&self, k: i32) -> usize {
        match self.complex.orientation() {
            Orientation::Cochain => k as usize,
            Orientation::Chain => self.nvars - k as usize,
        }
    }

    fn slot(&self, k: i32) -> usize {
        (k - self.complex.k_min()) as usize
    }

    pub fn element(&self, k: i32, v: &[Rational]) -> ExteriorElement {
        let mut e = ExteriorElement::zero(self.nvars, self.form_degree(k));
        for ((j, m), c) in self.dictionary[self.slot(k)].iter().zip(v) {
            e.add_term(*j, m.clone(), c);
        }
        e
    }

    /// Coordinates of `e` in degree `k`; `None` if some term lies outside the model.
    pub fn vector(&self, k: i32, e: &ExteriorElement) -> Option<Vector> {
        let idx = &self.index[self.slot(k)];
        let mut v = vec![Rational::zero(); self.dictionary[self.slot(k)].len()];
        for (j, m, c) in e.terms() {
            let i = *idx.get(&(*j, m.clone()))?;
            v[i] = c.clone();
        }
        Some(v)
    }

    pub fn basis_element(&self, k: i32, e: usize) -> ExteriorElement {
        let (j, m) = &self.dictionary[self.slot(k)][e];
        let mut out = ExteriorElement::zero(self.nvars, j.len());
        out.add_term(*j, m.clone(), &Rational::one());
        out
    }

    /// Chain reindexing `C_j = C^{n−j}`, `∂_j = (−1)^j d`, filtered by
    /// `F_p = span{form-weight ≥ top − p}`.
    pub fn chain_model(&self, top: i32) -> FilteredComplexBuild {
        assert_eq!(self.complex.orientation(), Orientation::Cochain);
        let n = self.nvars as i32;
        let degrees = 0..=n;
        let dims: Vec<usize> = degrees.clone().map(|j| self.complex.dim(n - j)).collect();
        let diffs: Vec<Matrix> = (1..=n)
            .map(|j| {
                let d = self.complex.differential(n - j);
                if j % 2 == 0 {
                    d
                } else {
                    d.scale(&-Rational::one())
                }
            })
            .collect();
        let w = self.complex.weights().expect("forms complexes carry weights");
        let weights: Vec<Vec<i32>> =
            degrees.clone().map(|j| w[(n - j) as usize].iter().map(|x| top - x).collect()).collect();
        let labels = degrees.clone().map(|j| self.complex.labels(n - j).to_vec()).collect();
        let complex = FilteredComplex::weighted(Orientation::Chain, 0, dims, diffs, weights)
            .expect("chain reindexing is a filtered complex")
            .with_labels(labels)
            .with_name(format!("{}-chain", self.complex.name()));
        let dictionary = degrees.map(|j| self.dictionary[(n - j) as usize].clone()).collect();
        FilteredComplexBuild::new(complex, dictionary, self.nvars)
    }
}

fn assemble(
    alg: &GradedLieAlgebra,
    name: String,
    dictionary: Vec<Vec<(MultiIndex, Monomial)>>,
) -> FilteredComplexBuild {
    let n = alg.dim();
    let index: Vec<HashMap<(MultiIndex, Monomial), usize>> =
        dictionary.iter().map(|d| d.iter().cloned().enumerate().map(|(i, key)| (key, i)).collect()).collect();
    let diffs: Vec<Matrix> = (0..n)
        .map(|k| {
            let mut m = Matrix::zeros(dictionary[k + 1].len(), dictionary[k].len());
            for (col, (j, mono)) in dictionary[k].iter().enumerate() {
                let mut e = ExteriorElement::zero(n, k);
                e.add_term(*j, mono.clone(), &Rational::one());
                for (jj, mm, c) in ce_differential(alg, &e).terms() {
                    let row = index[k + 1][&(*jj, mm.clone())];
                    m[(row, col)] = c.clone();
                }
            }
            m
        })
        .collect();
    let dims = dictionary.iter().map(Vec::len).collect();
    let weights = dictionary.iter().map(|d| d.iter().map(|(j, _)| j.weight(alg.weights()) as i32).collect()).collect();
    let labels = dictionary.iter().map(|d| d.iter().map(|(j, m)| super::term_label(j, m)).collect()).collect();
    let complex = FilteredComplex::weighted(Orientation::Cochain, 0, dims, diffs, weights)
        .expect("Rumin filtration is by subcomplexes")
        .with_labels(labels)
        .with_name(name);
    FilteredComplexBuild::new(complex, dictionary, n)
}

/// Left-invariant forms `Λ^k𝔤*` filtered by form-weight.
pub fn build_ce_complex(alg: &GradedLieAlgebra) -> FilteredComplexBuild {
    build_polynomial_complex(alg, 0)
}

/// Forms `a θ_J` with polynomial coefficients of weight at most `max_weight`.
pub fn build_polynomial_complex(alg: &GradedLieAlgebra, max_weight: u32) -> FilteredComplexBuild {
    let n = alg.dim();
    let monomials = Monomial::enumerate(alg.weights(), max_weight);
    let dictionary = (0..=n)
        .map(|k| {
            MultiIndex::all_of_degree(n, k)
                .into_iter()
                .flat_map(|j| monomials.iter().map(move |m| (j, m.clone())))
                .collect()
        })
        .collect();
    let name =
        if max_weight == 0 { format!("ce({})", alg.name()) } else { format!("poly({},{max_weight})", alg.name()) };
    assemble(alg, name, dictionary)
}

/// Exhaustive check over basis forms `θ_I` of weight `p`: the pairing with
/// every `θ_J` of weight `≥ ν − p + 1` vanishes, and some `θ_J` of weight
/// `ν − p` pairs nontrivially. Returns the number of forms checked.
pub fn check_embedding_lemma(alg: &GradedLieAlgebra) -> Result<usize, String> {
    let n = alg.dim();
    let nu = alg.homogeneous_dim();
    let mut checked = 0;
    for k in 0..=n {
        for i in MultiIndex::all_of_degree(n, k) {
            let p = i.weight(alg.weights());
            let a = ExteriorElement::basis(n, i);
            let mut partner = false;
            for j in MultiIndex::all_of_degree(n, n - k) {
                let w = j.weight(alg.weights());
                let v = wedge_pairing(&a, &ExteriorElement::basis(n, j)).map_err(|e| e.to_string())?;
                if w + p > nu && !v.is_zero() {
                    return Err(format!("{} pairs with {} of weight {w} > {}", i.label(), j.label(), nu - p));
                }
                if w + p == nu && !v.is_zero() {
                    partner = true;
                }
            }
            if !partner {
                return Err(format!("{} of weight {p} has no partner of weight {}", i.label(), nu - p));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Matrix of `Φ(ω)(η) = ⟨ω, η⟩` from cochain degree `k` of a constant
/// coefficient build into the dual of chain degree `k` of `chain`.
pub fn phi_matrix(cochain: &FilteredComplexBuild, chain: &FilteredComplexBuild, k: i32) -> Matrix {
    let rows = chain.complex.dim(k);
    let cols = cochain.complex.dim(k);
    let mut m = Matrix::zeros(rows, cols);
    for c in 0..cols {
        let w = cochain.basis_element(k, c);
        for r in 0..rows {
            m[(r, c)] = wedge_pairing(&w, &chain.basis_element(k, r)).expect("complementary constant forms");
        }
    }
    m
}
