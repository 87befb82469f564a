//! Filtered maps into dual complexes, the discrete pullback identity, and the
//! induced morphisms of spectral sequences.

mod identity;
mod induce;
mod pairing;
mod sample;
mod transport;

pub use identity::{check_identity, identity_pairs, Certificate, IdentityCheck};
pub use induce::{induce_morphism, MorphismReport, PageMap, PageMorphism};
pub use pairing::{page_pairing, PagePairing, PairingError};
pub use sample::{
    negative_control, random_instance, sample_chain_map, sample_constrained_map, NegativeControl, SampleOutcome,
    NEGATIVE_CONTROL_SEED,
};
pub use transport::{verify_duality_transport, TransportMismatch, TransportReport};

use crate::carnot::GradedHomomorphism;
use crate::exactla::{Matrix, Rational, Vector};
use crate::filtered::{dualize, DualityData, FilteredComplex, Orientation};
use crate::forms::{build_ce_complex, phi_matrix, pullback_form, ExteriorElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("source and target must be cochain complexes on the same degrees")]
    DegreeMismatch,
    #[error("map in degree {degree} has shape {found:?}, expected {expected:?}")]
    Shape { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("map does not preserve the filtration in degree {degree} at p = {p}")]
    NotFiltrationPreserving { degree: i32, p: i32, vector: Vector },
}

/// Degreewise map `f^k: C'^k → Ĉ^k` from a filtered cochain complex into the
/// dual of a filtered chain complex.
#[derive(Debug, Clone)]
pub struct FilteredMap {
    pub source: FilteredComplex,
    pub target: DualityData,
    maps: Vec<Matrix>,
    is_chain_map: bool,
}

impl FilteredMap {
    pub fn new(source: FilteredComplex, target: DualityData, maps: Vec<Matrix>) -> Result<Self, MorphismError> {
        let tc = &target.cochain;
        if source.orientation() != Orientation::Cochain || source.degrees() != tc.degrees() {
            return Err(MorphismError::DegreeMismatch);
        }
        if maps.len() != source.dims().len() {
            return Err(MorphismError::DegreeMismatch);
        }
        for (k, m) in source.degrees().zip(&maps) {
            let expected = (tc.dim(k), source.dim(k));
            if m.shape() != expected {
                return Err(MorphismError::Shape { degree: k, expected, found: m.shape() });
            }
        }
        let lo = source.p_min().min(tc.p_min()) - 1;
        let hi = source.p_max().max(tc.p_max()) + 1;
        for (k, m) in source.degrees().zip(&maps) {
            for p in lo..=hi {
                let tgt = tc.filtration(k, p);
                if let Some(v) = source.filtration(k, p).basis().iter().find(|v| !tgt.contains(&m.mul_vec(v))) {
                    return Err(MorphismError::NotFiltrationPreserving { degree: k, p, vector: v.clone() });
                }
            }
        }
        let is_chain_map = source.degrees().all(|k| {
            let lhs = maps_at(&maps, &source, k + 1).map(|f| f.mul(&source.differential(k)));
            let rhs = maps_at(&maps, &source, k).map(|f| tc.differential(k).mul(f));
            match (lhs, rhs) {
                (Some(l), Some(r)) => l == r,
                _ => true,
            }
        });
        Ok(FilteredMap { source, target, maps, is_chain_map })
    }

    pub fn map(&self, k: i32) -> &Matrix {
        &self.maps[(k - self.source.k_min()) as usize]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn is_chain_map(&self) -> bool {
        self.is_chain_map
    }

    /// `⟨T, η⟩` between `Ĉ^k` and `C_k` in dual bases.
    pub fn pair(t: &[Rational], eta: &[Rational]) -> Rational {
        crate::exactla::dot(t, eta)
    }

    /// Top filtration index `N` of the chain side.
    pub fn top_weight(&self) -> i32 {
        self.target.chain.p_max()
    }

    /// Pages needed for every induced map to stabilize.
    pub fn page_bound(&self) -> usize {
        let s = self.source.p_max() - self.source.p_min();
        let t = self.target.chain.p_max() - self.target.chain.p_min();
        (s.max(t) + 2) as usize
    }

    /// `g ∘ self` where `g` starts at this map's target cochain complex.
    pub fn then(&self, g: &FilteredMap) -> Result<FilteredMap, MorphismError> {
        if !g.source.same_structure(&self.target.cochain) {
            return Err(MorphismError::DegreeMismatch);
        }
        let maps = self.source.degrees().map(|k| g.map(k).mul(self.map(k))).collect();
        FilteredMap::new(self.source.clone(), g.target.clone(), maps)
    }

    /// The identity of `Ĉ` viewed as a map from `Ĉ` into its own dual model.
    pub fn identity(duality: &DualityData) -> FilteredMap {
        let c = duality.cochain.clone();
        let maps = c.degrees().map(|k| Matrix::identity(c.dim(k))).collect();
        FilteredMap::new(c, duality.clone(), maps).expect("identity preserves everything")
    }

    /// `Φ ∘ h*`: pull back left-invariant forms along `h: G → G'` and embed into
    /// the dual of the chain model of `G` by the wedge pairing.
    pub fn pullback(h: &GradedHomomorphism) -> FilteredMap {
        let src_alg = h.target();
        let tgt_alg = h.source();
        let src = build_ce_complex(src_alg);
        let tgt = build_ce_complex(tgt_alg);
        let chain = tgt.chain_model(tgt_alg.homogeneous_dim() as i32);
        let duality = dualize(&chain.complex);
        let maps = src
            .complex
            .degrees()
            .map(|k| {
                let cols: Vec<Vector> = (0..src.complex.dim(k))
                    .map(|e| {
                        let pulled: ExteriorElement =
                            pullback_form(h, &src.basis_element(k, e)).expect("constant coefficients");
                        tgt.vector(k, &pulled).expect("left-invariant form")
                    })
                    .collect();
                let hk = Matrix::from_columns(tgt.complex.dim(k), &cols);
                phi_matrix(&tgt, &chain, k).mul(&hk)
            })
            .collect();
        FilteredMap::new(src.complex, duality, maps).expect("pullback along a graded homomorphism is filtered")
    }
}

fn maps_at<'a>(maps: &'a [Matrix], source: &FilteredComplex, k: i32) -> Option<&'a Matrix> {
    if source.degrees().contains(&k) {
        Some(&maps[(k - source.k_min()) as usize])
    } else {
        None
    }
}
