use std::collections::BTreeMap;

use crate::exactla::{dot, Matrix, Subspace};
use crate::spectral::SpectralSequence;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairingError {
    #[error("pairing on page {r} at ({p},{q}) depends on representatives")]
    IllDefinedPairing { r: usize, p: i32, q: i32 },
    #[error("pairing on page {r} at ({p},{q}) is degenerate")]
    DegeneratePairing { r: usize, p: i32, q: i32 },
}

/// Gram matrices `⟨E_r^{p,q}(Ĉ), E^r_{p,q}(C)⟩` on one page; rows index the
/// cochain cell, columns the chain cell.
#[derive(Debug, Clone)]
pub struct PagePairing {
    pub r: usize,
    pub gram: BTreeMap<(i32, i32), Matrix>,
}

fn orthogonal(a: &Subspace, b: &Subspace) -> bool {
    a.basis().iter().all(|u| b.basis().iter().all(|v| dot(u, v).is_zero()))
}

/// Induced pairings between the cohomological pages of `Ĉ` and the
/// homological pages of `C`, checked to be well defined and nondegenerate.
pub fn page_pairing(cochain: &SpectralSequence, chain: &SpectralSequence) -> Result<Vec<PagePairing>, PairingError> {
    let r_top = cochain.r_max().min(chain.r_max());
    let mut out = Vec::new();
    for r in 0..=r_top {
        let mut gram = BTreeMap::new();
        let keys: std::collections::BTreeSet<(i32, i32)> =
            cochain.page(r).cells.keys().chain(chain.page(r).cells.keys()).copied().collect();
        for (p, q) in keys {
            let m = match (cochain.page(r).cells.get(&(p, q)), chain.page(r).cells.get(&(p, q))) {
                (Some(c), Some(h)) => {
                    if !orthogonal(&c.d, &h.z) || !orthogonal(&c.z, &h.d) {
                        return Err(PairingError::IllDefinedPairing { r, p, q });
                    }
                    let rows: Vec<Vec<_>> =
                        c.e.representatives()
                            .iter()
                            .map(|u| h.e.representatives().iter().map(|v| dot(u, v)).collect())
                            .collect();
                    Matrix::from_rows(h.e.dim(), rows)
                }
                (c, h) => Matrix::zeros(c.map_or(0, |c| c.dim()), h.map_or(0, |h| h.dim())),
            };
            if m.rows() != m.cols() || (m.rows() > 0 && m.inverse().is_none()) {
                return Err(PairingError::DegeneratePairing { r, p, q });
            }
            gram.insert((p, q), m);
        }
        out.push(PagePairing { r, gram });
    }
    Ok(out)
}
