use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::identity::IdentityCheck;
use super::FilteredMap;
use crate::exactla::{unit_vector, Matrix, Rational};
use crate::spectral::{compute_pages, compute_pages_homological, SpectralError, SpectralSequence};

/// `φ_r` cellwise, with the checks made on page `r`.
#[derive(Debug, Clone)]
pub struct PageMap {
    pub r: usize,
    pub phi: BTreeMap<(i32, i32), Matrix>,
    /// `d_r φ_r = φ_r d_r` on every cell.
    pub chain_map: bool,
    /// `φ_r` is compatible with `η_{r-1}` and `H(φ_{r-1})`; true on page 0.
    pub commuting_square: bool,
}

#[derive(Debug, Clone)]
pub struct PageMorphism {
    pub source_pages: SpectralSequence,
    pub target_pages: SpectralSequence,
    /// Homological pages of the chain side, for the page pairing.
    pub chain_pages: SpectralSequence,
    pub pages: Vec<PageMap>,
    pub first_failure: Option<(usize, i32, i32)>,
}

impl PageMorphism {
    /// Pages were built up to `r_max` with every square commuting.
    pub fn reached_end(&self) -> bool {
        self.first_failure.is_none()
            && self.pages.len() == self.source_pages.pages.len()
            && self.pages.iter().all(|p| p.commuting_square)
    }

    pub fn phi(&self, r: usize, p: i32, q: i32) -> Matrix {
        phi_at(&self.pages[r].phi, &self.source_pages, &self.target_pages, r, p, q)
    }
}

fn keys(src: &SpectralSequence, tgt: &SpectralSequence, r: usize) -> BTreeSet<(i32, i32)> {
    src.page(r).cells.keys().chain(tgt.page(r).cells.keys()).copied().collect()
}

fn phi_at(
    phi: &BTreeMap<(i32, i32), Matrix>,
    src: &SpectralSequence,
    tgt: &SpectralSequence,
    r: usize,
    p: i32,
    q: i32,
) -> Matrix {
    phi.get(&(p, q)).cloned().unwrap_or_else(|| Matrix::zeros(tgt.dim(r, p, q), src.dim(r, p, q)))
}

fn diff_at(ss: &SpectralSequence, r: usize, p: i32, q: i32) -> Matrix {
    let (tp, tq) = ss.target(r, p, q);
    ss.page(r).differential.get(&(p, q)).cloned().unwrap_or_else(|| Matrix::zeros(ss.dim(r, tp, tq), ss.dim(r, p, q)))
}

fn phi_zero(f: &FilteredMap, src: &SpectralSequence, tgt: &SpectralSequence) -> BTreeMap<(i32, i32), Matrix> {
    let mut out = BTreeMap::new();
    for (&(p, q), cell) in &src.page(0).cells {
        let fk = f.map(p + q);
        let m = match tgt.page(0).cells.get(&(p, q)) {
            Some(t) => {
                let cols: Vec<Vec<Rational>> =
                    cell.e.representatives().iter().map(|z| t.e.project(&fk.mul_vec(z))).collect();
                Matrix::from_columns(t.e.dim(), &cols)
            }
            None => Matrix::zeros(0, cell.dim()),
        };
        out.insert((p, q), m);
    }
    out
}

fn first_non_chain(
    phi: &BTreeMap<(i32, i32), Matrix>,
    src: &SpectralSequence,
    tgt: &SpectralSequence,
    r: usize,
) -> Option<(i32, i32)> {
    keys(src, tgt, r).into_iter().find(|&(p, q)| {
        let (tp, tq) = src.target(r, p, q);
        let lhs = diff_at(tgt, r, p, q).mul(&phi_at(phi, src, tgt, r, p, q));
        let rhs = phi_at(phi, src, tgt, r, tp, tq).mul(&diff_at(src, r, p, q));
        lhs != rhs
    })
}

/// `φ_{r+1} = η_r^{-1} H(φ_r) η'_r` and the independent square check.
fn transport(
    phi: &BTreeMap<(i32, i32), Matrix>,
    src: &SpectralSequence,
    tgt: &SpectralSequence,
    r: usize,
) -> (BTreeMap<(i32, i32), Matrix>, bool) {
    let mut next = BTreeMap::new();
    let mut square = true;
    for &(p, q) in src.page(r + 1).cells.keys() {
        let src_dim = src.dim(r + 1, p, q);
        let (Some(hs), Some(ht)) =
            (src.isomorphisms[r].homology.get(&(p, q)), tgt.isomorphisms[r].homology.get(&(p, q)))
        else {
            next.insert((p, q), Matrix::zeros(tgt.dim(r + 1, p, q), src_dim));
            continue;
        };
        let cur = phi_at(phi, src, tgt, r, p, q);
        let cols: Vec<Vec<Rational>> =
            (0..hs.dim()).map(|i| ht.project(&cur.mul_vec(&hs.lift(&unit_vector(hs.dim(), i))))).collect();
        let h_phi = Matrix::from_columns(ht.dim(), &cols);
        let eta_s = &src.isomorphisms[r].maps[&(p, q)];
        let eta_t_inv = tgt.isomorphisms[r].maps[&(p, q)].inverse().expect("η is invertible");
        let m = eta_t_inv.mul(&h_phi).mul(eta_s);
        // lifted image differs from φ_r of the old class by a d_r-boundary
        let s_next = &src.page(r + 1).cells[&(p, q)];
        let t_next = &tgt.page(r + 1).cells[&(p, q)];
        let s_cur = &src.page(r).cells[&(p, q)];
        let t_cur = &tgt.page(r).cells[&(p, q)];
        for (i, z) in s_next.e.representatives().iter().enumerate() {
            let w = t_next.e.lift(&m.column(i));
            let old = cur.mul_vec(&s_cur.e.project(z));
            let diff: Vec<Rational> = t_cur.e.project(&w).iter().zip(&old).map(|(a, b)| a - b).collect();
            if !ht.denominator().contains(&diff) {
                square = false;
            }
        }
        next.insert((p, q), m);
    }
    (next, square)
}

/// Induced maps `φ_r: E_r(C') → E_r(Ĉ)` for `r = 0..=r_max`, stopping at the
/// first page whose map does not commute with the differentials.
pub fn induce_morphism(f: &FilteredMap, r_max: usize) -> Result<PageMorphism, SpectralError> {
    let src = compute_pages(&f.source, r_max)?;
    let tgt = compute_pages(&f.target.cochain, r_max)?;
    let chain = compute_pages_homological(&f.target.chain, r_max)?;
    let mut pages = Vec::new();
    let mut first_failure = None;
    let mut phi = phi_zero(f, &src, &tgt);
    let mut square = true;
    for r in 0..=r_max {
        let bad = first_non_chain(&phi, &src, &tgt, r);
        pages.push(PageMap { r, phi: phi.clone(), chain_map: bad.is_none(), commuting_square: square });
        if let Some((p, q)) = bad {
            first_failure = Some((r, p, q));
            break;
        }
        if r < r_max {
            let (next, ok) = transport(&phi, &src, &tgt, r);
            phi = next;
            square = ok;
        }
    }
    Ok(PageMorphism { source_pages: src, target_pages: tgt, chain_pages: chain, pages, first_failure })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellRank {
    pub p: i32,
    pub q: i32,
    pub rank_phi: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub r: usize,
    pub chain_map: bool,
    pub cells: Vec<CellRank>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureEntry {
    pub r: usize,
    pub p: i32,
    pub q: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub pages: Vec<PageEntry>,
    pub identity_check: IdentityCheck,
    pub first_failure: Option<FailureEntry>,
}

impl PageMorphism {
    pub fn report(&self, identity: &IdentityCheck) -> MorphismReport {
        MorphismReport {
            pages: self
                .pages
                .iter()
                .map(|pm| PageEntry {
                    r: pm.r,
                    chain_map: pm.chain_map,
                    cells: pm.phi.iter().map(|(&(p, q), m)| CellRank { p, q, rank_phi: m.rank() }).collect(),
                })
                .collect(),
            identity_check: identity.clone(),
            first_failure: self.first_failure.map(|(r, p, q)| FailureEntry { r, p, q }),
        }
    }
}
