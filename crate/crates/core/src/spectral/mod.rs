//! Spectral sequences of filtered complexes: pages, differentials `d_r`,
//! the isomorphisms `η_r` and the limit page.

mod report;

pub use report::{CellReport, LimitReport, PageReport, SpectralReport};

use std::collections::BTreeMap;

use crate::exactla::{kernel_image, Matrix, QuotientSpace, Rational, Subspace};
use crate::filtered::{total_cohomology, FilteredComplex, Orientation};

/// One `(p,q)` cell of a page: `E = Z / D`.
#[derive(Debug, Clone)]
pub struct Cell {
    pub z: Subspace,
    pub b: Subspace,
    pub d: Subspace,
    pub e: QuotientSpace,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.e.dim()
    }
}

#[derive(Debug, Clone)]
pub struct SpectralPage {
    pub r: usize,
    pub cells: BTreeMap<(i32, i32), Cell>,
    /// `d_r` out of each nonempty cell, in `E` coordinates
    pub differential: BTreeMap<(i32, i32), Matrix>,
}

/// `η_r: E_{r+1} → H(E_r, d_r)` per cell, in the representative bases.
#[derive(Debug, Clone)]
pub struct PageIsomorphism {
    pub r: usize,
    pub maps: BTreeMap<(i32, i32), Matrix>,
    /// Homology of `(E_r, d_r)` at each cell, in `E_r` coordinates.
    pub homology: BTreeMap<(i32, i32), QuotientSpace>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("d_{r} at ({p},{q}) depends on the representative")]
    RepresentativeDependence { r: usize, p: i32, q: i32 },
    #[error("the two boundary formulas disagree at page {r}, cell ({p},{q})")]
    BoundaryMismatch { r: usize, p: i32, q: i32 },
    #[error("d_{r} ∘ d_{r} ≠ 0 at ({p},{q})")]
    DifferentialSquare { r: usize, p: i32, q: i32 },
    #[error("η_{r} at ({p},{q}) is not invertible")]
    EtaNotInvertible { r: usize, p: i32, q: i32 },
    #[error("pages computed to r = {r_max} but the filtration has length {needed}; raise r_max")]
    NonStabilized { r_max: usize, needed: usize },
    #[error("expected a {0:?} complex")]
    WrongOrientation(Orientation),
}

/// Pages `0..=r_max` with the isomorphisms between consecutive pages.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    pub orientation: Orientation,
    pub pages: Vec<SpectralPage>,
    pub isomorphisms: Vec<PageIsomorphism>,
    pub p_range: (i32, i32),
    pub k_range: (i32, i32),
}

impl SpectralSequence {
    pub fn r_max(&self) -> usize {
        self.pages.len() - 1
    }

    pub fn page(&self, r: usize) -> &SpectralPage {
        &self.pages[r]
    }

    /// Bidegree hit by the page-`r` differential leaving `(p,q)`.
    pub fn target(&self, r: usize, p: i32, q: i32) -> (i32, i32) {
        let r = r as i32;
        match self.orientation {
            Orientation::Cochain => (p + r, q - r + 1),
            Orientation::Chain => (p - r, q + r - 1),
        }
    }

    /// Bidegree whose differential lands in `(p,q)`.
    pub fn source(&self, r: usize, p: i32, q: i32) -> (i32, i32) {
        let r = r as i32;
        match self.orientation {
            Orientation::Cochain => (p - r, q + r - 1),
            Orientation::Chain => (p + r, q - r + 1),
        }
    }

    pub fn dim(&self, r: usize, p: i32, q: i32) -> usize {
        self.pages[r].cells.get(&(p, q)).map_or(0, Cell::dim)
    }

    /// Smallest `r` with `d_{r'} = 0` for every `r' ≥ r` up to `r_max`.
    pub fn stable_from(&self) -> usize {
        let mut s = self.pages.len();
        for page in self.pages.iter().rev() {
            if page.differential.values().all(Matrix::is_zero) {
                s = page.r;
            } else {
                break;
            }
        }
        s
    }
}

fn cells_of(fc: &FilteredComplex) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for k in fc.degrees() {
        for p in fc.p_min()..=fc.p_max() {
            out.push((p, k - p));
        }
    }
    out
}

fn z_space(fc: &FilteredComplex, p: i32, k: i32, r: i32) -> Subspace {
    let d = fc.differential(k);
    let pre = fc.filtration(k + 1, p + r).preimage(&d).expect("shapes");
    fc.filtration(k, p).intersection(&pre).expect("shapes")
}

fn b_space(fc: &FilteredComplex, p: i32, k: i32, r: i32) -> Result<Subspace, ()> {
    let d = fc.differential(k - 1);
    let via_z = z_space(fc, p - r, k - 1, r).image(&d).expect("shapes");
    let via_f =
        fc.filtration(k - 1, p - r).image(&d).expect("shapes").intersection(&fc.filtration(k, p)).expect("shapes");
    if via_z == via_f {
        Ok(via_z)
    } else {
        Err(())
    }
}

/// Cohomological spectral sequence of a descending filtration.
pub fn compute_pages(fc: &FilteredComplex, r_max: usize) -> Result<SpectralSequence, SpectralError> {
    if fc.orientation() != Orientation::Cochain {
        return Err(SpectralError::WrongOrientation(Orientation::Cochain));
    }
    let mut ss = SpectralSequence {
        orientation: Orientation::Cochain,
        pages: Vec::new(),
        isomorphisms: Vec::new(),
        p_range: (fc.p_min(), fc.p_max()),
        k_range: (fc.k_min(), fc.k_max()),
    };
    let cells = cells_of(fc);
    for r in 0..=r_max {
        let ri = r as i32;
        let mut page = SpectralPage { r, cells: BTreeMap::new(), differential: BTreeMap::new() };
        for &(p, q) in &cells {
            let k = p + q;
            let z = z_space(fc, p, k, ri);
            let b = b_space(fc, p, k, ri).map_err(|_| SpectralError::BoundaryMismatch { r, p, q })?;
            let d = if r == 0 {
                fc.filtration(k, p + 1)
            } else {
                let zp = z_space(fc, p + 1, k, ri - 1);
                let bp = b_space(fc, p, k, ri - 1).map_err(|_| SpectralError::BoundaryMismatch { r, p, q })?;
                zp.sum(&bp).expect("shapes")
            };
            let e = QuotientSpace::new(z.clone(), d.clone()).expect("D ⊆ Z");
            page.cells.insert((p, q), Cell { z, b, d, e });
        }
        for &(p, q) in &cells {
            let (tp, tq) = ss_target(r, p, q);
            let src = &page.cells[&(p, q)];
            let dk = fc.differential(p + q);
            let m = match page.cells.get(&(tp, tq)) {
                Some(tgt) => {
                    // d(Z) ⊆ Z_target and d(D) ⊆ D_target
                    let img_d = src.d.image(&dk).expect("shapes");
                    if !tgt.d.contains_subspace(&img_d) || !tgt.z.contains_subspace(&src.z.image(&dk).expect("shapes"))
                    {
                        return Err(SpectralError::RepresentativeDependence { r, p, q });
                    }
                    let cols: Vec<Vec<Rational>> =
                        src.e.representatives().iter().map(|v| tgt.e.project(&dk.mul_vec(v))).collect();
                    Matrix::from_columns(tgt.e.dim(), &cols)
                }
                None => {
                    if src.e.representatives().iter().any(|v| !dk.mul_vec(v).iter().all(Rational::is_zero)) {
                        return Err(SpectralError::RepresentativeDependence { r, p, q });
                    }
                    Matrix::zeros(0, src.e.dim())
                }
            };
            page.differential.insert((p, q), m);
        }
        for &(p, q) in &cells {
            let (tp, tq) = ss_target(r, p, q);
            if let Some(next) = page.differential.get(&(tp, tq)) {
                if !next.mul(&page.differential[&(p, q)]).is_zero() {
                    return Err(SpectralError::DifferentialSquare { r, p, q });
                }
            }
        }
        ss.pages.push(page);
    }
    for r in 0..r_max {
        ss.isomorphisms.push(eta(&ss, r)?);
    }
    Ok(ss)
}

fn ss_target(r: usize, p: i32, q: i32) -> (i32, i32) {
    (p + r as i32, q - r as i32 + 1)
}

fn eta(ss: &SpectralSequence, r: usize) -> Result<PageIsomorphism, SpectralError> {
    let page = &ss.pages[r];
    let next = &ss.pages[r + 1];
    let mut maps = BTreeMap::new();
    let mut homology = BTreeMap::new();
    for (&(p, q), cell) in &page.cells {
        let dim = cell.dim();
        let out = &page.differential[&(p, q)];
        let (ker, _) = kernel_image(out);
        let (sp, sq) = ss.source(r, p, q);
        let im = match page.differential.get(&(sp, sq)) {
            Some(m) => kernel_image(m).1,
            None => Subspace::zero(dim),
        };
        let h = QuotientSpace::new(ker.clone(), im).map_err(|_| SpectralError::DifferentialSquare { r, p, q })?;
        let reps = next.cells[&(p, q)].e.representatives();
        let cols: Vec<Vec<Rational>> = reps
            .iter()
            .map(|z| {
                let c = cell.e.project(z);
                debug_assert!(ker.contains(&c));
                h.project(&c)
            })
            .collect();
        let m = Matrix::from_columns(h.dim(), &cols);
        if m.rows() != m.cols() || (m.rows() > 0 && m.inverse().is_none()) {
            return Err(SpectralError::EtaNotInvertible { r, p, q });
        }
        maps.insert((p, q), m);
        homology.insert((p, q), h);
    }
    Ok(PageIsomorphism { r, maps, homology })
}

/// Homological spectral sequence of an ascending filtration, computed on the
/// negated cochain view `C^{−k} = C_k`, `F^{−p} = F_p`.
pub fn compute_pages_homological(fc: &FilteredComplex, r_max: usize) -> Result<SpectralSequence, SpectralError> {
    if fc.orientation() != Orientation::Chain {
        return Err(SpectralError::WrongOrientation(Orientation::Chain));
    }
    let neg = compute_pages(&fc.negated(), r_max).map_err(|e| match e {
        SpectralError::RepresentativeDependence { r, p, q } => {
            SpectralError::RepresentativeDependence { r, p: -p, q: -q }
        }
        SpectralError::BoundaryMismatch { r, p, q } => SpectralError::BoundaryMismatch { r, p: -p, q: -q },
        SpectralError::DifferentialSquare { r, p, q } => SpectralError::DifferentialSquare { r, p: -p, q: -q },
        SpectralError::EtaNotInvertible { r, p, q } => SpectralError::EtaNotInvertible { r, p: -p, q: -q },
        other => other,
    })?;
    Ok(SpectralSequence {
        orientation: Orientation::Chain,
        pages: neg
            .pages
            .into_iter()
            .map(|pg| SpectralPage { r: pg.r, cells: flip(pg.cells), differential: flip(pg.differential) })
            .collect(),
        isomorphisms: neg
            .isomorphisms
            .into_iter()
            .map(|iso| PageIsomorphism { r: iso.r, maps: flip(iso.maps), homology: flip(iso.homology) })
            .collect(),
        p_range: (fc.p_min(), fc.p_max()),
        k_range: (fc.k_min(), fc.k_max()),
    })
}

fn flip<V>(m: BTreeMap<(i32, i32), V>) -> BTreeMap<(i32, i32), V> {
    m.into_iter().map(|((p, q), v)| ((-p, -q), v)).collect()
}

/// Stabilization page and comparison of `E_∞` with the graded (co)homology.
pub fn limit_page(ss: &SpectralSequence, fc: &FilteredComplex) -> Result<LimitReport, SpectralError> {
    let needed = (ss.p_range.1 - ss.p_range.0 + 1) as usize;
    if ss.r_max() < needed {
        return Err(SpectralError::NonStabilized { r_max: ss.r_max(), needed });
    }
    let stable_from = ss.stable_from();
    let h = total_cohomology(fc);
    let last = ss.r_max();
    let mut infinity = BTreeMap::new();
    let mut mismatches = Vec::new();
    for &(p, q) in ss.pages[last].cells.keys() {
        let e = ss.dim(last, p, q);
        let g = h.graded_dim(p + q, p);
        if e != g {
            mismatches.push((p, q, e, g));
        }
        if e > 0 {
            infinity.insert((p, q), e);
        }
    }
    let total_by_degree: BTreeMap<i32, usize> =
        fc.degrees().map(|k| (k, infinity.iter().filter(|((p, q), _)| p + q == k).map(|(_, d)| d).sum())).collect();
    Ok(LimitReport {
        stable_from,
        infinity,
        total_by_degree,
        betti: h.degrees.iter().map(|d| (d.degree, d.dim)).collect(),
        mismatches,
    })
}

#[cfg(test)]
mod tests;
