use serde::Serialize;

use super::pairing::{page_pairing, PairingError};
use super::{FilteredMap, PageMorphism};
use crate::exactla::{dot, Rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportMismatch {
    pub r: usize,
    pub p: i32,
    pub q: i32,
    pub omega: Vector,
    pub eta: Vector,
    /// `⟨ζ_r, η⟩ − ⟨ω_r, ∂η⟩`.
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportPage {
    pub r: usize,
    /// Corrected representatives pair the same way as the page-0 ones.
    pub invariance: bool,
    /// `⟨φ_r d_r[ω'], [η]⟩ = ⟨d_r φ_r[ω'], [η]⟩` on every test pair.
    pub telescope: bool,
    /// Verdict of `induce_morphism` on the same page.
    pub chain_map: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub pages: Vec<TransportPage>,
    pub mismatch: Option<TransportMismatch>,
    /// Every page verdict agrees with `induce_morphism`.
    pub consistent: bool,
}

/// Representative of `φ_r[x']` obtained by correcting `f(x')` page by page.
/// Returns the representatives for pages `0..=r` and whether every step
/// moved by an element of `B_r̄ + D_r̄`.
fn corrected(f: &FilteredMap, m: &PageMorphism, x: &[Rational], k: i32, p: i32, r: usize) -> (Vec<Vector>, bool) {
    let q = k - p;
    let mut reps = vec![f.map(k).mul_vec(x)];
    let mut ok = true;
    for rb in 0..r {
        let src = m.source_pages.page(rb + 1).cells.get(&(p, q));
        let tgt = m.target_pages.page(rb + 1).cells.get(&(p, q));
        let next = match (src, tgt) {
            (Some(s), Some(t)) => t.e.lift(&m.pages[rb + 1].phi[&(p, q)].mul_vec(&s.e.project(x))),
            _ => vec![Rational::zero(); f.target.cochain.dim(k)],
        };
        if let Some(cur) = m.target_pages.page(rb).cells.get(&(p, q)) {
            let step: Vector = next.iter().zip(&reps[rb]).map(|(a, b)| a - b).collect();
            let allowed = cur.b.sum(&cur.d).expect("shapes");
            ok &= allowed.contains(&step);
        }
        reps.push(next);
    }
    (reps, ok)
}

/// Replays the pairing argument on each constructed page and compares the
/// outcome with the chain-map verdict of `induce_morphism`.
pub fn verify_duality_transport(f: &FilteredMap, m: &PageMorphism) -> Result<TransportReport, PairingError> {
    page_pairing(&m.target_pages, &m.chain_pages)?;
    let chain = &f.target.chain;
    let mut pages = Vec::new();
    let mut mismatch = None;
    for pm in &m.pages {
        let r = pm.r;
        let ri = r as i32;
        let mut invariance = true;
        let mut telescope = true;
        for (&(p, q), cell) in &m.source_pages.page(r).cells {
            let k = p + q;
            if !f.source.degrees().contains(&(k + 1)) {
                continue;
            }
            let t = chain
                .filtration(k + 1, p + ri)
                .intersection(&chain.filtration(k, p).preimage(&chain.differential(k + 1)).expect("shapes"))
                .expect("shapes");
            if t.is_zero() {
                continue;
            }
            for omega in cell.e.representatives() {
                let zeta_src = f.source.differential(k).mul_vec(omega);
                let (om, ok_o) = corrected(f, m, omega, k, p, r);
                let (ze, ok_z) = corrected(f, m, &zeta_src, k + 1, p + ri, r);
                invariance &= ok_o && ok_z;
                for eta in t.basis() {
                    let bd = chain.differential(k + 1).mul_vec(eta);
                    let w0 = dot(&om[0], &bd);
                    let z0 = dot(&ze[0], eta);
                    let wr = dot(&om[r], &bd);
                    let zr = dot(&ze[r], eta);
                    invariance &= w0 == wr && z0 == zr;
                    if zr != wr {
                        telescope = false;
                        if mismatch.is_none() {
                            mismatch = Some(TransportMismatch {
                                r,
                                p,
                                q,
                                omega: omega.clone(),
                                eta: eta.clone(),
                                value: &zr - &wr,
                            });
                        }
                    }
                }
            }
        }
        pages.push(TransportPage { r, invariance, telescope, chain_map: pm.chain_map });
    }
    let consistent = pages.iter().all(|p| p.invariance && p.telescope == p.chain_map)
        && mismatch.as_ref().map(|x| x.r) == m.first_failure.map(|(r, _, _)| r);
    Ok(TransportReport { pages, mismatch, consistent })
}
