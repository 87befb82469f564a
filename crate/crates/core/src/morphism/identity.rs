use std::collections::HashSet;

use serde::Serialize;

use super::FilteredMap;
use crate::exactla::{dot, Rational, Subspace, Vector};
use crate::filtered::{DualityData, FilteredComplex};

/// Witness of a failed identity: `⟨f(dω), η⟩ − ⟨f(ω), ∂η⟩ = value ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub k: i32,
    pub a: i32,
    pub r: i32,
    pub b: i32,
    pub omega: Vector,
    pub eta: Vector,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

/// Test subspaces `(k, a, r, S, T)` in ascending `r`, then `k`, then `a`:
/// `S = F'^a C'^k ∩ d'^{-1} F'^{a+r} C'^{k+1}` and
/// `T = F_{a+r} C_{k+1} ∩ ∂^{-1} F_a C_k`.
///
/// Pairs whose spaces repeat an earlier pair in the same degree are skipped.
pub fn identity_pairs(source: &FilteredComplex, duality: &DualityData) -> Vec<(i32, i32, i32, Subspace, Subspace)> {
    let chain = &duality.chain;
    let lo = source.p_min().min(chain.p_min()) - 1;
    let hi = source.p_max().max(chain.p_max()) + 1;
    let r_top = hi - lo + 1;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in 0..=r_top {
        for k in source.degrees() {
            if !source.degrees().contains(&(k + 1)) {
                continue;
            }
            for a in lo..=hi {
                let s = source
                    .filtration(k, a)
                    .intersection(&source.filtration(k + 1, a + r).preimage(&source.differential(k)).expect("shapes"))
                    .expect("shapes");
                let t = chain
                    .filtration(k + 1, a + r)
                    .intersection(&chain.filtration(k, a).preimage(&chain.differential(k + 1)).expect("shapes"))
                    .expect("shapes");
                if s.is_zero() || t.is_zero() {
                    continue;
                }
                if seen.insert((k, s.clone(), t.clone())) {
                    out.push((k, a, r, s, t));
                }
            }
        }
    }
    out
}

/// `⟨f(dω), η⟩ − ⟨f(ω), ∂η⟩`.
pub(crate) fn defect(f: &FilteredMap, k: i32, omega: &[Rational], eta: &[Rational]) -> Rational {
    let d_omega = f.source.differential(k).mul_vec(omega);
    let lhs = dot(&f.map(k + 1).mul_vec(&d_omega), eta);
    let bd_eta = f.target.chain.differential(k + 1).mul_vec(eta);
    let rhs = dot(&f.map(k).mul_vec(omega), &bd_eta);
    &lhs - &rhs
}

/// Exact check of the discrete pullback identity over every test pair.
pub fn check_identity(f: &FilteredMap) -> IdentityCheck {
    let n = f.top_weight();
    for (k, a, r, s, t) in identity_pairs(&f.source, &f.target) {
        for omega in s.basis() {
            for eta in t.basis() {
                let value = defect(f, k, omega, eta);
                if !value.is_zero() {
                    let certificate =
                        Certificate { k, a, r, b: n - a - r, omega: omega.clone(), eta: eta.clone(), value };
                    return IdentityCheck { holds: false, certificate: Some(certificate) };
                }
            }
        }
    }
    IdentityCheck { holds: true, certificate: None }
}
