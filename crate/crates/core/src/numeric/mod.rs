//! Floating-point checks of the geometric input: Pansu differentials of
//! catalog maps and quadrature of the pullback integral identity.

mod catalog;
mod pansu;
mod quadrature;

pub use catalog::{heisenberg_automorphism, SmoothMap};
pub use pansu::{pansu_differential, pansu_pullback_field, PansuDifferential, SampledPullback};
pub use quadrature::{admissible_pairs, check_weight_conditions, verify_pullback_identity, BumpForm, PullbackReport};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::carnot::GradedLieAlgebra;
use crate::forms::{ExteriorElement, MultiIndex};

/// Every numeric threshold in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative residual required at the finer grid.
    pub pass_residual: f64,
    /// Nominal order of the midpoint rule on the bump profile.
    pub nominal_order: f64,
    pub order_window: f64,
    /// Automorphism baseline must sit this far below `pass_residual`.
    pub baseline_ratio: f64,
    /// Residuals below this are at roundoff and carry no order information.
    pub roundoff_floor: f64,
    /// Off-weight over on-weight norm of Pansu pullbacks.
    pub weight_leak: f64,
    /// Required defect reduction when the step halves.
    pub defect_factor: f64,
    /// Defects below this count as converged.
    pub defect_floor: f64,
    pub pansu_step: f64,
    /// Agreement of the extrapolated differential with the closed form.
    pub closed_form: f64,
    pub grids: (usize, usize),
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pass_residual: 1e-3,
            nominal_order: 4.0,
            order_window: 0.5,
            baseline_ratio: 10.0,
            roundoff_floor: 1e-12,
            weight_leak: 1e-8,
            defect_factor: 1.5,
            defect_floor: 1e-7,
            pansu_step: 1e-2,
            closed_form: 1e-5,
            grids: (32, 64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("step must be positive")]
    InvalidStep,
    #[error("Pansu differential did not converge at {point:?}: defect {defect_h:e} then {defect_half:e}")]
    NonConvergent { point: Vec<f64>, defect_h: f64, defect_half: f64 },
    #[error("weight condition violated: {part} has weights {weights:?}, need sum ≥ {nu}")]
    WeightConditionViolated { part: String, weights: (u32, u32), nu: u32 },
    #[error("degrees do not add up: deg ω = {omega}, deg η = {eta}, dimension {n}")]
    DegreeMismatch { omega: usize, eta: usize, n: usize },
    #[error("form must have constant coefficients")]
    NonConstant,
}

/// Constant-coefficient form with floating coefficients.
pub type FloatForm = BTreeMap<MultiIndex, f64>;

pub(crate) fn to_float(e: &ExteriorElement) -> Result<FloatForm, NumericError> {
    if !e.is_constant() {
        return Err(NumericError::NonConstant);
    }
    let mut out = FloatForm::new();
    for (j, _, c) in e.terms() {
        *out.entry(*j).or_insert(0.0) += c.to_f64();
    }
    Ok(out)
}

pub(crate) fn wedge(a: &FloatForm, b: &FloatForm) -> FloatForm {
    let mut out = FloatForm::new();
    for (i, x) in a {
        for (j, y) in b {
            if let Some((neg, k)) = i.wedge(j) {
                let v = x * y;
                *out.entry(k).or_insert(0.0) += if neg { -v } else { v };
            }
        }
    }
    out
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).expect("nonempty");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

/// `A^* ω` for a linear map `A: 𝔤 → 𝔤'`, `θ'_i ↦ Σ_j A_ij θ_j`; the
/// coefficient on `θ_J` of `A^* θ'_I` is the minor `det A[I, J]`.
pub fn pullback_linear(a: &[Vec<f64>], source_dim: usize, omega: &FloatForm) -> FloatForm {
    let mut out = FloatForm::new();
    for (i, c) in omega {
        let rows = i.indices();
        for j in MultiIndex::all_of_degree(source_dim, rows.len()) {
            let cols = j.indices();
            let minor: Vec<Vec<f64>> = rows.iter().map(|&r| cols.iter().map(|&s| a[r][s]).collect()).collect();
            let v = c * det(minor);
            if v != 0.0 {
                *out.entry(j).or_insert(0.0) += v;
            }
        }
    }
    out
}

/// Weights of the nonzero components.
pub(crate) fn float_weights(alg: &GradedLieAlgebra, f: &FloatForm) -> Vec<u32> {
    let mut w: Vec<u32> = f.iter().filter(|(_, c)| **c != 0.0).map(|(j, _)| j.weight(alg.weights())).collect();
    w.sort_unstable();
    w.dedup();
    w
}

/// `"t13"`, `"2*t1 - t2"`, `"1"`.
pub fn form_label(e: &ExteriorElement) -> String {
    let mut parts = Vec::new();
    for (j, m, c) in e.terms() {
        let base = crate::forms::term_label(j, m);
        let s = if c == &crate::exactla::Rational::one() {
            base
        } else if c == &crate::exactla::Rational::from_int(-1) {
            format!("-{base}")
        } else {
            format!("{c}*{base}")
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests;
