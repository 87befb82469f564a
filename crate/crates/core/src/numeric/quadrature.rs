use serde::Serialize;

use super::{
    float_weights, form_label, pullback_linear, to_float, wedge, FloatForm, NumericError, SmoothMap, Tolerances,
};
use crate::exactla::Rational;
use crate::forms::{ce_differential, d_theta, ExteriorElement, MultiIndex};
use crate::poly::{Monomial, Polynomial};

/// `b(x) θ_J` with `b = P(u) Π (1 − u_m²)^4`, `u = (x − c)/r`, supported in
/// the box `c ± r`.
#[derive(Debug, Clone)]
pub struct BumpForm {
    pub center: Vec<f64>,
    pub radius: Vec<f64>,
    pub index: MultiIndex,
    poly: Polynomial,
    dpoly: Vec<Polynomial>,
}

impl BumpForm {
    pub fn new(center: Vec<f64>, radius: Vec<f64>, poly: Polynomial, index: MultiIndex) -> Self {
        assert_eq!(center.len(), radius.len());
        assert!(radius.iter().all(|&r| r > 0.0));
        let dpoly = (0..center.len()).map(|m| poly.derivative(m)).collect();
        BumpForm { center, radius, index, poly, dpoly }
    }

    /// Off-center box with a polynomial factor that has no symmetry.
    pub fn standard(nvars: usize, index: MultiIndex) -> Self {
        let center: Vec<f64> = (0..nvars).map(|m| [0.15, -0.1, 0.2, -0.05][m % 4]).collect();
        let radius: Vec<f64> = (0..nvars).map(|m| 0.9 + 0.1 * m as f64).collect();
        let mut p = Polynomial::constant(nvars, Rational::one());
        let coeffs = [Rational::new(1, 2), Rational::new(-1, 3), Rational::new(1, 4), Rational::new(-1, 5)];
        for m in 0..nvars {
            p.add_term(Monomial::var(nvars, m), &coeffs[m % 4]);
        }
        if nvars >= 2 {
            let mut e = vec![0; nvars];
            e[0] = 1;
            e[1] = 1;
            p.add_term(Monomial::from_exponents(e), &Rational::new(1, 5));
        }
        BumpForm::new(center, radius, p, index)
    }

    pub fn nvars(&self) -> usize {
        self.center.len()
    }

    pub fn label(&self) -> String {
        if self.index.is_empty() {
            "b".into()
        } else {
            format!("b*{}", self.index.label())
        }
    }

    /// `(b(x), ∇b(x))`.
    pub fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = self.nvars();
        let u: Vec<f64> = (0..n).map(|m| (x[m] - self.center[m]) / self.radius[m]).collect();
        if u.iter().any(|v| v.abs() >= 1.0) {
            return (0.0, vec![0.0; n]);
        }
        let s: Vec<f64> = u.iter().map(|v| 1.0 - v * v).collect();
        let g: Vec<f64> = s.iter().map(|v| v.powi(4)).collect();
        let dg: Vec<f64> = u.iter().zip(&s).map(|(v, w)| -8.0 * v * w.powi(3)).collect();
        let prod: f64 = g.iter().product();
        let p = self.poly.eval(&u);
        let grad = (0..n)
            .map(|m| {
                let others: f64 = (0..n).filter(|&l| l != m).map(|l| g[l]).product();
                (self.dpoly[m].eval(&u) * prod + p * dg[m] * others) / self.radius[m]
            })
            .collect();
        (p * prod, grad)
    }
}

/// Componentwise weight conditions for `(ω, η = b θ_J)`:
/// `wt(ω) + wt(dη) ≥ ν` and `wt(dω) + wt(η) ≥ ν` on homogeneous parts.
pub fn check_weight_conditions(f: &SmoothMap, omega: &ExteriorElement, index: MultiIndex) -> Result<(), NumericError> {
    let src = f.source();
    let nu = src.homogeneous_dim();
    let om = to_float(omega)?;
    let dom = to_float(&ce_differential(f.target(), omega))?;
    let wt_eta = index.weight(src.weights());
    let mut d_eta: Vec<u32> = (0..src.dim()).filter(|&i| !index.contains(i)).map(|i| wt_eta + src.weight(i)).collect();
    if d_theta(src, index).iter().any(|(_, c)| !c.is_zero()) {
        d_eta.push(wt_eta);
    }
    for a in float_weights(f.target(), &om) {
        for &c in &d_eta {
            if a + c < nu {
                return Err(NumericError::WeightConditionViolated { part: "omega, d eta".into(), weights: (a, c), nu });
            }
        }
    }
    for a in float_weights(f.target(), &dom) {
        if a + wt_eta < nu {
            return Err(NumericError::WeightConditionViolated {
                part: "d omega, eta".into(),
                weights: (a, wt_eta),
                nu,
            });
        }
    }
    Ok(())
}

/// Basis pairs `(θ'_I, b θ_J)` with matching degrees that meet the weight
/// conditions.
pub fn admissible_pairs(f: &SmoothMap) -> Vec<(ExteriorElement, MultiIndex)> {
    let n = f.source().dim();
    let nt = f.target().dim();
    let mut out = Vec::new();
    for k in 0..n.min(nt + 1) {
        for i in MultiIndex::all_of_degree(nt, k) {
            let omega = ExteriorElement::basis(nt, i);
            for j in MultiIndex::all_of_degree(n, n - k - 1) {
                if check_weight_conditions(f, &omega, j).is_ok() {
                    out.push((omega.clone(), j));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackReport {
    pub map: String,
    pub omega: String,
    pub eta: String,
    pub grids: [usize; 2],
    pub residuals: [f64; 2],
    /// Observed order; absent when the finer residual is at roundoff.
    pub order: Option<f64>,
    /// Absent in diagnostic mode.
    pub pass: Option<bool>,
    /// `∫ f_P^*dω ∧ η + (−1)^k ∫ f_P^*ω ∧ dη` at the finer grid.
    pub value: f64,
}

struct Integrand<'a> {
    f: &'a SmoothMap,
    omega: FloatForm,
    d_omega: FloatForm,
    eta: &'a BumpForm,
    d_theta_j: FloatForm,
    sign: f64,
    top: MultiIndex,
}

impl Integrand<'_> {
    /// The two integrands at `x`, as coefficients of the volume form.
    fn eval(&self, x: &[f64]) -> (f64, f64) {
        let (b, grad) = self.eta.value_and_gradient(x);
        if b == 0.0 && grad.iter().all(|g| *g == 0.0) {
            return (0.0, 0.0);
        }
        let src = self.f.source();
        let n = src.dim();
        let a = self.f.closed_form(x);
        let j = self.eta.index;
        let mut eta = FloatForm::new();
        eta.insert(j, b);
        let mut d_eta = FloatForm::new();
        for (i, field) in src.vector_fields().iter().enumerate() {
            if let Some((neg, k)) = MultiIndex::single(i).wedge(&j) {
                let xb: f64 = field.iter().zip(&grad).map(|(c, g)| if *g == 0.0 { 0.0 } else { c.eval(x) * g }).sum();
                *d_eta.entry(k).or_insert(0.0) += if neg { -xb } else { xb };
            }
        }
        for (k, c) in &self.d_theta_j {
            *d_eta.entry(*k).or_insert(0.0) += b * c;
        }
        let t1 = wedge(&pullback_linear(&a, n, &self.d_omega), &eta).get(&self.top).copied().unwrap_or(0.0);
        let t2 = wedge(&pullback_linear(&a, n, &self.omega), &d_eta).get(&self.top).copied().unwrap_or(0.0);
        (t1, self.sign * t2)
    }
}

/// Midpoint rule with `m` points per axis on the bump's box; returns
/// `(∫t1, ∫t2, ∫|t1|, ∫|t2|)`, summed in lexicographic grid order.
fn integrate(ig: &Integrand, m: usize) -> [f64; 4] {
    let eta = ig.eta;
    let n = eta.nvars();
    let steps: Vec<f64> = eta.radius.iter().map(|r| 2.0 * r / m as f64).collect();
    let vol: f64 = steps.iter().product();
    let mut idx = vec![0usize; n];
    let mut acc = [0.0; 4];
    let mut x = vec![0.0; n];
    loop {
        for d in 0..n {
            x[d] = eta.center[d] - eta.radius[d] + (idx[d] as f64 + 0.5) * steps[d];
        }
        let (t1, t2) = ig.eval(&x);
        acc[0] += t1;
        acc[1] += t2;
        acc[2] += t1.abs();
        acc[3] += t2.abs();
        let mut d = n;
        loop {
            if d == 0 {
                return acc.map(|v| v * vol);
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < m {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// Quadrature check of `∫ f_P^*dω ∧ η + (−1)^k ∫ f_P^*ω ∧ dη = 0` at two
/// resolutions. In diagnostic mode the weight conditions are not enforced
/// and no verdict is given.
pub fn verify_pullback_identity(
    f: &SmoothMap,
    omega: &ExteriorElement,
    eta: &BumpForm,
    tol: &Tolerances,
    diagnostic: bool,
) -> Result<PullbackReport, NumericError> {
    let n = f.source().dim();
    let k = omega.degree();
    if eta.nvars() != n || k + eta.index.len() + 1 != n {
        return Err(NumericError::DegreeMismatch { omega: k, eta: eta.index.len(), n });
    }
    if !diagnostic {
        check_weight_conditions(f, omega, eta.index)?;
    }
    let mut d_theta_j = FloatForm::new();
    for (j, c) in d_theta(f.source(), eta.index) {
        *d_theta_j.entry(j).or_insert(0.0) += c.to_f64();
    }
    let ig = Integrand {
        f,
        omega: to_float(omega)?,
        d_omega: to_float(&ce_differential(f.target(), omega))?,
        eta,
        d_theta_j,
        sign: if k.is_multiple_of(2) { 1.0 } else { -1.0 },
        top: MultiIndex::full(n),
    };
    let (g1, g2) = tol.grids;
    let coarse = integrate(&ig, g1);
    let fine = integrate(&ig, g2);
    let rel = |s: &[f64; 4]| (s[0] + s[1]).abs() / (s[2] + s[3] + 1e-300);
    let residuals = [rel(&coarse), rel(&fine)];
    let order = if residuals[1] < tol.roundoff_floor {
        None
    } else {
        Some((residuals[0] / residuals[1]).ln() / (g2 as f64 / g1 as f64).ln())
    };
    let pass = (!diagnostic).then(|| {
        residuals[1] < tol.pass_residual && order.is_none_or(|o| (o - tol.nominal_order).abs() <= tol.order_window)
    });
    Ok(PullbackReport {
        map: f.id().to_string(),
        omega: form_label(omega),
        eta: eta.label(),
        grids: [g1, g2],
        residuals,
        order,
        pass,
        value: fine[0] + fine[1],
    })
}
