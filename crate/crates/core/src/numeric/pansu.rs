use serde::Serialize;

use super::{float_weights, pullback_linear, FloatForm, NumericError, SmoothMap, Tolerances};
use crate::carnot::{bch_multiply, dilate, inverse};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PansuDifferential {
    /// `(4S(h/2) − S(h))/3` with `S(t) = (M(t) + M(−t))/2`; rows index the
    /// target basis.
    pub matrix: Vec<Vec<f64>>,
    /// Block plus bracket defect of the raw quotients at `h` and `h/2`.
    pub defect_h: f64,
    pub defect_half: f64,
    pub block_defect: f64,
    pub bracket_defect: f64,
    /// Max entry deviation of `matrix` from the closed form.
    pub closed_form_error: f64,
}

/// `δ_{1/t}(f(x)^{-1} · f(x · δ_t e_i))` for every basis vector `e_i`.
fn quotient(f: &SmoothMap, x: &[f64], t: f64) -> Vec<Vec<f64>> {
    let src = f.source();
    let tgt = f.target();
    let n = src.dim();
    let fx_inv = inverse(&f.eval(x));
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = t.powi(src.weight(i) as i32);
        let moved = f.eval(&bch_multiply(src, x, &v));
        cols.push(dilate(tgt, &(1.0 / t), &bch_multiply(tgt, &fx_inv, &moved)));
    }
    (0..tgt.dim()).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

fn block_defect(f: &SmoothMap, m: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if f.target().weight(r) != f.source().weight(c) {
                s += v * v;
            }
        }
    }
    s.sqrt()
}

/// `max_{i<j} |M[e_i, e_j] − [M e_i, M e_j]|`.
fn bracket_defect(f: &SmoothMap, m: &[Vec<f64>]) -> f64 {
    let src = f.source();
    let tgt = f.target();
    let n = src.dim();
    let col = |v: &[f64]| -> Vec<f64> { m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect() };
    let unit = |i: usize| -> Vec<f64> { (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect() };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let lhs = col(&src.bracket_generic(&unit(i), &unit(j)));
            let rhs = tgt.bracket_generic(&col(&unit(i)), &col(&unit(j)));
            let d = lhs.iter().zip(&rhs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            worst = worst.max(d);
        }
    }
    worst
}

fn symmetric(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter().zip(b).map(|(u, v)| u.iter().zip(v).map(|(p, q)| 0.5 * (p + q)).collect()).collect()
}

/// Pansu differential at `x` by Richardson extrapolation of the dilated
/// difference quotients at `±h` and `±h/2`. The defect diagnostics use the
/// one-sided quotients at `h` and `h/2`.
pub fn pansu_differential(
    f: &SmoothMap,
    x: &[f64],
    h: f64,
    tol: &Tolerances,
) -> Result<PansuDifferential, NumericError> {
    if h.is_nan() || h <= 0.0 {
        return Err(NumericError::InvalidStep);
    }
    let m1 = quotient(f, x, h);
    let m2 = quotient(f, x, h / 2.0);
    let defect = |m: &[Vec<f64>]| block_defect(f, m) + bracket_defect(f, m);
    let (defect_h, defect_half) = (defect(&m1), defect(&m2));
    if defect_h > tol.defect_floor && defect_half * tol.defect_factor > defect_h {
        return Err(NumericError::NonConvergent { point: x.to_vec(), defect_h, defect_half });
    }
    let s1 = symmetric(&m1, &quotient(f, x, -h));
    let s2 = symmetric(&m2, &quotient(f, x, -h / 2.0));
    let matrix: Vec<Vec<f64>> =
        s1.iter().zip(&s2).map(|(a, b)| a.iter().zip(b).map(|(u, v)| (4.0 * v - u) / 3.0).collect()).collect();
    let closed = f.closed_form(x);
    let closed_form_error =
        matrix.iter().zip(&closed).flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs())).fold(0.0, f64::max);
    Ok(PansuDifferential {
        block_defect: block_defect(f, &matrix),
        bracket_defect: bracket_defect(f, &matrix),
        matrix,
        defect_h,
        defect_half,
        closed_form_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledPullback {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<FloatForm>,
    /// Largest off-weight over on-weight norm across the grid.
    pub max_leak: f64,
}

/// `f_P^* ω` at each grid point from the numeric Pansu differential.
pub fn pansu_pullback_field(
    f: &SmoothMap,
    omega: &FloatForm,
    grid: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<SampledPullback, NumericError> {
    let on = float_weights(f.target(), omega);
    let mut values = Vec::with_capacity(grid.len());
    let mut max_leak: f64 = 0.0;
    for x in grid {
        let d = pansu_differential(f, x, tol.pansu_step, tol)?;
        let pulled = pullback_linear(&d.matrix, f.source().dim(), omega);
        let (mut on_norm, mut off_norm) = (0.0, 0.0);
        for (j, c) in &pulled {
            if on.contains(&j.weight(f.source().weights())) {
                on_norm += c * c;
            } else {
                off_norm += c * c;
            }
        }
        let leak = if on_norm > 0.0 { (off_norm / on_norm).sqrt() } else { off_norm.sqrt() };
        max_leak = max_leak.max(leak);
        values.push(pulled);
    }
    Ok(SampledPullback { points: grid.to_vec(), values, max_leak })
}
