//! Seeded randomness: named sub-streams and random filtered complexes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactla::{Matrix, Rational, Subspace};
use crate::filtered::{FilteredComplex, Orientation};

/// Independent stream derived from a root seed and a name.
pub fn named_rng(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a of the name, folded into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h.rotate_left(17))
}

#[derive(Debug, Clone, Copy)]
pub struct RandomComplexParams {
    pub degrees: usize,
    pub max_dim: usize,
    /// Number of distinct filtration indices.
    pub filtration_length: i32,
    pub max_coeff: i64,
    /// Keep the filtration a coordinate one (weights); otherwise apply a
    /// random change of basis.
    pub coordinate: bool,
}

impl Default for RandomComplexParams {
    fn default() -> Self {
        RandomComplexParams { degrees: 3, max_dim: 6, filtration_length: 4, max_coeff: 2, coordinate: true }
    }
}

fn nonzero(rng: &mut impl Rng, m: i64) -> Rational {
    let v = rng.gen_range(1..=m);
    Rational::from_int(if rng.gen_bool(0.5) { v } else { -v })
}

/// Unitriangular map preserving `span{w ≥ p}` for every `p`.
fn filtered_unitriangular(rng: &mut impl Rng, w: &[i32], m: i64) -> Matrix {
    let n = w.len();
    let mut g = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if (w[j], j) > (w[i], i) && rng.gen_bool(0.5) {
                g[(j, i)] = Rational::from_int(rng.gen_range(-m..=m));
            }
        }
    }
    g
}

fn random_invertible(rng: &mut impl Rng, n: usize, m: i64) -> Matrix {
    loop {
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = Rational::from_int(rng.gen_range(-m..=m));
            }
        }
        if a.inverse().is_some() {
            return a;
        }
    }
}

/// Random filtered cochain complex on degrees `0..degrees`.
///
/// An elementary differential pairs basis vectors `e ↦ f` with
/// `w(f) ≥ w(e)`, then is conjugated by filtration-preserving unitriangular
/// maps; `d² = 0` and the subcomplex property hold by construction.
pub fn random_filtered_complex(rng: &mut impl Rng, params: &RandomComplexParams) -> FilteredComplex {
    let nd = params.degrees.max(1);
    let dims: Vec<usize> = (0..nd).map(|_| rng.gen_range(0..=params.max_dim)).collect();
    let weights: Vec<Vec<i32>> =
        dims.iter().map(|&d| (0..d).map(|_| rng.gen_range(0..params.filtration_length.max(1))).collect()).collect();
    let mut used: Vec<Vec<bool>> = dims.iter().map(|&d| vec![false; d]).collect();
    let mut diffs = Vec::new();
    for k in 0..nd.saturating_sub(1) {
        let mut d = Matrix::zeros(dims[k + 1], dims[k]);
        for e in 0..dims[k] {
            if used[k][e] || !rng.gen_bool(0.6) {
                continue;
            }
            let candidates: Vec<usize> =
                (0..dims[k + 1]).filter(|&f| !used[k + 1][f] && weights[k + 1][f] >= weights[k][e]).collect();
            if candidates.is_empty() {
                continue;
            }
            let f = candidates[rng.gen_range(0..candidates.len())];
            used[k][e] = true;
            used[k + 1][f] = true;
            d[(f, e)] = nonzero(rng, params.max_coeff);
        }
        diffs.push(d);
    }
    let g: Vec<Matrix> = weights.iter().map(|w| filtered_unitriangular(rng, w, params.max_coeff)).collect();
    let diffs: Vec<Matrix> =
        diffs.iter().enumerate().map(|(k, d)| g[k + 1].mul(d).mul(&g[k].inverse().expect("unitriangular"))).collect();
    let fc = FilteredComplex::weighted(Orientation::Cochain, 0, dims.clone(), diffs, weights)
        .expect("construction preserves the filtration");
    if params.coordinate {
        return fc;
    }
    let p: Vec<Matrix> = dims.iter().map(|&d| random_invertible(rng, d, params.max_coeff)).collect();
    let diffs: Vec<Matrix> =
        (0..nd - 1).map(|k| p[k + 1].mul(&fc.differential(k as i32)).mul(&p[k].inverse().unwrap())).collect();
    let levels: Vec<Vec<Subspace>> = (0..nd)
        .map(|k| (fc.p_min()..=fc.p_max()).map(|q| fc.filtration(k as i32, q).image(&p[k]).unwrap()).collect())
        .collect();
    FilteredComplex::new(Orientation::Cochain, 0, dims, diffs, fc.p_min(), levels).expect("conjugate is valid")
}
