use rand::Rng;

use super::identity::identity_pairs;
use super::{induce_morphism, FilteredMap};
use crate::exactla::{Matrix, Rational, RowReducer, Vector};
use crate::filtered::{dualize, DualityData, FilteredComplex};
use crate::random::{named_rng, random_filtered_complex, RandomComplexParams};

#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub map: FilteredMap,
    /// Dimension of the solution space the sample was drawn from.
    pub solution_dim: usize,
    /// No nonzero solution exists; `map` is the zero map.
    pub empty: bool,
}

/// Unknown entries of `f^k`, restricted to filtration-allowed positions when
/// both sides carry weights.
struct Unknowns {
    vars: Vec<(usize, usize, usize)>,
    index: Vec<Vec<Vec<Option<usize>>>>,
    coordinate: bool,
}

impl Unknowns {
    fn new(source: &FilteredComplex, target: &FilteredComplex) -> Self {
        let coordinate = source.weights().is_some() && target.weights().is_some();
        let mut vars = Vec::new();
        let mut index = Vec::new();
        for (slot, k) in source.degrees().enumerate() {
            let rows = target.dim(k);
            let cols = source.dim(k);
            let mut idx = vec![vec![None; cols]; rows];
            for (i, row) in idx.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    let allowed = match (source.weights(), target.weights()) {
                        (Some(sw), Some(tw)) => tw[slot][i] >= sw[slot][j],
                        _ => true,
                    };
                    if allowed {
                        *cell = Some(vars.len());
                        vars.push((slot, i, j));
                    }
                }
            }
            index.push(idx);
        }
        Unknowns { vars, index, coordinate }
    }

    fn get(&self, slot: usize, i: usize, j: usize) -> Option<usize> {
        self.index[slot][i][j]
    }

    fn maps(&self, source: &FilteredComplex, target: &FilteredComplex, x: &[Rational]) -> Vec<Matrix> {
        let mut maps: Vec<Matrix> = source.degrees().map(|k| Matrix::zeros(target.dim(k), source.dim(k))).collect();
        for (&(slot, i, j), v) in self.vars.iter().zip(x) {
            maps[slot][(i, j)] = v.clone();
        }
        maps
    }
}

/// Row for the linear functional `f ↦ ⟨f^k(u), t⟩`, added with `sign`.
fn add_pairing(row: &mut [Rational], un: &Unknowns, slot: usize, u: &[Rational], t: &[Rational], sign: bool) {
    for (i, ti) in t.iter().enumerate() {
        if ti.is_zero() {
            continue;
        }
        for (j, uj) in u.iter().enumerate() {
            if uj.is_zero() {
                continue;
            }
            if let Some(v) = un.get(slot, i, j) {
                let c = ti * uj;
                if sign {
                    row[v] += &c;
                } else {
                    row[v] -= &c;
                }
            }
        }
    }
}

fn filtration_rows(red: &mut RowReducer, un: &Unknowns, source: &FilteredComplex, duality: &DualityData) {
    if un.coordinate {
        return;
    }
    let chain = &duality.chain;
    let lo = source.p_min().min(chain.p_min()) - 1;
    let hi = source.p_max().max(chain.p_max()) + 1;
    for (slot, k) in source.degrees().enumerate() {
        for p in lo..=hi {
            // f(F'^p) ⊆ ann(F_{p-1})
            let fp = source.filtration(k, p);
            let ann = chain.filtration(k, p - 1);
            for u in fp.basis() {
                for t in ann.basis() {
                    let mut row = vec![Rational::zero(); un.vars.len()];
                    add_pairing(&mut row, un, slot, u, t, true);
                    red.insert(row);
                }
            }
        }
    }
}

fn draw(
    seed: u64,
    name: &str,
    un: &Unknowns,
    red: &RowReducer,
    source: &FilteredComplex,
    duality: &DualityData,
) -> SampleOutcome {
    let kernel = red.kernel_basis();
    let mut rng = named_rng(seed, name);
    let mut x: Vector = vec![Rational::zero(); un.vars.len()];
    for b in &kernel {
        let c = Rational::from_int(rng.gen_range(-3..=3));
        if c.is_zero() {
            continue;
        }
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += &(&c * bi);
        }
    }
    let maps = un.maps(source, &duality.cochain, &x);
    let map = FilteredMap::new(source.clone(), duality.clone(), maps).expect("solutions are filtered");
    SampleOutcome { map, solution_dim: kernel.len(), empty: kernel.is_empty() }
}

/// Seeded random filtered map satisfying the discrete pullback identity.
pub fn sample_constrained_map(source: &FilteredComplex, duality: &DualityData, seed: u64) -> SampleOutcome {
    let un = Unknowns::new(source, &duality.cochain);
    let mut red = RowReducer::new(un.vars.len());
    filtration_rows(&mut red, &un, source, duality);
    let k0 = source.k_min();
    for (k, _, _, s, t) in identity_pairs(source, duality) {
        let slot = (k - k0) as usize;
        for omega in s.basis() {
            let d_omega = source.differential(k).mul_vec(omega);
            for eta in t.basis() {
                let bd_eta = duality.chain.differential(k + 1).mul_vec(eta);
                let mut row = vec![Rational::zero(); un.vars.len()];
                add_pairing(&mut row, &un, slot + 1, &d_omega, eta, true);
                add_pairing(&mut row, &un, slot, omega, &bd_eta, false);
                red.insert(row);
            }
        }
    }
    draw(seed, "constrained-map", &un, &red, source, duality)
}

/// Seeded random filtered chain map `f d' = d̂ f`.
pub fn sample_chain_map(source: &FilteredComplex, duality: &DualityData, seed: u64) -> SampleOutcome {
    let target = &duality.cochain;
    let un = Unknowns::new(source, target);
    let mut red = RowReducer::new(un.vars.len());
    filtration_rows(&mut red, &un, source, duality);
    for (slot, k) in source.degrees().enumerate() {
        if !source.degrees().contains(&(k + 1)) {
            continue;
        }
        let ds = source.differential(k);
        let dt = target.differential(k);
        for i in 0..target.dim(k + 1) {
            for j in 0..source.dim(k) {
                let mut row = vec![Rational::zero(); un.vars.len()];
                // (f^{k+1} d')_{ij} − (d̂ f^k)_{ij}
                for l in 0..source.dim(k + 1) {
                    if let Some(v) = un.get(slot + 1, i, l) {
                        row[v] += &ds[(l, j)];
                    }
                }
                for l in 0..target.dim(k) {
                    if let Some(v) = un.get(slot, l, j) {
                        row[v] -= &dt[(i, l)];
                    }
                }
                red.insert(row);
            }
        }
    }
    draw(seed, "chain-map", &un, &red, source, duality)
}

/// Random source complex and dual target model on matching degrees.
pub fn random_instance(seed: u64, coordinate: bool) -> (FilteredComplex, DualityData) {
    let mut rng = named_rng(seed, "morphism-instance");
    let params = RandomComplexParams { coordinate, max_dim: 4, ..Default::default() };
    let source = random_filtered_complex(&mut rng, &params);
    let chain = random_filtered_complex(&mut rng, &params).dual();
    (source, dualize(&chain))
}

/// A chain map perturbed by one filtration-allowed entry so that the
/// identity fails and some induced page is no longer a chain map.
#[derive(Debug, Clone)]
pub struct NegativeControl {
    pub seed: u64,
    pub map: FilteredMap,
    /// `(r, p, q)` of the first page where the induced map fails.
    pub failure: (usize, i32, i32),
}

/// Seed recorded after confirming an induced failure at a definite page.
pub const NEGATIVE_CONTROL_SEED: u64 = 15;

pub fn negative_control(seed: u64) -> Option<NegativeControl> {
    let (source, duality) = random_instance(seed, true);
    let base = sample_chain_map(&source, &duality, seed).map;
    let un = Unknowns::new(&source, &duality.cochain);
    for &(slot, i, j) in &un.vars {
        let mut maps = base.maps().to_vec();
        maps[slot][(i, j)] += &Rational::one();
        let f = FilteredMap::new(source.clone(), duality.clone(), maps).ok()?;
        if super::check_identity(&f).holds {
            continue;
        }
        if let Ok(m) = induce_morphism(&f, f.page_bound()) {
            if let Some(failure) = m.first_failure {
                return Some(NegativeControl { seed, map: f, failure });
            }
        }
    }
    None
}
