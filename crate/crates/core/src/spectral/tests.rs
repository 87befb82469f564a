use proptest::prelude::*;

use super::*;
use crate::carnot::library::*;
use crate::forms::{build_ce_complex, build_polynomial_complex};
use crate::random::{named_rng, random_filtered_complex, RandomComplexParams};

fn rank_of(m: &Matrix) -> usize {
    m.rank()
}

#[test]
fn heisenberg_first_page() {
    let h = heisenberg();
    let ce = build_ce_complex(&h);
    let ss = compute_pages(&ce.complex, 6).unwrap();
    let expected = [((0, 0), 1), ((1, 0), 2), ((2, -1), 0), ((2, 0), 0), ((3, -1), 2), ((4, -1), 1)];
    for ((p, q), d) in expected {
        assert_eq!(ss.dim(1, p, q), d, "E_1 at ({p},{q})");
    }
    for r in 1..=6 {
        assert!(ss.page(r).differential.values().all(Matrix::is_zero));
    }
    let lim = limit_page(&ss, &ce.complex).unwrap();
    assert!(lim.converges());
    assert_eq!(lim.total_by_degree.values().copied().collect::<Vec<_>>(), vec![1, 2, 2, 1]);
    assert!(lim.stable_from <= 1);
}

#[test]
fn e0_is_graded_pieces() {
    let fc = build_polynomial_complex(&engel(), 1).complex;
    let ss = compute_pages(&fc, 0).unwrap();
    for k in fc.degrees() {
        for p in fc.p_min()..=fc.p_max() {
            let g = fc.filtration(k, p).dim() - fc.filtration(k, p + 1).dim();
            assert_eq!(ss.dim(0, p, k - p), g);
        }
    }
}

#[test]
fn one_step_filtration() {
    let d = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
    let d1 = Matrix::from_i64(&[&[0, 1]]);
    let fc = FilteredComplex::weighted(
        Orientation::Cochain,
        0,
        vec![2, 2, 1],
        vec![d, d1],
        vec![vec![0; 2], vec![0; 2], vec![0]],
    )
    .unwrap();
    let ss = compute_pages(&fc, 2).unwrap();
    assert_eq!(ss.dim(0, 0, 0), 2);
    assert_eq!(rank_of(&ss.page(0).differential[&(0, 0)]), 1);
    let h = total_cohomology(&fc).betti();
    for k in 0..3 {
        assert_eq!(ss.dim(1, 0, k), h[k as usize]);
    }
    assert!(limit_page(&ss, &fc).unwrap().stable_from <= 1);
}

#[test]
fn polynomial_heisenberg_has_nontrivial_d0_and_d1() {
    let h = heisenberg();
    let b = build_polynomial_complex(&h, 2);
    let ss = compute_pages(&b.complex, 6).unwrap();
    assert!(ss.page(0).differential.values().any(|m| !m.is_zero()));
    assert!(ss.page(1).differential.values().any(|m| !m.is_zero()));
    let lim = limit_page(&ss, &b.complex).unwrap();
    assert!(lim.converges(), "{:?}", lim.mismatches);
    for (k, &t) in &lim.total_by_degree {
        assert_eq!(t, lim.betti[k]);
    }
}

#[test]
fn non_stabilized_is_reported() {
    let fc = build_ce_complex(&heisenberg()).complex;
    let ss = compute_pages(&fc, 2).unwrap();
    assert!(matches!(limit_page(&ss, &fc), Err(SpectralError::NonStabilized { r_max: 2, needed: 5 })));
}

#[test]
fn wrong_orientation() {
    let fc = build_ce_complex(&heisenberg()).complex;
    assert!(compute_pages_homological(&fc, 1).is_err());
    assert!(compute_pages(&fc.dual(), 1).is_err());
}

#[test]
fn homological_pages_match_dual_cochain_pages() {
    for alg in [heisenberg(), engel()] {
        let ce = build_ce_complex(&alg);
        let ch = ce.chain_model(alg.homogeneous_dim() as i32).complex;
        let rm = (ch.p_max() - ch.p_min() + 2) as usize;
        let hom = compute_pages_homological(&ch, rm).unwrap();
        let dual = ch.dual();
        let coh = compute_pages(&dual, rm).unwrap();
        for r in 0..=rm {
            for k in ch.degrees() {
                for p in -2..=8 {
                    assert_eq!(hom.dim(r, p, k - p), coh.dim(r, p, k - p), "{} r={r} p={p} k={k}", alg.name());
                }
            }
        }
        let lim = limit_page(&hom, &ch).unwrap();
        assert!(lim.converges());
    }
}

#[test]
fn homological_formulas_checked_directly() {
    let mut rng = named_rng(3, "homological");
    for _ in 0..10 {
        let ch =
            random_filtered_complex(&mut rng, &RandomComplexParams { coordinate: false, ..Default::default() }).dual();
        let ss = compute_pages_homological(&ch, 4).unwrap();
        for r in 0..=4i32 {
            for (&(p, q), cell) in &ss.page(r as usize).cells {
                let k = p + q;
                let bd = ch.differential(k);
                let z = ch.filtration(k, p).intersection(&ch.filtration(k - 1, p - r).preimage(&bd).unwrap()).unwrap();
                assert_eq!(cell.z, z);
                // B^r_{p,q} = ∂(F_{p+r}C_{k+1}) ∩ F_pC_k
                let b = ch
                    .filtration(k + 1, p + r)
                    .image(&ch.differential(k + 1))
                    .unwrap()
                    .intersection(&ch.filtration(k, p))
                    .unwrap();
                assert_eq!(cell.b, b);
            }
        }
    }
}

#[test]
fn zero_differential_pages_are_constant() {
    let fc = FilteredComplex::weighted(
        Orientation::Chain,
        0,
        vec![3, 2],
        vec![Matrix::zeros(3, 2)],
        vec![vec![0, 1, 2], vec![1, 1]],
    )
    .unwrap();
    let ss = compute_pages_homological(&fc, 4).unwrap();
    for r in 1..=4 {
        for (&(p, q), c) in &ss.page(r).cells {
            assert_eq!(c.dim(), ss.dim(0, p, q));
        }
    }
}

/// `H(gr^p C)` from the weight-`p` block of `d`, independent of the engine.
fn graded_cohomology_dims(fc: &FilteredComplex, p: i32, k: i32) -> usize {
    let w = fc.weights().unwrap();
    let sel = |k: i32| -> Vec<usize> {
        if !fc.degrees().contains(&k) {
            return vec![];
        }
        (0..fc.dim(k)).filter(|&i| w[(k - fc.k_min()) as usize][i] == p).collect()
    };
    let block = |k: i32| fc.differential(k).select_rows(&sel(k + 1)).select_columns(&sel(k));
    sel(k).len() - block(k).rank() - block(k - 1).rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn random_complexes_satisfy_page_invariants(seed in any::<u64>(), coordinate in any::<bool>()) {
        let mut rng = named_rng(seed, "spectral-prop");
        let fc = random_filtered_complex(&mut rng, &RandomComplexParams { coordinate, degrees: 4, ..Default::default() });
        let len = (fc.p_max() - fc.p_min() + 1) as usize;
        let ss = compute_pages(&fc, len).unwrap();
        prop_assert_eq!(ss.isomorphisms.len(), len);
        let lim = limit_page(&ss, &fc).unwrap();
        prop_assert!(lim.converges());
        if coordinate {
            for (&(p, q), c) in &ss.page(1).cells {
                prop_assert_eq!(c.dim(), graded_cohomology_dims(&fc, p, p + q));
            }
        }
        for (r, page) in ss.pages.iter().enumerate() {
            for (key, c) in &page.cells {
                prop_assert!(c.z.contains_subspace(&c.d));
                prop_assert!(c.z.contains_subspace(&c.b));
                if let Some(next) = ss.pages.get(r + 1) {
                    prop_assert!(next.cells[key].d.contains_subspace(&c.b));
                    prop_assert!(c.z.contains_subspace(&next.cells[key].z));
                }
            }
        }
    }
}
