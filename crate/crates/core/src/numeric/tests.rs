use rand::Rng;

use super::*;
use crate::random::named_rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn theta(n: usize, idx: &[usize]) -> ExteriorElement {
    ExteriorElement::theta(n, idx)
}

fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().zip(b).flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs())).fold(0.0, f64::max)
}

#[test]
fn dilation_differential_is_the_dilation() {
    let f = SmoothMap::catalog("dilation").unwrap();
    for x in [[0.0, 0.0, 0.0], [1.2, -0.4, 2.5]] {
        let d = pansu_differential(&f, &x, 1e-3, &tol()).unwrap();
        let expected = vec![vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 4.0]];
        assert!(max_diff(&d.matrix, &expected) < 1e-8);
    }
}

#[test]
fn translation_differential_is_identity() {
    let f = SmoothMap::catalog("translation").unwrap();
    let d = pansu_differential(&f, &[0.3, 0.8, -1.0], 1e-3, &tol()).unwrap();
    let id = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
    assert!(max_diff(&d.matrix, &id) < 1e-8);
}

#[test]
fn shear_differential_matches_finite_difference_oracle() {
    let f = SmoothMap::shear_lift();
    let x = [0.4, -0.9, 0.3];
    let expected = vec![vec![1.0, (-0.9f64).cos(), 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
    // the raw quotient converges linearly, the extrapolated one faster
    let mut prev = f64::INFINITY;
    for h in [1e-1, 5e-2, 2.5e-2] {
        let d = pansu_differential(&f, &x, h, &tol()).unwrap();
        let err = max_diff(&d.matrix, &expected);
        assert!(err < prev / 3.0, "h = {h}: {err} vs {prev}");
        prev = err;
    }
    let d = pansu_differential(&f, &x, 1e-3, &tol()).unwrap();
    assert!(d.closed_form_error < tol().closed_form);
}

#[test]
fn defects_halve_at_random_points() {
    let mut rng = named_rng(11, "pansu-points");
    for id in SmoothMap::catalog_ids() {
        let f = SmoothMap::catalog(id).unwrap();
        for _ in 0..10 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let d = pansu_differential(&f, &x, 1e-3, &tol()).unwrap();
            assert!(d.defect_h <= tol().defect_floor || d.defect_half * 1.5 <= d.defect_h, "{id} at {x:?}");
            assert!(d.closed_form_error < tol().closed_form, "{id} at {x:?}: {}", d.closed_form_error);
        }
    }
}

#[test]
fn nonpositive_step_is_rejected() {
    let f = SmoothMap::shear_lift();
    assert_eq!(pansu_differential(&f, &[0.0; 3], 0.0, &tol()), Err(NumericError::InvalidStep));
}

fn grid() -> Vec<Vec<f64>> {
    let mut rng = named_rng(5, "pullback-grid");
    (0..25).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

#[test]
fn pullback_field_examples() {
    let t = tol();
    let h = crate::carnot::library::heisenberg();
    let id = SmoothMap::automorphism(&crate::carnot::GradedHomomorphism::identity(&h));
    let om = to_float(&theta(3, &[0, 2])).unwrap();
    let s = pansu_pullback_field(&id, &om, &grid(), &t).unwrap();
    for v in &s.values {
        assert!((v[&MultiIndex::new(&[0, 2]).unwrap()] - 1.0).abs() < 1e-9);
    }
    let dil = SmoothMap::catalog("dilation").unwrap();
    let s = pansu_pullback_field(&dil, &to_float(&theta(3, &[0, 1])).unwrap(), &grid(), &t).unwrap();
    for v in &s.values {
        assert!((v[&MultiIndex::new(&[0, 1]).unwrap()] - 4.0).abs() < 1e-8);
    }
    let sh = SmoothMap::shear_lift();
    let s = pansu_pullback_field(&sh, &to_float(&theta(3, &[2])).unwrap(), &grid(), &t).unwrap();
    for v in &s.values {
        assert!((v[&MultiIndex::single(2)] - 1.0).abs() < 1e-8);
    }
}

#[test]
fn pullback_preserves_weights_for_catalog_maps() {
    let t = tol();
    for id in SmoothMap::catalog_ids() {
        let f = SmoothMap::catalog(id).unwrap();
        let nt = f.target().dim();
        for k in 1..=nt {
            for j in MultiIndex::all_of_degree(nt, k) {
                let s =
                    pansu_pullback_field(&f, &to_float(&ExteriorElement::basis(nt, j)).unwrap(), &grid(), &t).unwrap();
                assert!(s.max_leak < t.weight_leak, "{id} {}: {:e}", j.label(), s.max_leak);
            }
        }
    }
}

#[test]
fn weight_conditions_are_enforced() {
    let f = SmoothMap::shear_lift();
    assert!(check_weight_conditions(&f, &theta(3, &[2]), MultiIndex::single(2)).is_ok());
    let err = check_weight_conditions(&f, &theta(3, &[2]), MultiIndex::single(0)).unwrap_err();
    assert_eq!(err, NumericError::WeightConditionViolated { part: "d omega, eta".into(), weights: (2, 1), nu: 4 });
    let eta = BumpForm::standard(3, MultiIndex::single(0));
    assert!(verify_pullback_identity(&f, &theta(3, &[2]), &eta, &tol(), false).is_err());
    let pairs: Vec<String> =
        admissible_pairs(&f).iter().map(|(o, j)| format!("{} {}", form_label(o), j.label())).collect();
    assert_eq!(pairs, ["1 t12", "1 t13", "1 t23", "t3 t3", "t13 t", "t23 t"]);
}

#[test]
fn automorphism_baseline_decays_at_quadrature_order() {
    let t = tol();
    let f = SmoothMap::catalog("automorphism").unwrap();
    for (omega, j) in admissible_pairs(&f) {
        let r = verify_pullback_identity(&f, &omega, &BumpForm::standard(3, j), &t, false).unwrap();
        assert_eq!(r.pass, Some(true), "{r:?}");
        assert!(r.residuals[1] * t.baseline_ratio < t.pass_residual);
    }
}

#[test]
fn shear_lift_passes_every_admissible_pair() {
    let t = tol();
    let f = SmoothMap::shear_lift();
    for (omega, j) in admissible_pairs(&f) {
        let r = verify_pullback_identity(&f, &omega, &BumpForm::standard(3, j), &t, false).unwrap();
        assert_eq!(r.pass, Some(true), "{r:?}");
    }
}

#[test]
fn weight_violating_diagnostic_is_nonzero() {
    let t = tol();
    let f = SmoothMap::height();
    let omega = theta(1, &[0]);
    let eta = BumpForm::standard(3, MultiIndex::single(2));
    assert!(matches!(
        verify_pullback_identity(&f, &omega, &eta, &t, false),
        Err(NumericError::WeightConditionViolated { .. })
    ));
    let r = verify_pullback_identity(&f, &omega, &eta, &t, true).unwrap();
    assert_eq!(r.pass, None);
    assert!(r.residuals[1] > 0.1, "{r:?}");
    assert!(r.value.abs() > 1e-3, "{r:?}");
}

#[test]
fn report_json_shape() {
    let f = SmoothMap::shear_lift();
    let r = verify_pullback_identity(&f, &theta(3, &[0, 2]), &BumpForm::standard(3, MultiIndex::EMPTY), &tol(), false)
        .unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in ["map", "omega", "eta", "grids", "residuals", "order", "pass"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["omega"], "t13");
}
