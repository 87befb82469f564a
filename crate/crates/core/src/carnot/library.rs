//! Built-in groups, shipped as JSON fixtures.

use std::collections::BTreeMap;

use super::algebra::{BracketEntry, GradedLieAlgebra};
use crate::exactla::Rational;

pub const FIXTURES: &[(&str, &str)] = &[
    ("heisenberg", include_str!("../../fixtures/groups/heisenberg.json")),
    ("engel", include_str!("../../fixtures/groups/engel.json")),
    ("free2step3", include_str!("../../fixtures/groups/free2step3.json")),
    ("abelian2", include_str!("../../fixtures/groups/abelian2.json")),
    ("abelian3", include_str!("../../fixtures/groups/abelian3.json")),
];

/// Looks up a built-in group by name.
pub fn builtin(name: &str) -> Option<GradedLieAlgebra> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| GradedLieAlgebra::from_json_str(s).expect("built-in fixture is valid"))
}

pub fn heisenberg() -> GradedLieAlgebra {
    builtin("heisenberg").unwrap()
}

pub fn engel() -> GradedLieAlgebra {
    builtin("engel").unwrap()
}

/// Free 2-step nilpotent algebra on `r` generators; `[X_a,X_b]` for `a<b` in
/// lexicographic order spans the second layer.
pub fn free_two_step(r: usize) -> GradedLieAlgebra {
    let mut entries = Vec::new();
    let mut k = r;
    for i in 0..r {
        for j in i + 1..r {
            let coeffs: BTreeMap<usize, Rational> = [(k, Rational::one())].into_iter().collect();
            entries.push(BracketEntry { i, j, coeffs });
            k += 1;
        }
    }
    let layers = if r < 2 { vec![r] } else { vec![r, r * (r - 1) / 2] };
    GradedLieAlgebra::validate(&format!("free2step{r}"), &layers, &entries).expect("free algebra is valid")
}

pub fn abelian(n: usize) -> GradedLieAlgebra {
    GradedLieAlgebra::validate(&format!("abelian{n}"), &[n], &[]).expect("abelian algebra is valid")
}
