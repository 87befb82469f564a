//! Exterior algebra over `𝔤*` with polynomial coefficients, weight grading,
//! the Chevalley–Eilenberg differential and the wedge pairing.

mod build;

pub use build::{build_ce_complex, build_polynomial_complex, check_embedding_lemma, phi_matrix, FilteredComplexBuild};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::carnot::{GradedHomomorphism, GradedLieAlgebra};
use crate::exactla::Rational;
use crate::poly::{Monomial, Polynomial};

/// Strictly increasing index set, stored as a bitmask over at most 64 indices.
/// Ordered by length, then lexicographically on the index list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(u64);

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let x = self.0 ^ other.0;
            if x == 0 {
                Ordering::Equal
            } else if self.0 & (1 << x.trailing_zeros()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// From 0-based indices in any order; `None` on repeats.
    pub fn new(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u64;
        for &i in indices {
            assert!(i < 64, "at most 64 generators");
            if bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(MultiIndex(bits))
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(1 << i)
    }

    /// `{0, .., n−1}`.
    pub fn full(n: usize) -> Self {
        MultiIndex(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    pub fn weight(&self, weights: &[u32]) -> u32 {
        self.indices().iter().map(|&i| weights[i]).sum()
    }

    pub fn without(&self, i: usize) -> Self {
        MultiIndex(self.0 & !(1 << i))
    }

    /// All `k`-subsets of `{0..n−1}` in order.
    pub fn all_of_degree(n: usize, k: usize) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> =
            (0u64..(1u64 << n)).filter(|b| b.count_ones() as usize == k).map(MultiIndex).collect();
        out.sort();
        out
    }

    /// Sign and index of `θ_self ∧ θ_other`, or `None` if they overlap.
    pub fn wedge(&self, other: &MultiIndex) -> Option<(bool, MultiIndex)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            inversions += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        Some((inversions % 2 == 1, MultiIndex(self.0 | other.0)))
    }

    /// `t12`-style label with 1-based indices.
    pub fn label(&self) -> String {
        let idx = self.indices();
        let sep = if idx.iter().any(|&i| i >= 9) { "_" } else { "" };
        let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
        format!("t{}", parts.join(sep))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormsError {
    #[error("degree {0} exceeds the dimension {1}")]
    DegreeOverflow(usize, usize),
    #[error("pairing needs degrees summing to {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("operation needs constant coefficients")]
    NonConstant,
}

/// Homogeneous-degree form `Σ c·m·θ_J` over `n` generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExteriorElement {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<(MultiIndex, Monomial), Rational>,
}

impl ExteriorElement {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        ExteriorElement { nvars, degree, terms: BTreeMap::new() }
    }

    /// `θ_J` for 0-based indices in storage order.
    pub fn basis(nvars: usize, j: MultiIndex) -> Self {
        let mut e = ExteriorElement::zero(nvars, j.len());
        e.add_term(j, Monomial::one(nvars), &Rational::one());
        e
    }

    /// `θ_{i_1} ∧ … ∧ θ_{i_k}` for 0-based indices in the given order.
    pub fn theta(nvars: usize, indices: &[usize]) -> Self {
        let mut acc = ExteriorElement::basis(nvars, MultiIndex::EMPTY);
        for &i in indices {
            acc = acc.wedge(&ExteriorElement::basis(nvars, MultiIndex::single(i))).expect("degree within range");
        }
        acc
    }

    /// `p · θ_J`.
    pub fn from_poly(p: &Polynomial, j: MultiIndex) -> Self {
        let mut e = ExteriorElement::zero(p.nvars(), j.len());
        for (m, c) in p.terms() {
            e.add_term(j, m.clone(), c);
        }
        e
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|(_, m)| m.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Monomial, &Rational)> {
        self.terms.iter().map(|((j, m), c)| (j, m, c))
    }

    pub fn coefficient(&self, j: MultiIndex, m: &Monomial) -> Rational {
        self.terms.get(&(j, m.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, j: MultiIndex, m: Monomial, c: &Rational) {
        assert_eq!(j.len(), self.degree, "term degree mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((j, m)) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn add(&self, other: &ExteriorElement) -> ExteriorElement {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for ((j, m), c) in &other.terms {
            out.add_term(*j, m.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.nvars, self.degree);
        for ((j, m), c) in &self.terms {
            out.add_term(*j, m.clone(), &(c * s));
        }
        out
    }

    pub fn sub(&self, other: &ExteriorElement) -> ExteriorElement {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Distinct form-weights `wt(J)` occurring in the terms.
    pub fn form_weights(&self, alg: &GradedLieAlgebra) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|(j, _)| j.weight(alg.weights())).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Form-weight if the element lies in a single `Ω^{*,p}`.
    pub fn form_weight(&self, alg: &GradedLieAlgebra) -> Option<u32> {
        match self.form_weights(alg).as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }

    /// Terms with form-weight exactly `p`.
    pub fn weight_part(&self, alg: &GradedLieAlgebra, p: u32) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.nvars, self.degree);
        for ((j, m), c) in &self.terms {
            if j.weight(alg.weights()) == p {
                out.add_term(*j, m.clone(), c);
            }
        }
        out
    }

    pub fn wedge(&self, other: &ExteriorElement) -> Result<ExteriorElement, FormsError> {
        let deg = self.degree + other.degree;
        if deg > self.nvars {
            return Err(FormsError::DegreeOverflow(deg, self.nvars));
        }
        let mut out = ExteriorElement::zero(self.nvars, deg);
        for ((j1, m1), c1) in &self.terms {
            for ((j2, m2), c2) in &other.terms {
                if let Some((neg, j)) = j1.wedge(j2) {
                    let c = c1 * c2;
                    out.add_term(j, m1.mul(m2), &if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Evaluates polynomial coefficients at `x`, keeping the `θ_J` part.
    pub fn eval(&self, x: &[f64]) -> BTreeMap<MultiIndex, f64> {
        let mut out: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for ((j, m), c) in &self.terms {
            *out.entry(*j).or_insert(0.0) += c.to_f64() * m.eval(x);
        }
        out
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((j, m), c)| format!("{c}*{}", term_label(j, m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `x1^2*t12`-style label of `m·θ_J`.
pub fn term_label(j: &MultiIndex, m: &Monomial) -> String {
    match (m.is_one(), j.is_empty()) {
        (true, true) => "1".into(),
        (true, false) => j.label(),
        (false, true) => m.to_string(),
        (false, false) => format!("{m}*{}", j.label()),
    }
}

/// `dθ_J` with constant coefficients, from `dθ_k = −Σ_{i<j} c_{ij}^k θ_i∧θ_j`.
pub fn d_theta(alg: &GradedLieAlgebra, j: MultiIndex) -> Vec<(MultiIndex, Rational)> {
    let mut out: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for (s, js) in j.indices().into_iter().enumerate() {
        let rest = j.without(js);
        for ((a, b), cs) in alg.brackets() {
            let Some((_, c)) = cs.iter().find(|(k, _)| *k == js) else { continue };
            let pair = MultiIndex::new(&[a, b]).expect("a < b");
            if let Some((neg, idx)) = pair.wedge(&rest) {
                let mut v = -c;
                if neg != (s % 2 == 1) {
                    v = -v;
                }
                *out.entry(idx).or_insert_with(Rational::zero) += &v;
            }
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `d(aθ_J) = Σ_i X_i(a) θ_i∧θ_J + a·dθ_J`.
pub fn ce_differential(alg: &GradedLieAlgebra, a: &ExteriorElement) -> ExteriorElement {
    let n = alg.dim();
    assert_eq!(a.nvars, n);
    let mut out = ExteriorElement::zero(n, a.degree + 1);
    if a.degree >= n {
        return out;
    }
    for ((j, m), c) in &a.terms {
        if !m.is_one() {
            let p = Polynomial::monomial(m.clone(), c.clone());
            for i in 0..n {
                if j.contains(i) {
                    continue;
                }
                let xp = alg.apply_field(i, &p);
                if xp.is_zero() {
                    continue;
                }
                let (neg, idx) = MultiIndex::single(i).wedge(j).expect("disjoint");
                for (mm, cc) in xp.terms() {
                    out.add_term(idx, mm.clone(), &if neg { -cc } else { cc.clone() });
                }
            }
        }
        for (idx, dc) in d_theta(alg, *j) {
            out.add_term(idx, m.clone(), &(c * &dc));
        }
    }
    out
}

/// Coefficient of `θ_{1..n}` in `a ∧ b`.
pub fn wedge_pairing(a: &ExteriorElement, b: &ExteriorElement) -> Result<Rational, FormsError> {
    let n = a.nvars;
    if a.degree + b.degree != n {
        return Err(FormsError::DegreeMismatch { expected: n, found: a.degree + b.degree });
    }
    if !a.is_constant() || !b.is_constant() {
        return Err(FormsError::NonConstant);
    }
    let top = a.wedge(b)?;
    Ok(top.coefficient(MultiIndex::full(n), &Monomial::one(n)))
}

/// `h*a` for a constant-coefficient form on the target algebra:
/// `h*θ'_k = Σ_i A[k][i] θ_i`.
pub fn pullback_form(h: &GradedHomomorphism, a: &ExteriorElement) -> Result<ExteriorElement, FormsError> {
    if !a.is_constant() {
        return Err(FormsError::NonConstant);
    }
    let n = h.source().dim();
    let mat = h.matrix();
    let linear: Vec<ExteriorElement> = (0..mat.rows())
        .map(|k| {
            let mut e = ExteriorElement::zero(n, 1);
            for i in 0..n {
                e.add_term(MultiIndex::single(i), Monomial::one(n), &mat[(k, i)]);
            }
            e
        })
        .collect();
    let mut out = ExteriorElement::zero(n, a.degree);
    for ((j, _), c) in &a.terms {
        let mut acc = ExteriorElement::basis(n, MultiIndex::EMPTY);
        for k in j.indices() {
            acc = acc.wedge(&linear[k])?;
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carnot::library::*;
    use crate::carnot::{dilation, validate_homomorphism};
    use crate::exactla::Matrix;

    fn t(idx: &[usize]) -> ExteriorElement {
        ExteriorElement::theta(3, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    #[test]
    fn multiindex_order() {
        let all = MultiIndex::all_of_degree(4, 2);
        let labels: Vec<String> = all.iter().map(MultiIndex::label).collect();
        assert_eq!(labels, ["t12", "t13", "t14", "t23", "t24", "t34"]);
        assert!(MultiIndex::single(3) < MultiIndex::new(&[0, 1]).unwrap());
    }

    #[test]
    fn wedge_examples() {
        let h = heisenberg();
        let a = t(&[1]).wedge(&t(&[3])).unwrap();
        assert_eq!(a, t(&[1, 3]));
        assert_eq!(a.form_weight(&h), Some(3));
        assert_eq!(t(&[3]).wedge(&t(&[1])).unwrap(), t(&[1, 3]).scale(&-Rational::one()));
        assert!(t(&[1, 2]).wedge(&t(&[1, 3])).is_err());
        assert!(ExteriorElement::zero(3, 2).wedge(&ExteriorElement::zero(3, 1)).unwrap().is_zero());
    }

    #[test]
    fn ce_examples() {
        let h = heisenberg();
        assert_eq!(ce_differential(&h, &t(&[3])), t(&[1, 2]).scale(&-Rational::one()));
        assert!(ce_differential(&h, &t(&[1, 3])).is_zero());
        let x1 = Polynomial::var(3, 0);
        let a = ExteriorElement::from_poly(&x1, MultiIndex::single(2));
        let expected = t(&[1, 3]).sub(&ExteriorElement::from_poly(&x1, MultiIndex::new(&[0, 1]).unwrap()));
        let da = ce_differential(&h, &a);
        assert_eq!(da, expected);
        assert!(ce_differential(&h, &da).is_zero());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(wedge_pairing(&t(&[3]), &t(&[1, 2])).unwrap(), Rational::one());
        assert_eq!(wedge_pairing(&t(&[1]), &t(&[1, 2])).unwrap(), Rational::zero());
        assert!(wedge_pairing(&t(&[1, 3]), &t(&[1, 3])).is_err());
        let e = heisenberg();
        let n = e.dim();
        let top = MultiIndex::full(n);
        assert_eq!(
            wedge_pairing(&ExteriorElement::basis(n, top), &ExteriorElement::basis(n, MultiIndex::EMPTY)).unwrap(),
            Rational::one()
        );
    }

    #[test]
    fn pullback_examples() {
        let h = heisenberg();
        let id = GradedHomomorphism::identity(&h);
        assert_eq!(pullback_form(&id, &t(&[1, 3])).unwrap(), t(&[1, 3]));
        let d2 = validate_homomorphism(&h, &h, &dilation(&h, &Rational::from_int(2)).unwrap()).unwrap();
        assert_eq!(pullback_form(&d2, &t(&[1, 2])).unwrap(), t(&[1, 2]).scale(&Rational::from_int(4)));
        let sh = validate_homomorphism(&h, &h, &Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(pullback_form(&sh, &t(&[3])).unwrap(), t(&[3]));
        assert_eq!(pullback_form(&sh, &t(&[1, 2])).unwrap(), t(&[1, 2]));
        let lhs = pullback_form(&sh, &ce_differential(&h, &t(&[3]))).unwrap();
        let rhs = ce_differential(&h, &pullback_form(&sh, &t(&[3])).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weights_add_and_d_preserves_weight_exhaustively() {
        for alg in [heisenberg(), engel(), free_two_step(3)] {
            let n = alg.dim();
            for k1 in 0..=n {
                for j1 in MultiIndex::all_of_degree(n, k1) {
                    let a = ExteriorElement::basis(n, j1);
                    let da = ce_differential(&alg, &a);
                    assert!(da.is_zero() || da.form_weight(&alg) == Some(j1.weight(alg.weights())));
                    assert!(ce_differential(&alg, &da).is_zero());
                    for k2 in 0..=(n - k1) {
                        for j2 in MultiIndex::all_of_degree(n, k2) {
                            let w = a.wedge(&ExteriorElement::basis(n, j2)).unwrap();
                            assert!(
                                w.is_zero()
                                    || w.form_weight(&alg) == Some(j1.weight(alg.weights()) + j2.weight(alg.weights()))
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_is_multiplicative_and_commutes_with_d() {
        let e = engel();
        let m = Matrix::from_i64(&[&[2, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 6, 0], &[0, 0, 0, 12]]);
        let h = validate_homomorphism(&e, &e, &m).unwrap();
        let n = e.dim();
        for k in 0..=n {
            for j in MultiIndex::all_of_degree(n, k) {
                let a = ExteriorElement::basis(n, j);
                let pa = pullback_form(&h, &a).unwrap();
                assert_eq!(pullback_form(&h, &ce_differential(&e, &a)).unwrap(), ce_differential(&e, &pa));
                if k < n {
                    let b = ExteriorElement::basis(n, MultiIndex::single(0));
                    let ab = a.wedge(&b).unwrap();
                    assert_eq!(pullback_form(&h, &ab).unwrap(), pa.wedge(&pullback_form(&h, &b).unwrap()).unwrap());
                }
            }
        }
    }
}
