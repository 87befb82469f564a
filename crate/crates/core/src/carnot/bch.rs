//! Truncated Dynkin series for `log(exp x · exp y)`.

use std::collections::BTreeMap;
use std::fmt::Debug;

use super::algebra::GradedLieAlgebra;
use crate::exactla::Rational;

/// Coefficient field for group computations: exact for algebra, `f64` for
/// the numeric module.
pub trait Scalar: Clone + Debug {
    fn zero() -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_rational(q: &Rational) -> Self {
        q.to_f64()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// A word in `x` (false) and `y` (true) with its Dynkin coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchTerm {
    pub coefficient: Rational,
    pub word: Vec<bool>,
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| &acc * &Rational::from_int(k as i64))
}

/// All Dynkin terms of total degree at most `max_len`, with equal words merged.
pub fn bch_terms(max_len: usize) -> Vec<BchTerm> {
    let mut acc: BTreeMap<Vec<bool>, Rational> = BTreeMap::new();
    // sequences of (r_i, s_i) with r_i + s_i >= 1
    fn rec(pairs: &mut Vec<(usize, usize)>, used: usize, max_len: usize, acc: &mut BTreeMap<Vec<bool>, Rational>) {
        if !pairs.is_empty() {
            let m = pairs.len();
            let mut denom = Rational::from_int(m as i64) * Rational::from_int(used as i64);
            for &(r, s) in pairs.iter() {
                denom = &denom * &(&factorial(r) * &factorial(s));
            }
            let sign = if m % 2 == 1 { Rational::one() } else { -Rational::one() };
            let coeff = &sign / &denom;
            let mut word = Vec::with_capacity(used);
            for &(r, s) in pairs.iter() {
                word.extend(std::iter::repeat_n(false, r));
                word.extend(std::iter::repeat_n(true, s));
            }
            *acc.entry(word).or_insert_with(Rational::zero) += &coeff;
        }
        for total in 1..=(max_len - used) {
            for r in 0..=total {
                pairs.push((r, total - r));
                rec(pairs, used + total, max_len, acc);
                pairs.pop();
            }
        }
    }
    if max_len > 0 {
        rec(&mut Vec::new(), 0, max_len, &mut acc);
    }
    acc.into_iter()
        .filter(|(w, c)| !c.is_zero() && !(w.len() >= 2 && w[w.len() - 1] == w[w.len() - 2]))
        .map(|(word, coefficient)| BchTerm { coefficient, word })
        .collect()
}

/// Group product in exponential coordinates; exact for nilpotent algebras.
pub fn bch_multiply<S: Scalar>(alg: &GradedLieAlgebra, x: &[S], y: &[S]) -> Vec<S> {
    let n = alg.dim();
    assert_eq!(x.len(), n);
    assert_eq!(y.len(), n);
    let mut out = vec![S::zero(); n];
    for term in alg.bch_series() {
        let mut it = term.word.iter().rev();
        let last = it.next().expect("empty word");
        let mut v: Vec<S> = if *last { y.to_vec() } else { x.to_vec() };
        for &letter in it {
            let a = if letter { y } else { x };
            v = alg.bracket_generic(a, &v);
        }
        let c = S::from_rational(&term.coefficient);
        for (o, vi) in out.iter_mut().zip(&v) {
            *o = o.add(&c.mul(vi));
        }
    }
    out
}

pub fn inverse<S: Scalar>(x: &[S]) -> Vec<S> {
    x.iter().map(Scalar::neg).collect()
}
