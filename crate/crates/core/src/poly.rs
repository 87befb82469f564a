//! Polynomials in exponential coordinates with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactla::Rational;

/// Exponent vector of a monomial in `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sum of exponent times coordinate weight.
    pub fn weight(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).filter(|(e, _)| **e > 0).map(|(&e, &xi)| xi.powi(e as i32)).product()
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (&e, xi) in self.0.iter().zip(x) {
            if e > 0 {
                acc = &acc * &xi.pow(e as i32);
            }
        }
        acc
    }

    /// All monomials of weight at most `max_weight`, sorted by (weight, exponents).
    pub fn enumerate(weights: &[u32], max_weight: u32) -> Vec<Monomial> {
        let n = weights.len();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, weights: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == weights.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            let mut e = 0;
            while e * weights[i] <= left {
                cur[i] = e;
                rec(i + 1, left - e * weights[i], weights, cur, out);
                e += 1;
            }
            cur[i] = 0;
        }
        if n == 0 {
            return vec![Monomial(vec![])];
        }
        rec(0, max_weight, weights, &mut cur, &mut out);
        out.sort_by(|a, b| a.weight(weights).cmp(&b.weight(weights)).then_with(|| b.0.cmp(&a.0)));
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Polynomial::monomial(Monomial::var(nvars, i), Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), &(c1 * c));
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.0.clone();
            ex[i] -= 1;
            out.add_term(Monomial(ex), &(c * &Rational::from_int(e as i64)));
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * m.eval(x)).sum()
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        self.terms.iter().map(|(m, c)| c * &m.eval_exact(x)).sum()
    }

    /// Gradient evaluated at `x`.
    pub fn eval_gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nvars).map(|i| self.derivative(i).eval(x)).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("{c}*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_monomials_up_to_weight_two() {
        let ms = Monomial::enumerate(&[1, 1, 2], 2);
        let labels: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(labels.len(), 7);
        for l in ["1", "x1", "x2", "x1^2", "x1*x2", "x2^2", "x3"] {
            assert!(labels.contains(&l.to_string()), "{l} missing from {labels:?}");
        }
    }

    #[test]
    fn derivative_and_eval() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = x.mul(&x).mul(&y).add(&y.scale(&Rational::from_int(3)));
        assert_eq!(p.derivative(0), x.mul(&y).scale(&Rational::from_int(2)));
        assert!((p.eval(&[2.0, 1.0]) - 7.0).abs() < 1e-15);
        assert!(p.add(&p.scale(&Rational::from_int(-1))).is_zero());
    }
}
