//! Truncated free graded-commutative algebra on the generators of a graded
//! space: formal power series modulo monomials of weight above a cutoff.
//! Coefficients are exact rationals, and every coefficient of weight at most
//! the cutoff is exact (no approximation enters below the cutoff).

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Parity};
use crate::scalar::{self, Scalar};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Normal-form word in the generators: indices sorted ascending, with odd
/// generators appearing at most once.  Ordered by weight, then
/// lexicographically, which fixes the basis enumeration everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<usize>);

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn parity(&self, space: &GradedSpace) -> Parity {
        let odd = self.0.iter().filter(|&&i| space.parity(i).is_odd()).count();
        if odd % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Multiplicity of each generator, ascending by index.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &i in &self.0 {
            match out.last_mut() {
                Some((j, m)) if *j == i => *m += 1,
                _ => out.push((i, 1)),
            }
        }
        out
    }

    pub fn display(&self, space: &GradedSpace) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.multiplicities()
            .iter()
            .map(|&(i, m)| {
                if m == 1 {
                    space.name(i).to_string()
                } else {
                    format!("{}^{}", space.name(i), m)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Sorts a word into normal form, accumulating the Koszul sign.  Returns
/// `None` when an odd generator repeats (the monomial is zero).
pub fn normalize(word: &[usize], space: &GradedSpace) -> Option<(Monomial, i8)> {
    let mut out: Vec<usize> = Vec::with_capacity(word.len());
    let mut sign: i8 = 1;
    for &x in word {
        let x_odd = space.parity(x).is_odd();
        // insertion position: after all entries <= x
        let mut pos = out.len();
        while pos > 0 && out[pos - 1] > x {
            if x_odd && space.parity(out[pos - 1]).is_odd() {
                sign = -sign;
            }
            pos -= 1;
        }
        if x_odd && pos > 0 && out[pos - 1] == x {
            return None;
        }
        out.insert(pos, x);
    }
    Some((Monomial(out), sign))
}

/// All normal-form monomials of the given weight, in the canonical order.
pub fn monomials_of_weight(space: &GradedSpace, weight: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(weight);
    fn rec(
        space: &GradedSpace,
        weight: usize,
        start: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Monomial>,
    ) {
        if stack.len() == weight {
            out.push(Monomial(stack.clone()));
            return;
        }
        for i in start..space.dim() {
            if space.parity(i).is_odd() && stack.last() == Some(&i) {
                continue;
            }
            stack.push(i);
            rec(space, weight, i, stack, out);
            stack.pop();
        }
    }
    rec(space, weight, 0, &mut stack, &mut out);
    out
}

/// Monomials of weight `lo..=hi` in the canonical graded-lex order.
pub fn monomial_basis(space: &GradedSpace, lo: usize, hi: usize) -> Vec<Monomial> {
    (lo..=hi)
        .flat_map(|w| monomials_of_weight(space, w))
        .collect()
}

/// Element of the truncated algebra.  All stored coefficients are exact; a
/// term of weight above `cutoff` is silently dropped by every operation, and
/// no operation ever makes a kept coefficient inexact (first-order operators
/// only ever consume data of weight at most the weight they produce).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPolynomial {
    pub space: Arc<GradedSpace>,
    pub cutoff: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl TruncatedPolynomial {
    pub fn zero(space: Arc<GradedSpace>, cutoff: usize) -> TruncatedPolynomial {
        TruncatedPolynomial {
            space,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: Arc<GradedSpace>, cutoff: usize, c: Scalar) -> TruncatedPolynomial {
        let mut p = TruncatedPolynomial::zero(space, cutoff);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn generator(space: Arc<GradedSpace>, cutoff: usize, i: usize) -> TruncatedPolynomial {
        let mut p = TruncatedPolynomial::zero(space, cutoff);
        if cutoff >= 1 {
            p.terms.insert(Monomial(vec![i]), scalar::one());
        }
        p
    }

    /// Builds a polynomial from raw `(word, coefficient)` pairs; words are
    /// normalized with Koszul signs.
    pub fn from_words(
        space: Arc<GradedSpace>,
        cutoff: usize,
        words: &[(Vec<usize>, Scalar)],
    ) -> TruncatedPolynomial {
        let mut p = TruncatedPolynomial::zero(space, cutoff);
        for (w, c) in words {
            p.add_word(w, c.clone());
        }
        p
    }

    pub fn add_word(&mut self, word: &[usize], c: Scalar) {
        if c.is_zero() || word.len() > self.cutoff {
            return;
        }
        if let Some((m, s)) = normalize(word, &self.space) {
            let c = if s < 0 { -c } else { c };
            self.add_monomial(m, c);
        }
    }

    pub fn add_monomial(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || m.weight() > self.cutoff {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(scalar::zero);
        *e += c;
        // prune exact zeros
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest weight carrying a nonzero term; `None` for the zero element.
    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().next().map(|m| m.weight())
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|m| m.weight())
    }

    /// `Some(p)` when every term has parity `p`; `None` for inhomogeneous or
    /// zero elements (zero is homogeneous of every parity; we report `None`).
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity(&self.space));
        let first = it.next()?;
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn weight_component(&self, w: usize) -> TruncatedPolynomial {
        let mut p = TruncatedPolynomial::zero(self.space.clone(), self.cutoff);
        for (m, c) in &self.terms {
            if m.weight() == w {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    /// Drops every term of weight below `lo`.
    pub fn truncate_below(&self, lo: usize) -> TruncatedPolynomial {
        let mut p = TruncatedPolynomial::zero(self.space.clone(), self.cutoff);
        for (m, c) in &self.terms {
            if m.weight() >= lo {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    fn check_space(&self, other: &TruncatedPolynomial) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        self.check_space(other)?;
        let cutoff = self.cutoff.min(other.cutoff);
        let mut p = TruncatedPolynomial::zero(self.space.clone(), cutoff);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            p.add_monomial(m.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn sub(&self, other: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        self.add(&other.scale(&scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> TruncatedPolynomial {
        let mut p = TruncatedPolynomial::zero(self.space.clone(), self.cutoff);
        if c.is_zero() {
            return p;
        }
        for (m, v) in &self.terms {
            p.terms.insert(m.clone(), c * v);
        }
        p
    }

    pub fn mul(&self, other: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        self.check_space(other)?;
        let cutoff = self.cutoff.min(other.cutoff);
        let mut p = TruncatedPolynomial::zero(self.space.clone(), cutoff);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.weight() + m2.weight() > cutoff {
                    continue;
                }
                let mut word = m1.0.clone();
                word.extend_from_slice(&m2.0);
                if let Some((m, s)) = normalize(&word, &self.space) {
                    let c = c1 * c2;
                    p.add_monomial(m, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(p)
    }

    /// Left partial derivative by the `i`-th generator:
    /// `d_i(x_{j_1} ... x_{j_k})` picks out each occurrence of `x_i`, with the
    /// Koszul sign of moving `d_i` past the preceding factors.
    pub fn partial(&self, i: usize) -> TruncatedPolynomial {
        let gen_odd = self.space.parity(i).is_odd();
        let mut p = TruncatedPolynomial::zero(self.space.clone(), self.cutoff);
        for (m, c) in &self.terms {
            let mut prefix_odd = false; // parity of the prefix so far
            for (pos, &j) in m.0.iter().enumerate() {
                if j == i {
                    let mut rest = m.0.clone();
                    rest.remove(pos);
                    let sign_neg = gen_odd && prefix_odd;
                    let coeff = if sign_neg { -c.clone() } else { c.clone() };
                    p.add_monomial(Monomial(rest), coeff);
                }
                if self.space.parity(j).is_odd() {
                    prefix_odd = !prefix_odd;
                }
            }
        }
        p
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let cs = scalar::render(c);
            if m.weight() == 0 {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(m.display(&self.space));
            } else if cs == "-1" {
                parts.push(format!("-{}", m.display(&self.space)));
            } else {
                parts.push(format!("{}*{}", cs, m.display(&self.space)));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for TruncatedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn theta2() -> Arc<GradedSpace> {
        Arc::new(GradedSpace::of(&[("h1", 1), ("h2", 1)]))
    }

    fn mixed() -> Arc<GradedSpace> {
        Arc::new(GradedSpace::of(&[("t", 0), ("h", 1)]))
    }

    #[test]
    fn odd_generators_anticommute_and_square_to_zero() {
        let v = theta2();
        let (m, s) = normalize(&[1, 0], &v).unwrap();
        assert_eq!(m, Monomial(vec![0, 1]));
        assert_eq!(s, -1);
        assert!(normalize(&[0, 0], &v).is_none());
        let (_, s2) = normalize(&[0, 1], &v).unwrap();
        assert_eq!(s2, 1);
    }

    #[test]
    fn mul_respects_koszul_sign() {
        let v = theta2();
        let a = TruncatedPolynomial::generator(v.clone(), 4, 0);
        let b = TruncatedPolynomial::generator(v.clone(), 4, 1);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab, ba.scale(&int(-1)));
        assert!(a.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn partial_derivative_signs() {
        // d_{h2}(h1*h2) = -h1, d_{h1}(h1*h2) = h2
        let v = theta2();
        let h1 = TruncatedPolynomial::generator(v.clone(), 4, 0);
        let h2 = TruncatedPolynomial::generator(v.clone(), 4, 1);
        let prod = h1.mul(&h2).unwrap();
        assert_eq!(prod.partial(1), h1.scale(&int(-1)));
        assert_eq!(prod.partial(0), h2);
        // d_t(t^2) = 2t
        let v = mixed();
        let t = TruncatedPolynomial::generator(v.clone(), 4, 0);
        let t2 = t.mul(&t).unwrap();
        assert_eq!(t2.partial(0), t.scale(&int(2)));
    }

    #[test]
    fn truncation_drops_high_weight() {
        let v = mixed();
        let t = TruncatedPolynomial::generator(v.clone(), 2, 0);
        let t2 = t.mul(&t).unwrap();
        assert_eq!(t2.max_weight(), Some(2));
        let t3 = t2.mul(&t).unwrap();
        assert!(t3.is_zero()); // weight 3 > cutoff 2
    }

    #[test]
    fn monomial_enumeration_counts() {
        // two odd generators: weights 0,1,2 have 1,2,1 monomials
        let v = theta2();
        assert_eq!(monomials_of_weight(&v, 0).len(), 1);
        assert_eq!(monomials_of_weight(&v, 1).len(), 2);
        assert_eq!(monomials_of_weight(&v, 2).len(), 1);
        assert_eq!(monomials_of_weight(&v, 3).len(), 0);
        // one even, one odd: weight w has 2 monomials for w >= 1
        let v = mixed();
        for w in 1..5 {
            assert_eq!(monomials_of_weight(&v, w).len(), 2);
        }
        // graded-lex order is stable
        let basis = monomial_basis(&v, 0, 2);
        assert_eq!(
            basis,
            vec![
                Monomial(vec![]),
                Monomial(vec![0]),
                Monomial(vec![1]),
                Monomial(vec![0, 0]),
                Monomial(vec![0, 1]),
            ]
        );
    }

    #[test]
    fn weight_component_and_parity() {
        let v = mixed();
        let t = TruncatedPolynomial::generator(v.clone(), 4, 0);
        let h = TruncatedPolynomial::generator(v.clone(), 4, 1);
        let s = t.add(&t.mul(&t).unwrap()).unwrap();
        assert_eq!(s.weight_component(1), t);
        assert_eq!(s.parity(), Some(Parity::Even));
        assert_eq!(t.add(&h).unwrap().parity(), None);
        assert_eq!(h.parity(), Some(Parity::Odd));
    }
}
