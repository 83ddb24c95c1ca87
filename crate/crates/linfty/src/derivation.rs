//! Derivations of the truncated algebra (formal vector fields), their
//! bracket and divergence, and the dictionary between weight-homogeneous
//! derivations and graded-symmetric multilinear maps.

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Parity};
use crate::scalar::{self, Scalar};
use crate::symalg::{normalize, Monomial, TruncatedPolynomial};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Formal vector field `sum_i f_i d_i`, stored by its values `f_i` on the
/// generators and extended to the whole algebra by the graded Leibniz rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub space: Arc<GradedSpace>,
    pub parity: Parity,
    pub cutoff: usize,
    values: Vec<TruncatedPolynomial>,
}

impl Derivation {
    pub fn new(
        space: Arc<GradedSpace>,
        parity: Parity,
        cutoff: usize,
        values: Vec<TruncatedPolynomial>,
    ) -> Result<Derivation> {
        if values.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "expected {} generator values, got {}",
                space.dim(),
                values.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.space != space {
                return Err(Error::SpaceMismatch);
            }
            if let Some(p) = v.parity() {
                if p != space.parity(i) + parity {
                    return Err(Error::Parity(format!(
                        "value on {} has parity {}, expected {}",
                        space.name(i),
                        p,
                        space.parity(i) + parity
                    )));
                }
            } else if !v.is_zero() {
                return Err(Error::Parity(format!(
                    "value on {} is not parity homogeneous",
                    space.name(i)
                )));
            }
        }
        Ok(Derivation {
            space,
            parity,
            cutoff,
            values,
        })
    }

    pub fn zero(space: Arc<GradedSpace>, parity: Parity, cutoff: usize) -> Derivation {
        let values = (0..space.dim())
            .map(|_| TruncatedPolynomial::zero(space.clone(), cutoff))
            .collect();
        Derivation {
            space,
            parity,
            cutoff,
            values,
        }
    }

    /// The coordinate field `d_i` (value 1 on the i-th generator).
    pub fn coordinate(space: Arc<GradedSpace>, cutoff: usize, i: usize) -> Derivation {
        let mut d = Derivation::zero(space.clone(), space.parity(i), cutoff);
        d.values[i] = TruncatedPolynomial::constant(space, cutoff, scalar::one());
        d
    }

    /// The field `f * d_i`.
    pub fn single(i: usize, f: TruncatedPolynomial) -> Result<Derivation> {
        let space = f.space.clone();
        let cutoff = f.cutoff;
        let parity = match f.parity() {
            Some(p) => p + space.parity(i),
            None if f.is_zero() => Parity::Even,
            None => {
                return Err(Error::Parity(
                    "coefficient of a single field must be homogeneous".into(),
                ))
            }
        };
        let mut d = Derivation::zero(space, parity, cutoff);
        d.values[i] = f;
        Ok(d)
    }

    pub fn value(&self, i: usize) -> &TruncatedPolynomial {
        &self.values[i]
    }

    pub fn values(&self) -> &[TruncatedPolynomial] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Smallest weight of a generator value; the derivation raises word
    /// length by at least `min_weight() - 1`.
    pub fn min_weight(&self) -> Option<usize> {
        self.values.iter().filter_map(|v| v.min_weight()).min()
    }

    /// Largest weight of a generator value (the top arity of the associated
    /// multilinear maps).
    pub fn max_weight(&self) -> Option<usize> {
        self.values.iter().filter_map(|v| v.max_weight()).max()
    }

    /// Component whose generator values are weight-`w` homogeneous; this is
    /// the arity-`w` Taylor coefficient.
    pub fn weight_component(&self, w: usize) -> Derivation {
        Derivation {
            space: self.space.clone(),
            parity: self.parity,
            cutoff: self.cutoff,
            values: self.values.iter().map(|v| v.weight_component(w)).collect(),
        }
    }

    /// Graded Leibniz extension: `xi(p) = sum_i f_i * d_i(p)`.
    pub fn apply(&self, p: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        if p.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let cutoff = self.cutoff.min(p.cutoff);
        let mut out = TruncatedPolynomial::zero(self.space.clone(), cutoff);
        for (i, f) in self.values.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            out = out.add(&f.mul(&p.partial(i))?)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.parity != other.parity {
            return Err(Error::Parity(
                "cannot add derivations of different parity".into(),
            ));
        }
        let values: Result<Vec<_>> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(Derivation {
            space: self.space.clone(),
            parity: self.parity,
            cutoff: self.cutoff.min(other.cutoff),
            values: values?,
        })
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.add(&other.scale(&scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation {
            space: self.space.clone(),
            parity: self.parity,
            cutoff: self.cutoff,
            values: self.values.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// Graded commutator `[xi, eta] = xi eta - (-1)^{|xi||eta|} eta xi`,
    /// computed on generators.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let cutoff = self.cutoff.min(other.cutoff);
        let sign = self.parity.koszul(other.parity);
        let mut values = Vec::with_capacity(self.space.dim());
        for i in 0..self.space.dim() {
            let a = self.apply(other.value(i))?;
            let b = other.apply(self.value(i))?;
            let b = if sign < 0 { b } else { b.scale(&scalar::int(-1)) };
            values.push(a.add(&b)?);
        }
        Derivation::new(
            self.space.clone(),
            self.parity + other.parity,
            cutoff,
            values,
        )
    }

    /// Divergence `div(sum f_i d_i) = sum (-1)^{|f_i||x_i|} d_i(f_i)`.
    /// On linear fields this is the supertrace of the coefficient matrix.
    pub fn divergence(&self) -> TruncatedPolynomial {
        let mut out = TruncatedPolynomial::zero(self.space.clone(), self.cutoff);
        for (i, f) in self.values.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let fi_parity = self.space.parity(i) + self.parity;
            let sign_neg = fi_parity.is_odd() && self.space.parity(i).is_odd();
            let term = f.partial(i);
            out = out
                .add(&if sign_neg {
                    term.scale(&scalar::int(-1))
                } else {
                    term
                })
                .expect("same space");
        }
        out
    }

    /// Weight-homogeneous piece as a symmetric multilinear map; fails when
    /// the generator values are not weight homogeneous.
    pub fn to_multilinear(&self) -> Result<SymMultiMap> {
        let arity = match self.max_weight() {
            Some(w) => w,
            None => {
                return Ok(SymMultiMap {
                    space: self.space.clone(),
                    arity: 0,
                    entries: BTreeMap::new(),
                })
            }
        };
        if self.min_weight() != Some(arity) {
            return Err(Error::Input(
                "to_multilinear requires weight-homogeneous generator values".into(),
            ));
        }
        SymMultiMap::from_derivation_component(self, arity)
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (i, f) in self.values.iter().enumerate() {
            if !f.is_zero() {
                parts.push(format!("({}) d/d{}", f.display(), self.space.name(i)));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Graded-symmetric multilinear map `V^{x n} -> V` written in the generator
/// basis; the symmetrization convention contains no 1/n! factor, so the
/// field `t^n d/dt` on a one-dimensional even space corresponds to the map
/// "multiplication by n!".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMultiMap {
    pub space: Arc<GradedSpace>,
    pub arity: usize,
    /// canonical input word -> sparse output vector
    entries: BTreeMap<Monomial, BTreeMap<usize, Scalar>>,
}

fn symmetrization_factor(m: &Monomial) -> Scalar {
    let mut f = scalar::one();
    for (_, mult) in m.multiplicities() {
        for k in 2..=mult {
            f *= scalar::int(k as i64);
        }
    }
    f
}

impl SymMultiMap {
    fn from_derivation_component(d: &Derivation, arity: usize) -> Result<SymMultiMap> {
        let mut entries: BTreeMap<Monomial, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (i, f) in d.values().iter().enumerate() {
            for (m, c) in f.terms() {
                if m.weight() != arity {
                    continue;
                }
                let val = c * symmetrization_factor(m);
                entries
                    .entry(m.clone())
                    .or_default()
                    .insert(i, val);
            }
        }
        Ok(SymMultiMap {
            space: d.space.clone(),
            arity,
            entries,
        })
    }

    /// Builds the weight-homogeneous derivation realizing this map.
    pub fn to_derivation(&self, cutoff: usize, parity: Parity) -> Result<Derivation> {
        let mut values: Vec<TruncatedPolynomial> = (0..self.space.dim())
            .map(|_| TruncatedPolynomial::zero(self.space.clone(), cutoff))
            .collect();
        for (m, outs) in &self.entries {
            let f = symmetrization_factor(m);
            for (&i, c) in outs {
                values[i].add_monomial(m.clone(), c / &f);
            }
        }
        Derivation::new(self.space.clone(), parity, cutoff, values)
    }

    /// Inserts the value on a canonical (sorted) input word.
    pub fn set(&mut self, word: &[usize], output: usize, c: Scalar) -> Result<()> {
        if word.len() != self.arity {
            return Err(Error::Dimension(format!(
                "expected {} inputs, got {}",
                self.arity,
                word.len()
            )));
        }
        let (m, sign) = normalize(word, &self.space)
            .ok_or_else(|| Error::Input("repeated odd input".into()))?;
        let c = if sign < 0 { -c } else { c };
        let e = self
            .entries
            .entry(m)
            .or_default()
            .entry(output)
            .or_insert_with(scalar::zero);
        *e += c;
        Ok(())
    }

    pub fn new(space: Arc<GradedSpace>, arity: usize) -> SymMultiMap {
        SymMultiMap {
            space,
            arity,
            entries: BTreeMap::new(),
        }
    }

    /// Value on an arbitrary word, with the Koszul sign of sorting it.
    pub fn eval_word(&self, word: &[usize]) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.space.dim()];
        let Some((m, sign)) = normalize(word, &self.space) else {
            return out;
        };
        if let Some(entry) = self.entries.get(&m) {
            for (&i, c) in entry {
                out[i] = if sign < 0 { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    pub fn entries(&self) -> &BTreeMap<Monomial, BTreeMap<usize, Scalar>> {
        &self.entries
    }

    /// Supertrace over the last slot with the first `arity - 1` inputs
    /// frozen: `str(x -> m(w_1, ..., w_{n-1}, x))`.
    pub fn supertrace_of_slot(&self, word: &[usize]) -> Result<Scalar> {
        if word.len() + 1 != self.arity {
            return Err(Error::Dimension(format!(
                "expected {} frozen inputs, got {}",
                self.arity - 1,
                word.len()
            )));
        }
        let mut tr = scalar::zero();
        let mut w = word.to_vec();
        for j in 0..self.space.dim() {
            w.push(j);
            let out = self.eval_word(&w);
            w.pop();
            let c = out[j].clone();
            if self.space.parity(j).is_odd() {
                tr -= c;
            } else {
                tr += c;
            }
        }
        Ok(tr)
    }
}

/// The "index-lowered" tensor of a weight-homogeneous polynomial, with the
/// same symmetrization convention as `SymMultiMap`.
pub fn polynomial_tensor(p: &TruncatedPolynomial, word: &[usize]) -> Scalar {
    match normalize(word, &p.space) {
        None => scalar::zero(),
        Some((m, sign)) => {
            let c = p.coefficient(&m) * symmetrization_factor(&m);
            if sign < 0 {
                -c
            } else {
                c
            }
        }
    }
}
