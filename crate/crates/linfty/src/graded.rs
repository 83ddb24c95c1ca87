use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

/// Z/2 degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Odd)
    }

    /// Koszul sign (-1)^{pq} for moving `self` past `other`.
    pub fn koszul(self, other: Parity) -> i8 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn from_u8(v: u8) -> Result<Parity> {
        match v {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            _ => Err(Error::Parity(format!("parity must be 0 or 1, got {v}"))),
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
}

/// Finite dimensional Z/2-graded vector space with a distinguished ordered
/// basis.  Dimension is reported as `l|n` (even|odd).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    generators: Vec<Generator>,
}

impl GradedSpace {
    pub fn new(generators: Vec<Generator>) -> Result<GradedSpace> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(Error::Duplicate(g.name.clone()));
            }
        }
        Ok(GradedSpace { generators })
    }

    /// Convenience constructor from `(name, parity)` pairs, 0 = even.
    pub fn of(gens: &[(&str, u8)]) -> GradedSpace {
        GradedSpace::new(
            gens.iter()
                .map(|(n, p)| Generator {
                    name: n.to_string(),
                    parity: Parity::from_u8(*p).expect("parity"),
                })
                .collect(),
        )
        .expect("valid generator list")
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.generators[i].parity
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::Undeclared(name.to_string()))
    }

    /// Even and odd dimensions `(l, n)`.
    pub fn superdim(&self) -> (usize, usize) {
        let odd = self.generators.iter().filter(|g| g.parity.is_odd()).count();
        (self.generators.len() - odd, odd)
    }

    /// Parity reversion: same names, all parities flipped.
    pub fn parity_reverse(&self) -> GradedSpace {
        GradedSpace {
            generators: self
                .generators
                .iter()
                .map(|g| Generator {
                    name: g.name.clone(),
                    parity: g.parity.flip(),
                })
                .collect(),
        }
    }

    /// Copy with every name passed through `f`; parities kept.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> GradedSpace {
        GradedSpace {
            generators: self
                .generators
                .iter()
                .map(|g| Generator {
                    name: f(&g.name),
                    parity: g.parity,
                })
                .collect(),
        }
    }
}

/// Parity-homogeneous linear map between graded spaces, stored sparsely as
/// `(target_index, source_index) -> coefficient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub source: Arc<GradedSpace>,
    pub target: Arc<GradedSpace>,
    pub parity: Parity,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl LinearMap {
    pub fn new(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        parity: Parity,
        entries: BTreeMap<(usize, usize), Scalar>,
    ) -> Result<LinearMap> {
        for (&(t, s), c) in &entries {
            if s >= source.dim() || t >= target.dim() {
                return Err(Error::Dimension(format!(
                    "matrix entry ({t},{s}) out of range"
                )));
            }
            if !c.is_zero() && target.parity(t) != source.parity(s) + parity {
                return Err(Error::Parity(format!(
                    "entry ({},{}) violates declared parity {}",
                    target.name(t),
                    source.name(s),
                    parity
                )));
            }
        }
        let entries = entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LinearMap {
            source,
            target,
            parity,
            entries,
        })
    }

    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, parity: Parity) -> LinearMap {
        LinearMap {
            source,
            target,
            parity,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(space: Arc<GradedSpace>) -> LinearMap {
        let entries = (0..space.dim())
            .map(|i| ((i, i), scalar::one()))
            .collect();
        LinearMap {
            source: space.clone(),
            target: space,
            parity: Parity::Even,
            entries,
        }
    }

    pub fn entry(&self, target: usize, source: usize) -> Scalar {
        self.entries
            .get(&(target, source))
            .cloned()
            .unwrap_or_else(scalar::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.entries
    }

    pub fn set_entry(&mut self, target: usize, source: usize, c: Scalar) -> Result<()> {
        if !c.is_zero() && self.target.parity(target) != self.source.parity(source) + self.parity {
            return Err(Error::Parity(format!(
                "entry ({},{}) violates parity {}",
                self.target.name(target),
                self.source.name(source),
                self.parity
            )));
        }
        if c.is_zero() {
            self.entries.remove(&(target, source));
        } else {
            self.entries.insert((target, source), c);
        }
        Ok(())
    }

    /// Image of the `j`-th basis vector as a coefficient column.
    pub fn column(&self, j: usize) -> Vec<Scalar> {
        let mut col = vec![scalar::zero(); self.target.dim()];
        for (&(t, s), c) in &self.entries {
            if s == j {
                col[t] = c.clone();
            }
        }
        col
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.source.dim());
        let mut out = vec![scalar::zero(); self.target.dim()];
        for (&(t, s), c) in &self.entries {
            if !v[s].is_zero() {
                out[t] += c * &v[s];
            }
        }
        out
    }

    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.target != self.source {
            return Err(Error::SpaceMismatch);
        }
        let mut entries: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (&(t, m), a) in &self.entries {
            for (&(m2, s), b) in &inner.entries {
                if m == m2 {
                    let e = entries.entry((t, s)).or_insert_with(scalar::zero);
                    *e += a * b;
                }
            }
        }
        entries.retain(|_, c| !c.is_zero());
        Ok(LinearMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            parity: self.parity + inner.parity,
            entries,
        })
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.source != other.source || self.target != other.target || self.parity != other.parity
        {
            return Err(Error::SpaceMismatch);
        }
        let mut entries = self.entries.clone();
        for (k, c) in &other.entries {
            let e = entries.entry(*k).or_insert_with(scalar::zero);
            *e += c;
        }
        entries.retain(|_, c| !c.is_zero());
        Ok(LinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            parity: self.parity,
            entries,
        })
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        let entries = self
            .entries
            .iter()
            .filter(|(_, v)| !c.is_zero() && !v.is_zero())
            .map(|(k, v)| (*k, c * v))
            .collect();
        LinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            parity: self.parity,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Supertrace; defined on parity-preserving endomorphisms only.
    pub fn supertrace(&self) -> Result<Scalar> {
        if self.source != self.target {
            return Err(Error::Dimension(
                "supertrace requires an endomorphism".into(),
            ));
        }
        if self.parity.is_odd() {
            return Err(Error::Parity(
                "supertrace is defined for even maps only".into(),
            ));
        }
        let mut tr = scalar::zero();
        for i in 0..self.source.dim() {
            let d = self.entry(i, i);
            if self.source.parity(i).is_odd() {
                tr -= d;
            } else {
                tr += d;
            }
        }
        Ok(tr)
    }
}

/// Parity-homogeneous graded-symmetric bilinear form:
/// `<u,v> = (-1)^{|u||v|} <v,u>`, and `<u,v> = 0` unless `|u|+|v|` equals the
/// declared parity.  Degenerate forms are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    pub space: Arc<GradedSpace>,
    pub parity: Parity,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl BilinearForm {
    pub fn new(
        space: Arc<GradedSpace>,
        parity: Parity,
        entries: BTreeMap<(usize, usize), Scalar>,
    ) -> Result<BilinearForm> {
        let mut full: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (&(i, j), c) in &entries {
            if i >= space.dim() || j >= space.dim() {
                return Err(Error::Dimension(format!("form entry ({i},{j}) out of range")));
            }
            if c.is_zero() {
                continue;
            }
            if space.parity(i) + space.parity(j) != parity {
                return Err(Error::Parity(format!(
                    "<{},{}> nonzero but parities do not add to {}",
                    space.name(i),
                    space.name(j),
                    parity
                )));
            }
            full.insert((i, j), c.clone());
        }
        // Enforce graded symmetry: fill in or cross-check the mirror entry.
        let snapshot: Vec<((usize, usize), Scalar)> =
            full.iter().map(|(k, v)| (*k, v.clone())).collect();
        for ((i, j), c) in snapshot {
            let sign = space.parity(i).koszul(space.parity(j));
            let mirror = if sign < 0 { -c.clone() } else { c.clone() };
            match full.get(&(j, i)) {
                Some(existing) => {
                    if *existing != mirror {
                        return Err(Error::Parity(format!(
                            "form is not graded symmetric at <{},{}>",
                            space.name(i),
                            space.name(j)
                        )));
                    }
                }
                None => {
                    if i != j {
                        full.insert((j, i), mirror);
                    } else if sign < 0 && !c.is_zero() {
                        return Err(Error::Parity(format!(
                            "<{g},{g}> must vanish for odd {g}",
                            g = space.name(i)
                        )));
                    }
                }
            }
        }
        Ok(BilinearForm {
            space,
            parity,
            entries: full,
        })
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(scalar::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.entries
    }

    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut out = scalar::zero();
        for (&(i, j), c) in &self.entries {
            if !u[i].is_zero() && !v[j].is_zero() {
                out += &u[i] * c * &v[j];
            }
        }
        out
    }

    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        let n = self.space.dim();
        let mut m = vec![vec![scalar::zero(); n]; n];
        for (&(i, j), c) in &self.entries {
            m[i][j] = c.clone();
        }
        m
    }

    pub fn is_nondegenerate(&self) -> bool {
        crate::linalg::invert(&self.matrix()).is_some()
    }

    /// Exact inverse matrix (the "raised index" tensor), if nondegenerate.
    pub fn inverse_matrix(&self) -> Result<Vec<Vec<Scalar>>> {
        crate::linalg::invert(&self.matrix())
            .ok_or_else(|| Error::Degenerate("bilinear form is degenerate".into()))
    }

    /// Realization of the pairing as an invertible map onto the dual basis:
    /// `v -> <v,->` written in the basis dual to the given one.  The target
    /// space carries starred names with parities shifted by the form parity.
    pub fn form_dual(&self) -> Result<LinearMap> {
        self.inverse_matrix()?; // nondegeneracy check
        let dual = Arc::new(
            self.space
                .rename(|n| format!("{n}*"))
                .generators()
                .iter()
                .map(|g| Generator {
                    name: g.name.clone(),
                    parity: g.parity + self.parity,
                })
                .collect::<Vec<_>>(),
        );
        let dual = Arc::new(GradedSpace::new(Arc::try_unwrap(dual).unwrap_or_else(|a| (*a).clone()))?);
        let mut entries = BTreeMap::new();
        for (&(i, j), c) in &self.entries {
            // <e_i, e_j> = c means e_i maps to ... + c e_j^*.
            entries.insert((j, i), c.clone());
        }
        LinearMap::new(self.space.clone(), dual, self.parity, entries)
    }
}

/// A space together with an odd square-zero differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    pub space: Arc<GradedSpace>,
    pub d: LinearMap,
}

impl Complex {
    pub fn new(space: Arc<GradedSpace>, d: LinearMap) -> Result<Complex> {
        if d.source != space || d.target != space {
            return Err(Error::SpaceMismatch);
        }
        if !d.parity.is_odd() {
            return Err(Error::Parity("differential must be odd".into()));
        }
        let dd = d.compose(&d)?;
        if !dd.is_zero() {
            return Err(Error::Input("differential does not square to zero".into()));
        }
        Ok(Complex { space, d })
    }

    pub fn zero_differential(space: Arc<GradedSpace>) -> Complex {
        let d = LinearMap::zero(space.clone(), space.clone(), Parity::Odd);
        Complex { space, d }
    }

    /// A compatible form makes `d` graded skew self-adjoint:
    /// `<dx,y> + (-1)^{|x|} <x,dy> = 0`.
    pub fn is_form_compatible(&self, form: &BilinearForm) -> bool {
        let n = self.space.dim();
        for x in 0..n {
            for y in 0..n {
                let mut lhs = scalar::zero();
                for t in 0..n {
                    let c = self.d.entry(t, x);
                    if !c.is_zero() {
                        lhs += c * form.entry(t, y);
                    }
                }
                for t in 0..n {
                    let c = self.d.entry(t, y);
                    if !c.is_zero() {
                        let term = form.entry(x, t) * c;
                        if self.space.parity(x).is_odd() {
                            lhs -= term;
                        } else {
                            lhs += term;
                        }
                    }
                }
                if !lhs.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn arc(s: GradedSpace) -> Arc<GradedSpace> {
        Arc::new(s)
    }

    #[test]
    fn parity_reverse_swaps_superdim() {
        let v = GradedSpace::of(&[("e", 0), ("o", 1)]);
        assert_eq!(v.superdim(), (1, 1));
        let pv = v.parity_reverse();
        assert_eq!(pv.superdim(), (1, 1));
        assert_eq!(pv.parity(0), Parity::Odd);
        assert_eq!(pv.parity(1), Parity::Even);
        let w = GradedSpace::of(&[("a", 0), ("b", 0), ("c", 1)]);
        assert_eq!(w.parity_reverse().superdim(), (1, 2));
    }

    #[test]
    fn supertrace_of_identity_is_l_minus_n() {
        for (l, n) in [(1usize, 0usize), (2, 0), (1, 1), (2, 3)] {
            let gens: Vec<(String, u8)> = (0..l)
                .map(|i| (format!("e{i}"), 0u8))
                .chain((0..n).map(|i| (format!("o{i}"), 1u8)))
                .collect();
            let refs: Vec<(&str, u8)> = gens.iter().map(|(s, p)| (s.as_str(), *p)).collect();
            let v = arc(GradedSpace::of(&refs));
            let id = LinearMap::identity(v);
            assert_eq!(id.supertrace().unwrap(), int(l as i64) - int(n as i64));
        }
    }

    #[test]
    fn supertrace_rejects_odd_maps() {
        let v = arc(GradedSpace::of(&[("e", 0), ("o", 1)]));
        let mut m = LinearMap::zero(v.clone(), v, Parity::Odd);
        m.set_entry(1, 0, int(1)).unwrap();
        assert!(m.supertrace().is_err());
    }

    #[test]
    fn linear_map_parity_validation() {
        let v = arc(GradedSpace::of(&[("e", 0), ("o", 1)]));
        let mut even = LinearMap::zero(v.clone(), v.clone(), Parity::Even);
        assert!(even.set_entry(1, 0, int(1)).is_err());
        assert!(even.set_entry(0, 0, int(1)).is_ok());
        let mut odd = LinearMap::zero(v.clone(), v, Parity::Odd);
        assert!(odd.set_entry(1, 0, int(1)).is_ok());
        assert!(odd.set_entry(1, 1, int(1)).is_err());
    }

    #[test]
    fn form_symmetry_enforced() {
        let v = arc(GradedSpace::of(&[("a", 1), ("b", 1)]));
        // odd-odd even form must be antisymmetric
        let mut entries = BTreeMap::new();
        entries.insert((0, 1), int(1));
        let f = BilinearForm::new(v.clone(), Parity::Even, entries).unwrap();
        assert_eq!(f.entry(1, 0), int(-1));
        // diagonal odd entry rejected
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), int(1));
        assert!(BilinearForm::new(v, Parity::Even, entries).is_err());
    }

    #[test]
    fn complex_validation() {
        let v = arc(GradedSpace::of(&[("e", 0), ("o", 1)]));
        let mut d = LinearMap::zero(v.clone(), v.clone(), Parity::Odd);
        d.set_entry(0, 1, int(1)).unwrap();
        assert!(Complex::new(v.clone(), d.clone()).is_ok());
        d.set_entry(1, 0, int(1)).unwrap();
        assert!(Complex::new(v, d).is_err());
    }
}
