//! Even and odd doubles of a space of formal vector fields, constant-
//! coefficient Poisson brackets and antibrackets, Hamiltonian fields and the
//! odd Laplacian.

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::graded::{Generator, GradedSpace, Parity};
use crate::scalar::{self, Scalar};
use crate::symalg::{Monomial, TruncatedPolynomial};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleKind {
    /// Partners carry the same parity; the double carries the even bracket.
    Even,
    /// Partners carry the flipped parity; the double carries the antibracket.
    Odd,
}

/// The base generators followed by one conjugate partner per generator; the
/// partner of generator `i` sits at index `i + base.dim()`.
#[derive(Debug, Clone)]
pub struct DoubleSpace {
    pub base: Arc<GradedSpace>,
    pub total: Arc<GradedSpace>,
    pub kind: DoubleKind,
}

impl DoubleSpace {
    pub fn new(base: Arc<GradedSpace>, kind: DoubleKind) -> DoubleSpace {
        let mut gens: Vec<Generator> = base.generators().to_vec();
        for g in base.generators() {
            let (name, parity) = match kind {
                DoubleKind::Even => (format!("{}*", g.name), g.parity),
                DoubleKind::Odd => (format!("P{}*", g.name), g.parity.flip()),
            };
            gens.push(Generator { name, parity });
        }
        let total = Arc::new(GradedSpace::new(gens).expect("base names are unique"));
        DoubleSpace { base, total, kind }
    }

    pub fn partner(&self, i: usize) -> usize {
        i + self.base.dim()
    }

    /// Canonical bracket table of the double (the pairing of each generator
    /// with its partner).
    pub fn poisson(&self) -> PoissonStructure {
        let mut table = BTreeMap::new();
        let n = self.base.dim();
        for i in 0..n {
            let p = self.base.parity(i);
            match self.kind {
                DoubleKind::Even => {
                    // (x_i^*, x_i) = 1, (x_i, x_i^*) = -(-1)^{|x_i|}
                    table.insert((self.partner(i), i), scalar::one());
                    table.insert(
                        (i, self.partner(i)),
                        if p.is_odd() { scalar::one() } else { -scalar::one() },
                    );
                }
                DoubleKind::Odd => {
                    // {Px_i^*, x_i} = 1 = {x_i, Px_i^*}
                    table.insert((self.partner(i), i), scalar::one());
                    table.insert((i, self.partner(i)), scalar::one());
                }
            }
        }
        let parity = match self.kind {
            DoubleKind::Even => Parity::Even,
            DoubleKind::Odd => Parity::Odd,
        };
        PoissonStructure::new(self.total.clone(), parity, table).expect("canonical table")
    }

    /// Embeds a polynomial over the base generators into the double.
    pub fn embed(&self, p: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        if p.space != self.base {
            return Err(Error::SpaceMismatch);
        }
        let mut out = TruncatedPolynomial::zero(self.total.clone(), p.cutoff);
        for (m, c) in p.terms() {
            out.add_monomial(Monomial(m.0.clone()), c.clone());
        }
        Ok(out)
    }

    /// Even doubling `D_ev(f d_i) = f x_i^*`; a map of Lie algebras onto the
    /// even bracket.
    pub fn double_even(&self, xi: &Derivation) -> Result<TruncatedPolynomial> {
        if self.kind != DoubleKind::Even {
            return Err(Error::Input("double_even needs an even double".into()));
        }
        self.double_common(xi, false)
    }

    /// Odd doubling `D_od(f d_i) = (-1)^{|f|} f Px_i^*`; an odd map of Lie
    /// algebras onto the antibracket.
    pub fn double_odd(&self, xi: &Derivation) -> Result<TruncatedPolynomial> {
        if self.kind != DoubleKind::Odd {
            return Err(Error::Input("double_odd needs an odd double".into()));
        }
        self.double_common(xi, true)
    }

    fn double_common(&self, xi: &Derivation, signed: bool) -> Result<TruncatedPolynomial> {
        if xi.space != self.base {
            return Err(Error::SpaceMismatch);
        }
        let cutoff = xi.cutoff;
        let mut out = TruncatedPolynomial::zero(self.total.clone(), cutoff);
        for i in 0..self.base.dim() {
            let f = xi.value(i);
            if f.is_zero() {
                continue;
            }
            let fe = self.embed(f)?;
            let partner = TruncatedPolynomial::generator(self.total.clone(), cutoff, self.partner(i));
            let mut term = fe.mul(&partner)?;
            if signed {
                let f_parity = xi.parity + self.base.parity(i);
                if f_parity.is_odd() {
                    term = term.scale(&scalar::int(-1));
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Coordinate odd Laplacian `sum_i d_{x_i} d_{Px_i^*}`, defined on the
    /// odd double; agrees with half the divergence of the Hamiltonian field.
    pub fn laplacian(&self, p: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        if self.kind != DoubleKind::Odd {
            return Err(Error::Input("the odd Laplacian needs an odd double".into()));
        }
        if p.space != self.total {
            return Err(Error::SpaceMismatch);
        }
        let mut out = TruncatedPolynomial::zero(self.total.clone(), p.cutoff);
        for i in 0..self.base.dim() {
            out = out.add(&p.partial(self.partner(i)).partial(i))?;
        }
        Ok(out)
    }
}

/// Constant-coefficient bracket on a truncated algebra: an even Poisson
/// bracket or an odd antibracket determined by its values on generators and
/// extended as a biderivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonStructure {
    pub space: Arc<GradedSpace>,
    /// Parity added by the bracket: even bracket adds 0, antibracket adds 1.
    pub parity: Parity,
    table: BTreeMap<(usize, usize), Scalar>,
}

impl PoissonStructure {
    pub fn new(
        space: Arc<GradedSpace>,
        parity: Parity,
        table: BTreeMap<(usize, usize), Scalar>,
    ) -> Result<PoissonStructure> {
        let table: BTreeMap<(usize, usize), Scalar> =
            table.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for (&(i, j), c) in &table {
            if i >= space.dim() || j >= space.dim() {
                return Err(Error::Dimension("bracket table index out of range".into()));
            }
            // the bracket of two generators is a scalar, so parities must cancel
            if space.parity(i) + space.parity(j) + parity != Parity::Even {
                return Err(Error::Parity(format!(
                    "table entry ({},{}) has odd total parity",
                    space.name(i),
                    space.name(j)
                )));
            }
            // graded symmetry of the bracket on generators:
            //   even bracket: (a,b) = -(-1)^{|a||b|} (b,a)
            //   antibracket:  {a,b} = (-1)^{|a||b|} {b,a}
            let k = space.parity(i).koszul(space.parity(j));
            let sign = match parity {
                Parity::Even => -k,
                Parity::Odd => k,
            };
            let mirror = table.get(&(j, i)).cloned().unwrap_or_else(scalar::zero);
            let expect = if sign < 0 { -c.clone() } else { c.clone() };
            if mirror != expect {
                return Err(Error::Input(format!(
                    "bracket table not graded (anti)symmetric at ({},{})",
                    space.name(i),
                    space.name(j)
                )));
            }
        }
        Ok(PoissonStructure {
            space,
            parity,
            table,
        })
    }

    pub fn table(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.table
    }

    /// `{u, -}` as a derivation, for a generator `u`.
    fn generator_field(&self, u: usize, cutoff: usize) -> Derivation {
        let mut values: Vec<TruncatedPolynomial> = (0..self.space.dim())
            .map(|_| TruncatedPolynomial::zero(self.space.clone(), cutoff))
            .collect();
        for (&(a, j), c) in &self.table {
            if a == u {
                values[j] = TruncatedPolynomial::constant(self.space.clone(), cutoff, c.clone());
            }
        }
        Derivation::new(
            self.space.clone(),
            self.space.parity(u) + self.parity,
            cutoff,
            values,
        )
        .expect("table parity already validated")
    }

    fn bracket_word(
        &self,
        w1: &[usize],
        g: &TruncatedPolynomial,
        g_parity: Parity,
    ) -> Result<TruncatedPolynomial> {
        let cutoff = g.cutoff;
        if w1.is_empty() {
            return Ok(TruncatedPolynomial::zero(self.space.clone(), cutoff));
        }
        let u = w1[0];
        let rest = &w1[1..];
        let rest_parity = {
            let odd = rest
                .iter()
                .filter(|&&i| self.space.parity(i).is_odd())
                .count();
            if odd % 2 == 0 {
                Parity::Even
            } else {
                Parity::Odd
            }
        };
        // term 1: +- {u,g} * rest
        let du = self.generator_field(u, cutoff);
        let ug = du.apply(g)?;
        let rest_poly = TruncatedPolynomial::from_words(
            self.space.clone(),
            cutoff,
            &[(rest.to_vec(), scalar::one())],
        );
        let mut term1 = ug.mul(&rest_poly)?;
        if rest_parity.koszul(g_parity) < 0 {
            term1 = term1.scale(&scalar::int(-1));
        }
        // term 2: u * {rest, g}, with an extra (-1)^{|u|} for the antibracket
        let inner = self.bracket_word(rest, g, g_parity)?;
        let u_poly = TruncatedPolynomial::generator(self.space.clone(), cutoff, u);
        let mut term2 = u_poly.mul(&inner)?;
        if self.parity.is_odd() && self.space.parity(u).is_odd() {
            term2 = term2.scale(&scalar::int(-1));
        }
        term1.add(&term2)
    }

    /// The bracket of two polynomials.  Both arguments may be parity
    /// inhomogeneous; the bracket is computed termwise.
    pub fn bracket(
        &self,
        f: &TruncatedPolynomial,
        g: &TruncatedPolynomial,
    ) -> Result<TruncatedPolynomial> {
        if f.space != self.space || g.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let cutoff = f.cutoff.min(g.cutoff);
        let mut out = TruncatedPolynomial::zero(self.space.clone(), cutoff);
        for (m2, c2) in g.terms() {
            let gp = m2.parity(&self.space);
            let g_mono = {
                let mut p = TruncatedPolynomial::zero(self.space.clone(), cutoff);
                p.add_monomial(m2.clone(), c2.clone());
                p
            };
            for (m1, c1) in f.terms() {
                let t = self.bracket_word(&m1.0, &g_mono, gp)?;
                out = out.add(&t.scale(c1))?;
            }
        }
        Ok(out)
    }

    /// Hamiltonian field `X_h(g) = (-1)^{|h|} bracket(h, g)` of a parity
    /// homogeneous `h`.
    pub fn hamiltonian_field(&self, h: &TruncatedPolynomial) -> Result<Derivation> {
        let Some(hp) = h.parity() else {
            if h.is_zero() {
                return Ok(Derivation::zero(self.space.clone(), self.parity, h.cutoff));
            }
            return Err(Error::Parity("Hamiltonian must be parity homogeneous".into()));
        };
        let x = self.flow_field(h)?;
        Ok(if hp.is_odd() {
            x.scale(&scalar::int(-1))
        } else {
            x
        })
    }

    /// The unsigned field `{h, -}`.  For even `h` this is the Hamiltonian
    /// field; for odd `h` the two differ by a sign, and it is this field
    /// whose divergence computes the Laplacian uniformly in the parity.
    pub fn flow_field(&self, h: &TruncatedPolynomial) -> Result<Derivation> {
        let Some(hp) = h.parity() else {
            if h.is_zero() {
                return Ok(Derivation::zero(self.space.clone(), self.parity, h.cutoff));
            }
            return Err(Error::Parity(
                "flow field needs a parity homogeneous element".into(),
            ));
        };
        let cutoff = h.cutoff;
        let mut values = Vec::with_capacity(self.space.dim());
        for j in 0..self.space.dim() {
            let xj = TruncatedPolynomial::generator(self.space.clone(), cutoff, j);
            values.push(self.bracket(h, &xj)?);
        }
        Derivation::new(self.space.clone(), hp + self.parity, cutoff, values)
    }

    /// Half the divergence of the flow field `{h, -}`; on the canonical odd
    /// double this is the coordinate odd Laplacian for either parity of `h`.
    pub fn laplacian(&self, h: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        if !self.parity.is_odd() {
            return Err(Error::Input("the Laplacian needs an odd bracket".into()));
        }
        let x = self.flow_field(h)?;
        Ok(x.divergence().scale(&scalar::ratio(1, 2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::scalar::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: usize = 6;

    fn rand_homog(
        rng: &mut ChaCha8Rng,
        space: &Arc<GradedSpace>,
    ) -> Option<TruncatedPolynomial> {
        for _ in 0..10 {
            let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
            let p = sampling::random_polynomial(rng, space, N, Some(parity), 0, 3);
            if !p.is_zero() {
                return Some(p);
            }
        }
        None
    }
    use rand::Rng;

    #[test]
    fn even_bracket_axioms() {
        let base = sampling::space(1, 1);
        let dbl = DoubleSpace::new(base, DoubleKind::Even);
        let pb = dbl.poisson();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let (Some(f), Some(g), Some(h)) = (
                rand_homog(&mut rng, &dbl.total),
                rand_homog(&mut rng, &dbl.total),
                rand_homog(&mut rng, &dbl.total),
            ) else {
                continue;
            };
            let (pf, pg) = (f.parity().unwrap(), g.parity().unwrap());
            // antisymmetry
            let lhs = pb.bracket(&f, &g).unwrap();
            let rhs = pb.bracket(&g, &f).unwrap().scale(&int(-pf.koszul(pg) as i64));
            assert_eq!(lhs, rhs);
            // Leibniz: (f, gh) = (f,g)h + (-1)^{|f||g|} g (f,h)
            let lhs = pb.bracket(&f, &g.mul(&h).unwrap()).unwrap();
            let rhs = pb
                .bracket(&f, &g)
                .unwrap()
                .mul(&h)
                .unwrap()
                .add(&g.mul(&pb.bracket(&f, &h).unwrap()).unwrap().scale(&int(pf.koszul(pg) as i64)))
                .unwrap();
            assert_eq!(lhs, rhs);
            // Jacobi: (f,(g,h)) = ((f,g),h) + (-1)^{|f||g|} (g,(f,h))
            let lhs = pb.bracket(&f, &pb.bracket(&g, &h).unwrap()).unwrap();
            let rhs = pb
                .bracket(&pb.bracket(&f, &g).unwrap(), &h)
                .unwrap()
                .add(
                    &pb.bracket(&g, &pb.bracket(&f, &h).unwrap())
                        .unwrap()
                        .scale(&int(pf.koszul(pg) as i64)),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn odd_bracket_axioms() {
        let base = sampling::space(1, 1);
        let dbl = DoubleSpace::new(base, DoubleKind::Odd);
        let pb = dbl.poisson();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let (Some(f), Some(g), Some(h)) = (
                rand_homog(&mut rng, &dbl.total),
                rand_homog(&mut rng, &dbl.total),
                rand_homog(&mut rng, &dbl.total),
            ) else {
                continue;
            };
            let (pf, pg) = (f.parity().unwrap(), g.parity().unwrap());
            // symmetry: {f,g} = (-1)^{|f||g|} {g,f}
            let lhs = pb.bracket(&f, &g).unwrap();
            let rhs = pb.bracket(&g, &f).unwrap().scale(&int(pf.koszul(pg) as i64));
            assert_eq!(lhs, rhs);
            // Leibniz: {f, gh} = {f,g}h + (-1)^{(|f|+1)|g|} g {f,h}
            let sign = pf.flip().koszul(pg);
            let lhs = pb.bracket(&f, &g.mul(&h).unwrap()).unwrap();
            let rhs = pb
                .bracket(&f, &g)
                .unwrap()
                .mul(&h)
                .unwrap()
                .add(&g.mul(&pb.bracket(&f, &h).unwrap()).unwrap().scale(&int(sign as i64)))
                .unwrap();
            assert_eq!(lhs, rhs);
            // odd Jacobi:
            // {f,{g,h}} = (-1)^{|f|+1} {{f,g},h} + (-1)^{(|f|+1)(|g|+1)} {g,{f,h}}
            let s1 = if pf.is_odd() { 1 } else { -1 };
            let s2 = pf.flip().koszul(pg.flip());
            let lhs = pb.bracket(&f, &pb.bracket(&g, &h).unwrap()).unwrap();
            let rhs = pb
                .bracket(&pb.bracket(&f, &g).unwrap(), &h)
                .unwrap()
                .scale(&int(s1))
                .add(
                    &pb.bracket(&g, &pb.bracket(&f, &h).unwrap())
                        .unwrap()
                        .scale(&int(s2 as i64)),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn doubling_maps_are_lie_maps() {
        let base = sampling::space(1, 1);
        let ev = DoubleSpace::new(base.clone(), DoubleKind::Even);
        let od = DoubleSpace::new(base.clone(), DoubleKind::Odd);
        let (pe, po) = (ev.poisson(), od.poisson());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..15 {
            let xi = sampling::random_derivation(&mut rng, &base, N, None, 0, 3);
            let eta = sampling::random_derivation(&mut rng, &base, N, None, 0, 3);
            let br = xi.bracket(&eta).unwrap();
            // even: D[xi,eta] = (D xi, D eta)
            let lhs = ev.double_even(&br).unwrap();
            let rhs = pe
                .bracket(&ev.double_even(&xi).unwrap(), &ev.double_even(&eta).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "even doubling failed");
            // odd: D[xi,eta] = (-1)^{|xi|} {D xi, D eta}
            let lhs = od.double_odd(&br).unwrap();
            let mut rhs = po
                .bracket(&od.double_odd(&xi).unwrap(), &od.double_odd(&eta).unwrap())
                .unwrap();
            if xi.parity.is_odd() {
                rhs = rhs.scale(&int(-1));
            }
            assert_eq!(lhs, rhs, "odd doubling failed");
        }
    }

    #[test]
    fn divergence_via_laplacian() {
        let base = sampling::space(2, 1);
        let od = DoubleSpace::new(base.clone(), DoubleKind::Odd);
        let po = od.poisson();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..15 {
            let xi = sampling::random_derivation(&mut rng, &base, N, None, 0, 3);
            // div(xi) = Delta(D_od xi), embedded into the double
            let lhs = od.embed(&xi.divergence()).unwrap();
            let dod = od.double_odd(&xi).unwrap();
            assert_eq!(lhs, od.laplacian(&dod).unwrap(), "coordinate Laplacian");
            assert_eq!(lhs, po.laplacian(&dod).unwrap(), "divergence Laplacian");
            // div(X_{D_ev xi}) = 0 and div({D_od xi, -}) = 2 div(xi)
            let ev = DoubleSpace::new(base.clone(), DoubleKind::Even);
            let dev = ev.double_even(&xi).unwrap();
            assert!(ev.poisson().hamiltonian_field(&dev).unwrap().divergence().is_zero());
            let xh = po.flow_field(&dod).unwrap();
            assert_eq!(xh.divergence(), lhs.scale(&int(2)));
            // with the signed Hamiltonian convention the same identity holds
            // whenever D_od(xi) is even, i.e. xi is odd
            if xi.parity.is_odd() {
                let xh = po.hamiltonian_field(&dod).unwrap();
                assert_eq!(xh.divergence(), lhs.scale(&int(2)));
            }
        }
    }

    #[test]
    fn laplacian_squares_to_zero() {
        let base = sampling::space(1, 1);
        let od = DoubleSpace::new(base, DoubleKind::Odd);
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..10 {
            let p = sampling::random_polynomial(&mut rng, &od.total, N, None, 0, 4);
            assert!(od.laplacian(&od.laplacian(&p).unwrap()).unwrap().is_zero());
        }
    }
}
