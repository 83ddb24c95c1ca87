//! The semidirect algebra of vector fields acting on shifted functions,
//! unimodular structures, divergence obstruction classes, trace criteria
//! for ordinary Lie algebras, and the dimension-parity classification of
//! the divergence map's image.

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::graded::{GradedSpace, Parity};
use crate::linalg::{self, SparseRow};
use crate::linf::{CeComplex, CeSolve, LInftyStructure};
use crate::scalar::{self, Scalar};
use crate::symalg::{monomial_basis, Monomial, TruncatedPolynomial};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Homogeneous element `(xi, Pi f)` of the semidirect algebra: a vector
/// field of weight at least 2 together with a parity-shifted function of
/// weight at least 1.  The component parities are `|xi| = p` and
/// `|f| = p + 1` (the shift flips the function's parity).
#[derive(Debug, Clone, PartialEq)]
pub struct SemidirectElement {
    pub xi: Derivation,
    pub f: TruncatedPolynomial,
    pub parity: Parity,
}

impl SemidirectElement {
    pub fn new(xi: Derivation, f: TruncatedPolynomial, parity: Parity) -> Result<Self> {
        if xi.space != f.space {
            return Err(Error::SpaceMismatch);
        }
        if xi.parity != parity {
            return Err(Error::Parity("field component has the wrong parity".into()));
        }
        if let Some(p) = f.parity() {
            if p != parity.flip() {
                return Err(Error::Parity(
                    "function component must have the shifted parity".into(),
                ));
            }
        }
        if xi.min_weight().map_or(false, |w| w < 2) {
            return Err(Error::Input("field component must have weight >= 2".into()));
        }
        if f.min_weight().map_or(false, |w| w < 1) {
            return Err(Error::Input(
                "function component must have weight >= 1".into(),
            ));
        }
        Ok(SemidirectElement { xi, f, parity })
    }

    pub fn from_field(xi: Derivation) -> Result<Self> {
        let parity = xi.parity;
        let f = TruncatedPolynomial::zero(xi.space.clone(), xi.cutoff);
        SemidirectElement::new(xi, f, parity)
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.f.is_zero()
    }

    pub fn add(&self, other: &SemidirectElement) -> Result<SemidirectElement> {
        if self.parity != other.parity {
            return Err(Error::Parity("cannot add elements of mixed parity".into()));
        }
        Ok(SemidirectElement {
            xi: self.xi.add(&other.xi)?,
            f: self.f.add(&other.f)?,
            parity: self.parity,
        })
    }

    pub fn scale(&self, c: &Scalar) -> SemidirectElement {
        SemidirectElement {
            xi: self.xi.scale(c),
            f: self.f.scale(c),
            parity: self.parity,
        }
    }

    /// Semidirect bracket.  The field components bracket as vector fields;
    /// the function component is
    /// `(-1)^{|xi|} Pi xi(g)  -  (-1)^{|xi||eta| + |eta|} Pi eta(f)`,
    /// the unique sign choice (up to global rescaling) that is graded
    /// antisymmetric, satisfies Jacobi, and makes the Maurer-Cartan
    /// equation of a pair reproduce the unimodularity equation.
    pub fn bracket(&self, other: &SemidirectElement) -> Result<SemidirectElement> {
        let xi = self.xi.bracket(&other.xi)?;
        let s1 = self.parity.koszul(Parity::Odd); // (-1)^{|xi|}
        let s2 = -(self.parity.koszul(other.parity) * other.parity.koszul(Parity::Odd));
        let f = self
            .xi
            .apply(&other.f)?
            .scale(&scalar::int(s1 as i64))
            .add(&other.xi.apply(&self.f)?.scale(&scalar::int(s2 as i64)))?;
        SemidirectElement::new(xi, f, self.parity + other.parity)
    }
}

/// External differential `d_e(xi) = -1/2 Pi grad(xi)` (zero on the function
/// component).  Together with the internal differential it squares to zero;
/// the overall sign matches the bracket normalization above.
pub fn external_differential(xi: &Derivation) -> Result<SemidirectElement> {
    if xi.min_weight().map_or(false, |w| w < 2) {
        return Err(Error::Input("field must have weight >= 2".into()));
    }
    let div = xi.divergence().scale(&scalar::ratio(-1, 2));
    SemidirectElement::new(
        Derivation::zero(xi.space.clone(), xi.parity.flip(), xi.cutoff),
        div,
        xi.parity.flip(),
    )
}

/// Internal differential induced by the linear part `delta` of a structure:
/// `[delta, xi]` on fields and `-Pi delta(f)` on functions.
pub fn internal_differential(delta: &Derivation, e: &SemidirectElement) -> Result<SemidirectElement> {
    let xi = delta.bracket(&e.xi)?;
    let f = delta.apply(&e.f)?.scale(&scalar::int(-1));
    SemidirectElement::new(xi, f, e.parity.flip())
}

/// Total differential `d + d_e` on the semidirect algebra.
pub fn total_differential(delta: &Derivation, e: &SemidirectElement) -> Result<SemidirectElement> {
    internal_differential(delta, e)?.add(&external_differential(&e.xi)?)
}

/// A structure together with a candidate volume datum `f` (even, weight at
/// least 1); unimodular when `delta(f) + 1/2 grad(m) + m(f) = 0`.
#[derive(Debug, Clone)]
pub struct UnimodularStructure {
    pub base: LInftyStructure,
    pub f: TruncatedPolynomial,
}

/// Per-weight residual report of the unimodularity equation.
#[derive(Debug, Clone)]
pub struct UnimodularReport {
    pub accepted: bool,
    pub strict: bool,
    /// Weights (up to the reliable limit) where the residual is nonzero.
    pub failing_weights: Vec<usize>,
}

impl UnimodularStructure {
    pub fn new(base: LInftyStructure, f: TruncatedPolynomial) -> Result<Self> {
        if f.space != base.alg {
            return Err(Error::SpaceMismatch);
        }
        if let Some(p) = f.parity() {
            if p.is_odd() {
                return Err(Error::Parity("volume datum must be even".into()));
            }
        }
        if f.min_weight().map_or(false, |w| w < 1) {
            return Err(Error::Input("volume datum must have weight >= 1".into()));
        }
        Ok(UnimodularStructure { base, f })
    }

    /// Residual `delta(f) + 1/2 grad(m) + m(f)`.
    pub fn residual(&self) -> Result<TruncatedPolynomial> {
        let ce = self.base.ce();
        let r = ce.apply(&self.f)?;
        r.add(&self.base.m.divergence().scale(&scalar::ratio(1, 2)))
    }

    pub fn check(&self) -> Result<UnimodularReport> {
        let res = self.residual()?;
        let limit = self.base.ce().reliable_limit();
        let failing: Vec<usize> = (0..=limit)
            .filter(|&w| !res.weight_component(w).is_zero())
            .collect();
        Ok(UnimodularReport {
            accepted: failing.is_empty(),
            strict: self.f.is_zero(),
            failing_weights: failing,
        })
    }
}

/// Verdict on the divergence class of a structure.
#[derive(Debug, Clone)]
pub enum ObstructionClass {
    /// A volume datum `f` exists on the reliable block.
    Vanishes(TruncatedPolynomial),
    /// Certificate: the restricted linear system for `f` is inconsistent,
    /// so no truncated datum exists; the class of `grad(m)` is nonzero.
    Nonzero(TruncatedPolynomial),
}

/// Decides whether the class of `grad(m)` vanishes by exact linear solving
/// in the twisted cochain complex.  Closedness of the cocycle is asserted
/// first; its failure would indicate an internal inconsistency.
pub fn obstruction_class(s: &LInftyStructure) -> Result<ObstructionClass> {
    if !s.check_mc()? {
        return Err(Error::Input("structure fails the MC equation".into()));
    }
    let ce = s.ce();
    let div = s.m.divergence();
    let closed = ce.apply(&div)?;
    let limit = ce.reliable_limit();
    for w in 0..=limit {
        if !closed.weight_component(w).is_zero() {
            return Err(Error::Input(
                "divergence cocycle is not closed: internal inconsistency".into(),
            ));
        }
    }
    let target = div.scale(&scalar::ratio(-1, 2));
    match ce.solve(&target, Parity::Even)? {
        CeSolve::Solved(f) => Ok(ObstructionClass::Vanishes(f)),
        CeSolve::Obstructed => Ok(ObstructionClass::Nonzero(div)),
    }
}

/// Trace criterion for an ordinary (quadratic, zero-differential) structure:
/// unimodular iff the supertrace of the adjoint action of every basis vector
/// vanishes.  Works directly on the weight-2 component of the field.
pub fn lie_unimodular(s: &LInftyStructure) -> Result<bool> {
    if !s.check_mc()? {
        return Err(Error::Input("structure constants fail Jacobi/MC".into()));
    }
    let quad = s.m.weight_component(2);
    let map = quad.to_multilinear()?;
    let alg = &s.alg;
    for v in 0..alg.dim() {
        let mut tr = scalar::zero();
        for j in 0..alg.dim() {
            let out = map.eval_word(&[v, j]);
            // supertrace in the parities of the underlying space V, which
            // are the flips of the algebra-generator parities
            let weight = match alg.parity(j) {
                Parity::Even => scalar::int(-1),
                Parity::Odd => scalar::one(),
            };
            tr += &out[j] * weight;
        }
        if !tr.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verdict of `classify_dimension`.
#[derive(Debug, Clone)]
pub enum DivergenceImage {
    /// The divergence map from weight >= 2 fields onto weight >= 1 functions
    /// is surjective at this truncation.
    Surjective,
    /// Purely odd algebra generators in even dimension: the cokernel is one
    /// dimensional, spanned by the top monomial.
    Exceptional { cokernel_representative: Monomial },
}

/// Reports whether the divergence map hits every function of weight
/// `1..=cutoff-1`, by exact rank computation on the monomial basis.
pub fn classify_dimension(space: &GradedSpace, cutoff: usize) -> Result<DivergenceImage> {
    let alg: Arc<GradedSpace> = Arc::new(space.parity_reverse());
    let targets = monomial_basis(&alg, 1, cutoff.saturating_sub(1));
    let index: BTreeMap<&Monomial, usize> =
        targets.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); targets.len()];
    let mut col = 0usize;
    for w in monomial_basis(&alg, 2, cutoff) {
        for i in 0..alg.dim() {
            let mut p = TruncatedPolynomial::zero(alg.clone(), cutoff);
            p.add_monomial(w.clone(), scalar::one());
            let field = Derivation::single(i, p)?;
            let div = field.divergence();
            for (m, c) in div.terms() {
                if m.weight() + 1 <= cutoff {
                    rows[index[m]].insert(col, c.clone());
                }
            }
            col += 1;
        }
    }
    let rank = linalg::rank(&rows, col);
    if rank == targets.len() {
        return Ok(DivergenceImage::Surjective);
    }
    // expected exceptional shape: purely odd generators, even dimension
    let purely_odd = (0..alg.dim()).all(|i| alg.parity(i).is_odd());
    if purely_odd && alg.dim() % 2 == 0 && alg.dim() <= cutoff {
        let top = Monomial((0..alg.dim()).collect());
        // the top monomial must indeed be missed: adjoin it as a column and
        // see the rank grow
        let mut rows2 = rows.clone();
        rows2[index[&top]].insert(col, scalar::one());
        if linalg::rank(&rows2, col + 1) == rank + 1 && rank + 1 == targets.len() {
            return Ok(DivergenceImage::Exceptional {
                cokernel_representative: top,
            });
        }
    }
    Err(Error::Input(
        "divergence image has unexpected corank at this truncation".into(),
    ))
}

/// Enumerates the affine space of volume data for a structure: a particular
/// solution plus a basis of the homogeneous solution space (dimension of the
/// space of lifts at this truncation).
pub fn lift_space(s: &LInftyStructure) -> Result<Option<(TruncatedPolynomial, usize)>> {
    match obstruction_class(s)? {
        ObstructionClass::Nonzero(_) => Ok(None),
        ObstructionClass::Vanishes(f) => {
            let ce = s.ce();
            let r = ce.reliable_limit();
            // homogeneous system: closed even functions of weight 1..=r
            let unknowns: Vec<Monomial> = monomial_basis(&s.alg, 1, r)
                .into_iter()
                .filter(|m| m.parity(&s.alg) == Parity::Even)
                .collect();
            let row_monos = monomial_basis(&s.alg, 0, r);
            let row_index: BTreeMap<&Monomial, usize> =
                row_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); row_monos.len()];
            for (j, u) in unknowns.iter().enumerate() {
                let mut p = TruncatedPolynomial::zero(s.alg.clone(), s.cutoff);
                p.add_monomial(u.clone(), scalar::one());
                let q = ce.apply(&p)?;
                for (m, c) in q.terms() {
                    if m.weight() <= r {
                        rows[row_index[m]].insert(j, c.clone());
                    }
                }
            }
            let dim = linalg::kernel(&rows, unknowns.len()).len();
            Ok(Some((f, dim)))
        }
    }
}

/// Twisted cochain complex of a unimodular pair, for downstream lifting.
pub fn twisted_ce(s: &LInftyStructure) -> CeComplex {
    s.ce()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linf::{abelian, heisenberg, nonunimodular, shifted_algebra, sl2};
    use crate::sampling;
    use crate::scalar::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_element(
        rng: &mut ChaCha8Rng,
        alg: &Arc<GradedSpace>,
        cutoff: usize,
        parity: Parity,
    ) -> SemidirectElement {
        let xi = sampling::random_derivation(rng, alg, cutoff, Some(parity), 2, 3);
        let f = sampling::random_polynomial(rng, alg, cutoff, Some(parity.flip()), 1, 3);
        SemidirectElement::new(xi, f, parity).unwrap()
    }

    #[test]
    fn semidirect_bracket_antisymmetry_and_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let space = sampling::space(2, 2);
        let alg = shifted_algebra(&space);
        let cutoff = 5;
        for _ in 0..20 {
            let px = if rand::Rng::gen_bool(&mut rng, 0.5) { Parity::Even } else { Parity::Odd };
            let py = if rand::Rng::gen_bool(&mut rng, 0.5) { Parity::Even } else { Parity::Odd };
            let pz = if rand::Rng::gen_bool(&mut rng, 0.5) { Parity::Even } else { Parity::Odd };
            let x = random_element(&mut rng, &alg, cutoff, px);
            let y = random_element(&mut rng, &alg, cutoff, py);
            let z = random_element(&mut rng, &alg, cutoff, pz);
            // antisymmetry
            let xy = x.bracket(&y).unwrap();
            let yx = y.bracket(&x).unwrap();
            let sign = px.koszul(py);
            assert!(xy.add(&yx.scale(&int(sign as i64))).unwrap().is_zero());
            // Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
            let lhs = x.bracket(&y.bracket(&z).unwrap()).unwrap();
            let rhs = xy
                .bracket(&z)
                .unwrap()
                .add(
                    &y.bracket(&x.bracket(&z).unwrap())
                        .unwrap()
                        .scale(&int(px.koszul(py) as i64)),
                )
                .unwrap();
            assert!(lhs.add(&rhs.scale(&int(-1))).unwrap().is_zero());
        }
    }

    #[test]
    fn total_differential_squares_to_zero_and_is_a_derivation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let space = Arc::new(GradedSpace::of(&[("a", 0), ("b", 1)]));
        let alg = shifted_algebra(&space);
        let cutoff = 5;
        // a linear odd field with delta^2 = 0 on the shifted algebra
        let mut v1 = TruncatedPolynomial::zero(alg.clone(), cutoff);
        v1.add_word(&[0], int(1));
        // delta(a') = 0 ; delta(b') = a'
        let vals = vec![TruncatedPolynomial::zero(alg.clone(), cutoff), v1];
        let delta = Derivation::new(alg.clone(), Parity::Odd, cutoff, vals).unwrap();
        assert!(delta.bracket(&delta).unwrap().is_zero());
        for _ in 0..12 {
            let p = if rand::Rng::gen_bool(&mut rng, 0.5) { Parity::Even } else { Parity::Odd };
            let x = random_element(&mut rng, &alg, cutoff, p);
            let ddx = total_differential(&delta, &total_differential(&delta, &x).unwrap()).unwrap();
            assert!(ddx.is_zero(), "total differential must square to zero");
            // derivation property over the bracket
            let q = if rand::Rng::gen_bool(&mut rng, 0.5) { Parity::Even } else { Parity::Odd };
            let y = random_element(&mut rng, &alg, cutoff, q);
            let lhs = total_differential(&delta, &x.bracket(&y).unwrap()).unwrap();
            let rhs = total_differential(&delta, &x)
                .unwrap()
                .bracket(&y)
                .unwrap()
                .add(
                    &x.bracket(&total_differential(&delta, &y).unwrap())
                        .unwrap()
                        .scale(&int(p.koszul(Parity::Odd) as i64)),
                )
                .unwrap();
            assert_eq!(lhs, rhs, "Leibniz over the semidirect bracket");
        }
    }

    #[test]
    fn mc_of_pair_is_the_unimodularity_equation() {
        // for odd (m, Pi f): d_e + half-bracket second component equals
        // -(delta f + 1/2 grad m + m(f)) up to overall normalization
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let space = sampling::space(2, 1);
        let alg = shifted_algebra(&space);
        let cutoff = 5;
        for _ in 0..15 {
            let x = random_element(&mut rng, &alg, cutoff, Parity::Odd);
            let mc = external_differential(&x.xi)
                .unwrap()
                .add(&x.bracket(&x).unwrap().scale(&scalar::ratio(1, 2)))
                .unwrap();
            // field component: 1/2 [m, m]
            assert_eq!(mc.xi, x.xi.bracket(&x.xi).unwrap().scale(&scalar::ratio(1, 2)));
            // function component: -(1/2 grad m + m(f)) (delta = 0 here)
            let expected = x
                .xi
                .divergence()
                .scale(&scalar::ratio(-1, 2))
                .add(&x.xi.apply(&x.f).unwrap().scale(&int(-1)))
                .unwrap();
            assert_eq!(mc.f, expected);
        }
    }

    #[test]
    fn external_differential_examples() {
        // divergence-free field maps to zero
        let s = heisenberg(6);
        let d = external_differential(&s.m).unwrap();
        assert!(d.is_zero());
        // quadratic derivation of the solvable algebra: its divergence is
        // the trace class -x', so d_e gives +1/2 Pi x'
        let s = nonunimodular(6);
        let d = external_differential(&s.m).unwrap();
        assert!(d.xi.is_zero());
        let x0 = TruncatedPolynomial::generator(s.alg.clone(), 6, 0);
        assert_eq!(d.f, x0.scale(&scalar::ratio(1, 2)));
    }

    #[test]
    fn unimodularity_checks_on_fixtures() {
        // strict: Heisenberg with f = 0
        let s = heisenberg(6);
        let zero = TruncatedPolynomial::zero(s.alg.clone(), 6);
        let rep = UnimodularStructure::new(s, zero).unwrap().check().unwrap();
        assert!(rep.accepted && rep.strict);
        // abelian with any closed even f is accepted
        let s = abelian(2, 2, 6);
        let mut f = TruncatedPolynomial::zero(s.alg.clone(), 6);
        f.add_word(&[2, 3], int(3)); // product of two odd generators: even
        let rep = UnimodularStructure::new(s, f).unwrap().check().unwrap();
        assert!(rep.accepted && !rep.strict);
        // the solvable algebra admits no volume datum at all
        let s = nonunimodular(6);
        match obstruction_class(&s).unwrap() {
            ObstructionClass::Nonzero(div) => {
                // the cocycle is the trace class -x'
                let x0 = TruncatedPolynomial::generator(s.alg.clone(), 6, 0);
                assert_eq!(div, x0.scale(&int(-1)));
            }
            ObstructionClass::Vanishes(_) => panic!("trace class must obstruct"),
        }
        assert!(lift_space(&s).unwrap().is_none());
    }

    #[test]
    fn trace_criterion_agrees_with_obstruction_class() {
        for (s, expect) in [
            (abelian(3, 0, 6), true),
            (heisenberg(6), true),
            (nonunimodular(6), false),
            (sl2(6), true),
        ] {
            assert_eq!(lie_unimodular(&s).unwrap(), expect);
            let vanishes = matches!(obstruction_class(&s).unwrap(), ObstructionClass::Vanishes(_));
            assert_eq!(vanishes, expect, "routes disagree");
        }
    }

    #[test]
    fn obstructed_structures_still_have_closed_cocycles() {
        let s = nonunimodular(6);
        let ce = s.ce();
        let div = s.m.divergence();
        assert!(ce.apply(&div).unwrap().is_zero());
    }

    #[test]
    fn divergence_image_classification() {
        // mixed parity: surjective
        let v = GradedSpace::of(&[("x", 0), ("t", 1)]);
        assert!(matches!(
            classify_dimension(&v, 4).unwrap(),
            DivergenceImage::Surjective
        ));
        // a single even generator (shifted: one odd): surjective
        let v = GradedSpace::of(&[("t", 1)]);
        assert!(matches!(
            classify_dimension(&v, 4).unwrap(),
            DivergenceImage::Surjective
        ));
        // two even generators shift to two odd ones: one-dimensional cokernel
        let v = GradedSpace::of(&[("x", 0), ("y", 0)]);
        match classify_dimension(&v, 4).unwrap() {
            DivergenceImage::Exceptional {
                cokernel_representative,
            } => assert_eq!(cokernel_representative, Monomial(vec![0, 1])),
            DivergenceImage::Surjective => panic!("expected exceptional case"),
        }
    }

    #[test]
    fn lift_space_reports_affine_dimension() {
        let s = heisenberg(6);
        let (f, dim) = lift_space(&s).unwrap().expect("unimodular");
        // f = 0 works for Heisenberg, and closed functions exist
        let u = UnimodularStructure::new(s, f).unwrap();
        assert!(u.check().unwrap().accepted);
        assert!(dim > 0);
    }
}
