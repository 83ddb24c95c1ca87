//! Genus-expanded structures on odd Poisson spaces: the master equation
//! for a series `S = S_0 + h S_1 + ...`, residual reports per genus and
//! weight, and order-by-order lifting with exact obstruction certificates.

use crate::derivation::Derivation;
use crate::double::PoissonStructure;
use crate::error::{Error, Result};
use crate::graded::Parity;
use crate::linf::{CeComplex, CeSolve, LInftyStructure};
use crate::scalar::{self};
use crate::symalg::TruncatedPolynomial;
use std::sync::Arc;

/// A series of even functions `S_0, ..., S_G` on an odd Poisson space,
/// together with an optional linear differential.  Genus `g` components
/// carry the weight constraint `2g + n > 2` on every word length `n`.
#[derive(Debug, Clone)]
pub struct QuantumStructure {
    pub pb: Arc<PoissonStructure>,
    /// Linear differential on the function algebra (zero for plain Lie data).
    pub delta: Derivation,
    pub cutoff: usize,
    /// `genus[g]` is `S_g`.
    pub genus: Vec<TruncatedPolynomial>,
}

/// Residual report of the master equation, genus by genus.
#[derive(Debug, Clone)]
pub struct QmeReport {
    pub accepted: bool,
    /// For each genus: weights (within the reliable range) where the
    /// residual is nonzero.
    pub failing: Vec<(usize, Vec<usize>)>,
    /// Residuals are exact for weights up to this bound.
    pub reliable_weight: usize,
}

impl QuantumStructure {
    pub fn new(
        pb: Arc<PoissonStructure>,
        delta: Derivation,
        cutoff: usize,
        genus: Vec<TruncatedPolynomial>,
    ) -> Result<QuantumStructure> {
        if !pb.parity.is_odd() {
            return Err(Error::Parity("the bracket must be odd".into()));
        }
        if delta.space != pb.space {
            return Err(Error::SpaceMismatch);
        }
        for (g, s) in genus.iter().enumerate() {
            if s.space != pb.space {
                return Err(Error::SpaceMismatch);
            }
            if let Some(p) = s.parity() {
                if p.is_odd() {
                    return Err(Error::Parity(format!("genus-{g} component must be even")));
                }
            }
            if let Some(w) = s.min_weight() {
                if 2 * g + w <= 2 {
                    return Err(Error::Input(format!(
                        "genus-{g} component has a word of length {w}; 2g + n > 2 required"
                    )));
                }
            }
        }
        Ok(QuantumStructure {
            pb,
            delta,
            cutoff,
            genus,
        })
    }

    pub fn s0(&self) -> TruncatedPolynomial {
        self.genus
            .first()
            .cloned()
            .unwrap_or_else(|| TruncatedPolynomial::zero(self.pb.space.clone(), self.cutoff))
    }

    /// How far the quadratic part of the equation can raise weight: the
    /// genus-wise residual at weight `w` only consumes component weights up
    /// to `w + 2`, so verdicts are exact for `w <= cutoff - raise`.
    fn weight_raise(&self) -> usize {
        let top = self
            .genus
            .iter()
            .filter_map(|s| s.max_weight())
            .max()
            .unwrap_or(2);
        top.saturating_sub(2).max(2)
    }

    pub fn reliable_weight(&self) -> usize {
        self.cutoff.saturating_sub(self.weight_raise())
    }

    /// Coefficient of `h^g` in `(d + h Lap) S + 1/2 {S, S}`.
    pub fn residual(&self, g: usize) -> Result<TruncatedPolynomial> {
        let zero = TruncatedPolynomial::zero(self.pb.space.clone(), self.cutoff);
        let sg = self.genus.get(g).unwrap_or(&zero);
        let mut r = self.delta.apply(sg)?;
        if g >= 1 {
            if let Some(prev) = self.genus.get(g - 1) {
                r = r.add(&self.pb.laplacian(prev)?)?;
            }
        }
        for i in 0..=g {
            let j = g - i;
            let (Some(si), Some(sj)) = (self.genus.get(i), self.genus.get(j)) else {
                continue;
            };
            let b = self.pb.bracket(si, sj)?.scale(&scalar::ratio(1, 2));
            r = r.add(&b)?;
        }
        Ok(r)
    }

    /// Residuals for all genera `0..=G` where `G` is the last stored genus
    /// plus one (the first equation the series can fail beyond its data).
    pub fn check(&self) -> Result<QmeReport> {
        let reliable = self.reliable_weight();
        let mut failing = Vec::new();
        let top = self.genus.len();
        for g in 0..=top {
            let r = self.residual(g)?;
            let bad: Vec<usize> = (0..=reliable)
                .filter(|&w| !r.weight_component(w).is_zero())
                .collect();
            if !bad.is_empty() {
                failing.push((g, bad));
            }
        }
        Ok(QmeReport {
            accepted: failing.is_empty(),
            failing,
            reliable_weight: reliable,
        })
    }

    /// The classical structure `X_{S_0}` (with the stored linear part).
    pub fn classical(&self) -> Result<LInftyStructure> {
        let field = self.pb.hamiltonian_field(&self.s0())?;
        // the function algebra of the classical structure is the Poisson
        // space itself, so the underlying space is its parity reverse
        let complex = crate::graded::Complex::zero_differential(Arc::new(
            self.pb.space.parity_reverse(),
        ));
        if !self.delta.is_zero() {
            return Err(Error::Input(
                "classical extraction with a nonzero linear part is done via the odd double"
                    .into(),
            ));
        }
        LInftyStructure::new(complex, self.cutoff, field)
    }
}

/// Outcome of the order-by-order lift.
#[derive(Debug, Clone)]
pub enum QuantumLift {
    /// Components `S_1..=S_G` extending `S_0`, plus the affine dimension of
    /// the solution space found at each genus.
    Lifted(QuantumStructure),
    /// First failing genus and the nonzero inhomogeneous class.
    Obstructed {
        genus: usize,
        witness: TruncatedPolynomial,
    },
}

/// Solves the master equation order by order in `h`, starting from a
/// classical solution `S_0` (which must satisfy `d S_0 + 1/2 {S_0,S_0} = 0`).
/// At genus `g` the unknown `S_g` solves a twisted linear system whose
/// inhomogeneous term is checked to be closed first: a failure there would
/// mean an upstream bug, not an obstruction.
pub fn quantum_lift(
    pb: Arc<PoissonStructure>,
    delta: Derivation,
    cutoff: usize,
    s0: TruncatedPolynomial,
    genus_cutoff: usize,
) -> Result<QuantumLift> {
    let mut q = QuantumStructure::new(pb.clone(), delta.clone(), cutoff, vec![s0.clone()])?;
    if !q.residual(0)?.is_zero() {
        return Err(Error::Input("S_0 fails the classical master equation".into()));
    }
    let raise_field = pb.hamiltonian_field(&s0)?;
    let ce = CeComplex {
        alg: pb.space.clone(),
        cutoff,
        delta: delta.clone(),
        raise: raise_field,
    };
    for g in 1..=genus_cutoff {
        // inhomogeneous term: Lap S_{g-1} + 1/2 sum_{i+j=g, i,j>=1} {S_i,S_j}
        let mut c = pb.laplacian(&q.genus[g - 1])?;
        for i in 1..g {
            let j = g - i;
            let b = pb
                .bracket(&q.genus[i], &q.genus[j])?
                .scale(&scalar::ratio(1, 2));
            c = c.add(&b)?;
        }
        let closed = ce.apply(&c)?;
        let limit = ce.reliable_limit();
        if (0..=limit).any(|w| !closed.weight_component(w).is_zero()) {
            return Err(Error::Input(
                "inhomogeneous term is not closed: internal inconsistency".into(),
            ));
        }
        match ce.solve(&c.scale(&scalar::int(-1)), Parity::Even)? {
            CeSolve::Obstructed => {
                return Ok(QuantumLift::Obstructed { genus: g, witness: c });
            }
            CeSolve::Solved(sg) => {
                q.genus.push(sg);
            }
        }
    }
    Ok(QuantumLift::Lifted(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::{DoubleKind, DoubleSpace};
    use crate::linf::{heisenberg, nonunimodular, sl2};
    use crate::unimodular::UnimodularStructure;

    fn odd_double_of(s: &LInftyStructure) -> (DoubleSpace, Arc<PoissonStructure>, TruncatedPolynomial) {
        let d = DoubleSpace::new(s.alg.clone(), DoubleKind::Odd);
        let pb = Arc::new(d.poisson());
        let s0 = d.double_odd(&s.m).unwrap();
        (d, pb, s0)
    }

    #[test]
    fn zero_series_is_accepted_and_lifts_trivially() {
        let s = heisenberg(6);
        let (_, pb, _) = odd_double_of(&s);
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
        let q = QuantumStructure::new(pb.clone(), delta.clone(), 6, vec![]).unwrap();
        assert!(q.check().unwrap().accepted);
        let zero = TruncatedPolynomial::zero(pb.space.clone(), 6);
        match quantum_lift(pb, delta, 6, zero, 2).unwrap() {
            QuantumLift::Lifted(q) => assert!(q.genus.iter().all(|s| s.is_zero())),
            QuantumLift::Obstructed { .. } => panic!("zero must lift"),
        }
    }

    #[test]
    fn classical_doubles_satisfy_the_genus_zero_equation() {
        for s in [heisenberg(6), nonunimodular(6), sl2(6)] {
            let (_, pb, s0) = odd_double_of(&s);
            let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
            let q = QuantumStructure::new(pb.clone(), delta, 6, vec![s0]).unwrap();
            assert!(q.residual(0).unwrap().is_zero());
            // genus-0 extraction passes the structure equation
            assert!(q.classical().unwrap().check_mc().unwrap());
        }
    }

    #[test]
    fn heisenberg_lifts_and_the_lift_is_accepted() {
        let s = heisenberg(6);
        let (_, pb, s0) = odd_double_of(&s);
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
        match quantum_lift(pb.clone(), delta, 6, s0, 2).unwrap() {
            QuantumLift::Lifted(q) => {
                assert!(q.check().unwrap().accepted);
                // genus-1 pair is a unimodular structure for X_{S_0}
                let base = q.classical().unwrap();
                let u = UnimodularStructure::new(base, q.genus[1].clone()).unwrap();
                assert!(u.check().unwrap().accepted);
            }
            QuantumLift::Obstructed { .. } => panic!("unimodular data must lift"),
        }
    }

    #[test]
    fn divergence_free_double_admits_the_constant_lift() {
        // Lap S_0 = 0 here, so S = S_0 solves the full equation
        let s = heisenberg(6);
        let (_, pb, s0) = odd_double_of(&s);
        assert!(pb.laplacian(&s0).unwrap().is_zero());
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
        let q = QuantumStructure::new(pb, delta, 6, vec![s0]).unwrap();
        assert!(q.check().unwrap().accepted);
    }

    #[test]
    fn solvable_algebra_is_obstructed_at_genus_one() {
        let s = nonunimodular(6);
        let (_, pb, s0) = odd_double_of(&s);
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
        match quantum_lift(pb.clone(), delta, 6, s0.clone(), 1).unwrap() {
            QuantumLift::Obstructed { genus, witness } => {
                assert_eq!(genus, 1);
                // the witness is the Laplacian of S_0, a nonzero multiple of
                // the trace class
                assert_eq!(witness, pb.laplacian(&s0).unwrap());
                assert!(!witness.is_zero());
            }
            QuantumLift::Lifted(_) => panic!("non-unimodular data must obstruct"),
        }
    }

    #[test]
    fn genus_one_equation_is_the_unimodularity_equation() {
        // for any even f of weight >= 1, residual_1 of (S_0, f) equals the
        // unimodularity residual of (X_{S_0}, f)
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let s = sl2(5);
        let (_, pb, s0) = odd_double_of(&s);
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 5);
        for _ in 0..8 {
            let f = crate::sampling::random_polynomial(
                &mut rng,
                &pb.space,
                5,
                Some(Parity::Even),
                1,
                3,
            );
            let q = QuantumStructure::new(pb.clone(), delta.clone(), 5, vec![s0.clone(), f.clone()])
                .unwrap();
            let r1 = q.residual(1).unwrap();
            let base = q.classical().unwrap();
            let u = UnimodularStructure::new(base, f).unwrap();
            assert_eq!(r1, u.residual().unwrap());
        }
    }

    #[test]
    fn laplacian_of_a_classical_solution_is_closed() {
        for s in [heisenberg(6), nonunimodular(6), sl2(6)] {
            let (_, pb, s0) = odd_double_of(&s);
            let lap = pb.laplacian(&s0).unwrap();
            let field = pb.hamiltonian_field(&s0).unwrap();
            let image = field.apply(&lap).unwrap();
            assert!(image.is_zero());
        }
    }

    #[test]
    fn weight_constraint_is_enforced() {
        let s = heisenberg(4);
        let (_, pb, _) = odd_double_of(&s);
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 4);
        // a weight-2 word at genus 0 violates 2g + n > 2
        let mut bad = TruncatedPolynomial::zero(pb.space.clone(), 4);
        bad.add_word(&[0, 1], scalar::one());
        assert!(QuantumStructure::new(pb.clone(), delta.clone(), 4, vec![bad.clone()]).is_err());
        // the same word at genus 1 is fine
        let zero = TruncatedPolynomial::zero(pb.space.clone(), 4);
        if bad.parity() == Some(Parity::Even) {
            assert!(QuantumStructure::new(pb, delta, 4, vec![zero, bad]).is_ok());
        }
    }
}
