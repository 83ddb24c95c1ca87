//! Built-in verification suite: thirteen numbered criteria covering every
//! major capability of the crate, each evaluated with exact arithmetic
//! (pass means an exactly zero residual or an exactly matching verdict).
//! The suite is deterministic for a fixed seed.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::derivation::Derivation;
use crate::double::{DoubleKind, DoubleSpace, PoissonStructure};
use crate::error::{Error, Result};
use crate::graded::{BilinearForm, GradedSpace, Parity};
use crate::linalg::{self, SparseRow};
use crate::linf::{
    abelian, heisenberg, nonunimodular, shifted_algebra, sl2, CyclicData, LInftyStructure,
};
use crate::mc::{bch, bch_matches_oracle, gauge_apply, is_mc, DerDgla, Dgla, Twisted};
use crate::quantum::{quantum_lift, QuantumLift};
use crate::sampling;
use crate::scalar::{self, Scalar};
use crate::sdr;
use crate::symalg::{monomial_basis, Monomial, TruncatedPolynomial};
use crate::tensor::{frobenius, tensor_linfty, tensor_pairing};
use crate::unimodular::{
    lie_unimodular, obstruction_class, total_differential, ObstructionClass, SemidirectElement,
    UnimodularStructure,
};

/// Result of one verification criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "[{:>4}] {:02} {} ({} ms): {}",
            if self.passed { "pass" } else { "FAIL" },
            self.id,
            self.name,
            self.millis,
            self.details
        )
    }

    pub fn json(&self) -> serde_json::Value {
        json!({
            "id": self.id,
            "name": self.name,
            "status": if self.passed { "pass" } else { "fail" },
            "details": self.details,
            "millis": self.millis,
        })
    }
}

fn run(
    id: usize,
    name: &'static str,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> Criterion {
    let start = Instant::now();
    let (passed, details) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Criterion {
        id,
        name,
        passed,
        details,
        millis: start.elapsed().as_millis(),
    }
}

/// Runs the full suite with the given seed for the randomized criteria.
pub fn run_all(seed: u64) -> Vec<Criterion> {
    vec![
        run(1, "divergence of a commutator", || divergence_cocycle(seed)),
        run(2, "doubling maps preserve brackets", || doubling_maps(seed)),
        run(3, "divergence via the odd Laplacian", || {
            divergence_via_laplacian(seed)
        }),
        run(4, "semidirect differential squares to zero", || {
            semidirect_square_zero(seed)
        }),
        run(5, "unimodularity of Lie fixtures", unimodular_fixtures),
        run(6, "image of the divergence map", divergence_image),
        run(7, "tensor grid: strictness and lifts", tensor_grid),
        run(8, "quantum lifts and obstructions", quantum_fixtures),
        run(9, "low-genus consistency", low_genus_consistency),
        run(10, "Frobenius-model consequences", frobenius_consequences),
        run(11, "BCH oracle and gauge action", || bch_and_gauge(seed)),
        run(12, "retraction repair", || retraction_repair(seed)),
        run(13, "multilinear dictionary normalization", dictionary_convention),
    ]
}

/// 1: `div[xi,eta] = xi(div eta) - (-1)^{|xi||eta|} eta(div xi)` on 100
/// random pairs over spaces of dimension up to 2|2, cutoff 6.
fn divergence_cocycle(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spaces = [
        sampling::space(2, 2),
        sampling::space(1, 2),
        sampling::space(2, 1),
        sampling::space(1, 1),
    ];
    let mut count = 0usize;
    for k in 0..100 {
        let v = &spaces[k % spaces.len()];
        let xi = sampling::random_derivation(&mut rng, v, 6, None, 0, 3);
        let eta = sampling::random_derivation(&mut rng, v, 6, None, 0, 3);
        let lhs = xi.bracket(&eta)?.divergence();
        let sign = xi.parity.koszul(eta.parity);
        let rhs = xi
            .apply(&eta.divergence())?
            .add(&eta.apply(&xi.divergence())?.scale(&scalar::int(-sign as i64)))?;
        if lhs != rhs {
            return Ok((false, format!("pair {k}: nonzero residual")));
        }
        count += 1;
    }
    Ok((true, format!("{count} random pairs, residual exactly 0")))
}

/// 2: the even double is a bracket map, the odd double satisfies the odd-map
/// identity with the `(-1)^{|xi|}` factor, 50 random pairs each.
fn doubling_maps(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2);
    let bases = [sampling::space(1, 1), sampling::space(2, 1)];
    let mut even = 0usize;
    let mut odd = 0usize;
    for k in 0..50 {
        let base = &bases[k % bases.len()];
        let ev = DoubleSpace::new(base.clone(), DoubleKind::Even);
        let od = DoubleSpace::new(base.clone(), DoubleKind::Odd);
        let (pe, po) = (ev.poisson(), od.poisson());
        let xi = sampling::random_derivation(&mut rng, base, 6, None, 0, 3);
        let eta = sampling::random_derivation(&mut rng, base, 6, None, 0, 3);
        let br = xi.bracket(&eta)?;
        let lhs = ev.double_even(&br)?;
        let rhs = pe.bracket(&ev.double_even(&xi)?, &ev.double_even(&eta)?)?;
        if lhs != rhs {
            return Ok((false, format!("even pair {k}: bracket not preserved")));
        }
        even += 1;
        let lhs = od.double_odd(&br)?;
        let mut rhs = po.bracket(&od.double_odd(&xi)?, &od.double_odd(&eta)?)?;
        if xi.parity.is_odd() {
            rhs = rhs.scale(&scalar::int(-1));
        }
        if lhs != rhs {
            return Ok((false, format!("odd pair {k}: identity fails")));
        }
        odd += 1;
    }
    Ok((true, format!("{even} even and {odd} odd pairs, exact")))
}

/// 3: `div(xi) = Lap(D_od xi)` on 50 random fields, plus divergence-freeness
/// of the Hamiltonian field of every even double.
fn divergence_via_laplacian(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3);
    let bases = [sampling::space(2, 1), sampling::space(1, 2)];
    for k in 0..50 {
        let base = &bases[k % bases.len()];
        let od = DoubleSpace::new(base.clone(), DoubleKind::Odd);
        let po = od.poisson();
        let xi = sampling::random_derivation(&mut rng, base, 6, None, 0, 3);
        let lhs = od.embed(&xi.divergence())?;
        let dod = od.double_odd(&xi)?;
        if lhs != po.laplacian(&dod)? {
            return Ok((false, format!("field {k}: Laplacian identity fails")));
        }
        let ev = DoubleSpace::new(base.clone(), DoubleKind::Even);
        let dev = ev.double_even(&xi)?;
        if !ev.poisson().hamiltonian_field(&dev)?.divergence().is_zero() {
            return Ok((false, format!("field {k}: even double is not divergence free")));
        }
    }
    Ok((true, "50 random fields, both identities exact".into()))
}

/// 4: `(d + d_e)^2 = 0` on 50 random semidirect elements over random linear
/// square-zero differentials (odd linear maps have vanishing supertrace).
fn semidirect_square_zero(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4);
    let cutoff = 5;
    for k in 0..50 {
        let space = if k % 2 == 0 {
            sampling::space(1, 1)
        } else {
            sampling::space(2, 2)
        };
        let alg = shifted_algebra(&space);
        // random square-zero odd linear differential: even generators map to
        // random combinations of odd generators, odd generators map to zero
        let values: Vec<TruncatedPolynomial> = (0..alg.dim())
            .map(|i| {
                let mut p = TruncatedPolynomial::zero(alg.clone(), cutoff);
                if !alg.parity(i).is_odd() {
                    for j in 0..alg.dim() {
                        if alg.parity(j).is_odd() {
                            let c: i64 = rng.gen_range(-2..=2);
                            if c != 0 {
                                p.add_word(&[j], scalar::int(c));
                            }
                        }
                    }
                }
                p
            })
            .collect();
        let delta = Derivation::new(alg.clone(), Parity::Odd, cutoff, values)?;
        if !delta.bracket(&delta)?.is_zero() {
            return Ok((false, format!("sample {k}: delta fails to square to zero")));
        }
        let p = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let xi = sampling::random_derivation(&mut rng, &alg, cutoff, Some(p), 2, 3);
        let f = sampling::random_polynomial(&mut rng, &alg, cutoff, Some(p.flip()), 1, 3);
        let e = SemidirectElement::new(xi, f, p)?;
        let dd = total_differential(&delta, &total_differential(&delta, &e)?)?;
        if !dd.is_zero() {
            return Ok((false, format!("sample {k}: square of the differential is nonzero")));
        }
    }
    Ok((true, "50 random semidirect elements, exact".into()))
}

/// 5: the supertrace criterion and the weight-1 obstruction class agree on
/// the Lie fixtures; the solvable algebra is obstructed, Heisenberg is not.
fn unimodular_fixtures() -> Result<(bool, String)> {
    let fixtures: Vec<(&str, LInftyStructure, bool)> = vec![
        ("abelian", abelian(3, 0, 6), true),
        ("heisenberg", heisenberg(6), true),
        ("solvable", nonunimodular(6), false),
        ("sl2", sl2(6), true),
    ];
    for (name, s, expect) in &fixtures {
        if lie_unimodular(s)? != *expect {
            return Ok((false, format!("{name}: trace criterion disagrees")));
        }
        let vanishes = matches!(obstruction_class(s)?, ObstructionClass::Vanishes(_));
        if vanishes != *expect {
            return Ok((false, format!("{name}: obstruction class disagrees")));
        }
    }
    // the solvable fixture carries the explicit trace cocycle -x'
    let s = nonunimodular(6);
    match obstruction_class(&s)? {
        ObstructionClass::Nonzero(div) => {
            let x0 = TruncatedPolynomial::generator(s.alg.clone(), 6, 0);
            if div != x0.scale(&scalar::int(-1)) {
                return Ok((false, "solvable: unexpected cocycle representative".into()));
            }
        }
        ObstructionClass::Vanishes(_) => return Ok((false, "solvable must obstruct".into())),
    }
    Ok((true, "4 fixtures, both routes agree".into()))
}

/// 6: exhaustive image computation for the divergence at cutoff 4: on a
/// purely even 2-dimensional space the top monomial of the shifted algebra
/// is missed and everything else is hit; on a 1|1 space the map is onto.
fn divergence_image() -> Result<(bool, String)> {
    let cutoff = 4;
    // rows of the divergence matrix over the monomial basis
    let image_table = |alg: &Arc<GradedSpace>| -> Result<(Vec<Monomial>, Vec<SparseRow>, usize)> {
        let targets = monomial_basis(alg, 1, cutoff - 1);
        let index: BTreeMap<&Monomial, usize> =
            targets.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); targets.len()];
        let mut col = 0usize;
        for w in monomial_basis(alg, 2, cutoff) {
            for i in 0..alg.dim() {
                let mut p = TruncatedPolynomial::zero(alg.clone(), cutoff);
                p.add_monomial(w.clone(), scalar::one());
                let div = Derivation::single(i, p)?.divergence();
                for (m, c) in div.terms() {
                    if m.weight() < cutoff {
                        rows[index[m]].insert(col, c.clone());
                    }
                }
                col += 1;
            }
        }
        Ok((targets, rows, col))
    };
    // purely even space: shifted algebra is 0|2
    let even2 = GradedSpace::of(&[("x", 0), ("y", 0)]);
    let alg: Arc<GradedSpace> = Arc::new(even2.parity_reverse());
    let (targets, rows, cols) = image_table(&alg)?;
    let top = Monomial(vec![0, 1]);
    for (t, m) in targets.iter().enumerate() {
        let mut rhs = vec![scalar::zero(); targets.len()];
        rhs[t] = scalar::one();
        let solvable = linalg::solve(&rows, &rhs, cols).is_some();
        if *m == top && solvable {
            return Ok((false, "top monomial should be missed".into()));
        }
        if *m != top && !solvable {
            return Ok((false, format!("monomial {t} should be hit")));
        }
    }
    match crate::unimodular::classify_dimension(&even2, cutoff)? {
        crate::unimodular::DivergenceImage::Exceptional {
            cokernel_representative,
        } if cokernel_representative == top => {}
        _ => return Ok((false, "classification disagrees on the even plane".into())),
    }
    // mixed 1|1 space: surjective
    let mixed = GradedSpace::of(&[("x", 0), ("t", 1)]);
    let algm: Arc<GradedSpace> = Arc::new(mixed.parity_reverse());
    let (targets, rows, cols) = image_table(&algm)?;
    for t in 0..targets.len() {
        let mut rhs = vec![scalar::zero(); targets.len()];
        rhs[t] = scalar::one();
        if linalg::solve(&rows, &rhs, cols).is_none() {
            return Ok((false, format!("mixed space: monomial {t} missed")));
        }
    }
    if !matches!(
        crate::unimodular::classify_dimension(&mixed, cutoff)?,
        crate::unimodular::DivergenceImage::Surjective
    ) {
        return Ok((false, "classification disagrees on the mixed space".into()));
    }
    Ok((true, "exhaustive certificates at cutoff 4".into()))
}

/// 7: 3x3 grid of coefficient algebras and Lie fixtures at cutoff 5: strict
/// unimodularity and lift existence of the tensor both follow the product
/// rule (coefficients unimodular, or the fixture has the property).
fn tensor_grid() -> Result<(bool, String)> {
    let cells = [("k", false), ("H_S1", true), ("H_S2", false)];
    let fixtures = |cut: usize| {
        vec![
            ("abelian", abelian(1, 1, cut), true, true),
            ("heisenberg", heisenberg(cut), true, true),
            ("solvable", nonunimodular(cut), false, false),
        ]
    };
    let mut n = 0usize;
    for (name, a_uni) in &cells {
        let a = frobenius(name)?;
        for (fname, s, v_strict, v_lift) in fixtures(5) {
            let t = tensor_linfty(&a, &s)?;
            if !t.check_mc()? {
                return Ok((false, format!("{name} x {fname}: tensor fails MC")));
            }
            let strict = t.m.divergence().is_zero();
            if strict != (*a_uni || v_strict) {
                return Ok((false, format!("{name} x {fname}: strictness verdict wrong")));
            }
            let lifts = matches!(obstruction_class(&t)?, ObstructionClass::Vanishes(_));
            if lifts != (*a_uni || v_lift) {
                return Ok((false, format!("{name} x {fname}: lift verdict wrong")));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} cells, both verdicts match")))
}

fn odd_double_of(s: &LInftyStructure) -> Result<(Arc<PoissonStructure>, TruncatedPolynomial)> {
    let d = DoubleSpace::new(s.alg.clone(), DoubleKind::Odd);
    let pb = Arc::new(d.poisson());
    let s0 = d.double_odd(&s.m)?;
    Ok((pb, s0))
}

/// 8: the odd double of Heisenberg lifts to genus 2 at weight 6 with a zero
/// residual; the odd double of the solvable algebra is obstructed at genus 1
/// with a nonzero certificate.
fn quantum_fixtures() -> Result<(bool, String)> {
    let s = heisenberg(6);
    let (pb, s0) = odd_double_of(&s)?;
    let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
    match quantum_lift(pb, delta, 6, s0, 2)? {
        QuantumLift::Lifted(q) => {
            let rep = q.check()?;
            if !rep.accepted {
                return Ok((false, "Heisenberg lift has a nonzero residual".into()));
            }
        }
        QuantumLift::Obstructed { .. } => {
            return Ok((false, "Heisenberg must lift".into()));
        }
    }
    let s = nonunimodular(6);
    let (pb, s0) = odd_double_of(&s)?;
    let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
    match quantum_lift(pb.clone(), delta, 6, s0.clone(), 1)? {
        QuantumLift::Obstructed { genus, witness } => {
            if genus != 1 || witness.is_zero() || witness != pb.laplacian(&s0)? {
                return Ok((false, "wrong obstruction certificate".into()));
            }
        }
        QuantumLift::Lifted(_) => {
            return Ok((false, "the solvable double must obstruct".into()));
        }
    }
    Ok((true, "Heisenberg lifts to genus 2; solvable obstructed at genus 1".into()))
}

/// 9: every accepted quantum fixture restricts consistently: genus 0 passes
/// the structure equation, and the genus-(0,1) pair is a unimodular
/// structure for the Hamiltonian field of the leading term.
fn low_genus_consistency() -> Result<(bool, String)> {
    let mut count = 0usize;
    for s in [abelian(2, 1, 6), heisenberg(6), sl2(6)] {
        let (pb, s0) = odd_double_of(&s)?;
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
        let q = match quantum_lift(pb, delta, 6, s0, 2)? {
            QuantumLift::Lifted(q) => q,
            QuantumLift::Obstructed { .. } => {
                return Ok((false, "unimodular fixture failed to lift".into()));
            }
        };
        if !q.check()?.accepted {
            return Ok((false, "lift not accepted".into()));
        }
        let base = q.classical()?;
        if !base.check_mc()? {
            return Ok((false, "genus-0 part fails the structure equation".into()));
        }
        let u = UnimodularStructure::new(base, q.genus[1].clone())?;
        if !u.check()?.accepted {
            return Ok((false, "genus-(0,1) pair is not unimodular".into()));
        }
        count += 1;
    }
    Ok((true, format!("{count} lifted fixtures consistent at low genus")))
}

/// The odd double of a Lie fixture as a cyclic structure on the unshifted
/// doubled space, with the canonical odd form.
fn doubled_cyclic(s: &LInftyStructure, cutoff: usize) -> Result<(LInftyStructure, CyclicData)> {
    let d = DoubleSpace::new(s.alg.clone(), DoubleKind::Odd);
    let pb = d.poisson();
    let s0 = d.double_odd(&s.m)?;
    let field = pb.hamiltonian_field(&s0)?;
    let v2 = Arc::new(d.total.parity_reverse());
    let sd = LInftyStructure::with_zero_d(v2.clone(), cutoff, field)?;
    let n = v2.dim();
    let mut mat = vec![vec![scalar::zero(); n]; n];
    for ((i, j), c) in pb.table() {
        mat[*i][*j] = c.clone();
    }
    let inv = linalg::invert(&mat)
        .ok_or_else(|| Error::Degenerate("double bracket table must invert".into()))?;
    let mut entries = BTreeMap::new();
    for (i, row) in inv.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() && i <= j {
                entries.insert((i, j), c.clone());
            }
        }
    }
    let form = BilinearForm::new(v2, Parity::Odd, entries)?;
    Ok((sd, CyclicData::new(form)))
}

/// 10: tensoring the solvable double with the sphere models: the
/// 2-sphere coefficients leave it obstructed, while the circle and 3-sphere
/// coefficients make it strictly unimodular and quantum-liftable at genus 1.
fn frobenius_consequences() -> Result<(bool, String)> {
    let cutoff = 5;
    let s = nonunimodular(cutoff);
    let (sd, data) = doubled_cyclic(&s, cutoff)?;
    for name in ["H_S1", "H_S3"] {
        let a = frobenius(name)?;
        // the tensor pairing keeps the doubled structure cyclic
        let td = tensor_linfty(&a, &sd)?;
        let tdata = tensor_pairing(&a, &data, &sd.complex.space)?;
        if !tdata.check_cyclic(&td)? {
            return Ok((false, format!("{name}: tensor lost cyclicity")));
        }
        // the tensor of the original structure is strictly unimodular and
        // its odd double lifts at genus 1
        let t = tensor_linfty(&a, &s)?;
        if !t.m.divergence().is_zero() {
            return Ok((false, format!("{name}: tensor is not strictly unimodular")));
        }
        let (pb, s0) = odd_double_of(&t)?;
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, cutoff);
        match quantum_lift(pb, delta, cutoff, s0, 1)? {
            QuantumLift::Lifted(q) => {
                if !q.check()?.accepted {
                    return Ok((false, format!("{name}: genus-1 lift rejected")));
                }
            }
            QuantumLift::Obstructed { .. } => {
                return Ok((false, format!("{name}: genus-1 lift must exist")));
            }
        }
    }
    let a = frobenius("H_S2")?;
    let t = tensor_linfty(&a, &s)?;
    if !matches!(obstruction_class(&t)?, ObstructionClass::Nonzero(_)) {
        return Ok((false, "H_S2: tensor must stay obstructed".into()));
    }
    let (pb, s0) = odd_double_of(&t)?;
    let delta = Derivation::zero(pb.space.clone(), Parity::Odd, cutoff);
    match quantum_lift(pb, delta, cutoff, s0, 1)? {
        QuantumLift::Obstructed { genus, witness } => {
            if genus != 1 || witness.is_zero() {
                return Ok((false, "H_S2: wrong obstruction certificate".into()));
            }
        }
        QuantumLift::Lifted(_) => {
            return Ok((false, "H_S2: genus-1 lift must not exist".into()));
        }
    }
    Ok((true, "H_S1/H_S3 cyclic, strict, lift at genus 1; H_S2 obstructed".into()))
}

/// 11: the Dynkin series matches a universal-envelope oracle to degree 4;
/// the gauge action preserves the structure equation on 100 samples and
/// satisfies the group law; twisted-exact even elements stabilize.
fn bch_and_gauge(seed: u64) -> Result<(bool, String)> {
    for deg in 1..=4 {
        if !bch_matches_oracle(deg)? {
            return Ok((false, format!("series mismatch at degree {deg}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb);
    let mut samples = 0usize;
    let mut moved_any = false;
    // the doubled structure lives on a mixed-parity space, so the sampled
    // even gauge fields there are nonzero and the orbit is nontrivial
    let (doubled, _) = doubled_cyclic(&nonunimodular(5), 5)?;
    for (s, count) in [(heisenberg(5), 25), (nonunimodular(5), 25), (doubled, 4)] {
        let g = DerDgla::new(s.alg.clone(), 5, s.delta.clone())?;
        for _ in 0..count {
            let y = sampling::random_derivation(&mut rng, &s.alg, 5, Some(Parity::Even), 2, 3);
            let moved = gauge_apply(&g, &y, &s.m)?;
            if !is_mc(&g, &moved)? {
                return Ok((false, "gauge output fails the structure equation".into()));
            }
            moved_any |= moved != s.m;
            samples += 1;
            let y2 = sampling::random_derivation(&mut rng, &s.alg, 5, Some(Parity::Even), 2, 3);
            let lhs = gauge_apply(&g, &y2, &moved)?;
            let rhs = gauge_apply(&g, &bch(&g, &y2, &y)?, &s.m)?;
            if lhs != rhs {
                return Ok((false, "group law fails".into()));
            }
            samples += 1;
        }
        // stabilizer: twisted-exact even elements fix the structure
        let tw = Twisted::new(&g, s.m.clone())?;
        for _ in 0..25 {
            let z = sampling::random_derivation(&mut rng, &s.alg, 5, Some(Parity::Odd), 2, 3);
            let y = tw.d(&z)?;
            if gauge_apply(&g, &y, &s.m)? != s.m {
                return Ok((false, "stabilizer element moved the structure".into()));
            }
            samples += 1;
        }
    }
    if !moved_any {
        return Ok((false, "gauge action never moved a structure".into()));
    }
    Ok((true, format!("oracle to degree 4; {samples} gauge samples exact")))
}

/// 12: twenty perturbed retractions on complexes of dimension at most 4 are
/// upgraded to full SDRs by the repair formulas, re-verified condition by
/// condition (all eight where forms are present).
fn retraction_repair(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc);
    let mut with_forms = 0usize;
    for k in 0..20 {
        let data = sdr::samples::perturbed(&mut rng, k);
        if !data.check()?.retraction() {
            return Ok((false, format!("sample {k}: perturbation broke the retraction")));
        }
        let fixed = data.repair()?;
        let rep = fixed.check()?;
        if !rep.all() {
            return Ok((false, format!("sample {k}: repair left a failing condition")));
        }
        if rep.isometry.is_some() {
            with_forms += 1;
        }
    }
    Ok((true, format!("20 retractions repaired ({with_forms} with forms)")))
}

/// 13: normalization guard: the multilinear component of `t^n d/dt` is
/// multiplication by `n!` for `n = 2, 3, 4`.
fn dictionary_convention() -> Result<(bool, String)> {
    let v = Arc::new(GradedSpace::of(&[("t", 0)]));
    for n in 2..=4usize {
        let t = TruncatedPolynomial::generator(v.clone(), 8, 0);
        let mut tn = t.clone();
        for _ in 1..n {
            tn = tn.mul(&t)?;
        }
        let xi = Derivation::single(0, tn)?;
        let m = xi.to_multilinear()?;
        let out = m.eval_word(&vec![0; n]);
        let mut fact: Scalar = scalar::one();
        for k in 2..=n {
            fact *= scalar::int(k as i64);
        }
        if out[0] != fact {
            return Ok((false, format!("n = {n}: wrong normalization")));
        }
        if m.to_derivation(8, xi.parity)? != xi {
            return Ok((false, format!("n = {n}: dictionary does not invert")));
        }
    }
    Ok((true, "multiplication by n! for n = 2, 3, 4".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        // the fast criteria, as a smoke test; the full suite runs in the
        // dedicated acceptance target
        for c in [
            run(5, "fixtures", unimodular_fixtures),
            run(6, "image", divergence_image),
            run(13, "dictionary", dictionary_convention),
        ] {
            assert!(c.passed, "{}", c.line());
        }
    }
}
