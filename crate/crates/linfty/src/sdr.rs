//! Strong deformation retraction (SDR) data between finite-dimensional
//! complexes: a per-condition validator and a repair routine that upgrades a
//! retraction satisfying the chain-level conditions into a full SDR by
//! replacing the homotopy.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{BilinearForm, Complex, LinearMap, Parity};
use crate::linalg::{self, SparseRow};
use crate::scalar::{self, Scalar};
use num_traits::Zero;

/// Retraction data between a big complex `V` and a small complex `B`:
/// an inclusion `i : B -> V`, a projection `p : V -> B` (both even) and a
/// homotopy `s : V -> V` (odd).  Bilinear forms on both sides are optional;
/// when present the metric conditions (6)-(8) become checkable.
#[derive(Debug, Clone)]
pub struct SdrData {
    pub v: Complex,
    pub b: Complex,
    pub i: LinearMap,
    pub p: LinearMap,
    pub s: LinearMap,
    pub form_v: Option<BilinearForm>,
    pub form_b: Option<BilinearForm>,
}

/// Outcome of evaluating the eight SDR conditions.  The metric conditions
/// are `None` when no forms were supplied.
///
/// 1. `i` and `p` are chain maps: `d i = i d` and `d p = p d`.
/// 2. `p i = id_B`.
/// 3. `d s + s d = id_V - i p`.
/// 4. `s i = 0` and `p s = 0`.
/// 5. `s s = 0`.
/// 6. `i` is an isometry: `<i x, i y> = <x, y>`.
/// 7. `Ker p` is orthogonal to `Im i`.
/// 8. `s` is graded self-adjoint: `<s x, y> = (-1)^{|x|} <x, s y>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdrReport {
    pub chain_maps: bool,
    pub projection: bool,
    pub homotopy: bool,
    pub annihilation: bool,
    pub square_zero: bool,
    pub isometry: Option<bool>,
    pub orthogonality: Option<bool>,
    pub self_adjoint: Option<bool>,
}

impl SdrReport {
    /// All evaluated conditions hold.
    pub fn all(&self) -> bool {
        self.retraction() && self.annihilation && self.square_zero
    }

    /// The repair preconditions: (1)-(3) plus the metric conditions when
    /// forms are present.  The side conditions (4)-(5) on `s` are exempt.
    pub fn retraction(&self) -> bool {
        self.chain_maps
            && self.projection
            && self.homotopy
            && self.isometry.unwrap_or(true)
            && self.orthogonality.unwrap_or(true)
            && self.self_adjoint.unwrap_or(true)
    }

    /// Lines of the form `(n) <description>: ok|FAILED`, one per evaluated
    /// condition, for the command line front end.
    pub fn lines(&self) -> Vec<String> {
        let fmt = |ok: bool| if ok { "ok" } else { "FAILED" };
        let mut out = vec![
            format!("(1) chain maps d i = i d, d p = p d: {}", fmt(self.chain_maps)),
            format!("(2) projection p i = id: {}", fmt(self.projection)),
            format!("(3) homotopy d s + s d = id - i p: {}", fmt(self.homotopy)),
            format!("(4) side conditions s i = 0, p s = 0: {}", fmt(self.annihilation)),
            format!("(5) homotopy squares to zero: {}", fmt(self.square_zero)),
        ];
        if let Some(ok) = self.isometry {
            out.push(format!("(6) inclusion is an isometry: {}", fmt(ok)));
        }
        if let Some(ok) = self.orthogonality {
            out.push(format!("(7) Ker p orthogonal to Im i: {}", fmt(ok)));
        }
        if let Some(ok) = self.self_adjoint {
            out.push(format!("(8) homotopy graded self-adjoint: {}", fmt(ok)));
        }
        out
    }
}

impl SdrData {
    pub fn new(
        v: Complex,
        b: Complex,
        i: LinearMap,
        p: LinearMap,
        s: LinearMap,
        form_v: Option<BilinearForm>,
        form_b: Option<BilinearForm>,
    ) -> Result<SdrData> {
        if i.source != b.space || i.target != v.space {
            return Err(Error::SpaceMismatch);
        }
        if p.source != v.space || p.target != b.space {
            return Err(Error::SpaceMismatch);
        }
        if s.source != v.space || s.target != v.space {
            return Err(Error::SpaceMismatch);
        }
        if i.parity.is_odd() || p.parity.is_odd() {
            return Err(Error::Parity("i and p must be even maps".into()));
        }
        if !s.parity.is_odd() {
            return Err(Error::Parity("the homotopy s must be odd".into()));
        }
        if form_v.is_some() != form_b.is_some() {
            return Err(Error::Input(
                "supply bilinear forms on both complexes or on neither".into(),
            ));
        }
        if let (Some(fv), Some(fb)) = (&form_v, &form_b) {
            if fv.space != v.space || fb.space != b.space {
                return Err(Error::SpaceMismatch);
            }
        }
        Ok(SdrData {
            v,
            b,
            i,
            p,
            s,
            form_v,
            form_b,
        })
    }

    fn maps_equal(x: &LinearMap, y: &LinearMap) -> bool {
        match x.add(&y.scale(&-scalar::one())) {
            Ok(diff) => diff.is_zero(),
            Err(_) => false,
        }
    }

    /// Evaluates each SDR condition exactly.
    pub fn check(&self) -> Result<SdrReport> {
        let dv = &self.v.d;
        let db = &self.b.d;
        let chain_maps = Self::maps_equal(&dv.compose(&self.i)?, &self.i.compose(db)?)
            && Self::maps_equal(&db.compose(&self.p)?, &self.p.compose(dv)?);
        let projection =
            Self::maps_equal(&self.p.compose(&self.i)?, &LinearMap::identity(self.b.space.clone()));
        let lhs = dv.compose(&self.s)?.add(&self.s.compose(dv)?)?;
        let rhs = LinearMap::identity(self.v.space.clone())
            .add(&self.i.compose(&self.p)?.scale(&-scalar::one()))?;
        let homotopy = Self::maps_equal(&lhs, &rhs);
        let annihilation =
            self.s.compose(&self.i)?.is_zero() && self.p.compose(&self.s)?.is_zero();
        let square_zero = self.s.compose(&self.s)?.is_zero();

        let (isometry, orthogonality, self_adjoint) = match (&self.form_v, &self.form_b) {
            (Some(fv), Some(fb)) => {
                let nb = self.b.space.dim();
                let nv = self.v.space.dim();
                let unit = |n: usize, k: usize| {
                    let mut e = vec![scalar::zero(); n];
                    e[k] = scalar::one();
                    e
                };
                let mut iso = true;
                for x in 0..nb {
                    for y in 0..nb {
                        if fv.pair(&self.i.column(x), &self.i.column(y)) != fb.entry(x, y) {
                            iso = false;
                        }
                    }
                }
                let rows: Vec<SparseRow> = (0..nb)
                    .map(|r| {
                        (0..nv)
                            .filter_map(|c| {
                                let e = self.p.entry(r, c);
                                (!e.is_zero()).then_some((c, e))
                            })
                            .collect()
                    })
                    .collect();
                let mut orth = true;
                for k in linalg::kernel(&rows, nv) {
                    for j in 0..nb {
                        if !fv.pair(&k, &self.i.column(j)).is_zero() {
                            orth = false;
                        }
                    }
                }
                let mut adj = true;
                for x in 0..nv {
                    for y in 0..nv {
                        let lhs = fv.pair(&self.s.column(x), &unit(nv, y));
                        let mut rhs = fv.pair(&unit(nv, x), &self.s.column(y));
                        if self.v.space.parity(x).is_odd() {
                            rhs = -rhs;
                        }
                        if lhs != rhs {
                            adj = false;
                        }
                    }
                }
                (Some(iso), Some(orth), Some(adj))
            }
            _ => (None, None, None),
        };

        Ok(SdrReport {
            chain_maps,
            projection,
            homotopy,
            annihilation,
            square_zero,
            isometry,
            orthogonality,
            self_adjoint,
        })
    }

    /// Replaces the homotopy so that the side conditions (4)-(5) hold,
    /// assuming the retraction conditions (1)-(3) (and the metric conditions
    /// when forms are present).  First `s` is replaced by
    /// `(d s + s d) s (d s + s d)`, which makes it annihilate `Im i` and
    /// `Ker p`; then by `s' d s'`, which additionally squares to zero.
    pub fn repair(&self) -> Result<SdrData> {
        let report = self.check()?;
        if !report.retraction() {
            return Err(Error::Input(
                "sdr_repair requires the retraction conditions to hold".into(),
            ));
        }
        let dv = &self.v.d;
        let a = dv.compose(&self.s)?.add(&self.s.compose(dv)?)?;
        let stilde = a.compose(&self.s.compose(&a)?)?;
        let shat = stilde.compose(&dv.compose(&stilde)?)?;
        let mut out = self.clone();
        out.s = shat;
        Ok(out)
    }
}

/// The graded self-adjoint part of `t = d a d` with respect to a
/// nondegenerate even form: `t + G^{-1} E t^T G`, where `E` is the parity
/// sign matrix.  The correction is again of the form `d b d`, so adding it
/// keeps the homotopy identity intact while restoring condition (8).
pub fn symmetrize_dad(v: &Complex, form: &BilinearForm, t: &LinearMap) -> Result<LinearMap> {
    if form.parity.is_odd() {
        return Err(Error::Input("symmetrize_dad expects an even form".into()));
    }
    let n = v.space.dim();
    let g = form.matrix();
    let ginv = linalg::invert(&g)
        .ok_or_else(|| Error::Degenerate("symmetrize_dad needs a nondegenerate form".into()))?;
    // u = G^{-1} E t^T G, computed densely.
    let mut entries = BTreeMap::new();
    for r in 0..n {
        for c in 0..n {
            let mut acc = scalar::zero();
            for k in 0..n {
                for l in 0..n {
                    let sign: Scalar = if v.space.parity(k).is_odd() {
                        -scalar::one()
                    } else {
                        scalar::one()
                    };
                    acc += ginv[r][k].clone() * sign * t.entry(l, k) * g[l][c].clone();
                }
            }
            if !acc.is_zero() {
                entries.insert((r, c), acc);
            }
        }
    }
    let u = LinearMap::new(v.space.clone(), v.space.clone(), t.parity, entries)?;
    t.add(&u)
}

/// Deterministic sample retractions for property tests: valid SDRs on
/// complexes of dimension at most 4, with the homotopy perturbed by a term
/// of the form `d a d` (symmetrized against the form where one is present).
/// Such a perturbation preserves the retraction conditions but generically
/// breaks the side conditions (4)-(5), which `repair` must restore.
pub mod samples {
    use super::*;
    use crate::graded::GradedSpace;
    use crate::scalar::int;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    fn map(
        src: &Arc<GradedSpace>,
        tgt: &Arc<GradedSpace>,
        parity: Parity,
        entries: &[(usize, usize, i64)],
    ) -> LinearMap {
        let m: BTreeMap<(usize, usize), Scalar> =
            entries.iter().map(|&(t, s, c)| ((t, s), int(c))).collect();
        LinearMap::new(src.clone(), tgt.clone(), parity, m).unwrap()
    }

    /// A 4-dimensional acyclic complex carrying a nondegenerate even form:
    /// d e1 = f1, d f2 = e2, with <e1,e2> = 1 and <f1,f2> = -1.  The
    /// standard contraction s f1 = e1, s e2 = f2 satisfies all eight
    /// conditions over an empty base.
    pub fn metric_quad() -> SdrData {
        let sp = Arc::new(GradedSpace::of(&[("e1", 0), ("e2", 0), ("f1", 1), ("f2", 1)]));
        let empty = Arc::new(GradedSpace::of(&[]));
        let d = map(&sp, &sp, Parity::Odd, &[(2, 0, 1), (1, 3, 1)]);
        let v = Complex::new(sp.clone(), d).unwrap();
        let form = BilinearForm::new(
            sp.clone(),
            Parity::Even,
            BTreeMap::from([((0, 1), int(1)), ((2, 3), int(-1))]),
        )
        .unwrap();
        assert!(v.is_form_compatible(&form));
        let b = Complex::zero_differential(empty.clone());
        let form_b = BilinearForm::new(empty.clone(), Parity::Even, BTreeMap::new()).unwrap();
        let s = map(&sp, &sp, Parity::Odd, &[(0, 2, 1), (3, 1, 1)]);
        SdrData::new(
            v,
            b,
            LinearMap::zero(empty.clone(), sp.clone(), Parity::Even),
            LinearMap::zero(sp.clone(), empty.clone(), Parity::Even),
            s,
            Some(form),
            Some(form_b),
        )
        .unwrap()
    }

    /// A direct sum of a 2-dimensional base (zero differential, diagonal
    /// form) and an acyclic pair on which the form vanishes.
    pub fn metric_sum() -> SdrData {
        let sp = Arc::new(GradedSpace::of(&[("b1", 0), ("b2", 0), ("e", 0), ("f", 1)]));
        let bsp = Arc::new(GradedSpace::of(&[("c1", 0), ("c2", 0)]));
        let d = map(&sp, &sp, Parity::Odd, &[(3, 2, 1)]);
        let v = Complex::new(sp.clone(), d).unwrap();
        let form = BilinearForm::new(
            sp.clone(),
            Parity::Even,
            BTreeMap::from([((0, 0), int(1)), ((1, 1), int(1))]),
        )
        .unwrap();
        assert!(v.is_form_compatible(&form));
        let form_b = BilinearForm::new(
            bsp.clone(),
            Parity::Even,
            BTreeMap::from([((0, 0), int(1)), ((1, 1), int(1))]),
        )
        .unwrap();
        let b = Complex::zero_differential(bsp.clone());
        let i = map(&bsp, &sp, Parity::Even, &[(0, 0, 1), (1, 1, 1)]);
        let p = map(&sp, &bsp, Parity::Even, &[(0, 0, 1), (1, 1, 1)]);
        let s = map(&sp, &sp, Parity::Odd, &[(2, 3, 1)]);
        SdrData::new(v, b, i, p, s, Some(form), Some(form_b)).unwrap()
    }

    /// A formless direct sum: base of dimension `nb` with zero differential
    /// plus an acyclic pair.
    pub fn plain_sum(nb: usize) -> SdrData {
        let mut gens: Vec<(String, u8)> = (0..nb).map(|k| (format!("b{k}"), (k % 2) as u8)).collect();
        gens.push(("e".into(), 0));
        gens.push(("f".into(), 1));
        let named: Vec<(&str, u8)> = gens.iter().map(|(n, p)| (n.as_str(), *p)).collect();
        let sp = Arc::new(GradedSpace::of(&named));
        let bnamed: Vec<(&str, u8)> = named[..nb].to_vec();
        let bsp = Arc::new(GradedSpace::of(&bnamed));
        let d = map(&sp, &sp, Parity::Odd, &[(nb + 1, nb, 1)]);
        let v = Complex::new(sp.clone(), d).unwrap();
        let b = Complex::zero_differential(bsp.clone());
        let idx: Vec<(usize, usize, i64)> = (0..nb).map(|k| (k, k, 1)).collect();
        let i = map(&bsp, &sp, Parity::Even, &idx);
        let p = map(&sp, &bsp, Parity::Even, &idx);
        let s = map(&sp, &sp, Parity::Odd, &[(nb, nb + 1, 1)]);
        SdrData::new(v, b, i, p, s, None, None).unwrap()
    }

    pub fn random_odd_map(rng: &mut ChaCha8Rng, sp: &Arc<GradedSpace>) -> LinearMap {
        let n = sp.dim();
        let mut entries = BTreeMap::new();
        for t in 0..n {
            for c in 0..n {
                if sp.parity(t) == sp.parity(c).flip() {
                    let v: i64 = rng.gen_range(-2..=2);
                    if v != 0 {
                        entries.insert((t, c), int(v));
                    }
                }
            }
        }
        LinearMap::new(sp.clone(), sp.clone(), Parity::Odd, entries).unwrap()
    }

    /// The `k`-th perturbed retraction of the deterministic family seeded by
    /// `seed`.  The output satisfies the retraction conditions exactly; the
    /// side conditions on the homotopy generically fail.
    pub fn perturbed(rng: &mut ChaCha8Rng, k: usize) -> SdrData {
        let base = match k % 4 {
            0 => metric_quad(),
            1 => metric_sum(),
            2 => plain_sum(1),
            _ => plain_sum(2),
        };
        let a = random_odd_map(rng, &base.v.space);
        let t = base.v.d.compose(&a.compose(&base.v.d).unwrap()).unwrap();
        let t = if k % 4 == 0 {
            symmetrize_dad(&base.v, base.form_v.as_ref().unwrap(), &t).unwrap()
        } else {
            t
        };
        let mut data = base;
        data.s = data.s.add(&t).unwrap();
        data
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use crate::graded::GradedSpace;
    use crate::scalar::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn map(
        src: &Arc<GradedSpace>,
        tgt: &Arc<GradedSpace>,
        parity: Parity,
        entries: &[(usize, usize, i64)],
    ) -> LinearMap {
        let m: BTreeMap<(usize, usize), Scalar> =
            entries.iter().map(|&(t, s, c)| ((t, s), int(c))).collect();
        LinearMap::new(src.clone(), tgt.clone(), parity, m).unwrap()
    }


    #[test]
    fn identity_sdr_passes_everything() {
        let sp = Arc::new(GradedSpace::of(&[("x", 0), ("th", 1)]));
        let v = Complex::zero_differential(sp.clone());
        let b = Complex::zero_differential(sp.clone());
        let form = BilinearForm::new(
            sp.clone(),
            Parity::Odd,
            BTreeMap::from([((0, 1), int(1))]),
        )
        .unwrap();
        let data = SdrData::new(
            v,
            b,
            LinearMap::identity(sp.clone()),
            LinearMap::identity(sp.clone()),
            LinearMap::zero(sp.clone(), sp.clone(), Parity::Odd),
            Some(form.clone()),
            Some(form),
        )
        .unwrap();
        let rep = data.check().unwrap();
        assert!(rep.all(), "{:?}", rep);
        assert_eq!(rep.lines().len(), 8);
        // Repair of an SDR is harmless.
        assert!(data.repair().unwrap().check().unwrap().all());
    }


    #[test]
    fn acyclic_two_term_contraction() {
        // V = <e (even), f (odd)> with d e = f; B = 0; s = d^{-1}.
        let sp = Arc::new(GradedSpace::of(&[("e", 0), ("f", 1)]));
        let empty = Arc::new(GradedSpace::of(&[]));
        let d = map(&sp, &sp, Parity::Odd, &[(1, 0, 1)]);
        let v = Complex::new(sp.clone(), d).unwrap();
        let b = Complex::zero_differential(empty.clone());
        let s = map(&sp, &sp, Parity::Odd, &[(0, 1, 1)]);
        let data = SdrData::new(
            v,
            b,
            LinearMap::zero(empty.clone(), sp.clone(), Parity::Even),
            LinearMap::zero(sp.clone(), empty.clone(), Parity::Even),
            s,
            None,
            None,
        )
        .unwrap();
        let rep = data.check().unwrap();
        assert!(rep.all(), "{:?}", rep);
        assert_eq!(rep.isometry, None);
    }


    /// A 3-dimensional retraction whose homotopy fails to annihilate the
    /// image of the inclusion; the repair formulas fix it.
    #[test]
    fn si_nonzero_is_reported_and_repaired() {
        // V = <u (even), e (even), f (odd)>, d e = f; B = <u'>.
        let sp = Arc::new(GradedSpace::of(&[("u", 0), ("e", 0), ("f", 1)]));
        let bsp = Arc::new(GradedSpace::of(&[("u'", 0)]));
        let d = map(&sp, &sp, Parity::Odd, &[(2, 1, 1)]);
        let v = Complex::new(sp.clone(), d).unwrap();
        let b = Complex::zero_differential(bsp.clone());
        let i = map(&bsp, &sp, Parity::Even, &[(0, 0, 1)]);
        let p = map(&sp, &bsp, Parity::Even, &[(0, 0, 1)]);
        // s f = e as required, plus the bad extra term s u = f.
        let s = map(&sp, &sp, Parity::Odd, &[(1, 2, 1), (2, 0, 1)]);
        let data = SdrData::new(v, b, i, p, s, None, None).unwrap();
        let rep = data.check().unwrap();
        assert!(rep.chain_maps && rep.projection && rep.homotopy);
        assert!(!rep.annihilation);
        assert!(!rep.square_zero);
        let fixed = data.repair().unwrap();
        let rep2 = fixed.check().unwrap();
        assert!(rep2.all(), "{:?}", rep2);
        // The good part of the homotopy survives: s f = e.
        assert_eq!(fixed.s.entry(1, 2), int(1));
    }


    #[test]
    fn repair_rejects_broken_homotopy_identity() {
        let sp = Arc::new(GradedSpace::of(&[("e", 0), ("f", 1)]));
        let empty = Arc::new(GradedSpace::of(&[]));
        let d = map(&sp, &sp, Parity::Odd, &[(1, 0, 1)]);
        let v = Complex::new(sp.clone(), d).unwrap();
        let b = Complex::zero_differential(empty.clone());
        let data = SdrData::new(
            v,
            b,
            LinearMap::zero(empty.clone(), sp.clone(), Parity::Even),
            LinearMap::zero(sp.clone(), empty.clone(), Parity::Even),
            // s = 2 d^{-1} breaks d s + s d = id - i p.
            map(&sp, &sp, Parity::Odd, &[(0, 1, 2)]),
            None,
            None,
        )
        .unwrap();
        assert!(!data.check().unwrap().homotopy);
        assert!(data.repair().is_err());
    }


    /// Perturbing the homotopy by `t = d a d` keeps conditions (1)-(3)
    /// (and (6)-(8) after symmetrization or on form-isotropic summands);
    /// the repair then restores (4)-(5) in all twenty seeded samples.
    #[test]
    fn random_retractions_are_repaired() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..20 {
            let base = match trial % 4 {
                0 => metric_quad(),
                1 => metric_sum(),
                2 => plain_sum(1),
                _ => plain_sum(2),
            };
            let a = random_odd_map(&mut rng, &base.v.space);
            let t = base.v.d.compose(&a.compose(&base.v.d).unwrap()).unwrap();
            let t = if trial % 4 == 0 {
                symmetrize_dad(&base.v, base.form_v.as_ref().unwrap(), &t).unwrap()
            } else {
                t
            };
            let mut data = base;
            data.s = data.s.add(&t).unwrap();
            let rep = data.check().unwrap();
            assert!(rep.retraction(), "trial {trial}: {:?}", rep);
            let fixed = data.repair().unwrap();
            let rep2 = fixed.check().unwrap();
            assert!(rep2.all(), "trial {trial}: {:?}", rep2);
        }
    }

}
