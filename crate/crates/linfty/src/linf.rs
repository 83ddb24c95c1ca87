//! Homotopy Lie structures as odd formal vector fields on the shifted dual
//! space, the associated cochain complex, its exact solver, and cyclicity
//! with respect to a graded symmetric bilinear form.

use crate::derivation::{Derivation, SymMultiMap};
use crate::double::PoissonStructure;
use crate::error::{Error, Result};
use crate::graded::{BilinearForm, Complex, GradedSpace, Parity};
use crate::linalg::{self, SparseRow};
use crate::scalar::{self, Scalar};
use crate::symalg::{monomial_basis, Monomial, TruncatedPolynomial};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Generators of the function algebra of the shifted space: same names as
/// the underlying space, parities flipped.
pub fn shifted_algebra(space: &GradedSpace) -> Arc<GradedSpace> {
    Arc::new(space.parity_reverse())
}

/// A homotopy Lie structure on a complex `(V, d)`: an odd vector field `m`
/// of weight at least 2 on the algebra over the parity-reversed dual, with
/// the MC residual `[delta, m] + 1/2 [m, m]` tracked separately.
#[derive(Debug, Clone)]
pub struct LInftyStructure {
    pub complex: Complex,
    /// Generators of the function algebra (parity-reversed `V`).
    pub alg: Arc<GradedSpace>,
    pub cutoff: usize,
    /// Linear differential induced by `d` on the function algebra.
    pub delta: Derivation,
    /// The structure field; odd, weight >= 2.
    pub m: Derivation,
}

/// Linear vector field on the shifted algebra induced by an odd map `d` on
/// `V` (matrix `d e_j = sum_i D_ij e_i` becomes `delta x_i = sum_j D_ij x_j`).
pub fn induced_differential(
    complex: &Complex,
    alg: &Arc<GradedSpace>,
    cutoff: usize,
) -> Result<Derivation> {
    let n = complex.space.dim();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = TruncatedPolynomial::zero(alg.clone(), cutoff);
        for j in 0..n {
            let c = complex.d.entry(i, j);
            if !c.is_zero() {
                v.add_word(&[j], c);
            }
        }
        values.push(v);
    }
    Derivation::new(alg.clone(), Parity::Odd, cutoff, values)
}

impl LInftyStructure {
    pub fn new(complex: Complex, cutoff: usize, m: Derivation) -> Result<LInftyStructure> {
        let alg = shifted_algebra(&complex.space);
        if m.space != alg {
            return Err(Error::SpaceMismatch);
        }
        if !m.parity.is_odd() {
            return Err(Error::Parity("a structure field must be odd".into()));
        }
        if let Some(w) = m.min_weight() {
            if w < 2 {
                return Err(Error::Input(
                    "structure field must have weight at least 2 (put the linear part into d)"
                        .into(),
                ));
            }
        }
        let delta = induced_differential(&complex, &alg, cutoff)?;
        Ok(LInftyStructure {
            complex,
            alg,
            cutoff,
            delta,
            m,
        })
    }

    /// Structure with zero differential on `V`.
    pub fn with_zero_d(space: Arc<GradedSpace>, cutoff: usize, m: Derivation) -> Result<Self> {
        LInftyStructure::new(Complex::zero_differential(space), cutoff, m)
    }

    /// Maurer-Cartan residual `[delta, m] + 1/2 [m, m]`.
    pub fn mc_residual(&self) -> Result<Derivation> {
        let dm = self.delta.bracket(&self.m)?;
        let mm = self.m.bracket(&self.m)?;
        dm.add(&mm.scale(&scalar::ratio(1, 2)))
    }

    pub fn check_mc(&self) -> Result<bool> {
        Ok(self.mc_residual()?.is_zero())
    }

    /// Largest arity of the structure (pure quadratic: 2).
    pub fn max_arity(&self) -> usize {
        self.m.max_weight().unwrap_or(2)
    }

    pub fn ce(&self) -> CeComplex {
        CeComplex {
            alg: self.alg.clone(),
            cutoff: self.cutoff,
            delta: self.delta.clone(),
            raise: self.m.clone(),
        }
    }
}

/// The operator `delta + r` on the truncated function algebra, where `delta`
/// preserves weight and `r` raises it (structure field, or a twisted version
/// of one).  Squares to zero whenever the MC equation holds, which makes the
/// weight-truncated space a genuine complex: the operator only ever consumes
/// weights at most those it produces.
#[derive(Debug, Clone)]
pub struct CeComplex {
    pub alg: Arc<GradedSpace>,
    pub cutoff: usize,
    pub delta: Derivation,
    pub raise: Derivation,
}

/// Outcome of an exact inhomogeneous solve `(delta + r) h = c`.
#[derive(Debug, Clone)]
pub enum CeSolve {
    /// A solution valid on all reliable weights (free variables set to 0).
    Solved(TruncatedPolynomial),
    /// Certificate of nonexistence: the restricted linear system, whose rows
    /// only involve the listed unknowns, is inconsistent.
    Obstructed,
}

impl CeComplex {
    pub fn apply(&self, p: &TruncatedPolynomial) -> Result<TruncatedPolynomial> {
        self.delta.apply(p)?.add(&self.raise.apply(p)?)
    }

    /// How much the raising part can increase weight.
    pub fn max_raise(&self) -> usize {
        self.raise.max_weight().map(|w| w.saturating_sub(1)).unwrap_or(0)
    }

    /// Verdicts are exact for weights up to this bound; one application of
    /// the operator from a reliable weight stays below the cutoff.
    pub fn reliable_limit(&self) -> usize {
        self.cutoff.saturating_sub(self.max_raise())
    }

    /// Sparse matrix of the operator on the monomial basis of weights
    /// `0..=hi`, columns indexed by the returned basis; entries with target
    /// weight above `hi` are dropped (truncation of the filtered complex).
    pub fn assemble(&self, hi: usize) -> Result<(Vec<Monomial>, Vec<SparseRow>)> {
        let basis = monomial_basis(&self.alg, 0, hi);
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut columns = Vec::with_capacity(basis.len());
        for mono in &basis {
            let mut p = TruncatedPolynomial::zero(self.alg.clone(), self.cutoff);
            p.add_monomial(mono.clone(), scalar::one());
            let q = self.apply(&p)?;
            let mut col: SparseRow = BTreeMap::new();
            for (m, c) in q.terms() {
                if m.weight() <= hi {
                    col.insert(index[m], c.clone());
                }
            }
            columns.push(col);
        }
        Ok((basis, columns))
    }

    /// Checks that the assembled matrix squares to zero on the truncated
    /// space (exact, because intermediate weights never exceed the target).
    pub fn squares_to_zero(&self, hi: usize) -> Result<bool> {
        let basis = monomial_basis(&self.alg, 0, hi);
        for mono in basis {
            let mut p = TruncatedPolynomial::zero(self.alg.clone(), self.cutoff);
            p.add_monomial(mono, scalar::one());
            let q = self.apply(&self.apply(&p)?)?;
            if q.terms().keys().any(|m| m.weight() <= hi) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact solve of `(delta + r) h = c` with `h` supported on weights
    /// `1..=reliable_limit` of the given parity, imposing the equations on
    /// all weights up to `reliable_limit`.  Inconsistency is an honest
    /// certificate: the imposed rows involve no unknowns outside the range.
    pub fn solve(&self, c: &TruncatedPolynomial, h_parity: Parity) -> Result<CeSolve> {
        let r = self.reliable_limit();
        if let Some(w) = c.max_weight() {
            if w > self.cutoff {
                return Err(Error::Cutoff("target exceeds the cutoff".into()));
            }
        }
        // unknown basis
        let unknowns: Vec<Monomial> = monomial_basis(&self.alg, 1, r)
            .into_iter()
            .filter(|m| m.parity(&self.alg) == h_parity)
            .collect();
        // row basis: all monomials of weight 1..=r (both parities harmless)
        let rows_basis = monomial_basis(&self.alg, 0, r);
        let row_index: BTreeMap<&Monomial, usize> = rows_basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); rows_basis.len()];
        for (j, u) in unknowns.iter().enumerate() {
            let mut p = TruncatedPolynomial::zero(self.alg.clone(), self.cutoff);
            p.add_monomial(u.clone(), scalar::one());
            let q = self.apply(&p)?;
            for (m, v) in q.terms() {
                if m.weight() <= r {
                    rows[row_index[m]].insert(j, v.clone());
                }
            }
        }
        let mut rhs = vec![scalar::zero(); rows_basis.len()];
        for (m, v) in c.terms() {
            if m.weight() <= r {
                rhs[row_index[m]] = v.clone();
            } else {
                // beyond the reliable block: not imposed
            }
        }
        match linalg::solve(&rows, &rhs, unknowns.len()) {
            None => Ok(CeSolve::Obstructed),
            Some(x) => {
                let mut h = TruncatedPolynomial::zero(self.alg.clone(), self.cutoff);
                for (j, u) in unknowns.iter().enumerate() {
                    h.add_monomial(u.clone(), x[j].clone());
                }
                Ok(CeSolve::Solved(h))
            }
        }
    }

    /// Dimensions `(space, rank, kernel, cohomology)` of the truncated
    /// complex on weights `0..=reliable_limit`.
    pub fn cohomology(&self) -> Result<(usize, usize, usize, usize)> {
        let r = self.reliable_limit();
        let (basis, cols) = self.assemble(r)?;
        // transpose columns into rows of the matrix acting on coordinates
        let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); basis.len()];
        for (j, col) in cols.iter().enumerate() {
            for (&i, c) in col {
                rows[i].insert(j, c.clone());
            }
        }
        let rank = linalg::rank(&rows, basis.len());
        let kernel = basis.len() - rank;
        Ok((basis.len(), rank, kernel, kernel - rank))
    }
}

/// Cyclicity data: a graded symmetric bilinear form on the underlying space.
/// Degenerate forms are allowed; the symplectic realization on the shifted
/// space (a constant-coefficient bracket) exists only in the nondegenerate
/// case.
#[derive(Debug, Clone)]
pub struct CyclicData {
    pub form: BilinearForm,
}

impl CyclicData {
    pub fn new(form: BilinearForm) -> CyclicData {
        CyclicData { form }
    }

    /// Constant bracket on the shifted algebra whose table is the exact
    /// inverse of the form matrix.  Bracket parity equals the form parity.
    pub fn poisson(&self, alg: &Arc<GradedSpace>) -> Result<PoissonStructure> {
        let inv = self.form.inverse_matrix()?;
        let mut table = BTreeMap::new();
        for (i, row) in inv.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    table.insert((i, j), c.clone());
                }
            }
        }
        PoissonStructure::new(alg.clone(), self.form.parity, table)
    }

    /// The lowered tensor `T(w, j) = <m~(w), e_j>` of an arity-`n` map.
    fn lowered(&self, map: &SymMultiMap, word: &[usize], last: usize) -> Scalar {
        let out = map.eval_word(word);
        let mut t = scalar::zero();
        for (c, v) in out.iter().enumerate() {
            if !v.is_zero() {
                t += v * self.form.entry(c, last);
            }
        }
        t
    }

    /// Full symmetry of the lowered tensors: the first `n` slots are
    /// symmetric by construction, so it suffices to check the transposition
    /// of the last two slots on every word, with the Koszul sign taken in
    /// the parities of the shifted space.
    pub fn check_cyclic(&self, structure: &LInftyStructure) -> Result<bool> {
        let alg = &structure.alg;
        let lo = structure.m.min_weight().unwrap_or(2);
        let hi = structure.m.max_weight().unwrap_or(2);
        for n in lo..=hi {
            let comp = structure.m.weight_component(n);
            if comp.is_zero() {
                continue;
            }
            let map = comp.to_multilinear()?;
            for head in monomial_basis(alg, n.saturating_sub(1), n - 1) {
                for a in 0..alg.dim() {
                    for b in 0..alg.dim() {
                        let mut w = head.0.clone();
                        w.push(a);
                        let lhs = self.lowered(&map, &w, b);
                        let mut w2 = head.0.clone();
                        w2.push(b);
                        let rhs = self.lowered(&map, &w2, a);
                        let mut sign = alg.parity(a).koszul(alg.parity(b));
                        // an odd form twists the lowering by the parity of
                        // the contracted slot
                        if self.form.parity.is_odd() {
                            sign *= alg.parity(a).koszul(Parity::Odd)
                                * alg.parity(b).koszul(Parity::Odd);
                        }
                        let rhs = if sign < 0 { -rhs } else { rhs };
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// For nondegenerate data: exact solve for a Hamiltonian `h` with
    /// `X_h = m` (weight by weight).  Existence is equivalent to cyclicity;
    /// this is the independent cross-check of `check_cyclic`.
    pub fn hamiltonian_of_structure(
        &self,
        structure: &LInftyStructure,
    ) -> Result<Option<TruncatedPolynomial>> {
        let alg = &structure.alg;
        let pb = self.poisson(alg)?;
        let cutoff = structure.cutoff;
        // h parity: |m| = |h| + bracket parity and m is odd
        let h_parity = match self.form.parity {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        };
        let lo = structure.m.min_weight().unwrap_or(2);
        let hi = structure.m.max_weight().unwrap_or(2);
        let mut total = TruncatedPolynomial::zero(alg.clone(), cutoff);
        for n in lo..=hi {
            let target = structure.m.weight_component(n);
            if target.is_zero() {
                continue;
            }
            if n + 1 > cutoff {
                return Err(Error::Cutoff(
                    "cutoff too small to hold the Hamiltonian".into(),
                ));
            }
            let unknowns: Vec<Monomial> = monomial_basis(alg, n + 1, n + 1)
                .into_iter()
                .filter(|m| m.parity(alg) == h_parity)
                .collect();
            // rows: generator index x weight-n monomial
            let row_monos = monomial_basis(alg, n, n);
            let row_index: BTreeMap<&Monomial, usize> = row_monos
                .iter()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect();
            let nrows = alg.dim() * row_monos.len();
            let mut rows: Vec<SparseRow> = vec![BTreeMap::new(); nrows];
            for (j, u) in unknowns.iter().enumerate() {
                let mut p = TruncatedPolynomial::zero(alg.clone(), cutoff);
                p.add_monomial(u.clone(), scalar::one());
                let field = pb.hamiltonian_field(&p)?;
                for g in 0..alg.dim() {
                    for (m, c) in field.value(g).terms() {
                        rows[g * row_monos.len() + row_index[m]].insert(j, c.clone());
                    }
                }
            }
            let mut rhs = vec![scalar::zero(); nrows];
            for g in 0..alg.dim() {
                for (m, c) in target.value(g).terms() {
                    rhs[g * row_monos.len() + row_index[m]] = c.clone();
                }
            }
            match linalg::solve(&rows, &rhs, unknowns.len()) {
                None => return Ok(None),
                Some(x) => {
                    for (j, u) in unknowns.iter().enumerate() {
                        total.add_monomial(u.clone(), x[j].clone());
                    }
                }
            }
        }
        Ok(Some(total))
    }
}

/// Quadratic structure from the bracket table of a graded Lie algebra.
/// `brackets` lists each unordered pair once: `(i, j, k, c)` encodes a
/// contribution `c e_k` to the symmetrized bracket of `e_i` and `e_j`.
pub fn lie_structure(
    space: Arc<GradedSpace>,
    cutoff: usize,
    brackets: &[(usize, usize, usize, Scalar)],
) -> Result<LInftyStructure> {
    let alg = shifted_algebra(&space);
    let mut map = SymMultiMap::new(alg.clone(), 2);
    let mut seen = std::collections::BTreeSet::new();
    for (i, j, k, c) in brackets {
        let key = if i <= j { (*i, *j) } else { (*j, *i) };
        if !seen.insert((key, *k)) {
            return Err(Error::Input(format!(
                "bracket of generators {i},{j} onto {k} listed twice"
            )));
        }
        map.set(&[*i, *j], *k, c.clone())?;
    }
    let m = map.to_derivation(cutoff, Parity::Odd)?;
    LInftyStructure::with_zero_d(space, cutoff, m)
}

/// Fixture: abelian Lie algebra on an `l|n` space.
pub fn abelian(l: usize, n: usize, cutoff: usize) -> LInftyStructure {
    let space = crate::sampling::space(l, n);
    lie_structure(space, cutoff, &[]).expect("abelian")
}

/// Fixture: Heisenberg algebra `[e1, e2] = e3` (nilpotent, unimodular).
pub fn heisenberg(cutoff: usize) -> LInftyStructure {
    let space = Arc::new(GradedSpace::of(&[("e1", 0), ("e2", 0), ("e3", 0)]));
    lie_structure(space, cutoff, &[(0, 1, 2, scalar::one())]).expect("heisenberg")
}

/// Fixture: the 2-dimensional algebra `[x, y] = y` (solvable, not
/// unimodular: ad x has trace 1).
pub fn nonunimodular(cutoff: usize) -> LInftyStructure {
    let space = Arc::new(GradedSpace::of(&[("x", 0), ("y", 0)]));
    lie_structure(space, cutoff, &[(0, 1, 1, scalar::one())]).expect("xy=y")
}

/// Fixture: sl2-type constants `[h,e] = 2e, [h,f] = -2f, [e,f] = h`.
pub fn sl2(cutoff: usize) -> LInftyStructure {
    let space = Arc::new(GradedSpace::of(&[("h", 0), ("e", 0), ("f", 0)]));
    lie_structure(
        space,
        cutoff,
        &[
            (0, 1, 1, scalar::int(2)),
            (0, 2, 2, scalar::int(-2)),
            (1, 2, 0, scalar::one()),
        ],
    )
    .expect("sl2")
}
