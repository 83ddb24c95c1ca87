//! Finite-dimensional cdgas and Frobenius algebras, extension of scalars
//! for structures (`psi_field`), the trace map on functions (`psi_prime`),
//! product pairings, and unimodularity of algebras via multiplication
//! traces.

use crate::derivation::{polynomial_tensor, Derivation, SymMultiMap};
use crate::error::{Error, Result};
use crate::graded::{BilinearForm, Complex, GradedSpace, LinearMap, Parity};
use crate::linf::{shifted_algebra, CyclicData, LInftyStructure};
use crate::scalar::{self, Scalar};
use crate::symalg::{monomial_basis, TruncatedPolynomial};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Maximum dimension of a constructed tensor-product space; overridable via
/// the `LINFTY_MAX_DIM` environment variable.
pub fn max_dim() -> usize {
    std::env::var("LINFTY_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(64)
}

/// A finite-dimensional graded-commutative dg algebra, given by structure
/// constants.  Commutativity, associativity, the Leibniz rule, the unit
/// law, and pairing invariance are all validated on construction.
#[derive(Debug, Clone)]
pub struct Cdga {
    pub space: Arc<GradedSpace>,
    pub d: LinearMap,
    /// `prod[i][j]` = coordinates of `e_i * e_j`.
    prod: Vec<Vec<Vec<Scalar>>>,
    pub unit: Option<usize>,
    pub pairing: Option<BilinearForm>,
}

impl Cdga {
    pub fn new(
        space: Arc<GradedSpace>,
        d: LinearMap,
        products: &[(usize, usize, usize, Scalar)],
        unit: Option<usize>,
        pairing: Option<BilinearForm>,
    ) -> Result<Cdga> {
        let n = space.dim();
        let mut prod = vec![vec![vec![scalar::zero(); n]; n]; n];
        for (i, j, k, c) in products {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Input("product index out of range".into()));
            }
            if space.parity(*k) != space.parity(*i) + space.parity(*j) {
                return Err(Error::Parity(
                    "product structure constant violates parity".into(),
                ));
            }
            prod[*i][*j][*k] = c.clone();
        }
        let a = Cdga {
            space,
            d,
            prod,
            unit,
            pairing,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let n = self.space.dim();
        // graded commutativity
        for i in 0..n {
            for j in 0..n {
                let sign = self.space.parity(i).koszul(self.space.parity(j));
                for k in 0..n {
                    let rhs = &self.prod[j][i][k] * scalar::int(sign as i64);
                    if self.prod[i][j][k] != rhs {
                        return Err(Error::Input("product is not graded commutative".into()));
                    }
                }
            }
        }
        // associativity
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ij = self.prod[i][j].clone();
                    let lhs = self.multiply_coords(&ij, &unit_vec(n, k));
                    let jk = self.prod[j][k].clone();
                    let rhs = self.multiply_coords(&unit_vec(n, i), &jk);
                    if lhs != rhs {
                        return Err(Error::Input("product is not associative".into()));
                    }
                }
            }
        }
        // unit law
        if let Some(u) = self.unit {
            for j in 0..n {
                if self.prod[u][j] != unit_vec(n, j) {
                    return Err(Error::Input("unit law fails".into()));
                }
            }
        }
        // Leibniz rule
        for i in 0..n {
            for j in 0..n {
                let mut dij = vec![scalar::zero(); n];
                for (t, c) in self.prod[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        for (y, e) in self.d.column(t).iter().enumerate() {
                            dij[y] += c * e;
                        }
                    }
                }
                let mut rhs = self.multiply_coords(&self.d.column(i), &unit_vec(n, j));
                let sign = self.space.parity(i).koszul(Parity::Odd);
                let adj = self.multiply_coords(&unit_vec(n, i), &self.d.column(j));
                for k in 0..n {
                    rhs[k] += &adj[k] * scalar::int(sign as i64);
                }
                if dij != rhs {
                    return Err(Error::Input("differential fails the Leibniz rule".into()));
                }
            }
        }
        // pairing invariance <ab, c> = <a, bc>
        if let Some(p) = &self.pairing {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut lhs = scalar::zero();
                        for (t, c) in self.prod[i][j].iter().enumerate() {
                            lhs += c * p.entry(t, k);
                        }
                        let mut rhs = scalar::zero();
                        for (t, c) in self.prod[j][k].iter().enumerate() {
                            rhs += p.entry(i, t) * c;
                        }
                        if lhs != rhs {
                            return Err(Error::Input("pairing is not invariant".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Product of two coordinate vectors.
    pub fn multiply_coords(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.space.dim();
        let mut out = vec![scalar::zero(); n];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                for k in 0..n {
                    if !self.prod[i][j][k].is_zero() {
                        out[k] += ca * cb * &self.prod[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Iterated product of basis elements, left to right.
    pub fn product_of_word(&self, word: &[usize]) -> Vec<Scalar> {
        let n = self.space.dim();
        let mut acc = match word.first() {
            Some(&i) => unit_vec(n, i),
            None => match self.unit {
                Some(u) => unit_vec(n, u),
                None => vec![scalar::zero(); n],
            },
        };
        for &j in &word[1.min(word.len())..] {
            acc = self.multiply_coords(&acc, &unit_vec(n, j));
        }
        acc
    }

    /// Left-multiplication operator by a coordinate vector (must be parity
    /// homogeneous for the supertrace to make sense; mixed vectors are fine
    /// for application).
    pub fn multiplication_trace(&self, a: &[Scalar]) -> Scalar {
        let n = self.space.dim();
        let mut tr = scalar::zero();
        for j in 0..n {
            let col = self.multiply_coords(a, &unit_vec(n, j));
            let w = match self.space.parity(j) {
                Parity::Even => scalar::one(),
                Parity::Odd => scalar::int(-1),
            };
            tr += &col[j] * w;
        }
        tr
    }

    /// Supertrace of the identity.
    pub fn euler_characteristic(&self) -> Scalar {
        let (e, o) = self.space.superdim();
        scalar::int(e as i64 - o as i64)
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![scalar::zero(); n];
    v[i] = scalar::one();
    v
}

/// True iff the supertrace of multiplication by every basis element (hence
/// by every element, by linearity) vanishes.
pub fn cdga_unimodular(a: &Cdga) -> bool {
    (0..a.space.dim()).all(|i| a.multiplication_trace(&unit_vec(a.space.dim(), i)).is_zero())
}

/// Catalog of cohomology Frobenius algebras, addressable by name.
pub fn frobenius(name: &str) -> Result<Cdga> {
    let one = scalar::one;
    match name {
        "k" | "H_point" => {
            let s = Arc::new(GradedSpace::of(&[("1", 0)]));
            let d = LinearMap::zero(s.clone(), s.clone(), Parity::Odd);
            let mut p = BTreeMap::new();
            p.insert((0, 0), one());
            let pairing = BilinearForm::new(s.clone(), Parity::Even, p)?;
            Cdga::new(s, d, &[(0, 0, 0, one())], Some(0), Some(pairing))
        }
        "H_S1" | "H_S3" => {
            let top = if name == "H_S1" { "t" } else { "z" };
            let s = Arc::new(GradedSpace::of(&[("1", 0), (top, 1)]));
            let d = LinearMap::zero(s.clone(), s.clone(), Parity::Odd);
            let mut p = BTreeMap::new();
            p.insert((0, 1), one());
            let pairing = BilinearForm::new(s.clone(), Parity::Odd, p)?;
            Cdga::new(
                s,
                d,
                &[(0, 0, 0, one()), (0, 1, 1, one()), (1, 0, 1, one())],
                Some(0),
                Some(pairing),
            )
        }
        "H_S2" => {
            let s = Arc::new(GradedSpace::of(&[("1", 0), ("w", 0)]));
            let d = LinearMap::zero(s.clone(), s.clone(), Parity::Odd);
            let mut p = BTreeMap::new();
            p.insert((0, 1), one());
            let pairing = BilinearForm::new(s.clone(), Parity::Even, p)?;
            Cdga::new(
                s,
                d,
                &[(0, 0, 0, one()), (0, 1, 1, one()), (1, 0, 1, one())],
                Some(0),
                Some(pairing),
            )
        }
        "H_T2" => {
            let s = Arc::new(GradedSpace::of(&[("1", 0), ("a", 1), ("b", 1), ("ab", 0)]));
            let d = LinearMap::zero(s.clone(), s.clone(), Parity::Odd);
            let mut p = BTreeMap::new();
            p.insert((0, 3), one());
            p.insert((1, 2), one());
            let pairing = BilinearForm::new(s.clone(), Parity::Even, p)?;
            Cdga::new(
                s,
                d,
                &[
                    (0, 0, 0, one()),
                    (0, 1, 1, one()),
                    (1, 0, 1, one()),
                    (0, 2, 2, one()),
                    (2, 0, 2, one()),
                    (0, 3, 3, one()),
                    (3, 0, 3, one()),
                    (1, 2, 3, one()),
                    (2, 1, 3, -one()),
                ],
                Some(0),
                Some(pairing),
            )
        }
        _ => Err(Error::Input(format!("unknown Frobenius algebra: {name}"))),
    }
}

pub fn frobenius_names() -> &'static [&'static str] {
    &["H_point", "H_S1", "H_S2", "H_S3", "H_T2"]
}

/// The tensor-product space `A (x) V` with basis `e_a (x) v_i`, indexed
/// `a * dim(V) + i` and named `a.v`.
pub fn tensor_space(a: &Cdga, v: &GradedSpace) -> Result<Arc<GradedSpace>> {
    let dim = a.space.dim() * v.dim();
    if dim > max_dim() {
        return Err(Error::Dimension(format!(
            "tensor space dimension {dim} exceeds the cap {}",
            max_dim()
        )));
    }
    let mut gens = Vec::with_capacity(dim);
    for x in 0..a.space.dim() {
        for i in 0..v.dim() {
            let name = format!("{}.{}", a.space.name(x), v.name(i));
            let parity = a.space.parity(x) + v.parity(i);
            gens.push((name, parity));
        }
    }
    let named: Vec<(&str, u8)> = gens
        .iter()
        .map(|(n, p)| (n.as_str(), p.as_u8()))
        .collect();
    Ok(Arc::new(GradedSpace::of(&named)))
}

fn w_index(a: usize, i: usize, dim_v: usize) -> usize {
    a * dim_v + i
}

/// Interchange sign for moving the algebra factors out of a tensor word:
/// each `a_k` passes the shifted factors of the earlier slots.
fn interchange_sign(alg_v: &GradedSpace, a_space: &GradedSpace, word: &[(usize, usize)]) -> i8 {
    let mut sign = 1i8;
    let mut acc = Parity::Even;
    for &(a, i) in word {
        sign *= a_space.parity(a).koszul(acc);
        acc = acc + alg_v.parity(i);
    }
    sign
}

/// Extension of scalars on vector fields: the field on the tensor algebra
/// whose multilinear components are the iterated product on the algebra
/// factor tensored with the components of `xi`, with interchange Koszul
/// signs taken in the shifted parities.
pub fn psi_field(
    a: &Cdga,
    xi: &Derivation,
    alg_w: &Arc<GradedSpace>,
) -> Result<Derivation> {
    let alg_v = &xi.space;
    let dim_v = alg_v.dim();
    let dim_a = a.space.dim();
    let cutoff = xi.cutoff;
    let mut total = Derivation::zero(alg_w.clone(), xi.parity, cutoff);
    if xi.is_zero() {
        return Ok(total);
    }
    let lo = xi.min_weight().unwrap_or(0).max(1);
    let hi = xi.max_weight().unwrap_or(0);
    for n in lo..=hi.min(cutoff) {
        let comp = xi.weight_component(n);
        if comp.is_zero() {
            continue;
        }
        let mv = comp.to_multilinear()?;
        let mut map = SymMultiMap::new(alg_w.clone(), n);
        for u in monomial_basis(alg_w, n, n) {
            let pairs: Vec<(usize, usize)> =
                u.0.iter().map(|&g| (g / dim_v, g % dim_v)).collect();
            let mut sign = interchange_sign(alg_v, &a.space, &pairs);
            let aw: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let vw: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            // the component map itself passes the algebra word
            let a_total = aw
                .iter()
                .fold(Parity::Even, |acc, &x| acc + a.space.parity(x));
            sign *= xi.parity.koszul(a_total);
            let prod = a.product_of_word(&aw);
            if prod.iter().all(|c| c.is_zero()) {
                continue;
            }
            let out = mv.eval_word(&vw);
            for b in 0..dim_a {
                if prod[b].is_zero() {
                    continue;
                }
                for (j, c) in out.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let val = &prod[b] * c * scalar::int(sign as i64);
                    map.set(&u.0, w_index(b, j, dim_v), val)?;
                }
            }
        }
        total = total.add(&map.to_derivation(cutoff, xi.parity)?)?;
    }
    Ok(total)
}

/// The trace map on functions: the weight-`n` component of the output has
/// lowered tensor `(word) -> sign * str(mult by a_1...a_n) * f-tensor(v's)`.
pub fn psi_prime(
    a: &Cdga,
    f: &TruncatedPolynomial,
    alg_w: &Arc<GradedSpace>,
) -> Result<TruncatedPolynomial> {
    let alg_v = f.space.clone();
    let dim_v = alg_v.dim();
    let cutoff = f.cutoff;
    let mut out = TruncatedPolynomial::zero(alg_w.clone(), cutoff);
    let lo = f.min_weight().unwrap_or(0);
    let hi = f.max_weight().unwrap_or(0);
    for n in lo..=hi {
        if f.weight_component(n).is_zero() {
            continue;
        }
        if n == 0 {
            // the empty product is the unit; the trace factor is chi(A)
            let c = f.coefficient(&crate::symalg::Monomial(vec![]));
            out.add_word(&[], c * a.euler_characteristic());
            continue;
        }
        for u in monomial_basis(alg_w, n, n) {
            let pairs: Vec<(usize, usize)> =
                u.0.iter().map(|&g| (g / dim_v, g % dim_v)).collect();
            let sign = interchange_sign(&alg_v, &a.space, &pairs);
            let aw: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let vw: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            let tr = a.multiplication_trace(&a.product_of_word(&aw));
            if tr.is_zero() {
                continue;
            }
            let fv = polynomial_tensor(f, &vw);
            if fv.is_zero() {
                continue;
            }
            let mut factor = scalar::one();
            for (_, mult) in u.multiplicities() {
                for q in 2..=mult {
                    factor *= scalar::int(q as i64);
                }
            }
            out.add_monomial(u.clone(), tr * fv * scalar::int(sign as i64) / factor);
        }
    }
    Ok(out)
}

/// The tensor structure on `A (x) V`: differential `d_A (x) 1 + 1 (x) d_V`
/// (with the usual sign) and field `psi_field(A, m)`.
pub fn tensor_linfty(a: &Cdga, s: &LInftyStructure) -> Result<LInftyStructure> {
    let v = &s.complex.space;
    let w = tensor_space(a, v)?;
    let dim_v = v.dim();
    let mut dw = LinearMap::zero(w.clone(), w.clone(), Parity::Odd);
    for x in 0..a.space.dim() {
        for i in 0..dim_v {
            // d_A on the algebra factor
            for (y, c) in a.d.column(x).iter().enumerate() {
                if !c.is_zero() {
                    dw.set_entry(w_index(y, i, dim_v), w_index(x, i, dim_v), c.clone())?;
                }
            }
            // 1 (x) d_V with the Koszul sign of passing the algebra factor
            let sgn = a.space.parity(x).koszul(Parity::Odd);
            for (j, c) in s.complex.d.column(i).iter().enumerate() {
                if !c.is_zero() {
                    dw.set_entry(
                        w_index(x, j, dim_v),
                        w_index(x, i, dim_v),
                        c * scalar::int(sgn as i64),
                    )?;
                }
            }
        }
    }
    let complex = Complex::new(w.clone(), dw)?;
    let alg_w = shifted_algebra(&w);
    let m = psi_field(a, &s.m, &alg_w)?;
    LInftyStructure::new(complex, s.cutoff, m)
}

/// Product pairing `(a (x) v, b (x) u) = (-1)^{|v||b|} [a,b] <v,u>`, of
/// parity equal to the sum of the factor parities.
pub fn tensor_pairing(a: &Cdga, c: &CyclicData, v: &GradedSpace) -> Result<CyclicData> {
    let pa = a
        .pairing
        .as_ref()
        .ok_or_else(|| Error::Input("algebra has no pairing".into()))?;
    let w = tensor_space(a, v)?;
    let dim_v = v.dim();
    let parity = pa.parity + c.form.parity;
    let mut entries = BTreeMap::new();
    for x in 0..a.space.dim() {
        for i in 0..dim_v {
            for y in 0..a.space.dim() {
                for j in 0..dim_v {
                    let val = pa.entry(x, y) * c.form.entry(i, j);
                    if val.is_zero() {
                        continue;
                    }
                    let mut sgn = v.parity(i).koszul(a.space.parity(y));
                    // an odd algebra pairing additionally crosses the second
                    // algebra and space factors
                    if pa.parity.is_odd() {
                        sgn *= a.space.parity(y).koszul(Parity::Odd)
                            * v.parity(j).koszul(Parity::Odd);
                    }
                    let r = w_index(x, i, dim_v);
                    let s = w_index(y, j, dim_v);
                    entries.insert((r, s), val * scalar::int(sgn as i64));
                }
            }
        }
    }
    Ok(CyclicData::new(BilinearForm::new(w, parity, entries)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linf::{abelian, heisenberg, nonunimodular};
    use crate::sampling;
    use crate::scalar::int;
    use crate::unimodular::{obstruction_class, ObstructionClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn catalog_entries_validate_and_have_expected_unimodularity() {
        for name in frobenius_names() {
            let a = frobenius(name).unwrap();
            assert!(a.pairing.as_ref().unwrap().is_nondegenerate(), "{name}");
        }
        assert!(!cdga_unimodular(&frobenius("k").unwrap()));
        assert!(cdga_unimodular(&frobenius("H_S1").unwrap()));
        assert!(!cdga_unimodular(&frobenius("H_S2").unwrap()));
        assert!(cdga_unimodular(&frobenius("H_S3").unwrap()));
        assert!(cdga_unimodular(&frobenius("H_T2").unwrap()));
        assert_eq!(frobenius("H_S2").unwrap().euler_characteristic(), int(2));
        assert_eq!(frobenius("H_T2").unwrap().euler_characteristic(), int(0));
    }

    #[test]
    fn tensoring_with_the_ground_field_is_relabeling() {
        let a = frobenius("k").unwrap();
        let s = heisenberg(5);
        let t = tensor_linfty(&a, &s).unwrap();
        assert!(t.check_mc().unwrap());
        // same structure constants under the index bijection i -> (0, i)
        for i in 0..3 {
            let mut orig = format!("{}", s.m.value(i));
            let mut new = format!("{}", t.m.value(i));
            orig.retain(|c| c != ' ');
            new.retain(|ch| ch != ' ');
            assert_eq!(new.replace("1.", ""), orig);
        }
    }

    #[test]
    fn tensor_structures_pass_mc_across_the_grid() {
        for name in ["k", "H_S1", "H_S2", "H_T2"] {
            let a = frobenius(name).unwrap();
            for s in [abelian(1, 1, 5), heisenberg(5), nonunimodular(5)] {
                let t = tensor_linfty(&a, &s).unwrap();
                assert!(t.check_mc().unwrap(), "{name} tensor fails MC");
            }
        }
    }

    #[test]
    fn exterior_algebra_tensor_is_the_square_zero_extension() {
        // Lambda(t) (x) g has bracket [x (x) 1, y (x) t] = [x,y] (x) t and
        // [x (x) t, y (x) t] = 0: check on the solvable fixture
        let a = frobenius("H_S1").unwrap();
        let s = nonunimodular(5);
        let t = tensor_linfty(&a, &s).unwrap();
        let quad = t.m.weight_component(2);
        let map = quad.to_multilinear().unwrap();
        let dv = 2;
        // [1.x, 1.y] = 1.y
        let out = map.eval_word(&[w_index(0, 0, dv), w_index(0, 1, dv)]);
        assert_eq!(out[w_index(0, 1, dv)], int(1));
        // [1.x, t.y] = +- t.y and [t.x, t.y] = 0
        let out = map.eval_word(&[w_index(0, 0, dv), w_index(1, 1, dv)]);
        let v = out[w_index(1, 1, dv)].clone();
        assert!(v == int(1) || v == int(-1));
        let out = map.eval_word(&[w_index(1, 0, dv), w_index(1, 1, dv)]);
        assert!(out.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn psi_field_respects_brackets_and_divergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let v = sampling::space(1, 1);
        let alg_v = shifted_algebra(&v);
        let cutoff = 4;
        for name in ["H_S1", "H_S2"] {
            let a = frobenius(name).unwrap();
            let w = tensor_space(&a, &v).unwrap();
            let alg_w = shifted_algebra(&w);
            for _ in 0..8 {
                let xi = sampling::random_derivation(&mut rng, &alg_v, cutoff, Some(Parity::Odd), 2, 3);
                let eta =
                    sampling::random_derivation(&mut rng, &alg_v, cutoff, Some(Parity::Even), 2, 3);
                let pxi = psi_field(&a, &xi, &alg_w).unwrap();
                let peta = psi_field(&a, &eta, &alg_w).unwrap();
                // bracket preservation
                let lhs = psi_field(&a, &xi.bracket(&eta).unwrap(), &alg_w).unwrap();
                let rhs = pxi.bracket(&peta).unwrap();
                assert_eq!(lhs, rhs, "{name}: brackets not preserved");
                // divergence intertwining, both parities
                let lhs = psi_prime(&a, &xi.divergence(), &alg_w).unwrap();
                assert_eq!(lhs, pxi.divergence(), "{name}: divergence not intertwined");
                let lhs = psi_prime(&a, &eta.divergence(), &alg_w).unwrap();
                assert_eq!(lhs, peta.divergence(), "{name}: even divergence not intertwined");
            }
        }
    }

    #[test]
    fn psi_prime_vanishes_for_unimodular_algebras() {
        let v = sampling::space(1, 1);
        let alg_v = shifted_algebra(&v);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for name in ["H_S1", "H_S3", "H_T2"] {
            let a = frobenius(name).unwrap();
            let w = tensor_space(&a, &v).unwrap();
            let alg_w = shifted_algebra(&w);
            for _ in 0..5 {
                let f = sampling::random_polynomial(&mut rng, &alg_v, 4, None, 0, 4);
                assert!(psi_prime(&a, &f, &alg_w).unwrap().is_zero(), "{name}");
            }
        }
        // and is a relabeling for the ground field
        let a = frobenius("k").unwrap();
        let w = tensor_space(&a, &v).unwrap();
        let alg_w = shifted_algebra(&w);
        let f = sampling::random_polynomial(&mut rng, &alg_v, 4, None, 1, 3);
        let g = psi_prime(&a, &f, &alg_w).unwrap();
        assert_eq!(g.is_zero(), f.is_zero());
    }

    #[test]
    fn strict_unimodularity_of_tensors_follows_the_product_rule() {
        // strictly unimodular (zero divergence) iff A unimodular or V
        // strictly unimodular
        for (name, a_uni) in [("k", false), ("H_S1", true), ("H_S2", false)] {
            let a = frobenius(name).unwrap();
            for (s, v_strict) in [
                (abelian(1, 1, 5), true),
                (heisenberg(5), true),
                (nonunimodular(5), false),
            ] {
                let t = tensor_linfty(&a, &s).unwrap();
                let strict = t.m.divergence().is_zero();
                assert_eq!(strict, a_uni || v_strict, "{name}");
            }
        }
    }

    #[test]
    fn unimodular_lifts_of_tensors_follow_the_product_rule() {
        for (name, a_uni) in [("k", false), ("H_S1", true), ("H_S2", false)] {
            let a = frobenius(name).unwrap();
            for (s, v_lift) in [
                (abelian(1, 1, 5), true),
                (heisenberg(5), true),
                (nonunimodular(5), false),
            ] {
                let t = tensor_linfty(&a, &s).unwrap();
                let lifts = matches!(
                    obstruction_class(&t).unwrap(),
                    ObstructionClass::Vanishes(_)
                );
                assert_eq!(lifts, a_uni || v_lift, "{name}");
            }
        }
    }

    #[test]
    fn tensor_pairing_is_nondegenerate_and_keeps_cyclicity() {
        // the odd double of the solvable algebra is cyclic for the canonical
        // odd form; tensoring with H_S2 keeps both properties
        use crate::double::{DoubleKind, DoubleSpace};
        let s = nonunimodular(5);
        let d = DoubleSpace::new(s.alg.clone(), DoubleKind::Odd);
        let pb = d.poisson();
        let s0 = d.double_odd(&s.m).unwrap();
        let field = pb.hamiltonian_field(&s0).unwrap();
        // underlying doubled space (unshifted): parity reverse of the total
        let v2 = Arc::new(d.total.parity_reverse());
        let sd = LInftyStructure::with_zero_d(v2.clone(), 5, field).unwrap();
        // canonical odd form on V2: <x_i, Pi x*_i> pairs
        let mut entries = BTreeMap::new();
        let inv = {
            // invert the bracket table to get the form
            let n = v2.dim();
            let mut mat = vec![vec![scalar::zero(); n]; n];
            for ((i, j), c) in pb.table() {
                mat[*i][*j] = c.clone();
            }
            crate::linalg::invert(&mat).unwrap()
        };
        for (i, row) in inv.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && i <= j {
                    entries.insert((i, j), c.clone());
                }
            }
        }
        let form = BilinearForm::new(v2.clone(), Parity::Odd, entries).unwrap();
        let data = CyclicData::new(form);
        assert!(data.check_cyclic(&sd).unwrap());
        let a = frobenius("H_S2").unwrap();
        let tdata = tensor_pairing(&a, &data, &v2).unwrap();
        assert_eq!(tdata.form.parity, Parity::Odd);
        assert!(tdata.form.is_nondegenerate());
        let ts = tensor_linfty(&a, &sd).unwrap();
        assert!(tdata.check_cyclic(&ts).unwrap());
        assert!(tdata.hamiltonian_of_structure(&ts).unwrap().is_some());
    }

    #[test]
    fn frobenius_consequences_for_the_solvable_fixture() {
        // chi = 0 models give a strictly unimodular tensor; chi = 2 gives a
        // nonzero obstruction
        let s = nonunimodular(5);
        for name in ["H_S1", "H_S3"] {
            let a = frobenius(name).unwrap();
            let t = tensor_linfty(&a, &s).unwrap();
            assert!(t.m.divergence().is_zero(), "{name}");
        }
        let a = frobenius("H_S2").unwrap();
        let t = tensor_linfty(&a, &s).unwrap();
        assert!(matches!(
            obstruction_class(&t).unwrap(),
            ObstructionClass::Nonzero(_)
        ));
    }
}
