//! Seeded random generators for fuzz-style identity checks.  All randomness
//! in the crate flows through a caller-provided ChaCha stream, so every run
//! with the same seed sees the same inputs.

use crate::derivation::Derivation;
use crate::graded::{GradedSpace, Parity};
use crate::scalar::{self, Scalar};
use crate::symalg::{monomials_of_weight, TruncatedPolynomial};
use rand::Rng;
use std::sync::Arc;

/// Small random rational with denominator in 1..=3.
pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    let p = rng.gen_range(-4i64..=4);
    let q = rng.gen_range(1i64..=3);
    scalar::ratio(p, q)
}

/// Random polynomial with terms of weight `lo..=hi`.  When `parity` is given
/// the result is parity homogeneous (possibly zero).
pub fn random_polynomial(
    rng: &mut impl Rng,
    space: &Arc<GradedSpace>,
    cutoff: usize,
    parity: Option<Parity>,
    lo: usize,
    hi: usize,
) -> TruncatedPolynomial {
    let mut p = TruncatedPolynomial::zero(space.clone(), cutoff);
    for w in lo..=hi.min(cutoff) {
        for m in monomials_of_weight(space, w) {
            if let Some(req) = parity {
                if m.parity(space) != req {
                    continue;
                }
            }
            if rng.gen_bool(0.4) {
                p.add_monomial(m, random_scalar(rng));
            }
        }
    }
    p
}

/// Random parity-homogeneous derivation whose generator values carry weights
/// in `lo..=hi`.  When `parity` is `None` a parity is chosen at random.
pub fn random_derivation(
    rng: &mut impl Rng,
    space: &Arc<GradedSpace>,
    cutoff: usize,
    parity: Option<Parity>,
    lo: usize,
    hi: usize,
) -> Derivation {
    let parity = parity.unwrap_or(if rng.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    });
    let values = (0..space.dim())
        .map(|i| {
            random_polynomial(
                rng,
                space,
                cutoff,
                Some(space.parity(i) + parity),
                lo,
                hi,
            )
        })
        .collect();
    Derivation::new(space.clone(), parity, cutoff, values).expect("parities consistent")
}

/// Random graded space with `l` even and `n` odd generators.
pub fn space(l: usize, n: usize) -> Arc<GradedSpace> {
    let gens: Vec<(String, u8)> = (0..l)
        .map(|i| (format!("x{i}"), 0u8))
        .chain((0..n).map(|i| (format!("h{i}"), 1u8)))
        .collect();
    let refs: Vec<(&str, u8)> = gens.iter().map(|(s, p)| (s.as_str(), *p)).collect();
    Arc::new(GradedSpace::of(&refs))
}
