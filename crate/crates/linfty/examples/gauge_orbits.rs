//! Gauge calculus on weight-truncated differential graded Lie algebras of
//! vector fields: the Baker-Campbell-Hausdorff product, the gauge action on
//! solutions of the structure equation, and stabilizers.

use linfty::double::{DoubleKind, DoubleSpace};
use linfty::graded::Parity;
use linfty::linf::{nonunimodular, LInftyStructure};
use linfty::mc::{bch, bch_matches_oracle, gauge_apply, is_mc, DerDgla, Dgla, Twisted};
use linfty::sampling;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn main() -> linfty::Result<()> {
    // the Dynkin series agrees with log(exp x exp y) in the free algebra
    for deg in 1..=4 {
        assert!(bch_matches_oracle(deg)?);
    }
    println!("BCH series matches the universal-envelope oracle to degree 4");

    // the odd double of [x,y] = y gives a structure on a mixed-parity
    // space, where the gauge group acts with nontrivial orbits
    let base = nonunimodular(5);
    let d = DoubleSpace::new(base.alg.clone(), DoubleKind::Odd);
    let field = d.poisson().hamiltonian_field(&d.double_odd(&base.m)?)?;
    let v = Arc::new(d.total.parity_reverse());
    let s = LInftyStructure::with_zero_d(v, 5, field)?;
    let g = DerDgla::new(s.alg.clone(), 5, s.delta.clone())?;
    println!("structure m = {}", s.m.display());
    println!("m solves the equation: {}", is_mc(&g, &s.m)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let y = sampling::random_derivation(&mut rng, &s.alg, 5, Some(Parity::Even), 2, 3);
    let moved = gauge_apply(&g, &y, &s.m)?;
    assert_ne!(moved, s.m);
    println!("gauged by a random even field: {}", moved.display());
    println!("gauged structure still solves it: {}", is_mc(&g, &moved)?);

    // group law through BCH
    let y2 = sampling::random_derivation(&mut rng, &s.alg, 5, Some(Parity::Even), 2, 3);
    let twice = gauge_apply(&g, &y2, &moved)?;
    let composed = gauge_apply(&g, &bch(&g, &y2, &y)?, &s.m)?;
    assert_eq!(twice, composed);
    println!("group law: gauging twice = gauging by the BCH product (exact)");

    // stabilizer: twisted-exact even elements fix the structure
    let tw = Twisted::new(&g, s.m.clone())?;
    let z = sampling::random_derivation(&mut rng, &s.alg, 5, Some(Parity::Odd), 2, 3);
    let stab = tw.d(&z)?;
    assert_eq!(gauge_apply(&g, &stab, &s.m)?, s.m);
    println!("a twisted-exact even field stabilizes the structure");
    Ok(())
}
