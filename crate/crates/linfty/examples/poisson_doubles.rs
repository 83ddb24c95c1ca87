//! Even and odd doubles of a space of vector fields: every field becomes a
//! Hamiltonian on the (shifted) cotangent double, and the divergence is
//! computed by the odd Laplacian of the odd double.

use std::sync::Arc;

use linfty::derivation::Derivation;
use linfty::double::{DoubleKind, DoubleSpace};
use linfty::graded::GradedSpace;
use linfty::symalg::TruncatedPolynomial;

fn main() -> linfty::Result<()> {
    let v = Arc::new(GradedSpace::of(&[("x", 0), ("y", 0)]));
    let cutoff = 6;

    // the solvable field m = x y d/dy (the structure field of [x,y] = y on
    // the shifted space)
    let x = TruncatedPolynomial::generator(v.clone(), cutoff, 0);
    let y = TruncatedPolynomial::generator(v.clone(), cutoff, 1);
    let m = Derivation::single(1, x.mul(&y)?)?;
    println!("field          m  = {}", m.display());
    println!("divergence  div m = {}", m.divergence());

    // odd double: adjoin Px*, Py* of flipped parity; D_od m is an odd
    // function whose Hamiltonian field restricts to m
    let od = DoubleSpace::new(v.clone(), DoubleKind::Odd);
    let pb = od.poisson();
    let s0 = od.double_odd(&m)?;
    println!("odd double  D_od m = {s0}");

    // the divergence is the odd Laplacian of the double
    let lap = pb.laplacian(&s0)?;
    println!("Laplacian of the double = {lap}");
    assert_eq!(lap, od.embed(&m.divergence())?);

    // even double: D_ev m generates a divergence-free Hamiltonian field
    let ev = DoubleSpace::new(v, DoubleKind::Even);
    let h = ev.double_even(&m)?;
    let field = ev.poisson().hamiltonian_field(&h)?;
    println!("even double     D_ev m = {h}");
    println!(
        "divergence of its Hamiltonian field = {}",
        field.divergence()
    );
    assert!(field.divergence().is_zero());
    Ok(())
}
