//! Formal vector fields on a graded space and their divergence:
//! the divergence of a linear field is the supertrace, and the divergence
//! of a commutator satisfies the cocycle identity.

use std::sync::Arc;

use linfty::derivation::Derivation;
use linfty::graded::GradedSpace;
use linfty::scalar::int;
use linfty::symalg::TruncatedPolynomial;

fn main() -> linfty::Result<()> {
    // one even generator x and one odd generator theta, weights up to 6
    let v = Arc::new(GradedSpace::of(&[("x", 0), ("th", 1)]));
    let cutoff = 6;

    // xi = x^2 d/dx, eta = x th d/dth
    let x = TruncatedPolynomial::generator(v.clone(), cutoff, 0);
    let th = TruncatedPolynomial::generator(v.clone(), cutoff, 1);
    let xi = Derivation::single(0, x.mul(&x)?)?;
    let eta = Derivation::single(1, x.mul(&th)?)?;

    println!("xi        = {}", xi.display());
    println!("eta       = {}", eta.display());
    println!("[xi, eta] = {}", xi.bracket(&eta)?.display());

    // divergence: signed sum of partial derivatives of the components
    println!("div xi    = {}", xi.divergence());
    println!("div eta   = {}", eta.divergence());

    // the cocycle identity, exactly:
    // div[xi,eta] = xi(div eta) - (-1)^{|xi||eta|} eta(div xi)
    let lhs = xi.bracket(&eta)?.divergence();
    let sign = xi.parity.koszul(eta.parity);
    let rhs = xi
        .apply(&eta.divergence())?
        .add(&eta.apply(&xi.divergence())?.scale(&int(-sign as i64)))?;
    assert_eq!(lhs, rhs);
    println!("cocycle identity: div[xi,eta] = {lhs} (exact match)");

    // the multilinear dictionary: t^n d/dt acts as multiplication by n!
    let line = Arc::new(GradedSpace::of(&[("t", 0)]));
    let t = TruncatedPolynomial::generator(line.clone(), 8, 0);
    let t3 = t.mul(&t)?.mul(&t)?;
    let cubic = Derivation::single(0, t3)?;
    let m = cubic.to_multilinear()?;
    println!(
        "t^3 d/dt as a symmetric trilinear map evaluates to {} on (t,t,t)",
        m.eval_word(&[0, 0, 0])[0]
    );
    Ok(())
}
