//! Tensoring a homotopy Lie structure with a Frobenius algebra from the
//! catalog (cohomology of a point, circle, spheres, torus).  Strict
//! unimodularity and lift existence of the tensor follow a product rule:
//! the tensor has the property iff the coefficients are unimodular or the
//! structure already had it.

use linfty::linf::{heisenberg, nonunimodular};
use linfty::tensor::{cdga_unimodular, frobenius, frobenius_names, tensor_linfty};
use linfty::unimodular::{obstruction_class, ObstructionClass};

fn main() -> linfty::Result<()> {
    println!("catalog: {}", frobenius_names().join(", "));
    for name in ["k", "H_S1", "H_S2", "H_T2"] {
        let a = frobenius(name)?;
        println!(
            "{name}: dim {}, Euler characteristic {}, unimodular: {}",
            a.space.dim(),
            a.euler_characteristic(),
            cdga_unimodular(&a)
        );
    }

    println!();
    for (vname, s) in [("heisenberg", heisenberg(5)), ("[x,y]=y", nonunimodular(5))] {
        for aname in ["k", "H_S1", "H_S2"] {
            let a = frobenius(aname)?;
            let t = tensor_linfty(&a, &s)?;
            let strict = t.m.divergence().is_zero();
            let lifts = matches!(obstruction_class(&t)?, ObstructionClass::Vanishes(_));
            println!(
                "{aname} (x) {vname}: dim {}, equation holds: {}, strictly \
                 unimodular: {strict}, volume datum exists: {lifts}",
                t.complex.space.dim(),
                t.check_mc()?
            );
        }
    }
    Ok(())
}
