//! Unimodular structures: volume data, the obstruction class of the
//! divergence cocycle, and the dimension of the space of lifts.

use linfty::linf::{heisenberg, nonunimodular, sl2};
use linfty::unimodular::{
    classify_dimension, lie_unimodular, lift_space, obstruction_class, DivergenceImage,
    ObstructionClass,
};

fn main() -> linfty::Result<()> {
    for (name, s) in [
        ("heisenberg", heisenberg(6)),
        ("[x,y]=y", nonunimodular(6)),
        ("sl2", sl2(6)),
    ] {
        println!("== {name} ==");
        println!("  supertrace criterion (Lie): {}", lie_unimodular(&s)?);
        match obstruction_class(&s)? {
            ObstructionClass::Vanishes(f) => {
                println!("  obstruction class vanishes; volume datum f = {f}");
                if let Some((_, dim)) = lift_space(&s)? {
                    println!("  affine space of volume data has dimension {dim}");
                }
            }
            ObstructionClass::Nonzero(c) => {
                println!("  obstructed: the class of {c} is nonzero");
            }
        }
    }

    // the image of the divergence map: onto in mixed parity, one-dimensional
    // cokernel for a purely even plane (top monomial of the shifted algebra)
    use linfty::graded::GradedSpace;
    let plane = GradedSpace::of(&[("x", 0), ("y", 0)]);
    match classify_dimension(&plane, 4)? {
        DivergenceImage::Exceptional {
            cokernel_representative,
        } => println!(
            "even plane: divergence misses exactly {}",
            cokernel_representative.display(&plane.parity_reverse())
        ),
        DivergenceImage::Surjective => println!("even plane: surjective (unexpected)"),
    }
    let mixed = GradedSpace::of(&[("x", 0), ("t", 1)]);
    assert!(matches!(
        classify_dimension(&mixed, 4)?,
        DivergenceImage::Surjective
    ));
    println!("mixed 1|1 space: divergence is onto all weights <= 3");
    Ok(())
}
