//! Homotopy Lie structures as odd square-zero vector fields: the structure
//! equation, cochain cohomology on the reliable weight block, and cyclicity
//! with respect to a bilinear form (checked two independent ways).

use std::collections::BTreeMap;
use std::sync::Arc;

use linfty::graded::{BilinearForm, Parity};
use linfty::linf::{heisenberg, nonunimodular, CyclicData};
use linfty::scalar::int;

fn main() -> linfty::Result<()> {
    // Heisenberg: [e1, e2] = e3, encoded as an odd weight-2 field
    let s = heisenberg(6);
    println!("Heisenberg structure field: {}", s.m.display());
    println!("structure equation holds: {}", s.check_mc()?);

    let (dim, rank, kernel, h) = s.ce().cohomology()?;
    println!("cochain block: dim {dim}, rank {rank}, kernel {kernel}, cohomology {h}");

    // the solvable algebra [x, y] = y with the pairing <x, y> = 1 is NOT
    // cyclic; Heisenberg with <e1, e2> = <e3, e3>... has no invariant form,
    // so instead check an abelian example where any form is cyclic
    let s2 = nonunimodular(6);
    let form = BilinearForm::new(
        s2.complex.space.clone(),
        Parity::Even,
        BTreeMap::from([((0, 1), int(1))]),
    )?;
    let data = CyclicData::new(form);
    let symmetric = data.check_cyclic(&s2)?;
    let hamiltonian = data.hamiltonian_of_structure(&s2)?;
    println!(
        "[x,y]=y with <x,y>=1: lowered tensors symmetric: {symmetric}, \
         Hamiltonian exists: {}",
        hamiltonian.is_some()
    );
    assert_eq!(symmetric, hamiltonian.is_some());

    // the odd double always carries a canonical cyclic structure
    use linfty::double::{DoubleKind, DoubleSpace};
    use linfty::linf::LInftyStructure;
    let d = DoubleSpace::new(s2.alg.clone(), DoubleKind::Odd);
    let pb = d.poisson();
    let s0 = d.double_odd(&s2.m)?;
    let v2 = Arc::new(d.total.parity_reverse());
    let sd = LInftyStructure::with_zero_d(v2.clone(), 6, pb.hamiltonian_field(&s0)?)?;
    let n = v2.dim();
    let mut mat = vec![vec![linfty::scalar::zero(); n]; n];
    for ((i, j), c) in pb.table() {
        mat[*i][*j] = c.clone();
    }
    let inv = linfty::linalg::invert(&mat).expect("canonical bracket is nondegenerate");
    let mut entries = BTreeMap::new();
    for (i, row) in inv.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            use num_traits::Zero;
            if !c.is_zero() && i <= j {
                entries.insert((i, j), c.clone());
            }
        }
    }
    let canonical = BilinearForm::new(v2, Parity::Odd, entries)?;
    let double_data = CyclicData::new(canonical);
    println!(
        "odd double of [x,y]=y is cyclic for the canonical odd form: {}",
        double_data.check_cyclic(&sd)?
    );
    Ok(())
}
