//! Quantum lifts: solving the quantum master equation genus by genus on the
//! odd double.  Heisenberg lifts (its double is divergence free); the
//! solvable algebra [x,y] = y is obstructed at genus one, with the Laplacian
//! of the leading term as the certificate.

use std::sync::Arc;

use linfty::derivation::Derivation;
use linfty::double::{DoubleKind, DoubleSpace};
use linfty::graded::Parity;
use linfty::linf::{heisenberg, nonunimodular};
use linfty::quantum::{quantum_lift, QuantumLift};

fn main() -> linfty::Result<()> {
    for (name, s) in [("heisenberg", heisenberg(6)), ("[x,y]=y", nonunimodular(6))] {
        let d = DoubleSpace::new(s.alg.clone(), DoubleKind::Odd);
        let pb = Arc::new(d.poisson());
        let s0 = d.double_odd(&s.m)?;
        let delta = Derivation::zero(pb.space.clone(), Parity::Odd, 6);
        println!("== {name} ==");
        println!("  S_0 = {s0}");
        match quantum_lift(pb.clone(), delta, 6, s0, 2)? {
            QuantumLift::Lifted(q) => {
                for (g, sg) in q.genus.iter().enumerate() {
                    println!("  S_{g} = {sg}");
                }
                let rep = q.check()?;
                println!("  full equation residuals zero: {}", rep.accepted);
            }
            QuantumLift::Obstructed { genus, witness } => {
                println!("  obstructed at genus {genus}: witness = {witness}");
                println!("  (the witness is Lap S_0, the trace class)");
            }
        }
    }
    Ok(())
}
