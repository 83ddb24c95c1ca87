//! Exact-arithmetic calculus for formal vector fields on Z/2-graded spaces.
//!
//! Everything is computed over arbitrary-precision rationals; there are no
//! floating point numbers anywhere in the crate.  The main objects are
//! truncated graded-commutative power series, derivations of such algebras
//! (formal vector fields), divergence operators, Poisson brackets on even
//! and odd doubles, homotopy Lie structures together with their unimodular
//! and quantum refinements, tensor products with Frobenius algebras, and a
//! small gauge/BCH and retraction toolkit.

pub mod error;
pub mod scalar;
pub mod graded;
pub mod symalg;
pub mod linalg;
pub mod sampling;
pub mod derivation;
pub mod double;
pub mod linf;
pub mod unimodular;
pub mod quantum;
pub mod tensor;
pub mod mc;
pub mod sdr;
pub mod doc;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use graded::{BilinearForm, Complex, GradedSpace, Generator, LinearMap, Parity};
pub use symalg::{Monomial, TruncatedPolynomial};
pub use derivation::{Derivation, SymMultiMap};
