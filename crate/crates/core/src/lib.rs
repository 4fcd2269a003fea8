//! Quotients of the Bruhat-Tits tree of GL2(Qp) by definite quaternionic
//! groups, and the p-adic modular forms that live on them.
//!
//! The pipeline implemented here:
//!
//! 1. [`quatalg`] loads a definite quaternion algebra together with an
//!    Eichler Z[1/p]-order and a precision-tagged splitting
//!    iota: B_p ~ M2(Qp) with iota(R_p^max) = M2(Zp).
//! 2. [`bttree`] puts vertices and ordered edges of the tree in integer
//!    matrix normal form.
//! 3. [`arithgroup`] decides Gamma-equivalence of vertices/edges by short
//!    vector searches in rank-4 lattices and computes stabilizers.
//! 4. [`fundom`] runs the breadth-first fundamental domain algorithm,
//!    producing boundary pairings and the lookup map T -> Gamma\T.
//! 5. [`harmonic`] computes spaces of Vn-valued harmonic cocycles (rigid
//!    analytic modular forms of weight n+2) and their Hecke action.
//! 6. [`overconvergent`] lifts eigenforms to moment data on which Up acts
//!    with small slope, giving fast high-precision evaluation.
//! 7. [`evaluate`] evaluates rigid modular forms at points of the p-adic
//!    upper half plane through the Poisson kernel.
//! 8. [`shimeq`] runs the canonical-embedding pipeline for genus-4 curves:
//!    quadric/cubic relations, torus-invariant monomials, rational
//!    recognition, and the final conjectural model.
//!
//! All arithmetic is exact: integers and rationals are arbitrary precision,
//! p-adic numbers carry explicit precision tags and never fabricate digits.

pub mod arithgroup;
pub mod numutil;
pub mod bttree;
pub mod error;
pub mod evaluate;
pub mod fundom;
pub mod harmonic;
pub mod linalg;
pub mod overconvergent;
pub mod padic;
pub mod plinalg;
pub mod pipeline;
pub mod quatalg;
pub mod shimeq;

pub use error::{Error, Result};
