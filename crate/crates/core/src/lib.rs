//! Exact computation with square matrices over finite lattices.
//!
//! Matrices over a lattice multiply with join as addition and meet as
//! multiplication. The product is associative exactly when the lattice is
//! distributive; this crate makes both sides of that statement computable.
//!
//! - [`lattice`]: finite bounded lattices, irreducibility of the bounds,
//!   and the set embedding of distributive lattices.
//! - [`matrix`]: matrices, products, permutation matrices, bracketed powers.
//! - [`spectrum`]: bracketings and certification of antiassociativity.
//! - [`boolrel`]: Boolean matrices as binary relations; idempotents,
//!   Green's relations and maximal subgroups.
//! - [`distmat`]: cuts, idempotents, inverses, nilpotency and
//!   triangularization over distributive lattices.
//! - [`fixpoint`]: greatest solutions of `x·A = x`.
//! - [`io`]: JSON formats; [`golden`]: replay of worked examples.
//!
//! ```
//! use std::sync::Arc;
//! use latmat::{LatMatrix, Lattice};
//!
//! let m3 = Arc::new(Lattice::m3());
//! let a = LatMatrix::from_labels(m3.clone(), &[["a", "b"], ["0", "0"]])?;
//! let b = LatMatrix::from_labels(m3.clone(), &[["1", "0"], ["1", "0"]])?;
//! let c = LatMatrix::from_labels(m3, &[["c", "0"], ["0", "0"]])?;
//! assert_ne!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
//! # Ok::<(), latmat::Error>(())
//! ```

pub mod boolrel;
pub mod distmat;
pub mod error;
pub mod fixpoint;
pub mod golden;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod permutation;
pub mod spectrum;

pub use boolrel::BoolRel;
pub use error::{Error, ErrorKind, Result};
pub use fixpoint::LatVector;
pub use lattice::{CutIndex, Elem, Lattice};
pub use matrix::{LatMatrix, Product};
pub use permutation::Permutation;
pub use spectrum::Bracketing;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/distributive.md")]
    mod distributive {}
    #[doc = include_str!("../../../book/src/fixpoints.md")]
    mod fixpoints {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
