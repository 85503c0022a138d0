//! Exact enumeration of partial Latin rectangles.
//!
//! A partial Latin rectangle of shape `(r, s, n)` is an `r x s` grid whose
//! cells are empty or hold one of `n` symbols, with no symbol repeated in a
//! row or a column. Its weight is the number of filled cells.
//!
//! The crate counts these objects by weight in several independent ways:
//!
//! * [`oracle`]: exhaustive backtracking, the ground truth;
//! * [`sade`]: row-by-row dynamic programming over equivalent prefixes;
//! * [`chromatic`]: assembly from connected blocks and rook-graph chromatic
//!   polynomials, giving closed-form polynomials `f_m(r, s, n)`;
//! * [`incexc`]: inclusion-exclusion over small graphs, giving the leading
//!   monomials of `f_m`.
//!
//! [`classes`] counts isomorphism, isotopism and main classes with Burnside's
//! lemma, and [`canon`] provides the canonical graph labeling they all share.
//!
//! ```
//! use plr_core::{oracle, sade, Shape};
//!
//! let shape = Shape::new(2, 2, 3).unwrap();
//! let brute = oracle::count_all(shape);
//! assert_eq!(sade::sade_count(shape).unwrap(), brute);
//! assert_eq!(brute.get(4), 18u32.into());
//! ```
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod canon;
pub mod chromatic;
pub mod classes;
pub mod dist;
pub mod error;
pub mod incexc;
pub mod oracle;
pub mod paratopism;
pub mod perm;
pub mod plr;
pub mod poly;
pub mod sade;

pub use dist::{BigCount, WeightDistribution};
pub use error::{Error, Result};
pub use paratopism::{apply_paratopism, Isotopism, Paratopism};
pub use perm::{cycle_structure, permutations_with_structure, CycleStructure, Permutation};
pub use plr::{Entry, Plr, Shape};
pub use poly::{TriPoly, UniPoly};
