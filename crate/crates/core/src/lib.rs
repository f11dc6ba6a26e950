//! Torsion lower bounds for rational unknotting from knot Floer chain
//! complexes.
//!
//! The crate takes free chain complexes over `F₂[u, w]` with Maslov and
//! Alexander bigradings, specializes them at `w = 0` and `w = u`, and
//! decomposes the resulting homology over the PID `F₂[u]` into free rank
//! plus cyclic torsion. The largest torsion orders are the invariants `t_q`
//! and `t_q'`, which bound rational unknotting moves from below; torsion
//! sequences of two knots combine into a lower bound for the distance
//! between them.
//!
//! Around that core sit:
//!
//! * [`staircase`] — staircase complexes of torus knots `T(p,q)` from the
//!   Alexander polynomial quotient, with closed forms for `q = pk + 1`;
//! * [`unknotting`] — the replacement recursion counting `k(p,q)` steps
//!   that suffice to unknot `T(p,q)`;
//! * [`obstruction`] — the `(1 + qt)`-divisibility obstruction to proper
//!   rational unknotting number one, with a bundled table of dimension
//!   polynomials for small knots;
//! * [`cli`] — a command-line front end with deterministic, digest-stamped
//!   reports.
//!
//! Everything is exact: `F₂` coefficient sets, bit-packed `F₂[u]`
//! polynomials, and overflow-checked integer Laurent polynomials. Homology
//! computations are cross-checked against an independent truncation oracle
//! ([`homology::truncated_dimension`]).

pub mod algebra;
pub mod cli;
pub mod complex;
pub mod error;
pub mod homology;
pub mod obstruction;
pub mod staircase;
pub mod torsion;
pub mod unknotting;

pub use complex::{CoeffMode, FreeComplexU, FreeComplexUw, Generator};
pub use error::{Error, Result};
pub use homology::{homology, snf, truncated_dimension, MatrixU, ModuleDecomp};
pub use torsion::{invariants_of, pair_lower_bound, structure_check, TorsionSequence};
