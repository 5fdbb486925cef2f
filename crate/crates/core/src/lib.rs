//! Exact enumeration of magic labellings of grid and torus graphs.
//!
//! A magic labelling of sum `t` assigns nonnegative integers to the edges of a
//! graph so that every vertex sees the same total `t`. For bipartite graphs these
//! are exactly the lattice points of the `t`-th dilate of the perfect matching
//! polytope, so counting them yields Ehrhart polynomials and h-vectors. Fixing
//! the number of rows turns the counts into linearly recurrent sequences in the
//! number of columns, whose backward extensions obey a reciprocity law.
//!
//! Modules:
//! - [`graph`]: grid and torus graphs with a stable edge numbering
//! - [`labelling`]: magic labellings, validation and explicit interior points
//! - [`counting`]: the column-profile counter and a generic search counter
//! - [`ehrhart`]: dimension, interpolation, h-vectors, Gorenstein checks
//! - [`recurrence`]: transfer matrices, minimal recurrences, reciprocity,
//!   Kasteleyn's product
//! - [`decompose`]: splitting a labelling into stacked perfect matchings
//! - [`acceptance`]: the end-to-end criteria run by tests and `selftest`

pub mod acceptance;
pub mod counting;
pub mod decompose;
pub mod ehrhart;
mod error;
pub mod graph;
pub mod json;
pub mod labelling;
pub mod recurrence;

pub use error::{Error, Result};
