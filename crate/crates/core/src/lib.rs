//! Minimum-insertion secure paths through Voronoi diagrams.
//!
//! Two sites can talk safely when their Voronoi cells touch. Given a source
//! and a target site, [`wavefront::solve`] finds the fewest extra sites to
//! insert so that a chain of touching cells links them. The search grows
//! generation after generation of disks over an additively weighted
//! (Apollonius) diagram, see [`apollonius::Diagram`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod apollonius;
mod bisector;
pub mod bfs;
pub mod error;
pub mod geom;
pub mod validate;
pub mod wavefront;

pub use apollonius::{Diagram, DiagramVertex, Insertion, SiteId, SiteKind, SiteRecord, SiteStatus, VoronoiArc};
pub use error::{DiagramError, GeomError, SolveError, ValidateError};
pub use geom::{Disk, Point, RobustnessConfig};
