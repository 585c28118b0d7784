//! Instance generation, file formats, reporting and the command-line driver
//! around `secpath-core`.

pub mod error;
pub mod instance;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
pub use instance::{gen_hex, gen_random, load_csv, PointSet};
pub use pipeline::{build_frame, select_endpoints, Instance, Outcome, Params, ResultRow};
