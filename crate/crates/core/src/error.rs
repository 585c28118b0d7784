use thiserror::Error;

use crate::apollonius::SiteId;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeomError {
    #[error("no empty tritangent circle with the requested orientation")]
    NoSolution,
    #[error("disks are not tangent (gap {gap:e})")]
    NotTangent { gap: f64 },
    #[error("invalid robustness configuration")]
    InvalidConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DiagramError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("site {0} is not live")]
    InvalidHint(SiteId),
    #[error("site {0} is hidden")]
    HiddenSite(SiteId),
    #[error("unknown site {0}")]
    UnknownSite(SiteId),
    #[error("sites {0} and {1} are not adjacent")]
    NotAdjacent(SiteId, SiteId),
    #[error("invalid disk")]
    InvalidDisk,
    #[error("conflict region is not a topological disk")]
    InconsistentConflictRegion,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SolveError {
    #[error("source and target must be distinct live input sites")]
    InvalidEndpoints,
    #[error("wavefront exhausted after {rounds} rounds without reaching the target")]
    NoPath { rounds: u32 },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ValidateError {
    #[error("point set too large for brute force ({0} points)")]
    TooLarge(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}
