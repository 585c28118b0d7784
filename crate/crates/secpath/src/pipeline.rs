//! Endpoint choice, bounding frame, and the build → BFS → wavefront → verify run.

use std::time::{Duration, Instant};

use secpath_core::bfs::{bfs_baseline, BfsResult};
use secpath_core::validate::{verifier_config, verify_chain, ChainReport};
use secpath_core::wavefront::{solve, Solution};
use secpath_core::{Diagram, Point, RobustnessConfig, SiteId};

use crate::error::{Error, Result};
use crate::instance::PointSet;

pub const DEFAULT_SHRINK: f64 = 0.45;
pub const DEFAULT_FRAME_PER_SIDE: usize = 16;
pub const DEFAULT_FRAME_MARGIN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Endpoints are picked inside the bounding box scaled by this factor.
    pub shrink: f64,
    pub frame_per_side: usize,
    /// Frame offset from the bounding box, as a fraction of its diagonal.
    pub frame_margin: f64,
    pub cfg: RobustnessConfig,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            shrink: DEFAULT_SHRINK,
            frame_per_side: DEFAULT_FRAME_PER_SIDE,
            frame_margin: DEFAULT_FRAME_MARGIN,
            cfg: RobustnessConfig::default(),
        }
    }
}

fn bbox(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

/// The two points furthest apart among those inside the bounding box scaled
/// by `shrink` about its centre. Ties go to the lexicographically smallest index pair.
pub fn select_endpoints(points: &[Point], shrink: f64) -> Result<(usize, usize)> {
    if !(shrink > 0.0 && shrink <= 1.0) {
        return Err(Error::InvalidArgument(format!("shrink must be in (0, 1], got {shrink}")));
    }
    let (lo, hi) = bbox(points);
    let c = (lo + hi) * 0.5;
    let half = (hi - lo) * (0.5 * shrink);
    let inside: Vec<usize> = (0..points.len())
        .filter(|&i| (points[i].x - c.x).abs() <= half.x && (points[i].y - c.y).abs() <= half.y)
        .collect();
    let mut best: Option<(f64, usize, usize)> = None;
    for (k, &a) in inside.iter().enumerate() {
        for &b in &inside[k + 1..] {
            let d = points[a].distance(points[b]);
            if best.is_none_or(|(bd, _, _)| d > bd) {
                best = Some((d, a, b));
            }
        }
    }
    best.map(|(_, a, b)| (a, b)).ok_or(Error::TooFewInterior)
}

/// `per_side` evenly spaced points on each side of the bounding box grown
/// by `margin` times its diagonal; corners are shared.
pub fn build_frame(points: &[Point], per_side: usize, margin: f64) -> Result<Vec<Point>> {
    if per_side < 2 {
        return Err(Error::InvalidArgument(format!("frame needs at least 2 points per side, got {per_side}")));
    }
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::InvalidArgument(format!("frame margin must be positive, got {margin}")));
    }
    let (lo, hi) = bbox(points);
    let m = margin * (hi - lo).norm().max(f64::MIN_POSITIVE);
    let (lo, hi) = (Point::new(lo.x - m, lo.y - m), Point::new(hi.x + m, hi.y + m));
    let mut out = Vec::with_capacity(4 * (per_side - 1));
    for i in 0..per_side - 1 {
        let t = i as f64 / (per_side - 1) as f64;
        out.push(Point::new(lo.x + t * (hi.x - lo.x), lo.y));
        out.push(Point::new(hi.x, lo.y + t * (hi.y - lo.y)));
        out.push(Point::new(hi.x - t * (hi.x - lo.x), hi.y));
        out.push(Point::new(lo.x, hi.y - t * (hi.y - lo.y)));
    }
    Ok(out)
}

/// A point set with endpoints, frame and solver configuration fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub points: Vec<Point>,
    pub source: usize,
    pub target: usize,
    pub frame: Vec<Point>,
    pub cfg: RobustnessConfig,
}

impl Instance {
    pub fn prepare(set: PointSet, params: &Params) -> Result<Instance> {
        params.cfg.validate().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let (source, target) = select_endpoints(&set.points, params.shrink)?;
        let frame = build_frame(&set.points, params.frame_per_side, params.frame_margin)?;
        Ok(Instance { name: set.name, points: set.points, source, target, frame, cfg: params.cfg })
    }

    pub fn build(&self) -> Result<Diagram> {
        Ok(Diagram::build(&self.points, &self.frame, self.cfg)?)
    }

    fn source_id(&self) -> SiteId {
        SiteId(self.source as u32)
    }

    fn target_id(&self) -> SiteId {
        SiteId(self.target as u32)
    }

    /// Baseline only.
    pub fn bfs(&self) -> Result<(Diagram, BfsResult)> {
        let d = self.build()?;
        let r = bfs_baseline(&d, self.source_id(), self.target_id())?;
        Ok((d, r))
    }

    /// Builds the diagram, runs the baseline and the wavefront, and checks the result.
    pub fn run(&self) -> Result<Outcome> {
        let t0 = Instant::now();
        let pristine = self.build()?;
        let build_time = t0.elapsed();
        let bfs = bfs_baseline(&pristine, self.source_id(), self.target_id())?;
        let mut solved = pristine.clone();
        let t1 = Instant::now();
        let solution = solve(&mut solved, self.source_id(), self.target_id())?;
        let wavefront_time = t1.elapsed();
        let report = self.verify(&pristine, &solution)?;
        Ok(Outcome { name: self.name.clone(), pristine, solved, bfs, solution, report, build_time, wavefront_time })
    }

    /// Re-checks the chain on a diagram rebuilt from the solver's (perturbed)
    /// coordinates with a fresh, smaller perturbation.
    fn verify(&self, pristine: &Diagram, solution: &Solution) -> Result<ChainReport> {
        let n = self.points.len();
        let centre = |i: usize| pristine.site(SiteId(i as u32)).map(|r| r.disk.center);
        let others = (0..n).filter(|&i| i != self.source && i != self.target).map(centre).collect::<std::result::Result<Vec<_>, _>>()?;
        let frame = (n..n + self.frame.len()).map(centre).collect::<std::result::Result<Vec<_>, _>>()?;
        let (s, t) = (centre(self.source)?, centre(self.target)?);
        Ok(verify_chain(&others, &frame, s, t, &solution.path.tangencies, verifier_config(&self.cfg))?)
    }
}

/// Everything one run produces.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    /// The diagram of input and frame sites only.
    pub pristine: Diagram,
    /// The diagram after the wavefront, holding every inserted disk.
    pub solved: Diagram,
    pub bfs: BfsResult,
    pub solution: Solution,
    pub report: ChainReport,
    pub build_time: Duration,
    pub wavefront_time: Duration,
}

impl Outcome {
    pub fn row(&self) -> ResultRow {
        ResultRow {
            name: self.name.clone(),
            points: self.pristine.sites().filter(|(_, r)| r.kind == secpath_core::SiteKind::Input).count(),
            bfs: self.bfs.intermediates(),
            alg: self.solution.cost(),
            rounds: self.solution.trace.rounds() as usize,
            inserted: self.solution.trace.inserted(),
            valid: self.report.valid,
            build_time: self.build_time,
            wavefront_time: self.wavefront_time,
        }
    }

    /// Centres of the baseline path's sites, source to target.
    pub fn baseline_points(&self) -> Vec<Point> {
        self.bfs.path.iter().filter_map(|&s| self.pristine.site(s).ok()).map(|r| r.disk.center).collect()
    }
}

/// One line of a results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub name: String,
    pub points: usize,
    /// Intermediate sites on the baseline path.
    pub bfs: usize,
    /// Points the wavefront inserts.
    pub alg: usize,
    pub rounds: usize,
    /// Disks placed by the wavefront.
    pub inserted: usize,
    pub valid: bool,
    pub build_time: Duration,
    pub wavefront_time: Duration,
}
